"""Sign-free stabilizer groups on periodic chains.

Generators are rows of a k x 2L bit matrix; columns 2x and 2x+1 hold the
X and Z bits of site x, matching the automaton's vector layout.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .lattice import CircuitSpec, layer_program

_CODES = {"I": 0, "X": 1, "Z": 2, "Y": 3}
LABELS = "IXZY"


def _pauli_bits(label: str) -> tuple[int, int]:
    c = _CODES[label]
    return c & 1, c >> 1


class StabilizerGroup:
    """Abelian Pauli group modulo signs, stored as independent generators."""

    def __init__(self, gens, a: int = 2, check: bool = True):
        gens = np.array(gens, dtype=np.uint8).reshape(-1, np.shape(gens)[-1] if np.ndim(gens) == 2 else 0)
        if gens.shape[1] % (2 * a):
            raise ValueError("column count must be a multiple of 2a")
        self.gens = gens % 2
        self.a = a
        if check:
            self.validate()

    # shape
    @property
    def L(self) -> int:
        return self.gens.shape[1] // 2

    @property
    def m(self) -> int:
        return self.L // self.a

    @property
    def k(self) -> int:
        return self.gens.shape[0]

    def copy(self) -> "StabilizerGroup":
        return StabilizerGroup(self.gens.copy(), self.a, check=False)

    def validate(self):
        if kernels.gf2_rank(self.gens) != self.k:
            raise ValueError("generators are not independent")
        if self.k and np.any(commutation_matrix(self.gens, self.gens)):
            raise ValueError("generators do not commute")

    # constructors
    @classmethod
    def fully_mixed(cls, m: int, a: int = 2) -> "StabilizerGroup":
        return cls(np.zeros((0, 2 * m * a), np.uint8), a, check=False)

    @classmethod
    def from_strings(cls, rows, a: int = 2) -> "StabilizerGroup":
        """Generators given as strings over {I,X,Y,Z}, one char per site."""
        rows = list(rows)
        if not rows:
            raise ValueError("use fully_mixed for the empty group")
        L = len(rows[0])
        gens = np.zeros((len(rows), 2 * L), np.uint8)
        for r, s in enumerate(rows):
            if len(s) != L:
                raise ValueError("rows differ in length")
            for x, p in enumerate(s):
                gens[r, 2 * x], gens[r, 2 * x + 1] = _pauli_bits(p)
        return cls(gens, a)

    @classmethod
    def product(cls, labels: str, a: int = 2) -> "StabilizerGroup":
        """Product state stabilized by one single-site Pauli per non-I label."""
        L = len(labels)
        rows = []
        for x, p in enumerate(labels):
            if p != "I":
                r = np.zeros(2 * L, np.uint8)
                r[2 * x], r[2 * x + 1] = _pauli_bits(p)
                rows.append(r)
        gens = np.array(rows, np.uint8).reshape(len(rows), 2 * L)
        return cls(gens, a, check=False)

    @classmethod
    def translation_invariant(cls, cell: list[dict[int, str]], m: int, a: int = 2) -> "StabilizerGroup":
        """Translates of each generator {site in cell: label} over all m cells.

        Generators may reach into following cells via site indices >= a.
        """
        L = m * a
        rows = []
        for g in cell:
            for n in range(m):
                r = np.zeros(2 * L, np.uint8)
                for j, p in g.items():
                    x = (n * a + j) % L
                    bx, bz = _pauli_bits(p)
                    r[2 * x] ^= bx
                    r[2 * x + 1] ^= bz
                rows.append(r)
        gens = np.array(rows, np.uint8).reshape(len(rows), 2 * L)
        return cls(_independent_rows(gens), a)

    def labels(self) -> list[str]:
        codes = self.gens[:, 0::2] | (self.gens[:, 1::2] << 1)
        return ["".join(LABELS[c] for c in row) for row in codes]

    def __str__(self):
        return "\n".join(self.labels()) if self.k else "<fully mixed>"

    def __eq__(self, other):
        return isinstance(other, StabilizerGroup) and self.L == other.L and \
            np.array_equal(canonical_form(self), canonical_form(other))

    __hash__ = None

    def contains(self, row) -> bool:
        row = np.asarray(row, np.uint8)
        if not row.any():
            return True
        if self.k == 0:
            return False
        return kernels.gf2_rank(np.vstack([self.gens, row])) == self.k

    def shifted(self, cells: int) -> "StabilizerGroup":
        return StabilizerGroup(np.roll(self.gens, 2 * self.a * cells, axis=1), self.a, check=False)


def _independent_rows(gens: np.ndarray) -> np.ndarray:
    return canonical_rows(gens)


def commutation_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Entry (i, j) is 1 iff row i of A anticommutes with row j of B."""
    A = A.astype(np.int64)
    B = B.astype(np.int64)
    return ((A[:, 0::2] @ B[:, 1::2].T + A[:, 1::2] @ B[:, 0::2].T) % 2).astype(np.uint8)


def pauli_row(L: int, paulis: dict[int, str]) -> np.ndarray:
    r = np.zeros(2 * L, np.uint8)
    for x, p in paulis.items():
        r[2 * (x % L)], r[2 * (x % L) + 1] = _pauli_bits(p)
    return r


def random_product_state(m: int, a: int = 2, rng=None, paulis: str = "XYZ") -> StabilizerGroup:
    """Pure product state with a uniformly random single-site stabilizer per site."""
    rng = np.random.default_rng(rng)
    labels = "".join(rng.choice(list(paulis), size=m * a))
    return StabilizerGroup.product(labels, a)


# -- row reduction -----------------------------------------------------------------

def canonical_rows(gens: np.ndarray) -> np.ndarray:
    """Reduced row echelon form with zero rows dropped."""
    gens = np.asarray(gens, np.uint8)
    n = gens.shape[1]
    if gens.shape[0] == 0:
        return gens.reshape(0, n)
    packed = np.packbits(gens, axis=1, bitorder="little")
    rows = [int.from_bytes(r.tobytes(), "little") for r in packed]
    rows = [r for r in rows if r]
    pivots = []
    for c in range(n):
        bit = 1 << c
        piv = next((i for i in range(len(pivots), len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        r0 = len(pivots)
        rows[r0], rows[piv] = rows[piv], rows[r0]
        p = rows[r0]
        for i in range(len(rows)):
            if i != r0 and rows[i] & bit:
                rows[i] ^= p
        pivots.append(c)
        if len(pivots) == len(rows):
            break
    rows = rows[:len(pivots)]
    nbytes = (n + 7) // 8
    buf = np.frombuffer(b"".join(r.to_bytes(nbytes, "little") for r in rows), np.uint8)
    out = np.unpackbits(buf.reshape(len(rows), nbytes), axis=1, bitorder="little")[:, :n]
    return out.astype(np.uint8)


def canonical_form(g: StabilizerGroup) -> np.ndarray:
    return canonical_rows(g.gens)


# -- circuit evolution -----------------------------------------------------------

@lru_cache(maxsize=64)
def _compiled(spec: CircuitSpec, m: int):
    layers = []
    for gates in layer_program(spec, m):
        cols = np.array([[2 * i, 2 * i + 1, 2 * j, 2 * j + 1] for _, (i, j) in gates], dtype=np.intp)
        mats = np.stack([A for A, _ in gates]).astype(np.uint8)
        layers.append((cols, mats))
    return tuple(layers)


def num_layers(spec: CircuitSpec) -> int:
    return 2 if spec.lattice == "square" else 4


def apply_layer(g: StabilizerGroup, spec: CircuitSpec, layer: int) -> StabilizerGroup:
    """Conjugate every generator through one gate layer (index mod layer count)."""
    layers = _compiled(spec, g.m)
    cols, mats = layers[layer % len(layers)]
    if g.k == 0:
        return g.copy()
    V = g.gens[:, cols]  # (k, gates, 4)
    W = np.einsum("gij,kgj->kgi", mats, V) & 1
    out = g.gens.copy()
    out[:, cols] = W
    return StabilizerGroup(out, g.a, check=False)


def step(g: StabilizerGroup, spec: CircuitSpec) -> StabilizerGroup:
    """One full period of the gate program."""
    for layer in range(num_layers(spec)):
        g = apply_layer(g, spec, layer)
    return g


def evolve(g: StabilizerGroup, spec: CircuitSpec, layers: int, start_layer: int = 0):
    """Yield the group after each of ``layers`` successive gate layers."""
    for i in range(layers):
        g = apply_layer(g, spec, start_layer + i)
        yield g


# -- entropies ---------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    start: int
    length: int
    wrap: bool = True

    def sites(self, L: int) -> np.ndarray:
        if not 0 < self.length <= L:
            raise ValueError("region length must be in 1..L")
        if not self.wrap and self.start + self.length > L:
            raise ValueError("region runs past the boundary")
        return (self.start + np.arange(self.length)) % L

    def complement(self, L: int) -> "Region | None":
        if self.length == L:
            return None
        return Region((self.start + self.length) % L, L - self.length)


def _site_columns(sites) -> np.ndarray:
    sites = np.asarray(sites, dtype=np.intp)
    return np.stack([2 * sites, 2 * sites + 1], axis=1).ravel()


def restricted_rank(g: StabilizerGroup, sites) -> int:
    if g.k == 0 or len(sites) == 0:
        return 0
    return kernels.gf2_rank(g.gens[:, _site_columns(sites)])


def complement_sites(L: int, sites) -> np.ndarray:
    mask = np.ones(L, bool)
    mask[np.asarray(sites, dtype=np.intp)] = False
    return np.flatnonzero(mask)


def entropy(g: StabilizerGroup) -> int:
    return g.L - g.k


def subsystem_entropy(g: StabilizerGroup, A) -> int:
    """S_A = |A| - k + rank of the generators restricted to the complement."""
    sites = A.sites(g.L) if isinstance(A, Region) else np.asarray(A, dtype=np.intp)
    return int(len(sites) - g.k + restricted_rank(g, complement_sites(g.L, sites)))


def window_ranks(g: StabilizerGroup) -> np.ndarray:
    """R[s, l]: rank restricted to the cyclic window of l sites starting at s."""
    if g.k == 0:
        return np.zeros((g.L, g.L + 1), np.int64)
    return kernels.cyclic_window_ranks(g.gens, 2)


def window_entropies(g: StabilizerGroup) -> np.ndarray:
    """E[s, l] = S of the window (s, l) for l = 0..L."""
    L, k = g.L, g.k
    R = window_ranks(g)
    ls = np.arange(L + 1)
    starts = (np.arange(L)[:, None] + ls[None, :]) % L
    comp = R[starts, L - ls[None, :]]
    return ls[None, :] - k + comp


def page_curve(g: StabilizerGroup) -> np.ndarray:
    """Mean window entropy for each length l = 0..L."""
    return window_entropies(g).mean(axis=0)


def mutual_information(g: StabilizerGroup, A) -> int:
    sites = A.sites(g.L) if isinstance(A, Region) else np.asarray(A, dtype=np.intp)
    comp = complement_sites(g.L, sites)
    return subsystem_entropy(g, sites) + subsystem_entropy(g, comp) - entropy(g)


def mean_mutual_information(g: StabilizerGroup) -> np.ndarray:
    """Mean I(A : complement) over cyclic windows, for each length l = 0..L."""
    E = window_entropies(g)
    L = g.L
    ls = np.arange(L + 1)
    starts = (np.arange(L)[:, None] + ls[None, :]) % L
    Ebar = E[starts, L - ls[None, :]]
    return (E + Ebar - entropy(g)).mean(axis=0)


def page_csv(rows) -> str:
    """rows: iterable of (t, curve) -> CSV (t, |A|, mean S_A)."""
    buf = io.StringIO()
    buf.write("t,A,mean_S\n")
    for t, curve in rows:
        for l, s in enumerate(curve):
            buf.write(f"{t},{l},{s:.6g}\n")
    return buf.getvalue()


# -- measurement ------------------------------------------------------------------

DETERMINISTIC = "deterministic"
PURIFYING = "purifying"
RANDOM = "random"


def measure(g: StabilizerGroup, site: int, pauli: str) -> tuple[StabilizerGroup, str]:
    """Sign-free projective measurement of a single-site Pauli."""
    L = g.L
    P = pauli_row(L, {site: pauli})
    if g.k == 0:
        return StabilizerGroup(P[None, :], g.a, check=False), PURIFYING
    px, pz = P[2 * site], P[2 * site + 1]
    anti = (g.gens[:, 2 * site] * pz + g.gens[:, 2 * site + 1] * px) & 1
    idx = np.flatnonzero(anti)
    if len(idx) == 0:
        if g.contains(P):
            return g, DETERMINISTIC
        return StabilizerGroup(np.vstack([g.gens, P]), g.a, check=False), PURIFYING
    gens = g.gens.copy()
    r = idx[0]
    others = idx[1:]
    if len(others):
        gens[others] ^= gens[r]
    gens[r] = P
    return StabilizerGroup(gens, g.a, check=False), RANDOM


def is_stationary(g: StabilizerGroup, spec: CircuitSpec, step_fn=None) -> bool:
    """True when one period (of ``step_fn`` if given) leaves the group unchanged."""
    h = (step_fn or (lambda x: step(x, spec)))(g)
    return h.k == g.k and np.array_equal(canonical_form(g), canonical_form(h))


def min_cut_bound(S0: int, t: int, length: int, L: int, S_total: int) -> int:
    """Upper bound on a window entropy after t full steps.

    Each of the window's two cuts is crossed by one gate per step and a
    gate moves at most 2 bits across a cut.
    """
    return min(S0 + 4 * t, length, L - length + S_total)
