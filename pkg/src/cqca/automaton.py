"""Symplectic cellular automata over F2[u, u^-1].

An automaton on a unit cell of ``a`` qubits is a 2a x 2a matrix whose
column 2j (2j+1) is the image of X (Z) on site j of the cell.  A Pauli
operator is the column vector of 2a Laurent polynomials: the coefficient
of u^n in component 2j (2j+1) is the X (Z) bit on site j of cell n.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Sequence

from .polyring import (ONE, ZERO, BivarPoly, LaurentPoly, RatFunc, cyclic_mul)

Matrix = tuple  # tuple of row tuples of LaurentPoly


class SymplecticVector(tuple):
    """2a Laurent components (X_1, Z_1, ..., X_a, Z_a)."""

    def __new__(cls, comps):
        return super().__new__(cls, (c if isinstance(c, LaurentPoly) else LaurentPoly(int(c)) for c in comps))

    @property
    def a(self) -> int:
        return len(self) // 2

    def is_zero(self) -> bool:
        return not any(self)

    def __add__(self, other):
        return SymplecticVector(x + y for x, y in zip(self, other))

    def scale(self, p: LaurentPoly) -> "SymplecticVector":
        return SymplecticVector(c * p for c in self)

    def support(self) -> dict[int, str]:
        """Map global site index -> Pauli label for non-identity sites."""
        a = self.a
        out: dict[int, int] = {}
        for j in range(a):
            for bit, comp in ((1, self[2 * j]), (2, self[2 * j + 1])):
                for n in comp.exponents():
                    x = n * a + j
                    out[x] = out.get(x, 0) | bit
        return {x: "IXZY"[c] for x, c in out.items() if c}

    def __str__(self):
        sup = self.support()
        return " ".join(f"{p}@{x}" for x, p in sorted(sup.items())) or "I"


def pauli_vector(a: int, paulis: dict[int, str]) -> SymplecticVector:
    """Vector for a Pauli string given as {global site: label}."""
    comps = [ZERO] * (2 * a)
    for x, p in paulis.items():
        n, j = divmod(x, a)
        if p in "XY":
            comps[2 * j] = comps[2 * j] + LaurentPoly.monomial(n)
        if p in "ZY":
            comps[2 * j + 1] = comps[2 * j + 1] + LaurentPoly.monomial(n)
    return SymplecticVector(comps)


def parse_operator(text: str, a: int) -> SymplecticVector:
    """Parse operator strings.

    ``Z1`` or ``X1Z2`` give labels with 1-based site indices in cell 0, an
    optional ``(n)`` suffix moves a token to cell n; a bare run of letters
    such as ``XXXXXXXX`` fills consecutive sites from site 0, and
    ``XXXX(0)XXXX(2)`` fills whole cells.
    """
    text = text.replace(" ", "")
    tokens = re.findall(r"([IXYZ]+)(\d*)(?:\((-?\d+)\))?", text)
    if not tokens or "".join(t[0] + t[1] + (f"({t[2]})" if t[2] else "") for t in tokens) != text:
        raise ValueError(f"cannot parse operator {text!r}")
    paulis: dict[int, str] = {}

    def put(x, p):
        if p == "I":
            return
        old = paulis.get(x)
        if old is None:
            paulis[x] = p
        else:
            bits = {"X": 1, "Z": 2, "Y": 3}
            paulis[x] = "IXZY"[bits[old] ^ bits[p]]

    for letters, digits, cell in tokens:
        n = int(cell) if cell else 0
        if digits:
            if len(letters) != 1:
                raise ValueError(f"site index after multi-letter token in {text!r}")
            j = int(digits) - 1
            if not 0 <= j < a:
                raise ValueError(f"site {digits} outside cell of size {a}")
            put(n * a + j, letters)
        else:
            for i, p in enumerate(letters):
                put(n * a + i, p)
    return pauli_vector(a, {x: p for x, p in paulis.items() if p != "I"})


@dataclass(frozen=True)
class Automaton:
    a: int
    entries: Matrix
    layers_per_step: int = 1
    label: str = ""
    shift_d: int = 0
    spec: object = None
    convention: str = "a"

    def __post_init__(self):
        n = 2 * self.a
        rows = tuple(tuple(e if isinstance(e, LaurentPoly) else LaurentPoly(int(e)) for e in r)
                     for r in self.entries)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"expected a {n}x{n} matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def n(self) -> int:
        return 2 * self.a

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other):
        if isinstance(other, Automaton):
            return compose(self, other)
        return apply(self, other)

    def __eq__(self, other):
        return isinstance(other, Automaton) and self.a == other.a and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def scaled(self, p: LaurentPoly) -> "Automaton":
        return replace(self, entries=tuple(tuple(e * p for e in r) for r in self.entries))

    def text(self) -> str:
        return matrix_text(self.entries)

    def __str__(self):
        return self.text()


def matrix_text(rows) -> str:
    """Rows of comma-separated polynomial text joined by ';'."""
    return ";".join(",".join(str(e) for e in r) for r in rows)


def parse_matrix(text: str) -> Matrix:
    text = "".join(text.split())
    return tuple(tuple(LaurentPoly.parse(e) for e in row.split(",")) for row in text.strip(";").split(";"))


def permute_basis(rows, order: Sequence[int]) -> Matrix:
    """Re-express a matrix in the basis ``order`` (new index i = old order[i])."""
    return tuple(tuple(rows[i][j] for j in order) for i in order)


def identity(a: int) -> Automaton:
    n = 2 * a
    return Automaton(a, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)),
                     label="identity")


def shift_automaton(a: int = 2) -> Automaton:
    """Shift every qubit one site to the right."""
    n = 2 * a
    rows = [[ZERO] * n for _ in range(n)]
    for j in range(a):
        tgt, coef = (j + 1, ONE) if j + 1 < a else (0, LaurentPoly.monomial(1))
        rows[2 * tgt][2 * j] = coef
        rows[2 * tgt + 1][2 * j + 1] = coef
    return Automaton(a, tuple(map(tuple, rows)), label="shift")


def _matmul(A, B, m: int | None = None):
    n, k, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(p):
            s = ZERO
            for t in range(k):
                x = Ai[t]
                if x:
                    y = B[t][j]
                    if y:
                        s = s + x * y
            row.append(s.reduce(m) if m else s)
        out.append(tuple(row))
    return tuple(out)


def compose(M1: Automaton, M2: Automaton, m: int | None = None) -> Automaton:
    """Matrix product M1*M2 (apply M2 first), optionally reduced mod u^m - 1."""
    if M1.a != M2.a:
        raise ValueError("dimension mismatch")
    return Automaton(M1.a, _matmul(M1.entries, M2.entries, m),
                     M1.layers_per_step + M2.layers_per_step, label=f"({M1.label})({M2.label})")


def power(M: Automaton, t: int, m: int | None = None) -> Automaton:
    if t < 0:
        return power(inverse(M), -t, m)
    out = identity(M.a)
    base = M if m is None else Automaton(M.a, _reduce_rows(M.entries, m))
    while t:
        if t & 1:
            out = Automaton(M.a, _matmul(out.entries, base.entries, m))
        t >>= 1
        if t:
            base = Automaton(M.a, _matmul(base.entries, base.entries, m))
    return replace(out, label=f"{M.label}^t", layers_per_step=M.layers_per_step)


def _reduce_rows(rows, m):
    return tuple(tuple(e.reduce(m) for e in r) for r in rows)


def apply(M: Automaton, xi: Sequence[LaurentPoly]) -> SymplecticVector:
    if len(xi) != M.n:
        raise ValueError("dimension mismatch")
    out = []
    for row in M.entries:
        s = ZERO
        for x, y in zip(row, xi):
            if x and y:
                s = s + x * y
        out.append(s)
    return SymplecticVector(out)


def symplectic_form(xi, eta) -> LaurentPoly:
    """sum_j bar(xi_X^j) eta_Z^j + bar(xi_Z^j) eta_X^j (signs vanish over F2)."""
    s = ZERO
    for j in range(0, len(xi), 2):
        s = s + xi[j].bar() * eta[j + 1] + xi[j + 1].bar() * eta[j]
    return s


def is_symplectic(M: Automaton) -> bool:
    n = M.n
    cols = [[M.entries[i][j] for i in range(n)] for j in range(n)]
    for i in range(n):
        for k in range(i, n):
            want = ONE if (i // 2 == k // 2 and i != k) else ZERO
            if symplectic_form(cols[i], cols[k]) != want:
                return False
    return True


def inverse(M: Automaton) -> Automaton:
    """Inverse of a symplectic automaton: Omega * bar(M)^T * Omega."""
    n = M.n
    omega = [i ^ 1 for i in range(n)]
    rows = tuple(tuple(M.entries[omega[j]][omega[i]].bar() for j in range(n)) for i in range(n))
    return Automaton(M.a, rows, M.layers_per_step, label=f"({M.label})^-1")


def _berkowitz(A) -> list:
    """Characteristic polynomial coefficients, highest degree first (char 2)."""
    n = len(A)
    vect = [ONE]
    for k in range(n - 1, -1, -1):
        size = n - k
        R = A[k][k + 1:]
        sub = [row[k + 1:] for row in A[k + 1:]]
        col = [ONE, A[k][k]]
        v = [A[i][k] for i in range(k + 1, n)]
        for _ in range(size - 1):
            col.append(_dot(R, v))
            v = [_dot(r, v) for r in sub]
        new = []
        for i in range(size + 1):
            s = ZERO
            for j in range(min(i, size - 1) + 1):
                if col[i - j] and vect[j]:
                    s = s + col[i - j] * vect[j]
            new.append(s)
        vect = new
    return vect


def _dot(xs, ys) -> LaurentPoly:
    s = ZERO
    for x, y in zip(xs, ys):
        if x and y:
            s = s + x * y
    return s


def char_poly(M: Automaton) -> BivarPoly:
    return BivarPoly(list(reversed(_berkowitz(M.entries))))


def determinant(M: Automaton) -> LaurentPoly:
    return _berkowitz(M.entries)[-1]


def evaluate_poly(p: BivarPoly, M: Automaton, m: int | None = None) -> Automaton:
    """p(M) by Horner's rule."""
    n = M.n
    acc = tuple(tuple(ZERO for _ in range(n)) for _ in range(n))
    for c in reversed(p.coeffs):
        acc = _matmul(acc, M.entries, m)
        acc = tuple(tuple(e + c if i == j else e for j, e in enumerate(r)) for i, r in enumerate(acc))
    return Automaton(M.a, acc)


def annihilates(p: BivarPoly, M: Automaton) -> bool:
    return all(not e for r in evaluate_poly(p, M).entries for e in r)


def min_poly(M: Automaton) -> BivarPoly:
    """Least-degree monic annihilator, via Krylov vectors over F2(u)."""
    n = M.n
    basis: list[tuple[int, list, list]] = []
    P = identity(M.a).entries
    for d in range(n + 1):
        vec = [RatFunc(e) for r in P for e in r]
        combo = [RatFunc(ZERO)] * d + [RatFunc(ONE)]
        for piv, bvec, bcombo in basis:
            if vec[piv]:
                f = vec[piv] / bvec[piv]
                vec = [x - f * y for x, y in zip(vec, bvec)]
                combo = [x - f * (bcombo[i] if i < len(bcombo) else RatFunc(ZERO))
                         for i, x in enumerate(combo)]
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            mu = BivarPoly([c.to_laurent() for c in combo])
            if not annihilates(mu, M):
                raise ArithmeticError("Krylov relation failed verification")
            return mu
        basis.append((piv, vec, combo))
        P = _matmul(P, M.entries)
    raise ArithmeticError("no annihilator found up to degree 2a")


def center(M: Automaton) -> Automaton:
    """Remove the global u^d factor so that det = 1."""
    det = determinant(M)
    if not det.is_monomial() or det.min_exp % M.n:
        raise ValueError(f"determinant {det} is not a power of u^{M.n}")
    d = det.min_exp // M.n
    out = M.scaled(LaurentPoly.monomial(-d))
    return replace(out, shift_d=M.shift_d + d, label=f"center({M.label})")


def normalize_shift(M: Automaton) -> tuple[Automaton, int]:
    """Divide by the power of u that puts the lowest exponent at zero."""
    lows = [e.min_exp for r in M.entries for e in r if e]
    d = min(lows) if lows else 0
    return M.scaled(LaurentPoly.monomial(-d)), d


def equal_up_to_shift(A: Automaton, B: Automaton) -> bool:
    return normalize_shift(A)[0] == normalize_shift(B)[0]


def trace(M: Automaton) -> LaurentPoly:
    s = ZERO
    for i in range(M.n):
        s = s + M.entries[i][i]
    return s


def is_scalar_shift(M: Automaton) -> int | None:
    """d if M == u^d * identity, else None."""
    d = M.entries[0][0]
    if not d.is_monomial():
        return None
    for i, r in enumerate(M.entries):
        for j, e in enumerate(r):
            if e != (d if i == j else ZERO):
                return None
    return d.min_exp


# -- residue-ring matrices packed as ints (m-bit residues) ------------------

def residue_matrix(M: Automaton, m: int) -> list[list[int]]:
    return [[e.cyclic(m) for e in r] for r in M.entries]


def residue_matmul(A, B, m: int):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = 0
            for t in range(n):
                x, y = A[i][t], B[t][j]
                if x and y:
                    s ^= cyclic_mul(x, y, m)
            row.append(s)
        out.append(row)
    return out


# -- point group --------------------------------------------------------------

class PointGroupOp(enum.Enum):
    """Symmetries of the square vertex, acting on (x, t) spacetime coordinates."""
    IDENTITY = "identity"
    REFLECT_LR = "reflect-LR"
    TIME_REVERSE = "time-reverse"
    ROTATE_90 = "rotate+90"
    ROTATE_270 = "rotate-90"
    ROTATE_180 = "rotate180"
    REFLECT_DIAG_PLUS = "reflect-diag+"
    REFLECT_DIAG_MINUS = "reflect-diag-"

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return _OP_MATRICES[self]

    def __mul__(self, other: "PointGroupOp") -> "PointGroupOp":
        """self after other."""
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        prod = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return _OP_BY_MATRIX[prod]

    def edge_map(self) -> dict[str, tuple[str, bool]]:
        """Where each diagonal edge family goes, and whether its time arrow flips.

        The + family points along (1, 1) in (x, t), the - family along (-1, 1).
        """
        (a, b), (c, d) = self.matrix
        out = {}
        for fam, (x, t) in (("+", (1, 1)), ("-", (-1, 1))):
            nx, nt = a * x + b * t, c * x + d * t
            flipped = nt < 0
            if flipped:
                nx, nt = -nx, -nt
            out[fam] = ("+" if nx > 0 else "-", flipped)
        return out


_OP_MATRICES = {
    PointGroupOp.IDENTITY: ((1, 0), (0, 1)),
    PointGroupOp.REFLECT_LR: ((-1, 0), (0, 1)),
    PointGroupOp.TIME_REVERSE: ((1, 0), (0, -1)),
    PointGroupOp.ROTATE_90: ((0, -1), (1, 0)),
    PointGroupOp.ROTATE_270: ((0, 1), (-1, 0)),
    PointGroupOp.ROTATE_180: ((-1, 0), (0, -1)),
    PointGroupOp.REFLECT_DIAG_PLUS: ((0, 1), (1, 0)),
    PointGroupOp.REFLECT_DIAG_MINUS: ((0, -1), (-1, 0)),
}
_OP_BY_MATRIX = {v: k for k, v in _OP_MATRICES.items()}

DUAL = PointGroupOp.ROTATE_90

# which legs carry the gate of each family, per convention: (+ leg, - leg)
_CONVENTION_LEGS = {"a": ("in", "in"), "b": ("out", "out"), "c": ("in", "out"), "d": ("out", "in")}
_LEGS_CONVENTION = {v: k for k, v in _CONVENTION_LEGS.items()}


def transform_spec(spec, op: PointGroupOp):
    """Image of a square-lattice spec under a point-group operation.

    Each diagonal edge family is carried to a family of the image lattice;
    when the time arrow along it flips, its gate is transposed, which mod
    Paulis is the inverse symplectic matrix, and the leg it sits on swaps
    between incoming and outgoing.
    """
    from .lattice import inverse_gate
    if spec.lattice != "square":
        raise ValueError("point-group transforms are defined for the square lattice")
    gates = {"+": spec.edges[0], "-": spec.edges[1]}
    legs = dict(zip("+-", _CONVENTION_LEGS[spec.convention]))
    new_gates, new_legs = {}, {}
    for fam, (img, flipped) in op.edge_map().items():
        g = gates[fam]
        leg = legs[fam]
        if flipped:
            g = inverse_gate(g)
            leg = "out" if leg == "in" else "in"
        new_gates[img], new_legs[img] = g, leg
    conv = _LEGS_CONVENTION[(new_legs["+"], new_legs["-"])]
    return replace(spec, edges=(new_gates["+"], new_gates["-"]), convention=conv)


def transform(M: Automaton, op: PointGroupOp) -> Automaton:
    """Transformed half-step automaton, with its convention tag and shift.

    For reflect-LR the result is checked against the direct matrix identity
    (site swap combined with u -> u^-1), which fixes the recorded shift.
    """
    from .lattice import build_square
    if M.spec is None or M.a != 2:
        raise ValueError("transform needs an a=2 automaton built from a square spec")
    new_spec = transform_spec(M.spec, op)
    out = build_square(new_spec)
    d = 0
    if op is PointGroupOp.REFLECT_LR:
        direct = reflect_sites(M)
        d = -1
        if direct != out.scaled(LaurentPoly.monomial(d)):
            raise ArithmeticError("reflection identity failed")
    elif op is PointGroupOp.TIME_REVERSE:
        d = -1
    out = out.scaled(LaurentPoly.monomial(d))
    return replace(out, shift_d=d, label=f"{op.value}({M.label})", convention=new_spec.convention)


def reflect_sites(M: Automaton) -> Automaton:
    """P * bar(M) * P with P exchanging the two sites of an a=2 cell."""
    perm = [2, 3, 0, 1]
    rows = tuple(tuple(M.entries[perm[i]][perm[j]].bar() for j in range(4)) for i in range(4))
    return Automaton(2, rows, M.layers_per_step, label=f"reflect({M.label})")


def detect_symmetries(spec) -> set[PointGroupOp]:
    """Point-group operations leaving the gate decomposition unchanged mod Paulis."""
    out = set()
    for op in PointGroupOp:
        img = transform_spec(spec, op)
        if img.core == spec.core and tuple(img.edges) == tuple(spec.edges):
            out.add(op)
    return out


CLASS_NAMES = ("swap", "bare-iswap", "traceless-glider", "nonzero-trace-poor",
               "dense-good", "df19-good", "sdki")

# one-site gate families: orbits under conjugation by the Z rotation, with the
# Z rotation itself identified with the identity (it commutes through the core)
_FAMILY = {"I": 0, "RZ90": 0, "RX90": 1, "RY90": 1, "Cplus": 2, "Cminus": 2}
_PAIR_CLASS = {
    (0, 0): "bare-iswap", (0, 2): "traceless-glider", (0, 1): "nonzero-trace-poor",
    (1, 1): "dense-good", (1, 2): "df19-good", (2, 2): "sdki",
}


def canonical_edges(spec) -> tuple[str, str]:
    """Smallest representative of (v+, v-) under reflect-LR and per-site similarity."""
    from .lattice import GATE_NAMES, conjugate_by_rz
    best = None
    for pair in (tuple(spec.edges), tuple(spec.edges)[::-1]):
        for s1 in (False, True):
            for s2 in (False, True):
                g1 = conjugate_by_rz(pair[0]) if s1 else pair[0]
                g2 = conjugate_by_rz(pair[1]) if s2 else pair[1]
                key = (GATE_NAMES.index(g1), GATE_NAMES.index(g2))
                best = key if best is None or key < best else best
    return GATE_NAMES[best[0]], GATE_NAMES[best[1]]


def classify(spec) -> str:
    if spec.lattice != "square":
        raise ValueError("classification covers square-lattice specs")
    if spec.core == "swap":
        return "swap"
    if spec.core != "iswap":
        raise ValueError(f"no class table for core {spec.core!r}")
    v1, v2 = canonical_edges(spec)
    f = tuple(sorted((_FAMILY[v1], _FAMILY[v2])))
    return _PAIR_CLASS[f]
