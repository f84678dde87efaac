"""Infinite-temperature two-point correlations of one-site Paulis in
dual-unitary brickwork circuits, via the +/- single-qubit channels.

Matrices use the basis (I, X, Y, Z) with the row indexing the earlier
(input) operator and the column the later (output) one, so sequential
segments compose by ordinary matrix product left to right.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
import sympy

from .lattice import CircuitSpec, gate_matrix, gate_name

BASIS = "IXYZ"
_I2 = np.eye(2, dtype=complex)
PAULI = {
    "I": _I2,
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_SIGMA = [PAULI[c] for c in BASIS]


def _rotation(axis, theta: float) -> np.ndarray:
    n = np.asarray(axis, float)
    n = n / np.linalg.norm(n)
    gen = n[0] * PAULI["X"] + n[1] * PAULI["Y"] + n[2] * PAULI["Z"]
    return np.cos(theta / 2) * _I2 - 1j * np.sin(theta / 2) * gen


ONE_SITE_UNITARIES = {
    "I": _I2,
    "RX90": _rotation((1, 0, 0), np.pi / 2),
    "RY90": _rotation((0, 1, 0), np.pi / 2),
    "RZ90": _rotation((0, 0, 1), np.pi / 2),
    "Cplus": _rotation((1, 1, 1), 2 * np.pi / 3),
    "Cminus": _rotation((1, 1, 1), -2 * np.pi / 3),
}

CORE_UNITARIES = {
    "identity": np.eye(4, dtype=complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "iswap": np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "cnot": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}


def one_site_unitary(name: str) -> np.ndarray:
    return ONE_SITE_UNITARIES[gate_name(name)]


def _exact(x: complex, what: str) -> int:
    r = round(x.real)
    if abs(x - r) > 1e-9:
        raise ValueError(f"{what} is not Clifford (coefficient {x:.4g})")
    return int(r)


def conjugation_table(U: np.ndarray) -> np.ndarray:
    """T[a, b] = (1/d) Tr[P_b U P_a U^dag] over n-qubit Pauli strings, exact ints."""
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    n = d.bit_length() - 1
    if U.shape != (d, d) or 2 ** n != d:
        raise ValueError("expected a 2^n x 2^n matrix")
    if not np.allclose(U @ U.conj().T, np.eye(d), atol=1e-9):
        raise ValueError("matrix is not unitary")
    strings = _pauli_strings(n)
    out = np.zeros((4 ** n, 4 ** n), dtype=np.int64)
    for a, Pa in enumerate(strings):
        img = U @ Pa @ U.conj().T
        for b, Pb in enumerate(strings):
            out[a, b] = _exact(np.trace(Pb.conj().T @ img) / d, "gate")
        if np.count_nonzero(out[a]) != 1:
            raise ValueError("gate is not Clifford: a Pauli maps to a superposition")
    return out


def _pauli_strings(n: int):
    mats = [np.eye(1, dtype=complex)]
    for _ in range(n):
        mats = [np.kron(m, s) for m in mats for s in _SIGMA]
    return mats


def symplectic_of(U: np.ndarray) -> np.ndarray:
    """F2 matrix of a Clifford unitary (columns are images of X1, Z1, X2, Z2, ...)."""
    T = conjugation_table(U)
    n = (T.shape[0].bit_length() - 1) // 2
    xz = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}  # I, X, Y, Z
    out = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for q in range(n):
        for b, letter in ((0, 1), (1, 3)):  # X then Z on qubit q
            a = letter * 4 ** (n - 1 - q)
            img = int(np.flatnonzero(T[a])[0])
            for p in range(n):
                digit = (img // 4 ** (n - 1 - p)) % 4
                out[2 * p, 2 * q + b], out[2 * p + 1, 2 * q + b] = xz[digit]
    return out


def vertex_unitary(spec: CircuitSpec) -> np.ndarray:
    """Two-qubit dressed vertex; v+ sits on the first qubit's incoming leg."""
    if spec.lattice != "square":
        raise ValueError("correlations are defined for square brickwork circuits")
    C = CORE_UNITARIES[spec.core]
    vp, vm = (one_site_unitary(e) for e in spec.edges)
    one = _I2
    conv = spec.convention
    if conv == "a":
        return C @ np.kron(vp, vm)
    if conv == "b":
        return np.kron(vm, vp) @ C
    if conv == "c":
        return np.kron(vm, one) @ C @ np.kron(vp, one)
    if conv == "d":
        return np.kron(one, vp) @ C @ np.kron(one, vm)
    raise ValueError(f"unknown convention {conv!r}")


@dataclass(frozen=True)
class PauliChannel:
    matrix: tuple  # 4x4 nested tuple of ints

    @classmethod
    def from_array(cls, arr) -> "PauliChannel":
        return cls(tuple(tuple(int(x) for x in r) for r in np.asarray(arr)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    def __matmul__(self, other: "PauliChannel") -> "PauliChannel":
        return PauliChannel.from_array(self.array @ other.array)

    def is_unital(self) -> bool:
        a = self.array
        return a[0, 0] == 1 and not a[0, 1:].any() and not a[1:, 0].any()

    def to_text(self) -> str:
        return "\n".join(" ".join(f"{x:2d}" for x in r) for r in self.matrix)

    def __str__(self):
        return self.to_text()


def one_site_channel(name: str) -> PauliChannel:
    """C[a, b] = (1/2) Tr[s_b v s_a v^dag]."""
    return PauliChannel.from_array(conjugation_table(one_site_unitary(name)))


def channel(U, direction: str = "+") -> PauliChannel:
    """Single-qubit channel of a two-qubit Clifford.

    '+' feeds the input into the first qubit and reads it off the second;
    '-' does the opposite.  Entry (a, b) is the coefficient of s_b.
    """
    if isinstance(U, CircuitSpec):
        U = vertex_unitary(U)
    elif isinstance(U, str):
        U = CORE_UNITARIES[U]
    T = conjugation_table(U)
    out = np.zeros((4, 4), dtype=np.int64)
    for a in range(4):
        for b in range(4):
            if direction == "+":
                out[a, b] = T[4 * a, b]  # s_a (x) 1 -> 1 (x) s_b
            elif direction == "-":
                out[a, b] = T[a, 4 * b]  # 1 (x) s_a -> s_b (x) 1
            else:
                raise ValueError("direction must be '+' or '-'")
    return PauliChannel.from_array(out)


def _diag_sign(mu) -> str:
    if mu in ("+", 1, +1):
        return "+"
    if mu in ("-", -1):
        return "-"
    raise ValueError(f"bad diagonal {mu!r}")


def _position(t, tau) -> int:
    """Index along a diagonal: -1/2 before the one-site gate, +1/2 after it."""
    t2 = Fraction(t) * 2
    if t2.denominator != 1:
        raise ValueError("times are multiples of 1/2")
    if Fraction(tau) not in (Fraction(-1, 2), Fraction(1, 2)):
        raise ValueError("tau must be -1/2 or +1/2")
    return 2 * int(t2) + (1 if Fraction(tau) > 0 else 0)


def diagonal_factors(spec: CircuitSpec, mu) -> tuple[PauliChannel, PauliChannel]:
    """(one-site gate, core) channel factors along one diagonal."""
    mu = _diag_sign(mu)
    if spec.lattice != "square":
        raise ValueError("correlations are defined for square brickwork circuits")
    v = spec.edges[0] if mu == "+" else spec.edges[1]
    return one_site_channel(v), channel(CORE_UNITARIES[spec.core], mu)


def correlation_matrix(spec: CircuitSpec, dt, tau, tau2, mu) -> np.ndarray:
    """C[a, b] between s_a at (0, tau) and s_b at (dt, tau2) on diagonal mu."""
    p0, p1 = _position(0, tau), _position(dt, tau2)
    gate, core = (f.array for f in diagonal_factors(spec, mu))
    lo, hi = sorted((p0, p1))
    out = np.eye(4, dtype=np.int64)
    for p in range(lo, hi):
        out = out @ (gate if p % 2 == 0 else core)
    return out if p0 <= p1 else out.T


def one_site_correlation(spec: CircuitSpec, alpha, beta, dt, tau, tau2, mu, dy=None, mu2=None) -> int:
    """<s_alpha(0, 0, tau_mu) s_beta(dt, dy, tau2_mu2)>; zero off the light cone."""
    mu = _diag_sign(mu)
    if mu2 is not None and _diag_sign(mu2) != mu:
        return 0
    if dy is not None and Fraction(dy) != (1 if mu == "+" else -1) * Fraction(dt):
        return 0
    a = BASIS.index(alpha) if isinstance(alpha, str) else int(alpha)
    b = BASIS.index(beta) if isinstance(beta, str) else int(beta)
    return int(correlation_matrix(spec, dt, tau, tau2, mu)[a, b])


def correlation_csv(spec: CircuitSpec, dts, tau=-0.5, tau2=-0.5) -> str:
    buf = io.StringIO()
    buf.write("mu,dt,alpha,beta,C\n")
    for mu in "+-":
        for dt in dts:
            C = correlation_matrix(spec, dt, tau, tau2, mu)
            for a in range(4):
                for b in range(4):
                    buf.write(f"{mu},{dt},{BASIS[a]},{BASIS[b]},{C[a, b]}\n")
    return buf.getvalue()


class ErgodicityClass(str, Enum):
    NON_INTERACTING = "non-interacting"
    NON_ERGODIC = "non-ergodic"
    ERGODIC_NON_MIXING = "ergodic-non-mixing"
    ERGODIC_MIXING = "ergodic-mixing"
    BERNOULLI = "bernoulli"


_y = sympy.Symbol("y")


def nontrivial_spectrum(ch: PauliChannel) -> list[tuple[sympy.Poly, int, str]]:
    """Irreducible factors of the nontrivial block's characteristic polynomial,
    each tagged 'one', 'unit' (|root| = 1, root != 1) or 'inside'."""
    block = sympy.Matrix(ch.array[1:, 1:].tolist())
    poly = block.charpoly(_y)
    out = []
    for f, mult in sympy.factor_list(poly.as_expr(), _y)[1]:
        f = sympy.Poly(f, _y)
        if f == sympy.Poly(_y - 1, _y):
            tag = "one"
        elif f.is_cyclotomic:
            tag = "unit"
        else:
            roots = [abs(complex(r)) for r in f.nroots()]
            if any(r > 1 + 1e-9 for r in roots):
                raise ValueError("eigenvalue outside the unit disk")
            tag = "unit" if any(abs(r - 1) < 1e-9 for r in roots) else "inside"
        out.append((f, mult, tag))
    return out


def is_dual_unitary(U) -> bool:
    """True when the space-time rotated gate <kl|U~|ij> = <jl|U|ik> is unitary."""
    if isinstance(U, CircuitSpec):
        U = vertex_unitary(U)
    T = np.asarray(U, dtype=complex).reshape(2, 2, 2, 2)
    D = np.einsum("jlik->klij", T).reshape(4, 4)
    return bool(np.allclose(D @ D.conj().T, np.eye(4), atol=1e-9))


def ergodicity_class(spec) -> ErgodicityClass:
    """Classify from the nontrivial eigenvalues of both channels of the vertex."""
    if not is_dual_unitary(spec):
        raise ValueError("ergodicity classes are defined for dual-unitary gates")
    chans = [channel(spec, "+"), channel(spec, "-")]
    n_one = n_unit = total = 0
    for ch in chans:
        for f, mult, tag in nontrivial_spectrum(ch):
            d = f.degree() * mult
            total += d
            n_one += d if tag == "one" else 0
            n_unit += d if tag == "unit" else 0
    if n_one == total:
        return ErgodicityClass.NON_INTERACTING
    if n_one:
        return ErgodicityClass.NON_ERGODIC
    if n_unit:
        return ErgodicityClass.ERGODIC_NON_MIXING
    depol = np.zeros((4, 4), dtype=np.int64)
    depol[0, 0] = 1
    if all(np.array_equal(ch.array, depol) for ch in chans):
        return ErgodicityClass.BERNOULLI
    return ErgodicityClass.ERGODIC_MIXING


def check_gate_library() -> None:
    """Raise unless every unitary reduces mod signs to the symplectic library."""
    from .lattice import CORES

    for name, U in ONE_SITE_UNITARIES.items():
        if not np.array_equal(symplectic_of(U), gate_matrix(name)):
            raise AssertionError(f"one-site gate {name} disagrees")
    for name, U in CORE_UNITARIES.items():
        if not np.array_equal(symplectic_of(U), CORES[name]):
            raise AssertionError(f"core {name} disagrees")
