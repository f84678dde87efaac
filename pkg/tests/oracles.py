"""Brute-force reference computations used to cross-check the engine.

Everything here works on explicit matrices or exhaustive enumeration and
shares no code with the package beyond the data types being checked.
"""
import itertools

import numpy as np

_P = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(row) -> np.ndarray:
    row = np.asarray(row)
    out = np.eye(1, dtype=complex)
    for x in range(len(row) // 2):
        out = np.kron(out, _P[int(row[2 * x]), int(row[2 * x + 1])])
    return out


def density_matrix(gens) -> np.ndarray:
    """rho = prod (1 + g) / 2^L with all signs +."""
    gens = np.asarray(gens)
    L = gens.shape[1] // 2
    rho = np.eye(2 ** L, dtype=complex)
    for g in gens:
        rho = rho @ (np.eye(2 ** L) + pauli_matrix(g)) / 2
    return rho / np.trace(rho).real


def reduced_entropy(rho: np.ndarray, keep, L: int) -> float:
    keep = sorted(keep)
    drop = [x for x in range(L) if x not in keep]
    t = rho.reshape([2] * (2 * L))
    perm = keep + drop + [L + x for x in keep] + [L + x for x in drop]
    t = t.transpose(perm)
    dk, dd = 2 ** len(keep), 2 ** len(drop)
    r = np.einsum("ajbj->ab", t.reshape(dk, dd, dk, dd))
    ev = np.linalg.eigvalsh((r + r.conj().T) / 2)
    ev = ev[ev > 1e-12]
    return float(-(ev * np.log2(ev)).sum())


def symplectic_product(a, b) -> int:
    a, b = np.asarray(a), np.asarray(b)
    return int((a[0::2] @ b[1::2] + a[1::2] @ b[0::2]) % 2)


def group_elements(gens) -> set:
    gens = np.asarray(gens, dtype=np.uint8)
    out = set()
    for coeffs in itertools.product((0, 1), repeat=len(gens)):
        v = np.zeros(gens.shape[1], np.uint8)
        for c, g in zip(coeffs, gens):
            if c:
                v ^= g
        out.add(v.tobytes())
    return out


def logical_dim(gens, sites) -> int:
    """log2(#Paulis on W commuting with the group / #stabilizers on W)."""
    gens = np.asarray(gens, dtype=np.uint8)
    n = gens.shape[1]
    elems = group_elements(gens)
    comm = stab = 0
    for labels in itertools.product(((0, 0), (1, 0), (0, 1), (1, 1)), repeat=len(sites)):
        v = np.zeros(n, np.uint8)
        for x, (bx, bz) in zip(sites, labels):
            v[2 * x], v[2 * x + 1] = bx, bz
        if all(symplectic_product(v, g) == 0 for g in gens):
            comm += 1
            stab += v.tobytes() in elems
    return int(round(np.log2(comm) - np.log2(stab)))


def random_group(L: int, rng, depth: int = 6) -> np.ndarray:
    """Random sign-free stabilizer group: scrambled product state, then rows dropped."""
    rows = np.zeros((L, 2 * L), np.uint8)
    for x in range(L):
        b = rng.integers(1, 4)
        rows[x, 2 * x], rows[x, 2 * x + 1] = b & 1, b >> 1
    for _ in range(depth * L if L > 1 else 0):
        i, j = rng.choice(L, 2, replace=False)
        S = _random_symplectic4(rng)
        cols = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
        rows[:, cols] = (rows[:, cols].astype(int) @ S.T.astype(int)) % 2
    k = rng.integers(0, L + 1)
    lo = np.tril(rng.integers(0, 2, (L, L)), -1) + np.eye(L, dtype=int)
    up = np.triu(rng.integers(0, 2, (L, L)), 1) + np.eye(L, dtype=int)
    rows = (lo @ up @ rows.astype(int)) % 2  # invertible over F2
    return _independent(rows.astype(np.uint8))[:k]


def _independent(rows):
    out = []
    basis = []
    for r in rows:
        v = r.copy()
        for b, p in basis:
            if v[p]:
                v ^= b
        nz = np.flatnonzero(v)
        if len(nz):
            basis.append((v, nz[0]))
            out.append(r)
    return np.array(out, np.uint8).reshape(len(out), rows.shape[1])


def _random_symplectic4(rng) -> np.ndarray:
    omega = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    while True:
        S = rng.integers(0, 2, (4, 4))
        if np.array_equal((S.T @ omega @ S) % 2, omega):
            return S.astype(np.uint8)


def residue_matrix_dense(M, m: int) -> np.ndarray:
    """The automaton as an explicit 2am x 2am F2 matrix on m cells (columns are images)."""
    a = M.a
    N = 2 * a * m
    out = np.zeros((N, N), np.uint8)
    for n in range(m):
        for c in range(2 * a):
            for r in range(2 * a):
                for e in M.entries[r][c].exponents():
                    out[((n + e) % m) * 2 * a + r, n * 2 * a + c] ^= 1
    return out


def vector_to_row(xi, m: int) -> np.ndarray:
    """Symplectic vector -> tableau row on m cells (site x = n a + j)."""
    a = len(xi) // 2
    row = np.zeros(2 * a * m, np.uint8)
    for j in range(a):
        for b in (0, 1):
            for e in xi[2 * j + b].exponents():
                row[2 * ((e % m) * a + j) + b] ^= 1
    return row


def brute_recurrence(M, m: int, t_max: int):
    """Smallest t <= t_max with M^t a pure translation, by dense matrix powers."""
    A = residue_matrix_dense(M, m)
    N = A.shape[0]
    shifts = []
    for d in range(m):
        S = np.zeros((N, N), np.uint8)
        for n in range(m):
            S[((n + d) % m) * 2 * M.a:((n + d) % m + 1) * 2 * M.a, n * 2 * M.a:(n + 1) * 2 * M.a] = np.eye(2 * M.a)
        shifts.append(S)
    P = A.copy()
    for t in range(1, t_max + 1):
        for S in shifts:
            if np.array_equal(P, S):
                return t
        P = (A.astype(np.int64) @ P) % 2
        P = P.astype(np.uint8)
    return None
