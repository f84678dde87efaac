"""Operator spreading on the infinite chain and recurrences on finite rings."""
from __future__ import annotations

import io
import itertools
import os
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import kernels
from .automaton import Automaton, SymplecticVector, apply, char_poly, power, trace
from .polyring import ONE, ZERO, LaurentPoly

LABELS = "IXZY"  # code = x_bit | (z_bit << 1)
PALETTE = {
    "I": (0, 0, 0),
    "X": (31, 119, 180),
    "Y": (44, 160, 44),
    "Z": (255, 127, 14),
}
DEFAULT_BUDGET = 1 << 24


def _unpack(bits: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(bits.to_bytes(max(nbytes, (bits.bit_length() + 7) // 8), "little"), np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def exponent_range(M: Automaton) -> tuple[int, int]:
    """Smallest and largest power of u over all nonzero entries."""
    lo, hi = 0, 0
    for row in M.entries:
        for e in row:
            if e:
                lo, hi = min(lo, e.min_exp), max(hi, e.max_exp)
    return lo, hi


def _cell_span(xi) -> tuple[int, int] | None:
    nz = [c for c in xi if c]
    if not nz:
        return None
    return min(c.min_exp for c in nz), max(c.max_exp for c in nz)


@dataclass
class SpreadStats:
    """Per-row Pauli counts inside the light cone."""

    counts: np.ndarray  # (T+1, 4) columns I, X, Y, Z
    dt: int = 1

    @property
    def nontrivial(self) -> np.ndarray:
        return self.counts[:, 1:].sum(axis=1)

    @property
    def width(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def cumulative(self, which: str | None = None) -> np.ndarray:
        if which is None:
            return np.cumsum(self.nontrivial)
        return np.cumsum(self.counts[:, "IXYZ".index(which)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,N_I,N_X,N_Y,N_Z,cumulative\n")
        cum = self.cumulative()
        for t, (row, c) in enumerate(zip(self.counts, cum)):
            buf.write(f"{t},{row[0]},{row[1]},{row[2]},{row[3]},{c}\n")
        return buf.getvalue()


@dataclass
class Footprint:
    """Spacetime grid of Pauli codes (see LABELS) on a fixed site window."""

    grid: np.ndarray  # (T+1, W) uint8
    origin: int  # global site of column 0
    dt: int = 1
    cone: np.ndarray = field(default=None)  # (T+1, 2) inclusive column bounds

    @property
    def rows(self) -> list[str]:
        return ["".join(LABELS[c] for c in r) for r in self.grid]

    def decimate(self, k: int) -> "Footprint":
        cone = None if self.cone is None else self.cone[::k]
        return Footprint(self.grid[::k], self.origin, self.dt * k, cone)

    def stats(self) -> SpreadStats:
        T = len(self.grid)
        counts = np.zeros((T, 4), dtype=np.int64)
        for t in range(T):
            lo, hi = self.cone[t] if self.cone is not None else (0, self.grid.shape[1] - 1)
            row = self.grid[t, lo:hi + 1]
            bc = np.bincount(row, minlength=4)
            counts[t] = (bc[0], bc[1], bc[3], bc[2])
        return SpreadStats(counts, self.dt)

    def to_ppm(self) -> bytes:
        lut = np.array([PALETTE[c] for c in LABELS], dtype=np.uint8)
        img = lut[self.grid]
        h, w = self.grid.shape
        return f"P6\n{w} {h}\n255\n".encode() + img.tobytes()

    def to_text(self) -> str:
        """Run-length rows: ``t: origin count*label ...``."""
        out = []
        for t, row in enumerate(self.rows):
            runs = [f"{len(list(g))}{c}" for c, g in itertools.groupby(row)]
            out.append(f"{t}: {self.origin} " + " ".join(runs))
        return "\n".join(out) + "\n"


def evolve_vectors(M: Automaton, xi0, t_max: int):
    xi = SymplecticVector(xi0)
    yield xi
    for _ in range(t_max):
        xi = apply(M, xi)
        yield xi


def evolve_operator(M: Automaton, xi0, t_max: int) -> Footprint:
    """Rows t = 0..t_max of M^t xi0 on the light-cone window."""
    a = M.a
    span = _cell_span(xi0)
    if span is None:
        span = (0, 0)
    elo, ehi = exponent_range(M)
    clo, chi = span[0] + t_max * elo, span[1] + t_max * ehi
    ncells = chi - clo + 1
    grid = np.zeros((t_max + 1, ncells * a), dtype=np.uint8)
    cone = np.zeros((t_max + 1, 2), dtype=np.int64)
    for t, xi in enumerate(evolve_vectors(M, xi0, t_max)):
        cells = np.zeros((ncells, a), dtype=np.uint8)
        for j in range(a):
            for b in (0, 1):
                p = xi[2 * j + b]
                if p:
                    cells[:, j] |= _unpack(p.to_int(clo), ncells) << b
        grid[t] = cells.ravel()
        cone[t] = ((span[0] + t * elo - clo) * a, (span[1] + t * ehi - clo + 1) * a - 1)
    return Footprint(grid, clo * a, M.layers_per_step, cone)


def spread_counts(M: Automaton, xi0, t_max: int) -> SpreadStats:
    """Light-cone Pauli counts without materializing the grid."""
    a = M.a
    span = _cell_span(xi0) or (0, 0)
    elo, ehi = exponent_range(M)
    counts = np.zeros((t_max + 1, 4), dtype=np.int64)
    for t, xi in enumerate(evolve_vectors(M, xi0, t_max)):
        lo = span[0] + t * elo
        width = (span[1] + t * ehi - lo + 1) * a
        nx = ny = nz = 0
        for j in range(a):
            x = xi[2 * j].to_int(lo) if xi[2 * j] else 0
            z = xi[2 * j + 1].to_int(lo) if xi[2 * j + 1] else 0
            nx += (x & ~z).bit_count()
            nz += (z & ~x).bit_count()
            ny += (x & z).bit_count()
        counts[t] = (width - nx - ny - nz, nx, ny, nz)
    return SpreadStats(counts, M.layers_per_step)


# -- traces --------------------------------------------------------------------

def trace_series(M: Automaton, t_max: int) -> list[LaurentPoly]:
    """Tr(M^t) for t = 0..t_max via the Cayley-Hamilton recurrence."""
    n = M.n
    chi = char_poly(M)
    c = [chi.coeffs[n - i] for i in range(n + 1)]  # chi = sum c_i y^(n-i)
    out = []
    P = None
    for t in range(min(n, t_max + 1)):
        P = power(M, 0) if P is None else Automaton(M.a, (P @ M).entries)
        out.append(trace(P))
    for t in range(n, t_max + 1):
        s = ZERO
        for i in range(1, n + 1):
            if c[i] and out[t - i]:
                s = s + c[i] * out[t - i]
        out.append(s)
    return out


@dataclass
class TraceFootprint:
    traces: list

    def counts(self) -> np.ndarray:
        return np.array([p.weight() for p in self.traces], dtype=np.int64)

    def grid(self) -> tuple[np.ndarray, int]:
        """(binary grid, exponent of column 0); cell (t, n) is coeff of u^n."""
        nz = [p for p in self.traces if p]
        if not nz:
            return np.zeros((len(self.traces), 1), np.uint8), 0
        lo = min(p.min_exp for p in nz)
        hi = max(p.max_exp for p in nz)
        g = np.zeros((len(self.traces), hi - lo + 1), np.uint8)
        for t, p in enumerate(self.traces):
            if p:
                g[t] = _unpack(p.to_int(lo), hi - lo + 1)
        return g, lo

    def to_pbm(self) -> bytes:
        g, _ = self.grid()
        h, w = g.shape
        body = "\n".join(" ".join(map(str, r)) for r in g)
        return f"P1\n{w} {h}\n{body}\n".encode()


def trace_footprint(M: Automaton, t_max: int) -> TraceFootprint:
    return TraceFootprint(trace_series(M, t_max))


def fractal_dimension(cumulative, fit_range: tuple[int, int]) -> tuple[float, float]:
    """Slope of log2(cumulative) against log2(t) at dyadic t within fit_range."""
    cumulative = np.asarray(cumulative, dtype=float)
    lo, hi = fit_range
    ts = [1 << j for j in range(max(lo, 1).bit_length() - 1, hi.bit_length())
          if lo <= (1 << j) <= hi and (1 << j) < len(cumulative)]
    if len(ts) < 2:
        raise ValueError("fit range holds fewer than two dyadic points")
    y = cumulative[ts]
    if np.any(y <= 0):
        raise ValueError("counts must be positive over the fit range")
    fit = stats.linregress(np.log2(ts), np.log2(y))
    return float(fit.slope), float(fit.stderr)


# -- gliders -----------------------------------------------------------------

def detect_gliders(M: Automaton, max_cell_weight: int | None = None) -> list[tuple[SymplecticVector, int]]:
    """One-cell Pauli vectors with M xi = u^n xi."""
    a = M.a
    wmax = a if max_cell_weight is None else max_cell_weight
    found = []
    for labels in itertools.product(range(4), repeat=a):
        w = sum(1 for c in labels if c)
        if w == 0 or w > wmax:
            continue
        comps = []
        for c in labels:
            comps += [ONE if c & 1 else ZERO, ONE if c & 2 else ZERO]
        xi = SymplecticVector(comps)
        img = apply(M, xi)
        lead = next(i for i, c in enumerate(comps) if c)
        e = img[lead]
        if not e.is_monomial():
            continue
        if all(img[i] == (comps[i] * e if comps[i] else ZERO) for i in range(len(comps))):
            found.append((xi, e.min_exp))
    return found


# -- recurrences ------------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceResult:
    m: int
    tau: int
    shift_d: int
    lower_bound: bool = False

    def __str__(self):
        return f">{self.tau - 1}" if self.lower_bound else str(self.tau)


def default_budget() -> int:
    env = os.environ.get("CQCA_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _residue_terms(M: Automaton, m: int):
    terms = []
    for i, row in enumerate(M.entries):
        for k, e in enumerate(row):
            bits = e.cyclic(m)
            while bits:
                low = bits & -bits
                terms.append((i, k, low.bit_length() - 1))
                bits ^= low
    return terms


def recurrence_time(M: Automaton, m: int, budget: int | None = None) -> RecurrenceResult:
    """Smallest t with M^t = u^d * 1 modulo u^m - 1 (d reported in [0, m))."""
    if m < 1:
        raise ValueError("m must be positive")
    budget = default_budget() if budget is None else budget
    t, d = kernels.recurrence_search(_residue_terms(M, m), M.n, m, budget)
    if t == 0:
        return RecurrenceResult(m, budget + 1, 0, True)
    return RecurrenceResult(m, t, d)


def dyadic_pattern(taus: dict[int, int]) -> list[tuple[int, int, int, str]]:
    """Rows (m, j, k, form) where tau(j 2^k)/2^k equals 2^p+2 or 2^p-2."""
    out = []
    for m, tau in sorted(taus.items()):
        k = (m & -m).bit_length() - 1
        j = m >> k
        if tau % (1 << k):
            continue
        r = tau >> k
        for sign, delta in (("+", -2), ("-", 2)):
            v = r + delta
            if v > 0 and v & (v - 1) == 0:
                out.append((m, j, k, f"2^{v.bit_length() - 1}{sign}2"))
                break
    return out
