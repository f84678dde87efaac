"""Code properties of stabilizer groups: contiguous distance and erasures."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dynamics import recurrence_time
from .lattice import CircuitSpec, build
from .tableau import Region, StabilizerGroup, complement_sites, restricted_rank, step, window_ranks


@dataclass
class CodeSnapshot:
    group: StabilizerGroup
    t: int
    d1: int
    spec: CircuitSpec | None = None
    initial: str = ""
    d1_series: list = field(default_factory=list)

    @property
    def rate(self) -> float:
        """Entropy density s = 1 - k/L (logical qubits per site)."""
        return 1 - self.group.k / self.group.L

    def to_text(self) -> str:
        head = f"# t={self.t} d1={self.d1} k={self.group.k} L={self.group.L}\n"
        return head + str(self.group) + "\n"


@dataclass(frozen=True)
class ErasureModel:
    e: float
    trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.e <= 1:
            raise ValueError("erasure fraction must lie in [0, 1]")

    def count(self, L: int) -> int:
        return int(math.floor(self.e * L + 0.5))


def _sites(g: StabilizerGroup, W) -> np.ndarray:
    if isinstance(W, Region):
        return W.sites(g.L)
    return np.unique(np.asarray(W, dtype=np.intp) % g.L)


def logical_dim_on_region(g: StabilizerGroup, W) -> int:
    """Number of independent logical operators supported inside W.

    2|W| - rank(G|W) counts Paulis on W commuting with the group; the
    stabilizers supported on W (k - rank(G|complement)) are quotiented out.
    """
    sites = _sites(g, W)
    comp = complement_sites(g.L, sites)
    return int(2 * len(sites) - restricted_rank(g, sites) - g.k + restricted_rank(g, comp))


def window_logical_dims(g: StabilizerGroup) -> np.ndarray:
    """D[s, l] = logical dimension of the cyclic window (s, l), l = 0..L."""
    L, k = g.L, g.k
    R = window_ranks(g)
    ls = np.arange(L + 1)
    starts = (np.arange(L)[:, None] + ls[None, :]) % L
    return 2 * ls[None, :] - R - k + R[starts, L - ls[None, :]]


def contiguous_code_distance(g: StabilizerGroup) -> int:
    """Length of the shortest cyclic window that supports a logical operator."""
    if g.k >= g.L:
        raise ValueError("pure state: no logical operators")
    D = window_logical_dims(g)
    hit = np.flatnonzero((D[:, 1:] > 0).any(axis=0))
    return int(hit[0] + 1) if len(hit) else g.L


def build_quasicyclic(spec: CircuitSpec, initial: StabilizerGroup, t_star: int) -> CodeSnapshot:
    """Evolve the initial group and keep the earliest snapshot of largest d1."""
    g = initial
    best = None
    series = []
    for t in range(t_star + 1):
        if t:
            g = step(g, spec)
        d = contiguous_code_distance(g)
        series.append(d)
        if best is None or d > best[1]:
            best = (g, d, t)
    return CodeSnapshot(best[0], best[2], best[1], spec, "", series)


def snapshot_horizon(spec: CircuitSpec, m: int) -> int:
    """Steps searched for the best snapshot: one recurrence, capped at 4m."""
    r = recurrence_time(build(spec), m, budget=4 * m)
    return 4 * m if r.lower_bound else min(r.tau, 4 * m)


def erasure_failure(g: StabilizerGroup, erased) -> bool:
    """Unrecoverable iff a nontrivial logical is supported on the erased sites."""
    return logical_dim_on_region(g, erased) > 0


def erased_sites(model: ErasureModel, L: int) -> np.ndarray:
    """Erased site sets, one row per trial; trial i draws from rng(seed, i)."""
    n = model.count(L)
    out = np.empty((model.trials, n), dtype=np.int64)
    for i in range(model.trials):
        out[i] = np.random.default_rng([model.seed, i]).choice(L, size=n, replace=False)
    return out


def erasure_failure_rate(g: StabilizerGroup, model: ErasureModel) -> tuple[float, float, int]:
    """Monte Carlo (P_F, binomial stderr, failures)."""
    if g.k >= g.L:
        raise ValueError("pure state: no logical operators")
    if model.count(g.L) == 0 or model.trials == 0:
        return 0.0, 0.0, 0
    dims = kernels.erasure_logical_dims(g.gens, erased_sites(model, g.L))
    fails = int(np.count_nonzero(dims > 0))
    p = fails / model.trials
    return p, math.sqrt(p * (1 - p) / model.trials), fails


def threshold(s: float) -> float:
    return (1 - s) / 2


def rmt_failure_model(e: float, s: float, L: int, rounded: bool = False) -> float:
    """2^(-2L(e_c - e) - 1) with e_c = (1 - s)/2 and unit prefactor.

    With ``rounded`` the erasure fraction is replaced by round(eL)/L.
    """
    if rounded:
        e = math.floor(e * L + 0.5) / L
    ec = threshold(s)
    if e >= ec:
        raise ValueError("model valid only below threshold")
    return 2.0 ** (-2 * L * (ec - e) - 1)


def erasure_csv(rows) -> str:
    """rows: (e, trials, failures, P_F, stderr, rmt or None)."""
    buf = io.StringIO()
    buf.write("e,trials,failures,P_F,stderr,rmt_prediction\n")
    for e, trials, fails, p, se, rmt in rows:
        r = "" if rmt is None else f"{rmt:.6g}"
        buf.write(f"{e:.6g},{trials},{fails},{p:.6g},{se:.6g},{r}\n")
    return buf.getvalue()


def crossing(x, y1, y2) -> float | None:
    """First x where y1 - y2 changes sign, by linear interpolation."""
    d = np.asarray(y1, float) - np.asarray(y2, float)
    for i in range(len(d) - 1):
        if d[i] == 0:
            return float(x[i])
        if d[i] * d[i + 1] < 0:
            return float(x[i] + (x[i + 1] - x[i]) * d[i] / (d[i] - d[i + 1]))
    return None
