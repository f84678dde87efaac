"""Circuits with one single-site measurement per doubled spacetime cell."""
from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .lattice import CircuitSpec, MeasurementSchedule
from .tableau import (StabilizerGroup, canonical_form, entropy, measure, pauli_row, step)


def _schedule(spec: CircuitSpec) -> MeasurementSchedule:
    if spec.lattice != "square":
        raise ValueError("hybrid circuits are defined on the square lattice")
    return spec.measurement or MeasurementSchedule()


def measurement_round(g: StabilizerGroup, spec: CircuitSpec) -> tuple[StabilizerGroup, list[str]]:
    """Measure the scheduled Pauli in every cell, left to right."""
    sched = _schedule(spec)
    kinds = []
    for n in range(g.m):
        g, kind = measure(g, n * g.a + sched.site, sched.basis)
        kinds.append(kind)
    return g, kinds


def hybrid_step(g: StabilizerGroup, spec: CircuitSpec) -> StabilizerGroup:
    """One unitary period followed by a measurement round."""
    return measurement_round(step(g, spec), spec)[0]


@dataclass
class PurificationTrace:
    entropy: list = field(default_factory=list)  # S(t), t = 0, 1, ...
    t_star: int | None = None  # first t whose group is invariant under a step
    plateau: StabilizerGroup | None = None
    groups: list = field(default_factory=list)

    @property
    def purified_bits(self) -> list[int]:
        return [0] + [a - b for a, b in zip(self.entropy, self.entropy[1:])]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,S,purified_bits\n")
        for t, (s, p) in enumerate(zip(self.entropy, self.purified_bits)):
            buf.write(f"{t},{s},{p}\n")
        return buf.getvalue()


def run_hybrid(spec: CircuitSpec, m: int, t_max: int, g0: StabilizerGroup | None = None,
               keep_groups: bool = False, stop_at_plateau: bool = True) -> PurificationTrace:
    """Measurement round at t = 0, then (period, measurement round) per step."""
    g = StabilizerGroup.fully_mixed(m, 2) if g0 is None else g0
    g, _ = measurement_round(g, spec)
    trace = PurificationTrace()
    prev = canonical_form(g)
    trace.entropy.append(entropy(g))
    if keep_groups:
        trace.groups.append(g)
    for t in range(1, t_max + 1):
        h = hybrid_step(g, spec)
        cur = canonical_form(h)
        if trace.t_star is None and cur.shape == prev.shape and np.array_equal(cur, prev):
            trace.t_star = t - 1
            trace.plateau = g
            if stop_at_plateau:
                break
        g, prev = h, cur
        trace.entropy.append(entropy(g))
        if keep_groups:
            trace.groups.append(g)
    return trace


def dark_state(m: int) -> StabilizerGroup:
    """Product group with X on both sites of every cell."""
    if m < 1:
        raise ValueError("m must be positive")
    return StabilizerGroup.product("XX" * m, 2)


_SWAPS = {"XZ": (1, 1, 1), "XY": (0, 1, 0), "YZ": (1, 0, 0)}


def perturb(g: StabilizerGroup, site: int, swap: str = "XZ") -> StabilizerGroup:
    """Conjugate by the sign-free one-site Clifford exchanging the two labels."""
    key = "".join(sorted(swap.upper()))
    if key not in _SWAPS:
        raise ValueError(f"bad label pair {swap!r}")
    gens = g.gens.copy()
    x, z = gens[:, 2 * site].copy(), gens[:, 2 * site + 1].copy()
    if key == "XZ":
        gens[:, 2 * site], gens[:, 2 * site + 1] = z, x
    elif key == "XY":
        gens[:, 2 * site + 1] = z ^ x
    else:
        gens[:, 2 * site] = x ^ z
    return StabilizerGroup(gens, g.a, check=False)


@dataclass
class LightDarkGrid:
    rows: np.ndarray  # (T+1, m) bool, True = dark

    @property
    def light(self) -> np.ndarray:
        return ~self.rows

    def cumulative_light(self) -> np.ndarray:
        return np.cumsum(self.light.sum(axis=1))

    def to_pbm(self) -> bytes:
        """Portable bitmap with light cells as 1 (printed black)."""
        h, w = self.rows.shape
        body = "\n".join(" ".join("1" if c else "0" for c in r) for r in self.light)
        return f"P1\n{w} {h}\n{body}\n".encode()

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t," + ",".join(f"cell{n}" for n in range(self.rows.shape[1])) + "\n")
        for t, r in enumerate(self.rows):
            buf.write(f"{t}," + ",".join("D" if c else "L" for c in r) + "\n")
        return buf.getvalue()


def dark_cells(g: StabilizerGroup) -> np.ndarray:
    """Cell n is dark iff X on its second site lies in the group."""
    return np.array([g.contains(pauli_row(g.L, {n * g.a + 1: "X"})) for n in range(g.m)])


def perturb_and_track(g: StabilizerGroup, spec: CircuitSpec, t_max: int, site: int | None = None,
                      swap: str = "XZ") -> LightDarkGrid:
    """Perturb one site of a pure group and record light/dark cells per step."""
    if g.k != g.L:
        raise ValueError("perturbation tracking needs a pure group")
    if site is not None:
        g = perturb(g, site, swap)
    rows = [dark_cells(g)]
    for _ in range(t_max):
        g = hybrid_step(g, spec)
        rows.append(dark_cells(g))
    return LightDarkGrid(np.array(rows, dtype=bool))
