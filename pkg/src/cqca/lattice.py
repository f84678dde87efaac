"""Gate library and circuit constructors for square (a=2) and kagome (a=4)
brickwork circuits.

One-site and two-site Clifford gates are kept modulo Paulis, i.e. as F2
symplectic matrices whose columns are the images of X, Z (one site) or
X1, Z1, X2, Z2 (two sites).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .automaton import Automaton, center, compose, identity, power, shift_automaton
from .polyring import ONE, ZERO, LaurentPoly

GATE_NAMES = ("I", "RZ90", "RX90", "RY90", "Cplus", "Cminus")

GATES = {
    "I": ((1, 0), (0, 1)),
    "RX90": ((1, 1), (0, 1)),
    "RY90": ((0, 1), (1, 0)),
    "RZ90": ((1, 0), (1, 1)),
    "Cplus": ((1, 1), (1, 0)),
    "Cminus": ((0, 1), (1, 1)),
}

_ALIASES = {n.lower(): n for n in GATE_NAMES}
_ALIASES.update({"id": "I", "identity": "I", "c+": "Cplus", "c-": "Cminus"})


def gate_name(name: str) -> str:
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown one-site gate {name!r}") from None


def gate_matrix(g: str) -> np.ndarray:
    return np.array(GATES[gate_name(g)], dtype=np.uint8)


def _lookup(mat: np.ndarray) -> str:
    key = tuple(tuple(int(x) for x in r) for r in mat % 2)
    for name, m in GATES.items():
        if m == key:
            return name
    raise ValueError(f"not a one-site gate: {key}")


def gf2_inv2(mat: np.ndarray) -> np.ndarray:
    (a, b), (c, d) = mat
    return np.array([[d, b], [c, a]], dtype=np.uint8)  # det = 1 over F2


def inverse_gate(g: str) -> str:
    """Transpose of the unitary, which mod Paulis is the inverse matrix."""
    return _lookup(gf2_inv2(gate_matrix(g)))


def conjugate_by_rz(g: str) -> str:
    rz = gate_matrix("RZ90")
    return _lookup(rz @ gate_matrix(g) @ rz)


CORES = {
    "identity": np.eye(4, dtype=np.uint8),
    "swap": np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=np.uint8),
    "iswap": np.array([[0, 0, 1, 0], [1, 0, 1, 1], [1, 0, 0, 0], [1, 1, 1, 0]], dtype=np.uint8),
    # control on the first site: X1 -> X1 X2, Z2 -> Z1 Z2
    "cnot": np.array([[1, 0, 0, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 0, 0, 1]], dtype=np.uint8),
}


def _diag(g1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    out = np.zeros((4, 4), dtype=np.uint8)
    out[:2, :2] = g1
    out[2:, 2:] = g2
    return out


def vertex_matrix(core: str, v_plus: str, v_minus: str, convention: str = "a") -> np.ndarray:
    """4x4 action of one dressed vertex (before the shift)."""
    C = CORES[core]
    gp, gm = gate_matrix(v_plus), gate_matrix(v_minus)
    one = np.eye(2, dtype=np.uint8)
    if convention == "a":
        out = C @ _diag(gp, gm)
    elif convention == "b":
        out = _diag(gm, gp) @ C
    elif convention == "c":
        out = _diag(gm, one) @ C @ _diag(gp, one)
    elif convention == "d":
        out = _diag(one, gp) @ C @ _diag(one, gm)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return out % 2


@dataclass(frozen=True)
class MeasurementSchedule:
    """One single-site measurement per doubled unit cell, before each step."""
    basis: str = "X"
    site: int = 0

    def __post_init__(self):
        if self.basis not in ("X", "Y", "Z"):
            raise ValueError(f"bad measurement basis {self.basis!r}")


@dataclass(frozen=True)
class CircuitSpec:
    lattice: str = "square"
    core: str = "iswap"
    edges: tuple = ("I", "I")
    convention: str = "a"
    measurement: MeasurementSchedule | None = None
    label: str = ""

    def __post_init__(self):
        if self.lattice not in ("square", "kagome"):
            raise ValueError(f"unknown lattice {self.lattice!r}")
        if self.core not in CORES:
            raise ValueError(f"unknown core {self.core!r}")
        edges = tuple(gate_name(e) for e in self.edges)
        want = 2 if self.lattice == "square" else 6
        if len(edges) != want:
            raise ValueError(f"{self.lattice} spec needs {want} edge gates")
        if self.lattice == "kagome" and self.core != "iswap":
            raise ValueError("kagome specs use iSWAP cores")
        if self.convention not in "abcd" or len(self.convention) != 1:
            raise ValueError(f"unknown convention {self.convention!r}")
        object.__setattr__(self, "edges", edges)

    @property
    def a(self) -> int:
        return 2 if self.lattice == "square" else 4

    def to_json(self) -> dict:
        d = {"lattice": self.lattice, "core": self.core,
             "edges": [e.lower() for e in self.edges], "convention": self.convention}
        if self.measurement is not None:
            d["measurement"] = {"basis": self.measurement.basis, "site": self.measurement.site}
        return d

    @classmethod
    def from_json(cls, d: dict) -> "CircuitSpec":
        if not isinstance(d, dict):
            raise ValueError("spec must be a JSON object")
        unknown = set(d) - {"lattice", "core", "edges", "convention", "measurement", "label"}
        if unknown:
            raise ValueError(f"unknown spec fields {sorted(unknown)}")
        meas = d.get("measurement")
        if meas is not None:
            meas = MeasurementSchedule(str(meas.get("basis", "X")).upper(), int(meas.get("site", 0)))
        lattice = d.get("lattice", "square")
        default_edges = ["i", "i"] if lattice == "square" else ["i"] * 6
        return cls(lattice=lattice, core=str(d.get("core", "iswap")).lower(),
                   edges=tuple(d.get("edges", default_edges)), convention=d.get("convention", "a"),
                   measurement=meas, label=d.get("label", ""))


def load_spec(path) -> CircuitSpec:
    return CircuitSpec.from_json(json.loads(Path(path).read_text()))


# -- square lattice ----------------------------------------------------------

def _const_automaton(a: int, mat: np.ndarray, label="") -> Automaton:
    return Automaton(a, tuple(tuple(ONE if x else ZERO for x in r) for r in mat), label=label)


def build_square(spec: CircuitSpec) -> Automaton:
    """Half-step automaton: shift after the dressed vertex."""
    if spec.lattice != "square":
        raise ValueError("build_square needs a square-lattice spec")
    V = _const_automaton(2, vertex_matrix(spec.core, *spec.edges, spec.convention))
    M = compose(shift_automaton(2), V)
    return Automaton(2, M.entries, 1, label=spec.label or _spec_label(spec), spec=spec,
                     convention=spec.convention)


def two_layer(spec: CircuitSpec) -> Automaton:
    """Centered automaton for one full period."""
    if spec.lattice == "kagome":
        return build_kagome(spec)
    M = build_square(spec)
    out = center(power(M, 2))
    return replace(out, layers_per_step=2, spec=spec, label=f"{M.label}~", convention=spec.convention)


def _spec_label(spec: CircuitSpec) -> str:
    return f"{spec.core}({','.join(spec.edges)})/{spec.convention}"


# -- gate programs -------------------------------------------------------------
# A cell program is a list of layers; each gate is (4x4 action, (site, cell), (site, cell))
# relative to a reference cell, and repeats in every cell.

def _square_program(spec: CircuitSpec):
    A = vertex_matrix(spec.core, *spec.edges, spec.convention)
    return [[(A, (0, 0), (1, 0))], [(A, (1, 0), (0, 1))]]


# legs of one kagome brick in order: gate (0,1) left/right, gate (2,3) left/right,
# gate (1,2) left/right; the second brick is the first shifted by two sites
KAGOME_T2_EDGES = ("Cminus", "Cplus", "Cplus", "Cminus", "Cminus", "Cminus")


def _kagome_program(spec: CircuitSpec):
    e = spec.edges
    core = spec.core

    def g(i, j):
        return CORES[core] @ _diag(gate_matrix(e[i]), gate_matrix(e[j])) % 2

    return [
        [(g(0, 1), (0, 0), (1, 0)), (g(2, 3), (2, 0), (3, 0))],
        [(g(4, 5), (1, 0), (2, 0))],
        [(g(2, 3), (0, 0), (1, 0)), (g(0, 1), (2, 0), (3, 0))],
        [(g(4, 5), (3, 0), (0, 1))],
    ]


def cell_program(spec: CircuitSpec):
    return _square_program(spec) if spec.lattice == "square" else _kagome_program(spec)


def _gate_automaton(a: int, gates) -> Automaton:
    n = 2 * a
    rows = [[ZERO] * n for _ in range(n)]
    touched = set()
    for A, (p, cp), (q, cq) in gates:
        touched |= {p, q}
        legs = [(p, cp), (q, cq)]
        for jin in range(2):
            site_in, cell_in = legs[jin]
            for jout in range(2):
                site_out, cell_out = legs[jout]
                coef = LaurentPoly.monomial(cell_out - cell_in)
                for bi in range(2):
                    for bo in range(2):
                        if A[2 * jout + bo, 2 * jin + bi]:
                            r, c = 2 * site_out + bo, 2 * site_in + bi
                            rows[r][c] = rows[r][c] + coef
    for s in range(a):
        if s not in touched:
            rows[2 * s][2 * s] = ONE
            rows[2 * s + 1][2 * s + 1] = ONE
    return Automaton(a, tuple(map(tuple, rows)))


def program_automaton(spec: CircuitSpec) -> Automaton:
    """Full-period automaton assembled gate by gate from the cell program."""
    a = spec.a
    M = identity(a)
    for layer in cell_program(spec):
        M = compose(_gate_automaton(a, layer), M)
    return Automaton(a, M.entries, len(cell_program(spec)), label=spec.label or _spec_label(spec),
                     spec=spec, convention=spec.convention)


def build_kagome(spec: CircuitSpec) -> Automaton:
    if spec.lattice != "kagome":
        raise ValueError("build_kagome needs a kagome spec")
    return program_automaton(spec)


def build(spec: CircuitSpec) -> Automaton:
    """Full-period centered automaton for any spec."""
    return two_layer(spec)


def layer_program(spec: CircuitSpec, m: int):
    """Per layer, a list of (4x4 uint8 action, (site_i, site_j)) on L = m*a sites."""
    a = spec.a
    L = m * a
    if m < 2:
        raise ValueError("need at least two cells")
    out = []
    for layer in cell_program(spec):
        gates = []
        for n in range(m):
            for A, (p, cp), (q, cq) in layer:
                gates.append((A, (((n + cp) * a + p) % L, ((n + cq) * a + q) % L)))
        out.append(gates)
    return out


# -- presets -------------------------------------------------------------------

def _sq(v1, v2, core="iswap", label=""):
    return CircuitSpec("square", core, (v1, v2), "a", None, label)


PRESETS = {
    "swap": _sq("I", "I", "swap", "swap"),
    "bare-iswap": _sq("I", "I", label="bare-iswap"),
    "traceless-glider": _sq("I", "Cminus", label="traceless-glider"),
    "nonzero-trace-poor": _sq("I", "RX90", label="nonzero-trace-poor"),
    "dense": _sq("RX90", "RX90", label="dense"),
    "df19": _sq("RX90", "Cminus", label="df19"),
    "sdki": _sq("Cminus", "Cminus", label="sdki"),
    "cnot": _sq("I", "I", "cnot", "cnot"),
    "kagome-t1": CircuitSpec("kagome", "iswap", ("I",) * 6, label="kagome-t1"),
    "kagome-t2": CircuitSpec("kagome", "iswap", KAGOME_T2_EDGES, label="kagome-t2"),
    "kagome-t3": CircuitSpec("kagome", "iswap", ("RX90",) * 6, label="kagome-t3"),
}
PRESETS["dense-good"] = PRESETS["dense"]
PRESETS["df19-good"] = PRESETS["df19"]

HYBRID_PRESET = replace(PRESETS["df19"], measurement=MeasurementSchedule("X", 0), label="df19+X")


def preset(name: str) -> CircuitSpec:
    try:
        return PRESETS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown class {name!r}; choose from {sorted(PRESETS)}") from None


def all_square_specs(core: str = "iswap"):
    for v1 in GATE_NAMES:
        for v2 in GATE_NAMES:
            yield CircuitSpec("square", core, (v1, v2))
