"""Clifford cellular automata on square and kagome brickwork circuits.

Laurent-polynomial symplectic automata, sign-free stabilizer tableaux,
quasicyclic codes, hybrid measurement circuits and two-point correlations.
"""
__version__ = "0.1.0"

from .polyring import LaurentPoly, BivarPoly  # noqa: E402
from .automaton import Automaton, char_poly, min_poly, classify, detect_symmetries  # noqa: E402
from .lattice import CircuitSpec, MeasurementSchedule, build, preset  # noqa: E402
from .tableau import StabilizerGroup  # noqa: E402
from .kernels import BACKEND  # noqa: E402

__all__ = ["LaurentPoly", "BivarPoly", "Automaton", "char_poly", "min_poly", "classify",
           "detect_symmetries", "CircuitSpec", "MeasurementSchedule", "build", "preset",
           "StabilizerGroup", "BACKEND", "__version__"]
