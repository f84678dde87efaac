"""Backend selection for the hot loops.

The compiled module is used when it imports; set ``CQCA_PURE_PYTHON=1`` to
force the reference implementation.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("CQCA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        pass

prefix_ranks = _impl.prefix_ranks
gf2_rank = _impl.gf2_rank
cyclic_window_ranks = _impl.cyclic_window_ranks
recurrence_search = _impl.recurrence_search
erasure_logical_dims = _impl.erasure_logical_dims

__all__ = ["BACKEND", "prefix_ranks", "gf2_rank", "cyclic_window_ranks", "recurrence_search",
           "erasure_logical_dims"]
