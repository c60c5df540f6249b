"""Backend dispatch for the numeric hot kernels.

The heavy inner loops (grid scans, Hamming-compressed divergence sums,
full-outcome pushforwards) exist twice: a numba @njit build in
_kernels_numba and a vectorized pure-numpy build in _kernels_numpy.  The
environment variable BERNAMP_BACKEND picks one at import time:

  auto   (default) numba when importable, else numpy
  numba  require numba, error if unavailable
  numpy  force the pure-numpy fallback

Both builds implement identical contracts; benchmarks/bench_kernels.py
compares their throughput.
"""

from __future__ import annotations

import os

from . import _kernels_numpy as numpy_impl
from .errors import UsageError

__all__ = [
    "BACKEND",
    "active_backend",
    "numpy_impl",
    "numba_impl",
    "hamming_renyi_logsum",
    "d1_grid_scan",
    "full_renyi_logsum",
    "corner_pushforward_full",
    "point_pushforward_full",
]

numba_impl = None


def _select_backend() -> str:
    choice = os.environ.get("BERNAMP_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise UsageError(
            f"BERNAMP_BACKEND must be auto, numba, or numpy, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise UsageError("BERNAMP_BACKEND=numba but numba is not importable")
        return "numpy"
    return "numba"


BACKEND = _select_backend()

if BACKEND == "numba":
    from . import _kernels_numba as numba_impl  # noqa: F811

_impl = numba_impl if BACKEND == "numba" else numpy_impl

hamming_renyi_logsum = _impl.hamming_renyi_logsum
d1_grid_scan = _impl.d1_grid_scan
full_renyi_logsum = _impl.full_renyi_logsum
corner_pushforward_full = _impl.corner_pushforward_full
point_pushforward_full = _impl.point_pushforward_full


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND
