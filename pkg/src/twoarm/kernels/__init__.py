"""Strategy inner loops, compiled when available.

The Cython extension ``_ckernels`` is used unless it failed to build or the
environment variable ``TWOARM_PURE_PYTHON`` is set to a non-empty value, in
which case the numpy implementation in ``_pykernels`` is selected. Both expose
the same four functions and produce identical outcomes on identical streams.
"""

import os

from . import _pykernels

if os.environ.get("TWOARM_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

pair_gaussian = _impl.pair_gaussian
alpha_gaussian = _impl.alpha_gaussian
pair_bernoulli_kl = _impl.pair_bernoulli_kl
static_sums = _impl.static_sums


def available_backends():
    """Map of backend name to kernel module, for comparisons and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out


__all__ = [
    "BACKEND",
    "alpha_gaussian",
    "available_backends",
    "pair_bernoulli_kl",
    "pair_gaussian",
    "static_sums",
]
