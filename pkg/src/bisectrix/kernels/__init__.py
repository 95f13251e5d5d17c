"""Hot kernels: compiled when the extension is built, numpy otherwise.

Set ``BISECTRIX_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

from . import _pykernels

KIND_FINITE = _pykernels.KIND_FINITE
KIND_ZERO = _pykernels.KIND_ZERO
KIND_INF = _pykernels.KIND_INF

_impl = _pykernels
BACKEND = "python"
if not os.environ.get("BISECTRIX_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

dual_value = _impl.dual_value
dual_objective = _impl.dual_objective
segment_pair = _impl.segment_pair
lp_value = _impl.lp_value
lp_objective = _impl.lp_objective
phi_values = _impl.phi_values
philo_lengths = _impl.philo_lengths

__all__ = [
    "BACKEND",
    "KIND_FINITE",
    "KIND_INF",
    "KIND_ZERO",
    "dual_objective",
    "dual_value",
    "lp_objective",
    "lp_value",
    "philo_lengths",
    "phi_values",
    "segment_pair",
]
