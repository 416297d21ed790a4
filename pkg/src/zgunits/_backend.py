"""Backend selection: compiled kernels when available, pure Python otherwise.

Set ZGUNITS_PURE=1 in the environment to force the pure-Python kernels
(used by the benchmark and by CI to exercise both paths).
"""

import os

if os.environ.get("ZGUNITS_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
xgcd = _impl.xgcd
poly_mul = _impl.poly_mul
poly_rem = _impl.poly_rem
hnf_core = _impl.hnf_core
lll_reduce = _impl.lll_reduce
