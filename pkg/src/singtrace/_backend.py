"""Kernel backend selection.

The compiled extension is preferred when present; the pure-Python fallback
implements the identical arithmetic.  ``SINGTRACE_BACKEND`` forces a choice:
``compiled`` (error if unavailable), ``python``, or ``auto`` (default).
"""

import os

_choice = os.environ.get("SINGTRACE_BACKEND", "auto").strip().lower()

if _choice in ("", "auto", "compiled"):
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _kernels_py as _impl
        BACKEND = "python"
elif _choice in ("python", "pure"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    raise ValueError(f"unknown SINGTRACE_BACKEND value: {_choice!r}")

sum_comp = _impl.sum_comp
pow_sum = _impl.pow_sum
exp_pow_sum = _impl.exp_pow_sum
exp_lincomb_sum = _impl.exp_lincomb_sum
