"""Kernel backend selection.

Prefers the compiled extension (``wdiv._kernels``); falls back to the
numpy implementation when the extension is missing.  Override with the
environment variable ``WDIV_BACKEND`` set to ``compiled`` or ``python``
(default ``auto``).
"""

from __future__ import annotations

import os

_choice = os.environ.get("WDIV_BACKEND", "auto")
if _choice not in ("auto", "compiled", "python"):
    raise RuntimeError(f"WDIV_BACKEND must be auto|compiled|python, got {_choice!r}")

if _choice == "python":
    from . import _kernels_py as _impl

    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _kernels_py as _impl

        COMPILED = False

divisor_convolution = _impl.divisor_convolution
psi_pair_sums = _impl.psi_pair_sums
sqrt_cos_series = _impl.sqrt_cos_series


def backend_name() -> str:
    return "compiled" if COMPILED else "python"
