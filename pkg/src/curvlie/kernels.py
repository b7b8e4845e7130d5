"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module. Setting ``CURVLIE_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CURVLIE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND
mul_terms = _impl.mul_terms
content = _impl.content
primitive = _impl.primitive
sub_mul = _impl.sub_mul
find_reducer = _impl.find_reducer
normal_form = _impl.normal_form
spoly = _impl.spoly


def available_backends() -> dict:
    """All kernel implementations importable in this environment."""
    out = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out
