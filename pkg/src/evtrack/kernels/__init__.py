"""Hot-path kernels: compiled extension when built, numpy fallback otherwise.

Set EVTRACK_DISABLE_EXTENSION=1 to force the fallback (used by the backend
parity tests and the kernel benchmark).
"""
import os

from . import _reference

if os.environ.get("EVTRACK_DISABLE_EXTENSION") == "1":
    _impl = _reference
    BACKEND = "reference"
else:
    try:
        from . import _accel as _impl  # type: ignore[no-redef]

        BACKEND = "accel"
    except ImportError:
        _impl = _reference
        BACKEND = "reference"

warp = _impl.warp
splat = _impl.splat
splat_gradient = _impl.splat_gradient

__all__ = ["warp", "splat", "splat_gradient", "BACKEND"]
