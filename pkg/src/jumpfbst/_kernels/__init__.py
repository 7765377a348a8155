"""Backend selection for the hot posterior-evaluation kernel.

The compiled Cython core is used when present; otherwise a numpy fallback
with identical semantics takes over.  Set ``JUMPFBST_PURE_PYTHON=1`` to force
the fallback (used by the benchmark and the backend-equivalence tests).
"""

import os

_FORCE_PURE = os.environ.get("JUMPFBST_PURE_PYTHON", "") not in ("", "0")

if _FORCE_PURE:
    from . import _core_np as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _core_np as _impl

        BACKEND = "numpy"

batch_log_posterior = _impl.batch_log_posterior

__all__ = ["batch_log_posterior", "BACKEND"]
