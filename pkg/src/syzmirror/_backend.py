"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``SYZMIRROR_KERNEL=python`` to force the fallback (used by the
benchmark and by tests that pin a backend).
"""

import os

from . import _kernel_py

if os.environ.get("SYZMIRROR_KERNEL", "").lower() == "python":
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernel_py

mul_terms = _impl.mul_terms
KERNEL_IMPLEMENTATION = _impl.IMPLEMENTATION
