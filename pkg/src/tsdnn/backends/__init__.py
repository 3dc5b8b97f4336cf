"""Kernel backend selection.

The hot numeric kernels exist twice: a Cython extension (built at install
time) and a pure-NumPy reference implementation.  The compiled one is used
when importable; setting ``TSDNN_BACKEND=python`` or ``=compiled`` forces a
choice.  ``kernels`` is the selected module, ``BACKEND`` its name.
"""

import os

from . import reference

_forced = os.environ.get("TSDNN_BACKEND", "").strip().lower()

if _forced == "python":
    kernels = reference
    BACKEND = "python"
else:
    try:
        from . import _speedups as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        if _forced == "compiled":
            raise ImportError(
                "TSDNN_BACKEND=compiled but the tsdnn.backends._speedups "
                "extension is not built; reinstall the package or unset the "
                "variable to use the NumPy fallback"
            ) from None
        kernels = reference
        BACKEND = "python"

__all__ = ["kernels", "reference", "BACKEND"]
