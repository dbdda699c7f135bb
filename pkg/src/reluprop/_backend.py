"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the
pure-Python twin is used. ``RELUPROP_BACKEND=pure`` or ``=compiled``
forces the choice (the latter raises if the extension is missing, which
is what the benchmark and the parity tests want).
"""

import os

_requested = os.environ.get("RELUPROP_BACKEND", "").strip().lower()

if _requested == "pure":
    from . import _kernels_pure as impl

    BACKEND = "pure"
elif _requested == "compiled":
    from . import _kernels_cy as impl  # noqa: F401  (ImportError is the contract)

    BACKEND = "compiled"
elif _requested == "":
    try:
        from . import _kernels_cy as impl

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_pure as impl

        BACKEND = "pure"
else:
    raise ImportError(
        f"RELUPROP_BACKEND={_requested!r} not understood (use 'pure' or 'compiled')"
    )
