"""Selects the compiled search kernel when it is importable.

Set ``IELKIT_PURE=1`` to force the pure-Python implementation.
"""

import os

if os.environ.get("IELKIT_PURE"):
    from . import _kernel_py as impl
else:
    try:
        from . import _kernel as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as impl

BACKEND = "compiled" if impl.__name__.endswith("._kernel") else "python"

derivable = impl.derivable
decide = impl.decide
oracle_min_size = impl.oracle_min_size

__all__ = ["BACKEND", "derivable", "decide", "oracle_min_size"]
