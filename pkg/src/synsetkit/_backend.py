"""Kernel backend selection.

The compiled ``_kernels`` extension is used when importable; otherwise, or
when ``SYNSETKIT_PURE=1`` is set, the pure-Python ``_pure`` module is used.
Both expose the same functions with identical results.
"""

import os

if os.environ.get("SYNSETKIT_PURE", "") not in ("", "0"):
    from . import _pure as kernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        from . import _pure as kernels

BACKEND = "compiled" if kernels.__name__.endswith("_kernels") else "pure"

__all__ = ["kernels", "BACKEND"]
