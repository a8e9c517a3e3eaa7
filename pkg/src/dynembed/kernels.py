"""Kernel dispatch: compiled extension if built, pure-Python mirror otherwise.

Set DYNEMBED_PURE_PYTHON=1 to force the fallback (used by the parity tests
and the kernel benchmark). Both backends expose build_alias, simulate_walks
and train_sgns with identical semantics and bit-identical seeded output.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built: pure-Python fallback
    _ckernels = None

COMPILED_AVAILABLE = _ckernels is not None

if COMPILED_AVAILABLE and not os.environ.get("DYNEMBED_PURE_PYTHON"):
    _backend = _ckernels
else:
    _backend = _pykernels


def active_backend():
    """The kernel module currently in use."""
    return _backend


def using_compiled() -> bool:
    return bool(getattr(_backend, "COMPILED", False))


build_alias = _backend.build_alias
simulate_walks = _backend.simulate_walks
train_sgns = _backend.train_sgns
