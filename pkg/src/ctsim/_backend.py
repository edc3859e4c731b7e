"""Kernel selection: compiled extension when built, pure Python otherwise.

Both backends expose the same four callables with identical semantics;
tests assert their numerical agreement and benchmarks/bench_kernels.py
compares their speed.
"""

from __future__ import annotations

import warnings

try:
    from ._kernels import (
        maximize_coherent,
        maximize_vsp,
        svetlichny_coherent,
        svetlichny_vsp,
    )

    COMPILED = True
except ImportError:  # pragma: no cover - depends on the build environment
    from ._kernels_py import (
        maximize_coherent,
        maximize_vsp,
        svetlichny_coherent,
        svetlichny_vsp,
    )

    COMPILED = False
    warnings.warn(
        "ctsim._kernels extension not built; using the pure-Python kernels "
        "(correct but slower; rebuild with Cython + a C compiler for speed)",
        RuntimeWarning,
        stacklevel=2,
    )

__all__ = [
    "COMPILED",
    "maximize_coherent",
    "maximize_vsp",
    "svetlichny_coherent",
    "svetlichny_vsp",
]
