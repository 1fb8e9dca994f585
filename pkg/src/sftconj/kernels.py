"""Kernel backend selection.

The compiled extension is preferred when it was built; the pure-Python
module is the fallback and the reference implementation.  Set
``SFTCONJ_KERNELS=python`` (or ``cython``) to force a backend, e.g. for
the benchmark in ``benchmarks/bench_kernels.py``.
"""

import os

from . import _kernels_py

_forced = os.environ.get("SFTCONJ_KERNELS")

if _forced == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _forced == "cython":
            raise ImportError(
                "SFTCONJ_KERNELS=cython but the compiled extension is not "
                "available; build it with `pip install -e .` with Cython "
                "and a C compiler installed"
            )
        _impl = _kernels_py

BACKEND = _impl.BACKEND
tarjan_scc = _impl.tarjan_scc
prepare_preds = _impl.prepare_preds
count_matmul_step = _impl.count_matmul_step
matrix_trace = _impl.matrix_trace


def available_backends():
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def load_backend(name):
    """Return the kernel module for an explicit backend name."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
