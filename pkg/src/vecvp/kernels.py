"""Backend selection for the cone kernels.

The compiled extension ``vecvp._kernels`` is used when it imports; set
``VECVP_PURE_PYTHON=1`` to force the pure-Python fallback. Both backends
produce identical doubles, so traces and reports do not depend on the choice.
"""
import importlib
import os

import numpy as np

from . import _kernels_py


def load_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("vecvp._kernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    if os.environ.get("VECVP_PURE_PYTHON", "").strip() not in ("", "0"):
        return "python", _kernels_py
    try:
        return "cython", load_backend("cython")
    except ImportError:
        return "python", _kernels_py


BACKEND, _impl = _select()

# candidate projections within this relative slack of the cone count as feasible
FEAS_REL = 1e-12


def _rows(values, m):
    arr = np.ascontiguousarray(values, dtype=np.float64)
    return arr.reshape(-1, m)


def margins(normals, values):
    """``min_j <a_j, v>`` for every row ``v`` of ``values``."""
    normals = np.ascontiguousarray(normals, dtype=np.float64)
    return _impl.margins(normals, _rows(values, normals.shape[1]))


def distances(normals, projectors, values):
    """Distance to the cone ``{y : <a_j, y> >= 0}`` for every row of ``values``."""
    normals = np.ascontiguousarray(normals, dtype=np.float64)
    projectors = np.ascontiguousarray(projectors, dtype=np.float64)
    return _impl.distances(normals, projectors, _rows(values, normals.shape[1]), FEAS_REL)
