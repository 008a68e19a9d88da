"""Pure-Python cone kernels (fallback for the Cython extension).

Every loop mirrors ``_kernels.pyx``; do not reorder the accumulations.
"""
import math

import numpy as np


def margins(normals, values):
    """Smallest facet inner product ``min_j <a_j, v>`` for each row ``v``."""
    rows = normals.tolist()
    out = []
    for v in values.tolist():
        best = math.inf
        for a in rows:
            s = 0.0
            for ak, vk in zip(a, v):
                s += ak * vk
            if s < best:
                best = s
        out.append(best)
    return np.array(out, dtype=np.float64)


def distances(normals, projectors, values, feas_rel):
    """Euclidean distance of each row of ``values`` to the cone.

    ``projectors`` holds one orthogonal projector per candidate active set
    (onto the span of the active facet normals). The projection of ``v`` on
    the face is ``v - P v``; infeasible candidates are discarded and the
    shortest feasible residual ``|P v|`` is the distance.
    """
    rows = normals.tolist()
    projs = projectors.tolist()
    out = []
    for v in values.tolist():
        s = 0.0
        for vk in v:
            s += vk * vk
        feas = feas_rel * (1.0 + math.sqrt(s))
        best = math.inf
        for proj in projs:
            r = []
            z = []
            for prow, vk in zip(proj, v):
                s = 0.0
                for pkl, vl in zip(prow, v):
                    s += pkl * vl
                r.append(s)
                z.append(vk - s)
            ok = True
            for a in rows:
                s = 0.0
                for ak, zk in zip(a, z):
                    s += ak * zk
                if s < -feas:
                    ok = False
                    break
            if ok:
                s = 0.0
                for rk in r:
                    s += rk * rk
                d = math.sqrt(s)
                if d < best:
                    best = d
        out.append(best)
    return np.array(out, dtype=np.float64)
