"""Instance files: parsing, serialization and seeded generation.

An instance file is a JSON object::

    {
      "name": "ek3",
      "space": {"labels": [...], "dist": [[...], ...]}      # or "embedding": [[...], ...]
      "cone": {"dim": 1, "generators": [[1.0]], "facet_normals": [[1.0]]},
      "cbar": [1.0],
      "objective": [[1.0], [0.4], [0.0]],
      "gauge": {"form": "metric_power", "p": 1},           # or matrix / norm_power
      "principle": {"x0": 0, "eps": 1.0,
                    "eps_seq": {"head": [0.5], "ratio": 0.5},
                    "delta_seq": {"head": [0.5]}, "N": 1},
      "corollary": {"lam": 2.0, "p": 2}                     # optional defaults for ekeland/bp
    }

``N`` is an integer (``delta_seq.head`` then lists exactly ``N`` values) or
``"inf"`` (``delta_seq`` then carries a geometric tail ``ratio``). Numbers may
also be given as decimal strings.
"""
import json

import numpy as np

from .cones import PolyhedralCone
from .exceptions import InstanceError, VPError
from .minimality import min_eps
from .problem import DeltaSequence, EpsSequence, VPProblem, validate_problem
from .spaces import FiniteMetricSpace, MatrixGauge, MetricPower, NormPower


def _num(value, where):
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise InstanceError(f"{where}: expected a number, got {value!r}") from None
    return out


def _nums(values, where):
    if not isinstance(values, list):
        raise InstanceError(f"{where}: expected a list")
    return [_num(v, f"{where}[{k}]") for k, v in enumerate(values)]


def _matrix(rows, where, width=None):
    if not isinstance(rows, list) or not rows:
        raise InstanceError(f"{where}: expected a nonempty list of rows")
    out = [_nums(r if isinstance(r, list) else [r], f"{where}[{k}]") for k, r in enumerate(rows)]
    w = len(out[0]) if width is None else width
    for k, r in enumerate(out):
        if len(r) != w:
            raise InstanceError(f"{where}[{k}]: row has length {len(r)}, expected {w}")
    return out


def _section(doc, key, where="instance"):
    if key not in doc:
        raise InstanceError(f"{where}: missing section '{key}'")
    return doc[key]


def _space(sec):
    labels = sec.get("labels")
    if "embedding" in sec:
        emb = _matrix(sec["embedding"], "space.embedding")
        if labels is not None and len(labels) != len(emb):
            raise InstanceError("space.labels: one label per point required")
        return FiniteMetricSpace.from_embedding(emb, labels)
    if "dist" in sec:
        dist = _matrix(sec["dist"], "space.dist")
        if len(dist[0]) != len(dist):
            raise InstanceError("space.dist: matrix must be square")
        if labels is not None and len(labels) != len(dist):
            raise InstanceError("space.labels: one label per point required")
        return FiniteMetricSpace.from_matrix(dist, labels)
    raise InstanceError("space: needs 'dist' or 'embedding'")


def _gauge(sec):
    form = sec.get("form")
    if form == "metric_power":
        return MetricPower(_num(sec.get("p", 1), "gauge.p"))
    if form == "norm_power":
        return NormPower(_num(sec.get("p", 1), "gauge.p"))
    if form == "matrix":
        return MatrixGauge(np.array(_matrix(_section(sec, "matrix", "gauge"), "gauge.matrix")))
    raise InstanceError(f"gauge.form: unknown form {form!r}")


def _point(value, labels, where):
    if isinstance(value, str) and value in labels:
        return labels.index(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    raise InstanceError(f"{where}: expected a point index or label, got {value!r}")


def problem_from_dict(doc, validate=True, assume_hypotheses=False):
    """Build (and by default validate) a problem from a parsed instance document.

    Raises
    ------
    InstanceError
        Malformed document; the message names the offending key.
    HypothesisError
        Well-formed document violating an invariant of the principle.
    """
    if not isinstance(doc, dict):
        raise InstanceError("instance: top level must be an object")
    try:
        space = _space(_section(doc, "space"))
        csec = _section(doc, "cone")
        dim = int(_num(_section(csec, "dim", "cone"), "cone.dim"))
        cone = PolyhedralCone(
            np.array(_matrix(_section(csec, "generators", "cone"), "cone.generators", dim)),
            np.array(_matrix(_section(csec, "facet_normals", "cone"), "cone.facet_normals", dim)),
        )
        cbar = _nums(_section(doc, "cbar"), "cbar")
        f = _matrix(_section(doc, "objective"), "objective", dim)
        gauge = _gauge(_section(doc, "gauge"))
        pr = _section(doc, "principle")
        es = _section(pr, "eps_seq", "principle")
        ds = _section(pr, "delta_seq", "principle")
        N = _section(pr, "N", "principle")
        dhead = _nums(_section(ds, "head", "principle.delta_seq"), "principle.delta_seq.head")
        if N == "inf":
            if "ratio" not in ds:
                raise InstanceError("principle.delta_seq: N='inf' needs a tail 'ratio'")
            delta = DeltaSequence(dhead, _num(ds["ratio"], "principle.delta_seq.ratio"))
        elif isinstance(N, int) and not isinstance(N, bool) and N >= 1:
            if ds.get("ratio") is not None:
                raise InstanceError("principle.delta_seq: finite N takes no 'ratio'")
            if len(dhead) != N:
                raise InstanceError(f"principle.delta_seq.head: expected N={N} values")
            delta = DeltaSequence.finite(dhead)
        else:
            raise InstanceError(f"principle.N: expected a positive integer or 'inf', got {N!r}")
        p = VPProblem(
            space=space,
            gauge=gauge,
            cone=cone,
            cbar=cbar,
            f=f,
            x0=_point(_section(pr, "x0", "principle"), list(space.labels), "principle.x0"),
            eps=_num(_section(pr, "eps", "principle"), "principle.eps"),
            eps_seq=EpsSequence(
                _nums(_section(es, "head", "principle.eps_seq"), "principle.eps_seq.head"),
                _num(_section(es, "ratio", "principle.eps_seq"), "principle.eps_seq.ratio"),
            ),
            delta_seq=delta,
            name=str(doc.get("name", "instance")),
        )
    except InstanceError:
        raise
    except VPError as exc:
        raise InstanceError(str(exc)) from None
    if validate:
        validate_problem(p, assume_hypotheses)
    return p


def parse_instance(path, validate=True, assume_hypotheses=False):
    """Read an instance file (see module docstring) into a :class:`VPProblem`."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InstanceError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return problem_from_dict(doc, validate, assume_hypotheses)


def load_instance(text, validate=True, assume_hypotheses=False):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return problem_from_dict(doc, validate, assume_hypotheses)


def problem_to_dict(p, extra=None):
    if p.space.embedding is not None:
        space = {"labels": list(p.space.labels), "embedding": p.space.embedding.tolist()}
    else:
        space = {"labels": list(p.space.labels), "dist": p.space.dist.tolist()}
    g = p.gauge
    if isinstance(g, MetricPower):
        gauge = {"form": "metric_power", "p": g.p}
    elif isinstance(g, NormPower):
        gauge = {"form": "norm_power", "p": g.p}
    else:
        gauge = {"form": "matrix", "matrix": g.matrix.tolist()}
    ds = {"head": list(p.delta_seq.head)}
    if p.delta_seq.ratio is not None:
        ds["ratio"] = p.delta_seq.ratio
    doc = {
        "name": p.name,
        "space": space,
        "cone": {
            "dim": p.cone.dim,
            "generators": p.cone.generators.tolist(),
            "facet_normals": p.cone.facet_normals.tolist(),
        },
        "cbar": p.cbar.tolist(),
        "objective": p.f.tolist(),
        "gauge": gauge,
        "principle": {
            "x0": p.x0,
            "eps": p.eps,
            "eps_seq": {"head": list(p.eps_seq.head), "ratio": p.eps_seq.ratio},
            "delta_seq": ds,
            "N": "inf" if p.N is None else p.N,
        },
    }
    if extra:
        doc.update(extra)
    return doc


def dump_instance(p, extra=None):
    """Instance file text; floats are written in shortest round-trip form."""
    return json.dumps(problem_to_dict(p, extra), indent=2, ensure_ascii=False) + "\n"


GAUGES = ("metric_power:1", "metric_power:2", "matrix")


def _cone(rng, m, kind):
    if kind == "orthant" or m == 1:
        return PolyhedralCone.orthant(m)
    if kind != "random-pointed":
        raise ValueError(f"unknown cone kind {kind!r}")
    if m == 3:
        k = int(rng.integers(4, 6))
        r = round(float(rng.uniform(0.4, 0.9)), 4)
        gens = []
        for j in range(k):
            th = 2 * np.pi * j / k + float(rng.uniform(-0.3, 0.3))
            gens.append([round(r * np.cos(th), 4), round(r * np.sin(th), 4), 1.0])
        return PolyhedralCone.polygonal(gens)
    basis = np.eye(m)
    for a in range(m):
        for b in range(m):
            if a != b:
                basis[a, b] = round(float(rng.uniform(-0.4, 0.4)), 4)
    return PolyhedralCone.simplicial(basis)


def gen_instance(seed, n=8, m=2, cone="orthant", gauge="metric_power:1", N="inf",
                 eps_policy="slack", name=None):
    """Deterministic random instance whose hypotheses hold by construction.

    Uses numpy's PCG64 generator seeded with ``seed``. Points are distinct
    grid points of ``[0, 2]^2`` with spacing 0.1; objective entries are
    uniform on ``[-1, 1]`` rounded to 4 decimals. ``eps`` is the least
    standard minimality level of ``x0`` times 1.25 (``"slack"``; 1.0 when
    that level is 0) or exactly that level (``"tight"``, choosing ``x0`` with
    a positive level when one exists). Finite ``N`` draws ``N`` weights from
    ``[0.2, 1]``; infinite ``N`` uses a geometric tail with ratio 0.5, 0.9
    or 1 (the last makes the perturbation series diverge).

    Parameters
    ----------
    gauge : str
        ``"metric_power:<p>"``, ``"norm_power:<p>"`` or ``"matrix"``
        (asymmetric entries in ``[0.2, 1.5]``).
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if n > 441:
        raise ValueError("at most 441 distinct grid points are available")
    rng = np.random.Generator(np.random.PCG64(seed))
    cells = rng.choice(441, size=n, replace=False)
    emb = [[int(c) // 21 / 10, int(c) % 21 / 10] for c in cells]
    space = FiniteMetricSpace.from_embedding(emb)
    C = _cone(rng, m, cone)
    cbar = np.round(C.generators.mean(axis=0), 4)
    f = np.round(rng.uniform(-1.0, 1.0, size=(n, m)), 4)

    if gauge == "matrix":
        mat = np.round(rng.uniform(0.2, 1.5, size=(n, n)), 4)
        np.fill_diagonal(mat, 0.0)
        rho = MatrixGauge(mat)
    else:
        form, _, p = gauge.partition(":")
        if form == "metric_power":
            rho = MetricPower(float(p or 1))
        elif form == "norm_power":
            rho = NormPower(float(p or 1))
        else:
            raise ValueError(f"unknown gauge {gauge!r}")

    if N == "inf" or N is None:
        ratio = [0.5, 0.5, 0.9, 1.0][int(rng.integers(0, 4))]
        delta = DeltaSequence((round(float(rng.uniform(0.2, 1.0)), 4),), ratio)
    else:
        delta = DeltaSequence.finite([round(float(v), 4) for v in rng.uniform(0.2, 1.0, size=int(N))])
    eps_seq = EpsSequence((round(float(rng.uniform(0.2, 1.0)), 4),), 0.5)

    levels = [min_eps(f, x, C) for x in range(n)]
    x0 = int(rng.integers(0, n))
    if eps_policy == "tight":
        positive = [x for x in range(n) if levels[x] > 0]
        if positive:
            x0 = positive[int(rng.integers(0, len(positive)))]
        eps = levels[x0] if levels[x0] > 0 else 1.0
    elif eps_policy == "slack":
        eps = levels[x0] * 1.25 if levels[x0] > 0 else 1.0
    else:
        raise ValueError(f"unknown eps policy {eps_policy!r}")

    return VPProblem(
        space=space, gauge=rho, cone=C, cbar=cbar, f=f, x0=x0, eps=eps,
        eps_seq=eps_seq, delta_seq=delta, name=name or f"gen-{seed}",
    )
