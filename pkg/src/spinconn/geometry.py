"""Charts, analytic metric fields and the directional derivative ``L_v``.

Every function here is batch-aware: a point is an array whose last axis has
length 4, and any leading axes are carried through unchanged.  A metric field
maps ``(..., 4) -> (..., 4, 4)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from .errors import DomainError, InvalidParam, SingularMetric, UnknownSpacetime
from .polynomial import Polynomial4, box_grid

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])

# multiplicative distance kept from the Schwarzschild horizon and polar axis
CHART_MARGIN = 1e-3


@dataclass(frozen=True)
class DerivativeScheme:
    """Central finite differences with optional one-level Richardson extrapolation.

    ``step`` is relative: the displacement along coordinate ``n`` never exceeds
    ``step * max(1, |x^n|)``.
    """

    step: float = 1e-5
    order: int = 4
    richardson: bool = True

    def __post_init__(self):
        if not self.step > 0:
            raise InvalidParam(f"step must be positive, got {self.step}")
        if self.order not in (2, 4):
            raise InvalidParam(f"order must be 2 or 4, got {self.order}")

    def scaled(self, factor: float) -> "DerivativeScheme":
        return replace(self, step=self.step * factor)


DEFAULT_SCHEME = DerivativeScheme()


@lru_cache(maxsize=None)
def _stencil(order: int, richardson: bool):
    """Offsets (in units of the base step) and weights of the first-derivative stencil."""
    if order == 2:
        base = {1.0: 0.5, -1.0: -0.5}
    else:
        base = {1.0: 8.0 / 12, -1.0: -8.0 / 12, 2.0: -1.0 / 12, -2.0: 1.0 / 12}
    if not richardson:
        items = sorted(base.items())
    else:
        gain = 2.0**order
        combo: dict[float, float] = {}
        for off, w in base.items():
            # D(t/2): offsets halved, weights doubled
            combo[off / 2] = combo.get(off / 2, 0.0) + gain * 2 * w / (gain - 1)
            combo[off] = combo.get(off, 0.0) - w / (gain - 1)
        items = sorted(combo.items())
    offsets = np.array([o for o, _ in items])
    weights = np.array([w for _, w in items])
    return offsets, weights


def stencil_reach(scheme: DerivativeScheme) -> float:
    """Largest stencil offset in units of the relative step."""
    offsets, _ = _stencil(scheme.order, scheme.richardson)
    return float(np.abs(offsets).max()) * scheme.step


def directional_derivative(f: Callable, v, x, scheme: DerivativeScheme | None = None,
                           guard: Callable | None = None):
    """Return ``sum_n v^n df/dx^n`` at ``x`` by central differences along ``v``.

    ``f`` must accept points with arbitrary leading axes and return an array (or a
    tuple of arrays) with those leading axes first.  ``x`` and ``v`` broadcast
    against each other.  If ``guard`` is given every stencil point is checked with
    it and :class:`DomainError` is raised on the first violation.
    """
    scheme = scheme or DEFAULT_SCHEME
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    x, v = np.broadcast_arrays(x, v)
    batch = x.shape[:-1]

    scale = np.maximum(1.0, np.abs(x))
    av = np.abs(v)
    with np.errstate(divide="ignore", over="ignore"):
        ratio = np.where(av > 0, scale / np.where(av > 0, av, 1.0), np.inf)
    t = scheme.step * ratio.min(axis=-1)
    t = np.where(np.isfinite(t), t, scheme.step)  # v == 0 gives an all-zero stencil

    offsets, weights = _stencil(scheme.order, scheme.richardson)
    shift = offsets.reshape((-1,) + (1,) * (len(batch) + 1)) * (t[..., None] * v)
    pts = x[None] + shift
    if guard is not None:
        check_domain(guard, pts)

    vals = f(pts)

    # antisymmetric weights: pair +o with -o so constants differentiate to exactly zero
    pos = np.flatnonzero(offsets > 0)
    neg = np.array([int(np.flatnonzero(offsets == -offsets[k])[0]) for k in pos])

    def combine(arr):
        arr = np.asarray(arr)
        out = np.tensordot(weights[pos], arr[pos] - arr[neg], axes=(0, 0))
        extra = out.ndim - len(batch)
        return out / t.reshape(batch + (1,) * extra)

    if isinstance(vals, tuple):
        return tuple(combine(a) for a in vals)
    return combine(vals)


def check_domain(guard: Callable, x) -> None:
    ok = np.asarray(guard(x), dtype=bool)
    if not ok.all():
        bad = np.asarray(x).reshape(-1, 4)[~ok.reshape(-1)][0]
        raise DomainError(f"point {bad.tolist()} outside chart domain", point=bad)


@dataclass(frozen=True, eq=False)
class SpacetimeModel:
    name: str
    params: Mapping
    metric: Callable
    domain_guard: Callable
    box: np.ndarray = field(repr=False)  # default sampling box, shape (4, 2)

    def __call__(self, x):
        return self.metric(x)

    def check(self, x) -> None:
        check_domain(self.domain_guard, x)


def _minkowski_metric(x):
    x = np.asarray(x, dtype=float)
    return np.broadcast_to(MINKOWSKI, x.shape[:-1] + (4, 4)).copy()


def _schwarzschild(r_s: float):
    def metric(x):
        x = np.asarray(x, dtype=float)
        r, theta = x[..., 1], x[..., 2]
        f = 1.0 - r_s / r
        g = np.zeros(x.shape[:-1] + (4, 4))
        g[..., 0, 0] = f
        g[..., 1, 1] = -1.0 / f
        g[..., 2, 2] = -(r**2)
        g[..., 3, 3] = -((r * np.sin(theta)) ** 2)
        return g

    def guard(x):
        x = np.asarray(x, dtype=float)
        return (x[..., 1] > r_s * (1 + CHART_MARGIN)) & (np.sin(x[..., 2]) > CHART_MARGIN)

    return metric, guard


def _diag_poly(polys, box):
    sign = np.array([1.0, -1.0, -1.0, -1.0])

    def metric(x):
        x = np.asarray(x, dtype=float)
        vals = np.stack([p(x) for p in polys], axis=-1)
        g = np.zeros(x.shape[:-1] + (4, 4))
        idx = np.arange(4)
        g[..., idx, idx] = sign * vals
        return g

    lo, hi = box[:, 0], box[:, 1]

    def guard(x):
        x = np.asarray(x, dtype=float)
        return np.all((x >= lo) & (x <= hi), axis=-1)

    return metric, guard


BUILTIN_SPACETIMES = ("minkowski", "schwarzschild", "diag_poly")

DEFAULT_DIAG_POLY = {
    "coeffs": [
        [[1.5, [0, 0, 0, 0]], [0.3, [0, 1, 0, 0]], [0.2, [0, 1, 1, 0]], [0.1, [0, 0, 0, 2]]],
        [[1.2, [0, 0, 0, 0]], [0.25, [1, 0, 0, 0]], [0.15, [0, 0, 2, 0]]],
        [[1.0, [0, 0, 0, 0]], [0.2, [1, 0, 0, 1]], [0.3, [0, 2, 0, 0]]],
        [[1.3, [0, 0, 0, 0]], [0.2, [0, 1, 1, 0]], [-0.1, [2, 0, 0, 0]]],
    ],
    "box": [[-1.0, 1.0]] * 4,
}


def make_builtin_spacetime(name: str, params: Mapping | None = None) -> SpacetimeModel:
    """Build one of the test-bed spacetimes ``minkowski``, ``schwarzschild``, ``diag_poly``.

    Schwarzschild uses coordinates ``(t, r, theta, phi)`` and needs ``r_s > 0``.
    ``diag_poly`` takes ``coeffs`` (four polynomials, see :mod:`spinconn.polynomial`)
    and ``box`` (4 x [lo, hi]); the metric is ``diag(f0, -f1, -f2, -f3)``.
    """
    params = dict(params or {})
    if name == "minkowski":
        box = np.array([[-1.0, 1.0]] * 4)
        return SpacetimeModel(name, params, _minkowski_metric,
                              lambda x: np.ones(np.shape(x)[:-1], dtype=bool), box)
    if name == "schwarzschild":
        r_s = float(params.get("r_s", params.get("rs", 1.0)))
        if not r_s > 0:
            raise InvalidParam(f"schwarzschild needs r_s > 0, got {r_s}")
        params = {"r_s": r_s}
        metric, guard = _schwarzschild(r_s)
        box = np.array([[-1.0, 1.0], [1.5 * r_s, 8.0 * r_s], [0.3, np.pi - 0.3], [0.0, 2 * np.pi]])
        return SpacetimeModel(name, params, metric, guard, box)
    if name == "diag_poly":
        if not params:
            params = {k: v for k, v in DEFAULT_DIAG_POLY.items()}
        if "coeffs" not in params or len(params["coeffs"]) != 4:
            raise InvalidParam("diag_poly needs four polynomial coefficient lists under 'coeffs'")
        box = np.asarray(params.get("box", DEFAULT_DIAG_POLY["box"]), dtype=float)
        if box.shape != (4, 2) or np.any(box[:, 0] >= box[:, 1]):
            raise InvalidParam(f"diag_poly box must be 4 x [lo, hi], got {box.tolist()}")
        polys = [Polynomial4.from_terms(c) for c in params["coeffs"]]
        grid = box_grid(box)
        for i, p in enumerate(polys):
            if p(grid).min() <= 0:
                raise InvalidParam(f"diag_poly coefficient f{i} is not positive on the box")
        params = {"coeffs": [p.to_terms() for p in polys], "box": box.tolist()}
        metric, guard = _diag_poly(polys, box)
        return SpacetimeModel(name, params, metric, guard, box)
    raise UnknownSpacetime(f"unknown spacetime {name!r}; expected one of {BUILTIN_SPACETIMES}")


def inverse_metric(model: SpacetimeModel, x) -> np.ndarray:
    """Pointwise inverse of ``model.metric``; raises :class:`SingularMetric` if inversion fails."""
    model.check(x)
    return invert_symmetric(model.metric(x))


def invert_symmetric(g) -> np.ndarray:
    g = np.asarray(g)
    try:
        inv = np.linalg.inv(g)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(str(exc)) from exc
    if not np.all(np.isfinite(inv)):
        raise SingularMetric("metric inverse is not finite")
    resid = np.abs(inv @ g - np.eye(4)).max(axis=(-2, -1))
    cond = np.abs(inv).max(axis=(-2, -1)) * np.abs(g).max(axis=(-2, -1))
    if np.any(resid > 1e-12 * np.maximum(1.0, cond)):
        raise SingularMetric("metric is numerically singular")
    return 0.5 * (inv + np.swapaxes(inv, -1, -2))


def metric_signature(g) -> np.ndarray:
    """Number of (positive, negative) eigenvalues, shape (..., 2)."""
    w = np.linalg.eigvalsh(np.asarray(g))
    return np.stack([(w > 0).sum(-1), (w < 0).sum(-1)], axis=-1)
