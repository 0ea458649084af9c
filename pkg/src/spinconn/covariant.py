"""Mixed spin-tensor fields, the conjugation involution and the covariant derivative.

Component arrays order their indices in groups: upper spinor, lower spinor, upper
conjugate, lower conjugate, upper spacial, lower spacial.  Batch axes of the query
point come first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .connection import ConnectionCoefficients, levi_civita
from .errors import InvalidParam
from .frames import FrameField, frame_derivative, frame_metric_components
from .geometry import DerivativeScheme, SpacetimeModel
from .spinor_algebra import SpinorFrameData

MAX_RANK = 6
_GROUPS = ("r", "s", "rb", "sb", "p", "q")


@dataclass(frozen=True)
class SpinTensorType:
    """Index counts ``(r, s | rb, sb | p, q)``."""

    r: int = 0
    s: int = 0
    rb: int = 0
    sb: int = 0
    p: int = 0
    q: int = 0

    def __post_init__(self):
        counts = [getattr(self, g) for g in _GROUPS]
        if any(not isinstance(n, (int, np.integer)) or n < 0 for n in counts):
            raise InvalidParam(f"index counts must be non-negative integers, got {counts}")
        if sum(counts) > MAX_RANK:
            raise InvalidParam(f"total rank {sum(counts)} exceeds the cap {MAX_RANK}")

    @property
    def rank(self) -> int:
        return sum(getattr(self, g) for g in _GROUPS)

    @property
    def shape(self) -> tuple:
        return (4,) * self.rank

    def kinds(self) -> list[str]:
        """Kind of every axis, in storage order."""
        return [g for g in _GROUPS for _ in range(getattr(self, g))]

    def conjugate(self) -> "SpinTensorType":
        return SpinTensorType(self.rb, self.sb, self.r, self.s, self.p, self.q)

    def __str__(self):
        return f"({self.r},{self.s}|{self.rb},{self.sb}|{self.p},{self.q})"


@dataclass(frozen=True, eq=False)
class SpinTensorField:
    type: SpinTensorType
    components: Callable  # (..., 4) -> (..., *type.shape)
    name: str = field(default="")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.components(x))
        expected = x.shape[:-1] + self.type.shape
        if out.shape != expected:
            raise InvalidParam(f"field {self.name or '?'} of type {self.type} returned shape "
                               f"{out.shape}, expected {expected}")
        return out


def _tau_permutation(t: SpinTensorType) -> list[int]:
    spin = t.r + t.s
    conj = t.rb + t.sb
    return (list(range(spin, spin + conj)) + list(range(spin))
            + list(range(spin + conj, t.rank)))


def tau_array(arr, t: SpinTensorType, lead: int = 0) -> np.ndarray:
    """Apply the involution to component array ``arr`` of type ``t``.

    The last ``t.rank`` axes are the tensor indices; ``lead`` further axes just before
    them (e.g. a derivative index) are left in place along with the batch axes.
    """
    arr = np.asarray(arr)
    head = arr.ndim - t.rank
    if head < lead:
        raise InvalidParam("array has fewer axes than the type requires")
    perm = list(range(head)) + [head + k for k in _tau_permutation(t)]
    return np.conj(np.transpose(arr, perm))


def tau(f: SpinTensorField) -> SpinTensorField:
    """Exchange the spinor and conjugate-spinor index groups, conjugating components."""
    t = f.type
    return SpinTensorField(t.conjugate(), lambda x: tau_array(f(x), t), f"tau({f.name})")


_LETTERS = "abcdefgh"


def _contract(T, M, pos, rank, upper):
    """``sum_z M[..., i, new, z] T[..., z@pos]`` (upper) or ``M[..., i, z, new]`` (lower)."""
    t_idx = list(_LETTERS[:rank])
    new = t_idx[pos]
    t_in = t_idx.copy()
    t_in[pos] = "z"
    m_idx = f"i{new}z" if upper else f"iz{new}"
    return np.einsum(f"...{m_idx},...{''.join(t_in)}->...i{''.join(t_idx)}", M, T)


def covariant_derivative(f: SpinTensorField, model: SpacetimeModel, frame: FrameField,
                         data: SpinorFrameData, x, scheme: DerivativeScheme | None = None,
                         connection: ConnectionCoefficients | None = None) -> np.ndarray:
    """``nabla_i T`` with the new index ``i`` placed right after the batch axes.

    ``connection`` may carry precomputed coefficients at ``x``; by default the
    Levi-Civita connection (bullet-free spinor formula) is evaluated.
    """
    x = np.asarray(x, dtype=float)
    model.check(x)
    if connection is None:
        connection = levi_civita(model, frame, data, x, scheme, variant="reduced")
    T = f(x).astype(complex)
    out = frame_derivative(f, frame, model, x, scheme).astype(complex)
    # connection matrices indexed (..., i, row, col)
    A = np.moveaxis(connection.A, -2, -3)
    Abar = np.conj(A)
    G = np.moveaxis(connection.Gamma, -2, -3)
    mats = {"r": (A, True, 1), "s": (A, False, -1), "rb": (Abar, True, 1),
            "sb": (Abar, False, -1), "p": (G, True, 1), "q": (G, False, -1)}
    rank = f.type.rank
    for pos, kind in enumerate(f.type.kinds()):
        M, upper, sign = mats[kind]
        out = out + sign * _contract(T, M, pos, rank, upper)
    return out


# ---------------------------------------------------------------------------
# basic fields
# ---------------------------------------------------------------------------


def metric_field(model: SpacetimeModel, frame: FrameField) -> SpinTensorField:
    return SpinTensorField(SpinTensorType(q=2),
                           lambda x: frame_metric_components(model, frame, x).astype(complex), "g")


def basic_fields(model: SpacetimeModel, frame: FrameField, data: SpinorFrameData) -> dict:
    """The metric, d, H, D, gamma and the conjugates of d, H, gamma as fields.

    ``gamma`` carries axes (spinor up, spinor down, spacial).
    """
    def gamma(x):
        return np.moveaxis(data(x).gamma, -3, -1)

    fields_ = {
        "g": metric_field(model, frame),
        "d": SpinTensorField(SpinTensorType(s=2), data.field("d_lo"), "d"),
        "H": SpinTensorField(SpinTensorType(r=1, s=1), data.field("H"), "H"),
        "D": SpinTensorField(SpinTensorType(s=1, sb=1), data.field("D"), "D"),
        "gamma": SpinTensorField(SpinTensorType(r=1, s=1, q=1), gamma, "gamma"),
    }
    for key in ("d", "H", "gamma"):
        bar = tau(fields_[key])
        fields_[key + "_bar"] = SpinTensorField(bar.type, bar.components, key + "_bar")
    return fields_


def random_field(t: SpinTensorType, seed: int, degree: int = 2, box=None) -> SpinTensorField:
    """Smooth complex polynomial field of type ``t`` with seeded coefficients."""
    rng = np.random.default_rng(seed)
    box = np.asarray(box if box is not None else [[-1.0, 1.0]] * 4, dtype=float)
    centre = box.mean(axis=1)
    half = 0.5 * (box[:, 1] - box[:, 0])
    exps = np.array([e for e in np.ndindex(*(degree + 1,) * 4) if sum(e) <= degree])
    coef = rng.normal(size=(len(exps),) + t.shape) + 1j * rng.normal(size=(len(exps),) + t.shape)

    def components(x):
        y = (np.asarray(x, dtype=float) - centre) / half
        mono = np.prod(y[..., None, :] ** exps, axis=-1)
        return np.tensordot(mono, coef, axes=(-1, 0))

    return SpinTensorField(t, components, f"random{t}")


# ---------------------------------------------------------------------------
# metricity
# ---------------------------------------------------------------------------

METRICITY_FIELDS = ("g", "d", "gamma", "H", "D", "d_bar", "H_bar", "gamma_bar")


@dataclass(frozen=True)
class MetricityReport:
    residuals: dict  # name -> max |nabla T| over points
    worst_points: dict  # name -> point where the maximum occurs
    reality_defect: float

    def max_residual(self) -> float:
        return max(max(self.residuals.values()), self.reality_defect)


def _per_point_max(arr, nb):
    arr = np.abs(arr)
    return arr.reshape(arr.shape[:nb] + (-1,)).max(axis=-1)


def metricity_report(model: SpacetimeModel, frame: FrameField, data: SpinorFrameData, points,
                     scheme: DerivativeScheme | None = None, seed: int = 0,
                     test_type: SpinTensorType = SpinTensorType(r=1, sb=1, q=1)) -> MetricityReport:
    """Residuals of nabla on the basic fields, and of ``tau nabla - nabla tau`` on a random field."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    model.check(pts)
    conn = levi_civita(model, frame, data, pts, scheme, variant="reduced")
    residuals, worst = {}, {}
    fields_ = basic_fields(model, frame, data)
    for name in METRICITY_FIELDS:
        per = _per_point_max(covariant_derivative(fields_[name], model, frame, data, pts, scheme, conn), 1)
        k = int(np.argmax(per))
        residuals[name] = float(per[k])
        worst[name] = pts[k].tolist()
    T = random_field(test_type, seed, box=model.box)
    lhs = tau_array(covariant_derivative(T, model, frame, data, pts, scheme, conn), test_type, lead=1)
    rhs = covariant_derivative(tau(T), model, frame, data, pts, scheme, conn)
    reality = float(np.abs(lhs - rhs).max())
    return MetricityReport(residuals, worst, reality)
