"""Tangent frames, their structure constants and frame components of the metric.

A frame is stored as the matrix ``E`` of coordinate components, column ``i``
holding ``Upsilon_i = sum_n E[n, i] d/dx^n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateFrame, InvalidParam
from .geometry import DEFAULT_SCHEME, DerivativeScheme, SpacetimeModel, directional_derivative
from .polynomial import Polynomial4

FRAME_KINDS = ("holonomic", "tetrad", "custom")
PIVOT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FrameField:
    components: Callable  # (..., 4) -> (..., 4, 4), column i = Upsilon_i
    kind: str
    name: str = ""

    def __post_init__(self):
        if self.kind not in FRAME_KINDS:
            raise InvalidParam(f"frame kind must be one of {FRAME_KINDS}, got {self.kind!r}")

    def __call__(self, x):
        return self.components(x)

    def inverse(self, x):
        E = self.components(x)
        try:
            inv = np.linalg.inv(E)
        except np.linalg.LinAlgError as exc:
            raise DegenerateFrame(str(exc)) from exc
        if not np.all(np.isfinite(inv)):
            raise DegenerateFrame("frame matrix is not invertible")
        return inv


def coordinate_frame(model: SpacetimeModel | None = None) -> FrameField:
    """The holonomic frame ``d/dx^0, ..., d/dx^3``."""

    def components(x):
        shape = np.shape(x)[:-1]
        return np.broadcast_to(np.eye(4), shape + (4, 4)).copy()

    return FrameField(components, "holonomic", "coordinate")


def _gram_schmidt(g):
    """Orthonormalise the coordinate basis under ``g`` in the order 0, 1, 2, 3."""
    batch = g.shape[:-2]
    legs = []
    targets = (1.0, -1.0, -1.0, -1.0)
    for i in range(4):
        u = np.zeros(batch + (4,))
        u[..., i] = 1.0
        for w, s in zip(legs, targets):
            proj = np.einsum("...a,...ab,...b->...", u, g, w)
            u = u - (proj * s)[..., None] * w
        norm = np.einsum("...a,...ab,...b->...", u, g, u)
        if np.any(np.abs(norm) < PIVOT_TOL):
            raise DegenerateFrame(f"Gram-Schmidt pivot below {PIVOT_TOL} at leg {i}")
        if np.any(np.sign(norm) != targets[i]):
            kind = "timelike" if i == 0 else "spacelike"
            raise DegenerateFrame(f"coordinate direction {i} is not {kind}")
        legs.append(u / np.sqrt(np.abs(norm))[..., None])
    E = np.stack(legs, axis=-1)
    # future-pointing time leg, right-handed orientation
    flip0 = np.where(E[..., 0, 0] < 0, -1.0, 1.0)
    E[..., :, 0] *= flip0[..., None]
    flip3 = np.where(np.linalg.det(E) < 0, -1.0, 1.0)
    E[..., :, 3] *= flip3[..., None]
    return E


def orthonormal_tetrad(model: SpacetimeModel) -> FrameField:
    """Tetrad with frame metric ``diag(1, -1, -1, -1)``, ``E[0, 0] > 0`` and ``det E > 0``."""

    def components(x):
        return _gram_schmidt(model.metric(x))

    return FrameField(components, "tetrad", "tetrad")


def custom_frame(entries) -> FrameField:
    """Frame whose coordinate components are a 4x4 matrix of polynomials.

    ``entries[n][i]`` is the polynomial for ``E^n_i``.
    """
    if len(entries) != 4 or any(len(row) != 4 for row in entries):
        raise InvalidParam("custom frame needs a 4 x 4 matrix of polynomials")
    polys = [[Polynomial4.from_terms(e) for e in row] for row in entries]

    def components(x):
        x = np.asarray(x, dtype=float)
        return np.stack([np.stack([p(x) for p in row], axis=-1) for row in polys], axis=-2)

    return FrameField(components, "custom", "custom")


def frame_derivative(f: Callable, frame: FrameField, model: SpacetimeModel, x,
                     scheme: DerivativeScheme | None = None):
    """``L_{Upsilon_i} f`` for i = 0..3 stacked on a new axis right after the batch axes."""
    x = np.asarray(x, dtype=float)
    E = frame(x)
    outs = [directional_derivative(f, E[..., :, i], x, scheme, model.domain_guard) for i in range(4)]
    if isinstance(outs[0], tuple):
        nb = x.ndim - 1
        return tuple(np.stack([o[k] for o in outs], axis=nb) for k in range(len(outs[0])))
    return np.stack(outs, axis=x.ndim - 1)


def structure_constants(frame: FrameField, model: SpacetimeModel, x,
                        scheme: DerivativeScheme | None = None) -> np.ndarray:
    """Commutator coefficients ``c[k, i, j]`` with ``[Upsilon_i, Upsilon_j] = sum_k c^k_ij Upsilon_k``.

    Exactly antisymmetric in ``(i, j)``; exactly zero for holonomic frames.
    """
    x = np.asarray(x, dtype=float)
    model.check(x)
    if frame.kind == "holonomic":
        return np.zeros(x.shape[:-1] + (4, 4, 4))
    scheme = scheme or DEFAULT_SCHEME
    # dE[..., i, m, j] = L_{Upsilon_i} E^m_j
    dE = frame_derivative(frame.components, frame, model, x, scheme)
    bracket = np.einsum("...imj->...mij", dE) - np.einsum("...jmi->...mij", dE)
    c = np.einsum("...km,...mij->...kij", frame.inverse(x), bracket)
    return 0.5 * (c - np.swapaxes(c, -1, -2))


def frame_metric_components(model: SpacetimeModel, frame: FrameField, x) -> np.ndarray:
    """``E^T g E``: metric components in the frame, exactly symmetric."""
    x = np.asarray(x, dtype=float)
    E = frame(x)
    gf = np.einsum("...ni,...nm,...mj->...ij", E, model.metric(x), E)
    return 0.5 * (gf + np.swapaxes(gf, -1, -2))
