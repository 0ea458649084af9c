"""Riemann curvature in a frame, the spinor curvature and the relation between them.

Both tensors are stored as ``X[..., p, q, i, j]`` for ``X^p_{qij}``.  Derivatives of
connection coefficients are nested finite differences; the outer stencil uses a
step ten times larger than the inner one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import christoffel_frame, spin_connection_general
from .frames import FrameField, frame_derivative, frame_metric_components, structure_constants
from .geometry import DEFAULT_SCHEME, DerivativeScheme, SpacetimeModel, invert_symmetric
from .spinor_algebra import SpinorAlgebraConstants, SpinorFrameData

OUTER_STEP_FACTOR = 10.0


@dataclass(frozen=True)
class CurvatureData:
    R: np.ndarray
    frak_R: np.ndarray
    frak_R_bar: np.ndarray


def _curvature_from(conn, L_conn, c):
    """``L_i X^p_jq - L_j X^p_iq + X^p_ih X^h_jq - X^p_jh X^h_iq - c^k_ij X^p_kq``.

    ``conn`` is indexed (..., p, i, q), ``L_conn`` (..., i, p, j, q).
    """
    deriv = np.einsum("...ipjq->...pqij", L_conn)
    quad = np.einsum("...pih,...hjq->...pqij", conn, conn)
    return (deriv - np.swapaxes(deriv, -1, -2) + quad - np.swapaxes(quad, -1, -2)
            - np.einsum("...kij,...pkq->...pqij", c, conn))


def _outer(scheme):
    return (scheme or DEFAULT_SCHEME).scaled(OUTER_STEP_FACTOR)


def riemann_frame(model: SpacetimeModel, frame: FrameField, x,
                  scheme: DerivativeScheme | None = None) -> np.ndarray:
    """Riemann tensor ``R^p_{qij}`` relative to ``frame``."""
    x = np.asarray(x, dtype=float)
    model.check(x)
    scheme = scheme or DEFAULT_SCHEME
    LG = frame_derivative(lambda y: christoffel_frame(model, frame, y, scheme),
                          frame, model, x, _outer(scheme))
    Gamma = christoffel_frame(model, frame, x, scheme)
    return _curvature_from(Gamma, LG, structure_constants(frame, model, x, scheme))


def spinor_curvature(model: SpacetimeModel, frame: FrameField, data: SpinorFrameData, x,
                     scheme: DerivativeScheme | None = None, conjugate: bool = False,
                     variant: str = "reduced") -> np.ndarray:
    """Curvature ``r^p_{qij}`` of the spinor connection, or of its conjugate if ``conjugate``."""
    x = np.asarray(x, dtype=float)
    model.check(x)
    scheme = scheme or DEFAULT_SCHEME
    post = np.conj if conjugate else (lambda a: a)

    def A(y):
        return post(spin_connection_general(model, frame, data, y, scheme, variant))

    LA = frame_derivative(A, frame, model, x, _outer(scheme))
    return _curvature_from(A(x), LA, structure_constants(frame, model, x, scheme))


def curvature_data(model: SpacetimeModel, frame: FrameField, data: SpinorFrameData, x,
                   scheme: DerivativeScheme | None = None) -> CurvatureData:
    return CurvatureData(riemann_frame(model, frame, x, scheme),
                         spinor_curvature(model, frame, data, x, scheme),
                         spinor_curvature(model, frame, data, x, scheme, conjugate=True))


def spinor_curvature_from_riemann(R, gamma, g_hi_frame) -> np.ndarray:
    """``1/4 sum R^r_{mij} gamma^alpha_{qn} g^mn gamma^p_{alpha r}``."""
    if isinstance(gamma, SpinorAlgebraConstants):
        gamma = gamma.gamma
    return 0.25 * np.einsum("...rmij,...mn,...naq,...rpa->...pqij", R, g_hi_frame, gamma, gamma)


def curvature_relation_residual(R, frak_R, consts, g_hi_frame) -> float:
    """Max deviation of the spinor curvature from its expression through ``R``.

    ``consts`` is a :class:`SpinorAlgebraConstants` (possibly batched) or a gamma array.
    """
    return float(np.abs(np.asarray(frak_R) - spinor_curvature_from_riemann(R, consts, g_hi_frame)).max())


def frame_inverse_metric(model: SpacetimeModel, frame: FrameField, x) -> np.ndarray:
    return invert_symmetric(frame_metric_components(model, frame, x))
