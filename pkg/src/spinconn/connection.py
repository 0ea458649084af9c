"""Levi-Civita coefficients and the spinor components of the metric connection.

Storage layout: ``Gamma[..., k, i, j] = Gamma^k_{ij}`` and ``A[..., a, i, b] = A^a_{ib}``,
the derivative (frame) index ``i`` always in the middle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParam
from .frames import FrameField, coordinate_frame, frame_derivative, frame_metric_components
from .geometry import DEFAULT_SCHEME, DerivativeScheme, SpacetimeModel, invert_symmetric
from .spinor_algebra import (SpinorAlgebraConstants, SpinorFrameData, chirality_projectors,
                             decorated_gamma, decorated_metric)

VARIANTS = ("decorated", "projector", "reduced")


@dataclass(frozen=True)
class ConnectionCoefficients:
    Gamma: np.ndarray
    A: np.ndarray

    @property
    def A_bar(self) -> np.ndarray:
        return conjugate_connection(self.A)


def _levi_civita_from_frame_data(gf, Lg, c):
    gfi = invert_symmetric(gf)
    Gamma = 0.5 * (np.einsum("...kr,...irj->...kij", gfi, Lg)
                   + np.einsum("...kr,...jir->...kij", gfi, Lg)
                   - np.einsum("...kr,...rij->...kij", gfi, Lg))
    # c-terms carry the signs that make Gamma^k_ij - Gamma^k_ji = c^k_ij for the
    # bracket [U_i, U_j] = c^k_ij U_k, i.e. zero torsion
    Gamma = Gamma + 0.5 * c \
        - 0.5 * np.einsum("...sir,...kr,...sj->...kij", c, gfi, gf) \
        - 0.5 * np.einsum("...sjr,...kr,...si->...kij", c, gfi, gf)
    return Gamma


def christoffel_holonomic(model: SpacetimeModel, x, scheme: DerivativeScheme | None = None) -> np.ndarray:
    """Christoffel symbols of the coordinate frame from partial derivatives of the metric."""
    x = np.asarray(x, dtype=float)
    model.check(x)
    frame = coordinate_frame(model)
    dg = frame_derivative(model.metric, frame, model, x, scheme)
    return _levi_civita_from_frame_data(model.metric(x), dg, np.zeros(x.shape[:-1] + (4, 4, 4)))


def christoffel_frame(model: SpacetimeModel, frame: FrameField, x,
                      scheme: DerivativeScheme | None = None) -> np.ndarray:
    """Levi-Civita coefficients ``Gamma^k_ij`` relative to an arbitrary tangent frame."""
    x = np.asarray(x, dtype=float)
    model.check(x)
    scheme = scheme or DEFAULT_SCHEME

    def pieces(y):
        return frame(y), frame_metric_components(model, frame, y)

    dE, Lg = frame_derivative(pieces, frame, model, x, scheme)
    if frame.kind == "holonomic":
        c = np.zeros(x.shape[:-1] + (4, 4, 4))
    else:
        bracket = np.einsum("...imj->...mij", dE) - np.einsum("...jmi->...mij", dE)
        c = np.einsum("...km,...mij->...kij", frame.inverse(x), bracket)
        c = 0.5 * (c - np.swapaxes(c, -1, -2))
    return _levi_civita_from_frame_data(frame_metric_components(model, frame, x), Lg, c)


def spin_connection_special(Gamma, consts: SpinorAlgebraConstants, g_hi_frame) -> np.ndarray:
    """``A^a_ib = 1/4 sum Gamma^r_im gamma^alpha_bn g^mn gamma^a_alpha r``.

    Valid only where d and gamma have constant components.
    """
    Gamma = np.asarray(Gamma)
    if Gamma.shape[-3:] != (4, 4, 4):
        raise InvalidParam(f"Gamma must end in (4, 4, 4), got {Gamma.shape}")
    gam = consts.gamma
    return 0.25 * np.einsum("...rim,...mn,...rpz,...nzb->...pib", Gamma, g_hi_frame, gam, gam)


def _gamma_g_terms(gam, g_hi, Lgg, Gamma):
    """Terms shared by the bullet-free forms: derivative of gamma*g plus the Gamma term."""
    t_deriv = 0.25 * np.einsum("...nap,...inpb->...aib", gam, Lgg)
    t_gamma = 0.25 * np.einsum("...mpb,...nis,...ms,...nap->...aib", gam, Gamma, g_hi, gam)
    return t_deriv + t_gamma


def spin_connection_general(model: SpacetimeModel, frame: FrameField, data: SpinorFrameData, x,
                            scheme: DerivativeScheme | None = None, variant: str = "reduced",
                            Gamma=None) -> np.ndarray:
    """Spinor components ``A[..., a, i, b]`` of the Levi-Civita connection for any frames.

    ``variant`` selects the formula: ``decorated`` (chirality-decorated d and gamma),
    ``projector`` (projector derivatives) or ``reduced`` (bullet-free form).
    """
    if variant not in VARIANTS:
        raise InvalidParam(f"variant must be one of {VARIANTS}, got {variant!r}")
    x = np.asarray(x, dtype=float)
    model.check(x)
    scheme = scheme or DEFAULT_SCHEME
    if Gamma is None:
        Gamma = christoffel_frame(model, frame, x, scheme)
    c = data(x)
    g_hi = invert_symmetric(frame_metric_components(model, frame, x))

    if variant == "decorated":
        def decorated(y):
            cy = data(y)
            bl, _, cl, _ = decorated_metric(cy.d_lo, cy.d_hi, cy.H)
            circbul, bulcirc = decorated_gamma(cy.gamma, cy.H)
            return bl, cl, bulcirc, circbul

        L_bl, L_cl, L_bc, L_cb = frame_derivative(decorated, frame, model, x, scheme)
        bul, circ = chirality_projectors(c.H)
        _, bh, _, ch = decorated_metric(c.d_lo, c.d_hi, c.H)
        circbul, bulcirc = decorated_gamma(c.gamma, c.H)
        t1 = 0.25 * (np.einsum("...ipq,...qp,...ab->...aib", L_bl, bh, circ)
                     + np.einsum("...ipq,...qp,...ab->...aib", L_cl, ch, bul))
        t2 = 0.25 * (np.einsum("...impb,...mn,...nap->...aib", L_bc, g_hi, circbul)
                     + np.einsum("...impb,...mn,...nap->...aib", L_cb, g_hi, bulcirc))
        t3 = -0.25 * (np.einsum("...rim,...rpb,...mn,...nap->...aib", Gamma, bulcirc, g_hi, circbul)
                      + np.einsum("...rim,...rpb,...mn,...nap->...aib", Gamma, circbul, g_hi, bulcirc))
        return t1 + t2 + t3

    def plain(y):
        cy = data(y)
        gy = invert_symmetric(frame_metric_components(model, frame, y))
        gg = np.einsum("...mpb,...mn->...npb", cy.gamma, gy)
        if variant == "projector":
            bul, circ = chirality_projectors(cy.H)
            return cy.d_lo, bul, circ, gg
        return cy.d_lo, cy.H, gg

    derivs = frame_derivative(plain, frame, model, x, scheme)
    tail = _gamma_g_terms(c.gamma, g_hi, derivs[-1], Gamma)
    Ld = derivs[0]
    eye = np.eye(4)
    if variant == "projector":
        L_bul, L_circ = derivs[1], derivs[2]
        bul, circ = chirality_projectors(c.H)
        t1 = 0.25 * (np.einsum("...ipq,...qd,...pd,...ab->...aib", Ld, c.d_hi, bul, circ)
                     + np.einsum("...ipq,...qd,...pd,...ab->...aib", Ld, c.d_hi, circ, bul))
        t2 = 0.5 * (np.einsum("...bc,...icd,...dr,...ra->...aib", c.d_lo, L_bul, circ, c.d_hi)
                    + np.einsum("...bc,...icd,...dr,...ra->...aib", c.d_lo, L_circ, bul, c.d_hi))
        return t1 + t2 + tail

    LH = derivs[1]
    t1 = 0.125 * np.einsum("...ipq,...qp,ab->...aib", Ld, c.d_hi, eye)
    t2 = -0.125 * np.einsum("...ipq,...qd,...pd,...ab->...aib", Ld, c.d_hi, c.H, c.H)
    t3 = -0.25 * np.einsum("...bc,...icd,...dr,...ra->...aib", c.d_lo, LH, c.H, c.d_hi)
    return t1 + t2 + t3 + tail


def levi_civita(model: SpacetimeModel, frame: FrameField, data: SpinorFrameData, x,
                scheme: DerivativeScheme | None = None, variant: str = "reduced") -> ConnectionCoefficients:
    """Tangent and spinor components of the torsion-free metric connection at ``x``."""
    Gamma = christoffel_frame(model, frame, x, scheme)
    A = spin_connection_general(model, frame, data, x, scheme, variant, Gamma=Gamma)
    return ConnectionCoefficients(Gamma, A)


def conjugate_connection(A) -> np.ndarray:
    """Components for conjugate spinor indices: the entrywise complex conjugate."""
    return np.conj(A)


def torsion_defect(Gamma, c) -> float:
    """``max |Gamma^k_ij - Gamma^k_ji - c^k_ij|``: the torsion of ``Gamma`` in a frame with
    commutator coefficients ``c``."""
    Gamma = np.asarray(Gamma)
    return float(np.abs(Gamma - np.swapaxes(Gamma, -1, -2) - np.asarray(c)).max())
