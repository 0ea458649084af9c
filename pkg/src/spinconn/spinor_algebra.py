"""Dirac-spinor algebra: canonical components, chirality projectors, decorated
tensors, gauge changes of the spinor frame and the chirality-derivative formula.

Index conventions (fixed throughout the package):

* ``d_lo[a, b] = d_ab``, ``d_hi[a, b] = d^ab`` with ``d_hi @ d_lo = 1``;
* ``H[a, b] = H^a_b`` and ``D[a, b] = D_{a bbar}``;
* ``gamma[k, a, b] = gamma^a_{b k}``, i.e. ``gamma[k]`` is the matrix ``gamma_k``
  with row index ``a`` and column index ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .errors import InconsistentAlgebra, NotInvolutive, SingularGauge
from .frames import FrameField, frame_derivative, frame_metric_components
from .geometry import DerivativeScheme, SpacetimeModel, invert_symmetric
from .polynomial import Polynomial4, box_grid

CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class SpinorAlgebraConstants:
    """Components of d, H, D and gamma in one spinor frame (possibly batched)."""

    d_lo: np.ndarray
    d_hi: np.ndarray
    H: np.ndarray
    D: np.ndarray
    gamma: np.ndarray

    @property
    def d_lo_bar(self):
        return np.conj(self.d_lo)

    @property
    def d_hi_bar(self):
        return np.conj(self.d_hi)

    @property
    def H_bar(self):
        return np.conj(self.H)

    @property
    def gamma_bar(self):
        return np.conj(self.gamma)

    def perturbed(self, k: int, a: int, b: int, delta: complex) -> "SpinorAlgebraConstants":
        """Copy with ``gamma[k, a, b]`` shifted by ``delta`` (defect injection)."""
        gamma = np.array(self.gamma, dtype=complex)
        gamma[..., k, a, b] += delta
        return replace(self, gamma=gamma)


def canonical_constants() -> SpinorAlgebraConstants:
    """The canonically orthonormal chiral frame normal forms of d, H, D and gamma."""
    d_lo = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=complex)
    H = np.diag([1, 1, -1, -1]).astype(complex)
    D = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex)
    i = 1j
    gamma = np.array([
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
        [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]],
        [[0, 0, 0, -i], [0, 0, i, 0], [0, i, 0, 0], [-i, 0, 0, 0]],
        [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]],
    ], dtype=complex)
    # d_lo is a signed permutation, so its inverse is exact
    d_hi = np.linalg.inv(d_lo)
    return SpinorAlgebraConstants(d_lo, d_hi, H, D, gamma)


def chirality_projectors(H):
    """``((1 + H)/2, (1 - H)/2)``; raises :class:`NotInvolutive` unless ``H @ H = 1``."""
    H = np.asarray(H)
    if np.abs(H @ H - np.eye(4)).max() > 1e-10:
        raise NotInvolutive("chirality operator does not square to the identity")
    eye = np.eye(4)
    return 0.5 * (eye + H), 0.5 * (eye - H)


def _check_close(a, b, what):
    scale = max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))
    if np.abs(a - b).max() > CONSISTENCY_TOL * scale:
        raise InconsistentAlgebra(f"{what}: double- and single-projection forms disagree")


def decorated_metric(d_lo, d_hi, H):
    """Chirality-projected spinor metrics ``(bullet_d_lo, bullet_d_hi, circ_d_lo, circ_d_hi)``.

    Computed by double projection and cross-checked against the single-projection
    forms, which agree only if d commutes with the projectors.
    """
    bul, circ = chirality_projectors(H)
    out = []
    for P, name in ((bul, "bullet"), (circ, "circ")):
        PT = np.swapaxes(P, -1, -2)
        lo = PT @ d_lo @ P
        hi = P @ d_hi @ PT
        _check_close(lo, d_lo @ P, f"{name} d_lo")
        _check_close(lo, PT @ d_lo, f"{name} d_lo")
        _check_close(hi, d_hi @ PT, f"{name} d_hi")
        _check_close(hi, P @ d_hi, f"{name} d_hi")
        out.append((lo, hi))
    (bl, bh), (cl, ch) = out
    return bl, bh, cl, ch


def decorated_gamma(gamma, H):
    """``(circbul_gamma, bulcirc_gamma)`` with ``circbul_gamma[m] = circH gamma_m bulletH``."""
    bul, circ = chirality_projectors(H)
    bul_k = bul[..., None, :, :]
    circ_k = circ[..., None, :, :]
    circbul = circ_k @ gamma @ bul_k
    bulcirc = bul_k @ gamma @ circ_k
    _check_close(circbul, gamma @ bul_k, "circbul gamma")
    _check_close(circbul, circ_k @ gamma, "circbul gamma")
    _check_close(bulcirc, gamma @ circ_k, "bulcirc gamma")
    _check_close(bulcirc, bul_k @ gamma, "bulcirc gamma")
    return circbul, bulcirc


def gamma_identity_sides(c: SpinorAlgebraConstants, g_frame):
    """Both sides of the gamma-gamma contraction identity, indexed ``[d, b, a, c]``."""
    g_hi = invert_symmetric(np.asarray(g_frame, dtype=float))
    gam = c.gamma
    lhs = np.einsum("...mdb,...mn,...nac->...dbac", gam, g_hi, gam)
    eye = np.eye(4)
    H, d_lo, d_hi = c.H, c.d_lo, c.d_hi
    rhs = (np.einsum("dc,ab->dbac", eye, eye)
           - np.einsum("...dc,...ab->...dbac", H, H)
           + np.einsum("...da,...bc->...dbac", d_hi, d_lo)
           - np.einsum("...dr,...ra,...bs,...sc->...dbac", H, d_hi, d_lo, H))
    return lhs, rhs


def check_gamma_identity(c: SpinorAlgebraConstants, g_frame) -> float:
    """Max residual of ``gamma_m g^mn gamma_n`` against its d/H expansion over all 256 index choices."""
    lhs, rhs = gamma_identity_sides(c, g_frame)
    return float(np.abs(lhs - rhs).max())


def commutation_residuals(c: SpinorAlgebraConstants) -> dict:
    """Residuals of the projector relations with d (commute) and gamma (swap chirality)."""
    bul, circ = chirality_projectors(c.H)
    tr = lambda P: np.swapaxes(P, -1, -2)
    k = lambda P: P[..., None, :, :]
    res = {}
    res["d_lo_commutes"] = max(np.abs(c.d_lo @ P - tr(P) @ c.d_lo).max() for P in (bul, circ))
    res["d_hi_commutes"] = max(np.abs(c.d_hi @ tr(P) - P @ c.d_hi).max() for P in (bul, circ))
    res["gamma_bullet"] = np.abs(c.gamma @ k(bul) - k(circ) @ c.gamma).max()
    res["gamma_circ"] = np.abs(c.gamma @ k(circ) - k(bul) @ c.gamma).max()
    return {k: float(v) for k, v in res.items()}


def chirality_split_residuals(c: SpinorAlgebraConstants) -> dict:
    """Residuals of the projector completeness relation and of the split gamma product.

    ``projector_completeness``: ``bullet @ bullet + circ @ circ - 1``.
    ``gamma_split_product``: ``circbul_n bulcirc_r + bulcirc_n circbul_r - gamma_n gamma_r``.
    """
    bul, circ = chirality_projectors(c.H)
    completeness = np.abs(bul @ bul + circ @ circ - np.eye(4)).max()
    circbul, bulcirc = decorated_gamma(c.gamma, c.H)
    split = (np.einsum("...nac,...rcb->...nrab", circbul, bulcirc)
             + np.einsum("...nac,...rcb->...nrab", bulcirc, circbul)
             - np.einsum("...nac,...rcb->...nrab", c.gamma, c.gamma))
    return {"projector_completeness": float(completeness), "gamma_split_product": float(np.abs(split).max())}


# ---------------------------------------------------------------------------
# gauge changes of the spinor frame
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaugeField:
    S: Callable  # (..., 4) -> (..., 4, 4) complex
    S_inv: Callable


def constant_gauge(S) -> GaugeField:
    S = np.asarray(S, dtype=complex)
    S_inv = np.linalg.inv(S)
    return GaugeField(
        lambda x: np.broadcast_to(S, np.shape(x)[:-1] + (4, 4)).copy(),
        lambda x: np.broadcast_to(S_inv, np.shape(x)[:-1] + (4, 4)).copy(),
    )


def random_gauge(seed: int, degree: int = 2, amplitude: float = 0.3, box=None,
                 n_generators: int = 4) -> GaugeField:
    """Smooth gauge ``S(x) = exp(sum_j f_j(x) B_j)`` with random polynomial ``f_j``.

    The polynomials are built in coordinates rescaled to ``[-1, 1]`` on ``box`` so
    their size stays of order ``amplitude`` there.
    """
    rng = np.random.default_rng(seed)
    box = np.asarray(box if box is not None else [[-1.0, 1.0]] * 4, dtype=float)
    centre = box.mean(axis=1)
    half = 0.5 * (box[:, 1] - box[:, 0])
    gens = rng.normal(size=(n_generators, 4, 4)) + 1j * rng.normal(size=(n_generators, 4, 4))
    gens /= np.linalg.norm(gens, axis=(1, 2), keepdims=True)
    exps = [e for e in np.ndindex(*(degree + 1,) * 4) if sum(e) <= degree]
    grid = box_grid([[-1.0, 1.0]] * 4, n=5)
    polys = []
    for _ in range(n_generators):
        terms = [[rng.normal(), list(e)] for e in exps]
        # unit peak on the box keeps |S| below exp(amplitude * n_generators)
        peak = np.abs(Polynomial4.from_terms(terms)(grid)).max()
        polys.append(Polynomial4.from_terms([[a / peak, e] for a, e in terms]))

    def generator(x):
        y = (np.asarray(x, dtype=float) - centre) / half
        coef = np.stack([amplitude * p(y) for p in polys], axis=-1)
        return np.einsum("...j,jab->...ab", coef, gens)

    return GaugeField(lambda x: expm(generator(x)), lambda x: expm(-generator(x)))


def apply_spinor_gauge(base: SpinorAlgebraConstants, gauge: GaugeField, x) -> SpinorAlgebraConstants:
    """Components in the spinor frame ``Psi'_a = sum_b S^b_a Psi_b`` at ``x``.

    The tangent frame is held fixed.
    """
    S = gauge.S(x)
    S_inv = gauge.S_inv(x)
    if np.abs(S @ S_inv - np.eye(4)).max() > 1e-10:
        raise SingularGauge("gauge matrix and its inverse disagree")
    ST = np.swapaxes(S, -1, -2)
    d_lo = ST @ base.d_lo @ S
    d_hi = S_inv @ base.d_hi @ np.swapaxes(S_inv, -1, -2)
    H = S_inv @ base.H @ S
    D = ST @ base.D @ np.conj(S)
    gamma = S_inv[..., None, :, :] @ base.gamma @ S[..., None, :, :]
    return SpinorAlgebraConstants(d_lo, d_hi, H, D, gamma)


# ---------------------------------------------------------------------------
# point-dependent spinor data
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpinorFrameData:
    """Point-dependent components of d, H, D, gamma relative to a tangent frame.

    ``components(x)`` returns a (batched) :class:`SpinorAlgebraConstants`.
    ``special`` is True when the components are constant, the setting where the
    derivative-free spin connection formula applies.
    """

    components: Callable
    special: bool = False

    def __call__(self, x) -> SpinorAlgebraConstants:
        return self.components(x)

    def field(self, name: str) -> Callable:
        return lambda x: getattr(self.components(x), name)


def _broadcast_consts(c: SpinorAlgebraConstants, batch) -> SpinorAlgebraConstants:
    # constants are unbatched; give them the batch axes of the query point
    return SpinorAlgebraConstants(*(
        np.broadcast_to(np.asarray(getattr(c, f.name), dtype=complex), batch + np.shape(getattr(c, f.name)))
        for f in fields(c)
    ))


def spinor_frame_data(consts: SpinorAlgebraConstants | None = None, *, model: SpacetimeModel | None = None,
                      frame: FrameField | None = None, tetrad: FrameField | None = None,
                      gauge: GaugeField | None = None) -> SpinorFrameData:
    """Spinor data relative to ``frame`` obtained from constant components attached to ``tetrad``.

    With ``frame`` omitted (or equal to ``tetrad``) the gamma components are the
    constant ones.  Otherwise ``gamma`` is re-expressed through the change of tangent
    frame ``Upsilon'_j = sum_i (E_t^-1 E_f)^i_j Upsilon_i``.  A gauge field, if given,
    then changes the spinor frame pointwise.
    """
    consts = consts or canonical_constants()
    reframe = frame is not None and frame is not tetrad
    if reframe and (model is None or tetrad is None):
        raise ValueError("re-expressing gamma in another frame needs model and tetrad")

    def components(x):
        x = np.asarray(x, dtype=float)
        c = _broadcast_consts(consts, x.shape[:-1])
        if reframe:
            T = tetrad.inverse(x) @ frame(x)
            c = replace(c, gamma=np.einsum("...ij,...iab->...jab", T, c.gamma))
        if gauge is not None:
            c = apply_spinor_gauge(c, gauge, x)
        return c

    return SpinorFrameData(components, special=not reframe and gauge is None)


def chirality_derivative(frame: FrameField, data: SpinorFrameData, model: SpacetimeModel, x,
                         scheme: DerivativeScheme | None = None, i: int | None = None):
    """``L_{Upsilon_i}(H^c_d)`` expressed through derivatives of d and gamma.

    Returns shape ``(..., 4, 4)`` for a single ``i`` or ``(..., 4(i), 4, 4)`` when
    ``i`` is None.
    """
    x = np.asarray(x, dtype=float)
    model.check(x)
    c = data(x)

    def pieces(y):
        cy = data(y)
        g_hi = invert_symmetric(frame_metric_components(model, frame, y))
        dd = np.einsum("...ca,...bd->...cabd", cy.d_hi, cy.d_lo)
        ggg = np.einsum("...ncb,...mn,...mad->...cbad", cy.gamma, g_hi, cy.gamma)
        return cy.d_lo, dd, ggg

    Ld, Ldd, Lggg = frame_derivative(pieces, frame, model, x, scheme)
    H, d_hi = c.H, c.d_hi
    out = (np.einsum("...cr,...ra,...iad->...icd", H, d_hi, Ld)
           - np.einsum("...cb,...ibs,...sd->...icd", d_hi, Ld, H)
           + np.einsum("...icabd,...ba->...icd", Ldd, H)
           - np.einsum("...icbad,...ba->...icd", Lggg, H)) / 6.0
    return out if i is None else out[..., i, :, :]
