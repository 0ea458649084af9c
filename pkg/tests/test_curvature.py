import numpy as np
import pytest

from spinconn import (DerivativeScheme, coordinate_frame, curvature_data, curvature_relation_residual,
                      orthonormal_tetrad, random_gauge, riemann_frame, spinor_curvature,
                      spinor_frame_data)
from spinconn.curvature import frame_inverse_metric, spinor_curvature_from_riemann

import oracles
from conftest import sample

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def test_flat_curvatures_vanish(flat):
    x = sample(flat, 4, 0)
    data = spinor_frame_data()
    for frame in (coordinate_frame(flat), orthonormal_tetrad(flat)):
        assert np.abs(riemann_frame(flat, frame, x)).max() < 1e-8
        assert np.abs(spinor_curvature(flat, frame, data, x)).max() < 1e-8


def test_schwarzschild_tetrad_riemann_matches_closed_form(schw, schw_tetrad):
    frozen = oracles.load_frozen()
    R = riemann_frame(schw, schw_tetrad, np.array(frozen["point"]))
    assert np.abs(R - np.array(frozen["riemann_tetrad"])).max() < 1e-6


def test_kretschmann_scalar(schw, schw_tetrad):
    x = sample(schw, 10, 1)
    R = riemann_frame(schw, schw_tetrad, x)
    low = np.einsum("pa,...aqij->...pqij", ETA, R)
    K = np.einsum("...pqij,pa,qb,ic,jd,...abcd->...", low, ETA, ETA, ETA, ETA, low)
    ref = oracles.kretschmann(1.0, x[:, 1])
    assert np.abs(K / ref - 1).max() < 1e-5


def test_antisymmetry(schw, schw_tetrad):
    x = sample(schw, 10, 2)
    R = riemann_frame(schw, schw_tetrad, x)
    assert np.abs(R + np.swapaxes(R, -1, -2)).max() < 1e-5
    r = spinor_curvature(schw, schw_tetrad, spinor_frame_data(), x)
    assert np.abs(r + np.swapaxes(r, -1, -2)).max() < 1e-6


def test_step_refinement_oracle(schw, schw_tetrad):
    x = np.array([[0.0, 2.0, 1.2, 0.3], [0.0, 5.0, 1.2, 0.3]])
    R1 = riemann_frame(schw, schw_tetrad, x)
    R2 = riemann_frame(schw, schw_tetrad, x, DerivativeScheme(step=0.5e-5))
    assert np.abs(R1 - R2).max() < 1e-5


@pytest.mark.parametrize("frame_kind", ["tetrad", "coordinate"])
def test_relation_to_riemann(schw, poly, frame_kind):
    for model in (schw, poly):
        E = orthonormal_tetrad(model)
        frame = E if frame_kind == "tetrad" else coordinate_frame(model)
        data = spinor_frame_data(model=model, frame=None if frame is E else frame, tetrad=E)
        x = sample(model, 10, 3)
        cd = curvature_data(model, frame, data, x)
        res = curvature_relation_residual(cd.R, cd.frak_R, data(x), frame_inverse_metric(model, frame, x))
        assert res < 1e-5


def test_gauged_spinor_curvature_is_homogeneous(schw, schw_tetrad):
    gauge = random_gauge(9, box=schw.box)
    x = sample(schw, 6, 4)
    r0 = spinor_curvature(schw, schw_tetrad, spinor_frame_data(), x)
    r1 = spinor_curvature(schw, schw_tetrad, spinor_frame_data(gauge=gauge), x)
    expected = np.einsum("...ac,...cdij,...db->...abij", gauge.S_inv(x), r0, gauge.S(x))
    assert np.abs(r1 - expected).max() < 1e-5


def test_conjugate_curvature(schw, schw_tetrad):
    data = spinor_frame_data(gauge=random_gauge(3, box=schw.box))
    x = sample(schw, 3, 5)
    r = spinor_curvature(schw, schw_tetrad, data, x)
    rb = spinor_curvature(schw, schw_tetrad, data, x, conjugate=True)
    assert np.abs(rb - np.conj(r)).max() < 1e-10


def test_relation_detects_perturbation(schw, schw_tetrad):
    x = np.array([0.0, 3.0, 1.0, 0.5])
    data = spinor_frame_data()
    R = riemann_frame(schw, schw_tetrad, x)
    r = spinor_curvature(schw, schw_tetrad, data, x)
    base = curvature_relation_residual(R, r, data(x), ETA)
    R2 = R.copy()
    R2[0, 1, 0, 1] += 1e-3
    assert curvature_relation_residual(R2, r, data(x), ETA) - base >= 1e-4


def test_relation_accepts_plain_gamma(schw, schw_tetrad):
    x = np.array([0.0, 3.0, 1.0, 0.5])
    c = spinor_frame_data()(x)
    R = riemann_frame(schw, schw_tetrad, x)
    assert np.array_equal(spinor_curvature_from_riemann(R, c, ETA), spinor_curvature_from_riemann(R, c.gamma, ETA))
