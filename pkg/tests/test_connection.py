import numpy as np
import pytest

from spinconn import (VARIANTS, InvalidParam, canonical_constants, christoffel_frame,
                      christoffel_holonomic, conjugate_connection, coordinate_frame, custom_frame,
                      frame_derivative, levi_civita, orthonormal_tetrad, random_gauge,
                      spin_connection_general, spin_connection_special, spinor_frame_data,
                      structure_constants, torsion_defect)

import oracles
from conftest import sample

ETA = np.diag([1.0, -1.0, -1.0, -1.0])


@pytest.fixture(scope="module")
def frozen():
    return oracles.load_frozen()


def test_flat_christoffels_vanish(flat):
    x = sample(flat, 10, 0)
    assert np.abs(christoffel_holonomic(flat, x)).max() < 1e-12
    assert np.abs(christoffel_frame(flat, orthonormal_tetrad(flat), x)).max() < 1e-12


def test_radial_acceleration_symbol(schw):
    G = christoffel_holonomic(schw, np.array([0.0, 2.0, np.pi / 2, 0.0]))
    assert G[1, 0, 0] == pytest.approx(1 / 16, abs=1e-6)


def test_coordinate_christoffels_match_closed_form(schw, frozen):
    x = np.array(frozen["point"])
    assert np.abs(christoffel_holonomic(schw, x) - frozen["christoffel_coordinate"]).max() < 1e-8
    pts = sample(schw, 20, 3)
    ours = christoffel_holonomic(schw, pts)
    ref = np.array([oracles.schwarzschild_christoffel(1.0, p) for p in pts])
    assert np.abs(ours - ref).max() < 1e-8


def test_holonomic_symmetry(schw, poly):
    for model in (schw, poly):
        G = christoffel_holonomic(model, sample(model, 100, 9))
        assert np.abs(G - np.swapaxes(G, -1, -2)).max() < 1e-8


def test_frame_formula_reduces_to_holonomic(schw, schw_coord):
    x = sample(schw, 10, 2)
    assert np.abs(christoffel_frame(schw, schw_coord, x) - christoffel_holonomic(schw, x)).max() < 1e-8


def test_tetrad_christoffels_match_transformed_oracle(schw, schw_tetrad, frozen):
    x = np.array(frozen["point"])
    assert np.abs(christoffel_frame(schw, schw_tetrad, x) - frozen["christoffel_tetrad"]).max() < 1e-8


def test_custom_frame_christoffels_match_transformation(poly):
    entries = [[[] for _ in range(4)] for _ in range(4)]
    for n in range(4):
        entries[n][n] = [[1.0, [0, 0, 0, 0]], [0.2, [0, 0, 0, 1] if n != 3 else [1, 0, 0, 0]]]
    entries[1][2] = [[0.3, [1, 0, 0, 0]]]
    F = custom_frame(entries)
    C = coordinate_frame(poly)
    x = sample(poly, 8, 6, shrink=0.2)
    E, Ei = F(x), F.inverse(x)
    dE = frame_derivative(F.components, C, poly, x)
    ref = (np.einsum("...km,...mab,...ai,...bj->...kij", Ei, christoffel_holonomic(poly, x), E, E)
           + np.einsum("...km,...ni,...nmj->...kij", Ei, E, dE))
    assert np.abs(christoffel_frame(poly, F, x) - ref).max() < 1e-8


def test_torsion_free_in_every_frame(schw, poly):
    for model in (schw, poly):
        for frame in (orthonormal_tetrad(model), coordinate_frame(model)):
            x = sample(model, 20, 4)
            G = christoffel_frame(model, frame, x)
            assert torsion_defect(G, structure_constants(frame, model, x)) < 1e-6


def test_torsion_detector():
    G = np.zeros((4, 4, 4))
    G[0, 1, 2], G[0, 2, 1] = 1e-3, -1e-3
    assert torsion_defect(G, np.zeros((4, 4, 4))) == pytest.approx(2e-3)


def test_special_formula_matches_commutator_oracle(schw, schw_tetrad, frozen):
    G = np.array(frozen["christoffel_tetrad"])
    A_ref = np.array(frozen["spin_connection_re"]) + 1j * np.array(frozen["spin_connection_im"])
    assert np.abs(spin_connection_special(G, canonical_constants(), ETA) - A_ref).max() < 1e-14


def test_special_formula_linear_and_zero():
    c = canonical_constants()
    rng = np.random.default_rng(0)
    G1, G2 = rng.normal(size=(2, 4, 4, 4))
    lhs = spin_connection_special(2.0 * G1 - 0.5 * G2, c, ETA)
    rhs = 2.0 * spin_connection_special(G1, c, ETA) - 0.5 * spin_connection_special(G2, c, ETA)
    assert np.abs(lhs - rhs).max() < 1e-12
    assert np.all(spin_connection_special(np.zeros((4, 4, 4)), c, ETA) == 0)
    with pytest.raises(InvalidParam):
        spin_connection_special(np.zeros((4, 4)), c, ETA)


@pytest.mark.parametrize("variant", VARIANTS)
def test_variants_vanish_in_flat_space(flat, variant):
    x = sample(flat, 5, 1)
    A = spin_connection_general(flat, coordinate_frame(flat), spinor_frame_data(), x, variant=variant)
    assert np.abs(A).max() < 1e-10


@pytest.mark.parametrize("variant", VARIANTS)
def test_variants_agree_with_special(schw, schw_tetrad, variant, frozen):
    x = np.array(frozen["point"])
    A_ref = np.array(frozen["spin_connection_re"]) + 1j * np.array(frozen["spin_connection_im"])
    A = spin_connection_general(schw, schw_tetrad, spinor_frame_data(), x, variant=variant)
    assert np.abs(A - A_ref).max() < 1e-6


@pytest.mark.parametrize("variant", VARIANTS)
def test_gauge_covariance(schw, schw_tetrad, variant):
    gauge = random_gauge(21, box=schw.box)
    x = sample(schw, 10, 7)
    G = christoffel_frame(schw, schw_tetrad, x)
    A0 = spin_connection_special(G, canonical_constants(), ETA)
    S, Si = gauge.S(x), gauge.S_inv(x)
    LS = frame_derivative(gauge.S, schw_tetrad, schw, x)
    expected = (np.einsum("...ac,...cid,...db->...aib", Si, A0, S)
                + np.einsum("...ac,...icb->...aib", Si, LS))
    A = spin_connection_general(schw, schw_tetrad, spinor_frame_data(gauge=gauge), x, variant=variant)
    assert np.abs(A - expected).max() < 1e-6


def test_unknown_variant(schw, schw_tetrad):
    with pytest.raises(InvalidParam):
        spin_connection_general(schw, schw_tetrad, spinor_frame_data(), np.array([0, 3.0, 1, 1]), variant="other")


def test_conjugation():
    A = np.zeros((4, 4, 4), dtype=complex)
    A[0, 1, 2] = 2.5j
    A[1, 1, 1] = 3.0
    Ab = conjugate_connection(A)
    assert Ab[0, 1, 2] == -2.5j and Ab[1, 1, 1] == 3.0
    assert np.array_equal(conjugate_connection(Ab), A)


def test_levi_civita_bundle(schw, schw_tetrad):
    conn = levi_civita(schw, schw_tetrad, spinor_frame_data(), np.array([0.0, 4.0, 1.0, 2.0]))
    assert np.array_equal(conn.A_bar, np.conj(conn.A))
    assert conn.Gamma.shape == (4, 4, 4) and conn.A.shape == (4, 4, 4)
