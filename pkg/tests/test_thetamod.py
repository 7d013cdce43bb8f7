import numpy as np
import pytest

from sigcy.arith import thetamod
from sigcy.arith.thetamod import (
    Characteristic,
    QExpansion,
    SiegelPoint,
    SymplecticMatrix,
    all_characteristics,
    ap_table,
    calibrate_assignment,
    eta_product_ap,
    gamma_generators,
    gamma_prime_generators,
    induced_sign_action,
    random_siegel_points,
    theta,
    translation_signs,
    truncation_radius,
    verify_hecke,
    verify_sign_action,
    verify_theta,
    verify_X_relations,
    verify_Y_relations,
    THETA_ASSIGNMENT,
)
from sigcy.errors import DimensionMismatch, PreconditionError, ThetaError
from sigcy.geometry.varieties import IDENTITY


@pytest.fixture(scope="module")
def points():
    return random_siegel_points(3, seed=11)


# ---------------------------------------------------------
# Characteristics and the series
# ---------------------------------------------------------

def test_characteristic_parity():
    chars = all_characteristics()
    assert len(chars) == 16
    assert sum(m.is_even for m in chars) == 10
    assert not Characteristic.parse("11/11").is_even
    assert Characteristic.parse("10/01").is_even
    assert Characteristic.parse("01/10").label == "01/10"
    with pytest.raises(PreconditionError):
        Characteristic((2, 0), (0, 0))


def test_siegel_point_validation():
    with pytest.raises(DimensionMismatch):
        SiegelPoint(np.eye(3) * 1j)
    with pytest.raises(PreconditionError):
        SiegelPoint(np.array([[1j, 0.5], [0.0, 1j]]))
    with pytest.raises(PreconditionError):
        SiegelPoint(np.diag([1j, -1j]))


def test_truncation_radius_grows_with_precision():
    assert truncation_radius(1.0, 1e-6) <= truncation_radius(1.0, 1e-14)
    assert truncation_radius(0.1, 1e-12) > truncation_radius(2.0, 1e-12)
    with pytest.raises(ThetaError):
        truncation_radius(1e-4, 1e-12)


def test_theta_tolerance_floor(points):
    with pytest.raises(PreconditionError):
        theta(Characteristic.parse("00/00"), points[0], tol=1e-16)


def test_odd_thetas_vanish(points):
    for m in all_characteristics():
        if not m.is_even:
            assert abs(theta(m, points[0])) < 1e-12


def test_diagonal_point_factorizes():
    # theta[00/00] of a diagonal Z is a product of two genus-1 thetas
    Z = SiegelPoint(np.diag([0.3 + 1.2j, -0.1 + 0.8j]))
    m = Characteristic.parse("00/00")
    z1 = SiegelPoint(np.diag([0.3 + 1.2j, 50j]))
    z2 = SiegelPoint(np.diag([50j, -0.1 + 0.8j]))
    assert theta(m, Z) == pytest.approx(theta(m, z1) * theta(m, z2), abs=1e-12)


# ---------------------------------------------------------
# Relations
# ---------------------------------------------------------

def test_x_relations_hold(points):
    for pt in points:
        assert verify_X_relations(pt).passed


def test_y_relations_hold(points):
    for pt in points:
        assert all(row.passed for row in verify_Y_relations(pt))


def test_assignment_is_recovered(points):
    assert THETA_ASSIGNMENT in calibrate_assignment(points)


# ---------------------------------------------------------
# Congruence subgroups and the sign action
# ---------------------------------------------------------

def test_generators_lie_in_their_groups():
    assert all(M.in_gamma() for M in gamma_generators())
    assert all(M.in_gamma_prime() for M in gamma_prime_generators())
    assert not SymplecticMatrix.translation(np.eye(2, dtype=np.int64)).in_gamma()


def test_symplectic_constructors():
    M = SymplecticMatrix.block_diagonal([[1, 2], [0, 1]])
    assert M.is_symplectic()
    assert (M @ SymplecticMatrix.identity()).entries == M.entries
    with pytest.raises(PreconditionError):
        SymplecticMatrix.block_diagonal([[2, 0], [0, 1]])
    with pytest.raises(DimensionMismatch):
        SymplecticMatrix(((1, 0), (0, 1)))


def test_translation_sign_closed_form(points):
    S = 2 * np.eye(2, dtype=np.int64)
    computed = induced_sign_action(SymplecticMatrix.translation(S), points[0])
    assert computed == translation_signs(S)
    assert computed.in_K()


def test_identity_acts_trivially(points):
    assert induced_sign_action(SymplecticMatrix.identity(), points[1]) == IDENTITY


def test_sign_action_needs_gamma(points):
    with pytest.raises(PreconditionError):
        induced_sign_action(SymplecticMatrix.translation(np.eye(2, dtype=np.int64)), points[0])


def test_sign_rows_fail_when_no_sign_is_computed(monkeypatch):
    monkeypatch.setattr(thetamod, "_sample_sign", lambda M, rng, attempts=8: None)
    rows = {row.check: row for row in verify_sign_action(4, np.random.default_rng(0))}
    assert rows["theta.sign.homomorphism"].failed
    assert rows["theta.sign.homomorphism"].computed == {"pairs": 0, "broken": []}
    assert rows["theta.gamma_prime.trivial"].failed
    assert rows["theta.gamma_prime.trivial"].computed["samples"] == 0


def test_unsampled_elements_are_redrawn(monkeypatch):
    real = thetamod._sample_sign
    calls = []

    def first_pair_fails(M, rng, attempts=8):
        # calls 1 and 2 are the identity and the translation
        calls.append(M)
        return None if len(calls) == 4 else real(M, rng, attempts)

    monkeypatch.setattr(thetamod, "_sample_sign", first_pair_fails)
    rows = {row.check: row for row in verify_sign_action(2, np.random.default_rng(5),
                                                         word_length=1)}
    assert rows["theta.sign.homomorphism"].computed["pairs"] == 2
    assert rows["theta.sign.homomorphism"].passed
    assert rows["theta.gamma_prime.trivial"].passed


# ---------------------------------------------------------
# Cusp form
# ---------------------------------------------------------

def test_cusp_form_coefficients():
    table = ap_table(13)
    assert table[2] == 0
    assert table[3] == -4
    assert table[5] == -2
    assert table[7] == 24
    f = eta_product_ap()
    assert f.coefficient(1) == 1
    assert f.coefficient(9) == -11


def test_q_expansion_guards():
    with pytest.raises(PreconditionError):
        eta_product_ap(50)
    with pytest.raises(PreconditionError):
        QExpansion.one(5).coefficient(6)


def test_euler_product_is_the_pentagonal_series():
    # prod (1 - q^n) = 1 - q - q^2 + q^5 + q^7 - q^12 - ...
    series = QExpansion.euler_product(1, 12)
    assert series.coefficients == (1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1)


def test_hecke_rows_pass():
    assert all(row.passed for row in verify_hecke())


def test_verify_theta_small_run():
    rows = verify_theta(samples=2, gamma_samples=2, seed=3)
    assert not any(row.failed for row in rows)
    names = {row.check for row in rows}
    assert {"theta.census", "theta.X_relations", "theta.sign.homomorphism",
            "cusp.a1"} <= names
