import numpy as np
import pytest
from hypothesis import given, strategies as st

from calibrax import Triple, calibration_eval, eval_wedge_pair, hol_volume, kahler_form, pfaffian4, restrict
from calibrax.exterior import pfaffian_frame_gradient, restrict_matrix
from calibrax.frame import rotation_about, rotate_frame

from conftest import pfaffian_oracle, random_frame, span, wedge_oracle

seeds = st.integers(0, 2**32 - 1)


def test_restriction_examples(H):
    V = span(0, 1, 4, 5)
    assert np.array_equal(restrict(kahler_form(H, (0, 0, 1)), V).matrix, np.zeros((4, 4)))
    m = restrict(kahler_form(H, (1, 0, 0)), V).matrix
    expected = np.zeros((4, 4))
    expected[0, 1] = expected[2, 3] = 1.0
    expected[1, 0] = expected[3, 2] = -1.0
    assert np.array_equal(m, expected)


def test_restriction_follows_frame_permutation(H, rng):
    W = random_frame(rng)
    C = kahler_form(H, (0, 1, 0))
    p = [2, 0, 1, 3]
    assert np.allclose(restrict(C, W[:, p]).matrix, restrict(C, W).matrix[np.ix_(p, p)], atol=1e-15)


def test_restriction_rejects_non_orthonormal(H):
    with pytest.raises(ValueError, match="orthonormal"):
        restrict(kahler_form(H, (1, 0, 0)), 2 * span(0, 1, 4, 5))


def test_pfaffian_small_cases():
    m = np.zeros((4, 4))
    m[0, 1], m[1, 0], m[2, 3], m[3, 2] = 1, -1, 1, -1
    assert pfaffian4(m) == 1.0
    assert pfaffian4(np.zeros((4, 4))) == 0.0
    with pytest.raises(ValueError):
        pfaffian4(np.ones((4, 4)))


def test_pfaffian_squares_to_determinant(rng):
    for _ in range(100):
        a = rng.standard_normal((4, 4))
        m = a - a.T
        assert pfaffian4(m) ** 2 == pytest.approx(np.linalg.det(m), abs=1e-9)
        assert pfaffian4(m) == pytest.approx(pfaffian_oracle(m), abs=1e-12)


def test_wedge_pair_examples(H, TK, rng):
    wI = kahler_form(H, (1, 0, 0))
    wJ = kahler_form(H, (0, 1, 0))
    assert eval_wedge_pair(wI, wI, span(0, 1, 4, 5)) == pytest.approx(2.0, abs=1e-12)
    W = random_frame(rng)
    assert eval_wedge_pair(wI, wJ, W) == pytest.approx(eval_wedge_pair(wJ, wI, W), abs=1e-14)
    _, im = calibration_eval(hol_volume(H, TK), W)
    assert im == pytest.approx(eval_wedge_pair(wI, wJ, W), abs=1e-14)


@given(seeds)
def test_wedge_pair_matches_alternating_sum(H, seed):
    rng = np.random.default_rng(seed)
    W = random_frame(rng)
    a, b = (kahler_form(H, u) for u in ((1, 0, 0), (0, 0, 1)))
    vecs = list(W.T)
    assert eval_wedge_pair(a, b, W) == pytest.approx(wedge_oracle(a.coeffs, b.coeffs, vecs), abs=1e-12)


def test_calibration_examples(H, TK):
    Omega = hol_volume(H, TK)
    for cols, expected in (((0, 1, 4, 5), (1, 0)), ((0, 2, 6, 4), (1, 0)), ((0, 1, 2, 3), (0, 0))):
        re, im = calibration_eval(Omega, span(*cols))
        assert (re, im) == pytest.approx(expected, abs=1e-12)


@given(seeds)
def test_calibration_matches_complex_square(H, seed):
    """Re/Im of 1/2 (w_b + i w_c)^2 via complex-valued alternating sums."""
    rng = np.random.default_rng(seed)
    W = random_frame(rng)
    Omega = hol_volume(H, Triple.preset("K"))
    z = Omega.omega_b.coeffs + 1j * Omega.omega_c.coeffs
    val = 0.5 * wedge_oracle(z, z, list(W.T))
    re, im = calibration_eval(Omega, W)
    assert abs(re - val.real) <= 1e-9 and abs(im - val.imag) <= 1e-9


@given(seeds)
def test_basis_independence_and_orientation(H, seed):
    rng = np.random.default_rng(seed)
    W = random_frame(rng)
    Omega = hol_volume(H, Triple.preset("K"))
    re, im = calibration_eval(Omega, W)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    if np.linalg.det(Q) < 0:
        Q[:, 0] *= -1
    re2, im2 = calibration_eval(Omega, W @ Q)
    assert abs(re2 - re) <= 1e-10 and abs(im2 - im) <= 1e-10
    re3, im3 = calibration_eval(Omega, W[:, [1, 0, 2, 3]])
    assert abs(re3 + re) <= 1e-10 and abs(im3 + im) <= 1e-10


@pytest.mark.parametrize("theta", [np.pi / 6, np.pi / 4, np.pi / 2])
def test_phase_covariance(H, TK, theta):
    rng = np.random.default_rng(17)
    Om = hol_volume(H, TK)
    Rt = hol_volume(H, rotate_frame(TK, rotation_about(TK.axis, theta)))
    c, s = np.cos(2 * theta), np.sin(2 * theta)
    for _ in range(100):
        W = random_frame(rng)
        re, im = calibration_eval(Om, W)
        re2, im2 = calibration_eval(Rt, W)
        assert abs(re2 - (c * re + s * im)) <= 1e-9
        assert abs(im2 - (-s * re + c * im)) <= 1e-9


@given(seeds)
def test_pfaffian_gradient_matches_finite_differences(H, seed):
    rng = np.random.default_rng(seed)
    W = random_frame(rng)
    C = kahler_form(H, (0, 1, 0)).coeffs
    G = pfaffian_frame_gradient(C, W)
    D = rng.standard_normal(W.shape)
    h = 1e-6
    f = lambda X: pfaffian4(restrict_matrix(C, X))  # noqa: E731
    fd = (f(W + h * D) - f(W - h * D)) / (2 * h)
    assert abs(fd - np.sum(G * D)) <= 1e-7
