import numpy as np
import pytest
from hypothesis import given, strategies as st

from calibrax import (
    DegenerateFrameError,
    Subspace4,
    Triple,
    calibration_eval,
    classify,
    eval_wedge_pair,
    hol_volume,
    is_complex,
    is_lagrangian,
    is_symplectic_restriction,
    kahler_form,
    orthonormalize,
    random_subspace,
    restrict,
    sample_calibrated,
    sample_lagrangian,
    sample_special_lagrangian,
    symplectic_basis,
)
from calibrax.grassmann import (
    FIRST_CASE,
    LAGRANGIAN_B,
    LAGRANGIAN_C,
    SECOND_CASE,
    Tolerances,
    pairing_table,
    proof_case,
)
from calibrax.verifier import random_triple, split_pair_plane

from conftest import E, span

seeds = st.integers(0, 2**32 - 1)


def test_orthonormalize_examples():
    V = orthonormalize(span(0, 1, 4, 5))
    assert np.array_equal(V.frame, span(0, 1, 4, 5))
    assert orthonormalize(2 * span(0, 1, 4, 5)) == V
    with pytest.raises(DegenerateFrameError, match="rank 3"):
        orthonormalize(np.column_stack([E[0], E[1], E[2], E[0] + E[1]]))


@given(seeds)
def test_orthonormalize_keeps_span_and_orientation(seed):
    X = np.random.default_rng(seed).standard_normal((8, 4))
    W = orthonormalize(X).frame
    assert np.abs(W @ W.T @ X - X).max() <= 1e-10
    assert np.linalg.det(W.T @ X) > 0


def test_subspace_rejects_bad_frames():
    with pytest.raises(DegenerateFrameError):
        Subspace4(2 * span(0, 1, 2, 3))
    with pytest.raises(DegenerateFrameError):
        Subspace4(np.eye(8)[:, :3])


def test_random_subspace_is_deterministic_and_generic(H, TK):
    assert random_subspace(5) == random_subspace(5)
    Omega = hol_volume(H, TK)
    vals = [calibration_eval(Omega, random_subspace([9, i]))[0] for i in range(10_000)]
    assert np.mean(np.abs(vals)) < 1.0
    assert max(np.abs(vals)) < 1.0 - 1e-6


def test_predicate_examples(H):
    wI, wK = kahler_form(H, (1, 0, 0)), kahler_form(H, (0, 0, 1))
    assert is_lagrangian(Subspace4(span(0, 1, 4, 5)), wK)
    line = Subspace4(span(0, 1, 2, 3))
    assert is_symplectic_restriction(line, wI)
    assert abs(np.linalg.det(restrict(wI, line).matrix)) == pytest.approx(1.0)
    assert is_complex(Subspace4(span(0, 1, 4, 5)), H, (1, 0, 0))
    assert not is_complex(Subspace4(span(0, 2, 6, 4)), H, (1, 0, 0))


def test_classify_examples(H, TK):
    rep = classify(Subspace4(span(0, 1, 4, 5)), H, TK)
    assert rep.labels == {"axis": "lagrangian", "b": "symplectic", "c": "lagrangian"}
    assert rep.special_lagrangian and rep.case == FIRST_CASE and rep.label == LAGRANGIAN_C

    rep = classify(Subspace4(span(0, 2, 6, 4)), H, TK)
    assert rep.labels["axis"] == rep.labels["b"] == "lagrangian"
    assert rep.special_lagrangian and rep.label == LAGRANGIAN_B

    rep = classify(Subspace4(span(0, 1, 2, 3)), H, TK)
    assert set(rep.labels.values()) == {"symplectic"}
    assert not rep.special_lagrangian

    rep = classify(Subspace4(span(0, 1, 5, 4)), H, TK)
    assert rep.anti_calibrated and not rep.special_lagrangian


def test_proof_case_tags():
    assert proof_case({"b": "neither", "c": "neither"}) == SECOND_CASE
    assert proof_case({"b": "neither", "c": "lagrangian"}) == LAGRANGIAN_C


def test_lagrangian_sampler(H):
    Omega = hol_volume(H, Triple.preset("K"))
    wK = kahler_form(H, (0, 0, 1))
    assert sample_lagrangian(H, (0, 0, 1), 3) == sample_lagrangian(H, (0, 0, 1), 3)
    top = 0.0
    for i in range(1000):
        V = sample_lagrangian(H, (0, 0, 1), [4, i])
        assert restrict(wK, V).sup_norm() <= 1e-9
        re, im = calibration_eval(Omega, V)
        top = max(top, re * re + im * im)
    assert top <= 1 + 1e-8


def test_special_lagrangian_sampler(H, TK):
    for i in range(1000):
        V = sample_special_lagrangian(H, TK, [5, i])
        rep = classify(V, H, TK)
        assert rep.special_lagrangian
        assert rep.re == pytest.approx(1.0, abs=1e-10) and abs(rep.im) <= 1e-10
        assert rep.labels["c"] == "lagrangian"
        assert is_complex(V, H, TK.b)


@given(seeds)
def test_samplers_work_for_any_triple(H, seed):
    rng = np.random.default_rng(seed)
    T = random_triple(rng)
    assert classify(sample_special_lagrangian(H, T, rng), H, T).special_lagrangian
    assert classify(sample_calibrated(H, T, rng), H, T).special_lagrangian


def test_calibrated_sampler_is_mostly_not_bi_lagrangian(H, TK):
    """Generic calibrated planes: neither omega_b nor omega_c vanishes."""
    reps = [classify(sample_calibrated(H, TK, [6, i]), H, TK) for i in range(200)]
    assert all(r.special_lagrangian for r in reps)
    assert sum(r.label is None for r in reps) >= 190


@given(seeds)
def test_calibration_bound_on_lagrangian_planes(H, seed):
    V = sample_lagrangian(H, (0, 0, 1), seed)
    re, im = calibration_eval(hol_volume(H, Triple.preset("K")), V)
    assert re * re + im * im <= 1 + 1e-8


@given(seeds)
def test_wirtinger_bound(H, seed):
    rng = np.random.default_rng(seed)
    V = random_subspace(rng)
    for u in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        w = kahler_form(H, u)
        val = 0.5 * eval_wedge_pair(w, w, V)
        assert -1 - 1e-8 <= val <= 1 + 1e-8
        assert (abs(val - 1) <= 1e-8) == is_complex(V, H, u, 1e-4)


def test_wirtinger_equality_on_complex_planes(H, rng):
    for u in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        A = H.operator(u)
        w = kahler_form(H, u)
        for _ in range(20):
            v1 = rng.standard_normal(8)
            v2 = rng.standard_normal(8)
            V = orthonormalize(np.column_stack([v1, A @ v1, v2, A @ v2]))
            assert is_complex(V, H, u)
            assert 0.5 * eval_wedge_pair(w, w, V) == pytest.approx(1.0, abs=1e-10)


def test_symplectic_basis_rank4(H):
    wI = kahler_form(H, (1, 0, 0))
    sb = symplectic_basis(Subspace4(span(0, 1, 2, 3)), wI)
    assert sb.rank == 4
    canon = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], float)
    assert np.abs(pairing_table(wI, sb.frame.T) - canon).max() <= 1e-9


def test_symplectic_basis_rank0(H):
    assert symplectic_basis(Subspace4(span(0, 1, 4, 5)), kahler_form(H, (0, 0, 1))).rank == 0


def test_symplectic_basis_rank2_on_mixed_configuration(H, TK, rng):
    wI = kahler_form(H, (1, 0, 0))
    v1 = rng.standard_normal(8)
    V = split_pair_plane(H, TK, v1, rng)
    sb = symplectic_basis(V, wI, Tolerances(symp=1e-6))
    assert sb.rank == 2
    m = restrict(wI, V).matrix
    assert abs(np.linalg.det(m)) <= 1e-12
    # the symplectic 2-plane is span(v1, I v1), the first two frame vectors
    P = V.frame[:, :2] @ V.frame[:, :2].T
    assert np.abs(P @ sb.plane - sb.plane).max() <= 1e-9
    assert np.abs(sb.plane.T @ wI.coeffs @ sb.annihilator).max() <= 1e-9
