import numpy as np
import pytest

from calibrax.fibration import (
    FibrationError,
    build_fibration,
    check_fibers,
    covolume,
    lattice_index,
    rotated_fibration,
)
from calibrax.grassmann import LAGRANGIAN_B, LAGRANGIAN_C

from conftest import E


def gens(*cols):
    return np.column_stack(cols).astype(int)


STANDARD = gens(E[0], E[1], E[4], E[5])


def test_standard_fibration(TK):
    F = build_fibration(None, TK, STANDARD, 3)
    assert F.fibers == 81 and F.primitive and F.fiber_volume == 1.0
    assert F.report.special_lagrangian and F.report.label == LAGRANGIAN_C
    r = check_fibers(F)
    assert r.passed == r.attempted == 81
    assert r.stats["singular_fibers"] == 0


def test_grid_is_transverse(TK):
    F = build_fibration(None, TK, STANDARD, 2)
    assert np.abs(F.grid @ STANDARD).max() <= 1e-12
    assert len({tuple(np.round(t, 12)) for t in F.grid}) == 16


def test_rejections(TK):
    with pytest.raises(FibrationError, match="Lagrangian for omega_axis"):
        build_fibration(None, TK, gens(E[0], E[1], E[2], E[3]), 3)
    with pytest.raises(FibrationError, match="rank 3"):
        build_fibration(None, TK, gens(E[0], E[1], E[4], E[0] + E[1]), 3)
    with pytest.raises(FibrationError, match="integer"):
        build_fibration(None, TK, STANDARD * 0.5, 3)


def test_anti_calibrated_order_is_reoriented(TK):
    F = build_fibration(None, TK, gens(E[0], E[1], E[5], E[4]), 1)
    assert F.report.special_lagrangian
    assert np.array_equal(F.generators, STANDARD)


def test_fiber_volumes():
    assert covolume(STANDARD) == pytest.approx(1.0)
    assert covolume(gens(E[0] + E[1], E[0] - E[1], E[4], E[5])) == pytest.approx(2.0)


@pytest.mark.parametrize(
    "G, primitive_covolume, index",
    [
        (gens(E[0] + E[1], E[0] - E[1], E[4], E[5]), 1.0, 2),
        (gens(3 * E[0], 2 * E[1], E[4], E[5]), 1.0, 6),
        (gens(2 * (E[0] + E[2]), E[1] + E[3], E[4], E[5]), 2.0, 2),
    ],
)
def test_index_matches_volume_ratio(G, primitive_covolume, index):
    assert lattice_index(G) == index
    assert covolume(G) / primitive_covolume == pytest.approx(index)


def test_rotation_to_complex_tori(TK):
    F = build_fibration(None, TK, STANDARD, 3)
    r = rotated_fibration(F)
    assert r.passed == r.attempted == 81
    assert r.stats["rotation"] == "(K;I,J) -> (I;J,K)"
    assert r.stats["orientation"] == "complex"


def test_rotation_of_other_label(TK):
    F = build_fibration(None, TK, gens(E[0], E[2], E[6], E[4]), 2)
    assert F.report.label == LAGRANGIAN_B
    r = rotated_fibration(F)
    assert r.ok and r.attempted == 16
    assert r.stats["complex_axis"] == "c" and r.stats["orientation"] == "anti-complex"
    assert r.stats["rotation"] == "(K;I,J) -> (J;K,I)"


def test_empty_grid(TK):
    F = build_fibration(None, TK, STANDARD, 0)
    for r in (check_fibers(F), rotated_fibration(F)):
        assert r.attempted == r.passed == 0 and r.counterexample is None


def test_fiber_reports_identical(TK):
    from calibrax.fibration import fiber_tangent
    from calibrax import classify

    F = build_fibration(None, TK, STANDARD, 2)
    reps = [classify(fiber_tangent(F, t), F.frame_data, TK) for t in F.grid]
    assert all(r == reps[0] for r in reps)
