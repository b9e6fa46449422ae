"""Evaluation of 2-forms, their wedge squares and products on oriented 4-frames.

4-forms are never materialised.  For 2-forms a, b and a frame (w1..w4):

    (a ^ b)(w1, w2, w3, w4) = a12 b34 - a13 b24 + a14 b23
                            + b12 a34 - b13 a24 + b14 a23

with aij = a(wi, wj).  In particular 1/2 (a ^ a) = Pf(a|V).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .frame import HolVolumeForm, TwoForm

TAU_FRAME = 1e-9


@dataclass(frozen=True, eq=False)
class Restricted2Form:
    """Pullback j*omega of a 2-form to an ordered 4-frame."""

    matrix: np.ndarray
    source: Optional[str] = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"restricted 2-form must be 4x4, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def sup_norm(self) -> float:
        return float(np.abs(self.matrix).max())

    def __getitem__(self, idx):
        return self.matrix[idx]


def _frame_of(V) -> np.ndarray:
    W = getattr(V, "frame", V)
    W = np.asarray(W, dtype=float)
    if W.shape != (8, 4):
        raise ValueError(f"expected an 8x4 frame, got {W.shape}")
    return W


def _checked_frame(V) -> np.ndarray:
    W = _frame_of(V)
    if not hasattr(V, "frame"):
        err = np.abs(W.T @ W - np.eye(4)).max()
        if err > TAU_FRAME:
            raise ValueError(f"frame is not orthonormal (Gram error {err:.3g})")
    return W


def restrict_matrix(coeffs: np.ndarray, W: np.ndarray) -> np.ndarray:
    m = W.T @ coeffs @ W
    return 0.5 * (m - m.T)


def restrict(form: TwoForm, V) -> Restricted2Form:
    """Entry (r, s) is omega(w_r, w_s) for the frame vectors of V."""
    W = _checked_frame(V)
    return Restricted2Form(restrict_matrix(form.coeffs, W), source=form.name)


def _as_matrix(M) -> np.ndarray:
    return np.asarray(getattr(M, "matrix", M), dtype=float)


def pfaffian4(M) -> float:
    m = _as_matrix(M)
    if m.shape != (4, 4):
        raise ValueError(f"pfaffian4 needs a 4x4 array, got {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m + m.T).max() > 1e-12 * scale:
        raise ValueError("pfaffian4 needs an antisymmetric array")
    return _pf(m)


def _pf(m: np.ndarray) -> float:
    return float(m[0, 1] * m[2, 3] - m[0, 2] * m[1, 3] + m[0, 3] * m[1, 2])


def wedge_pair_matrix(a: np.ndarray, b: np.ndarray) -> float:
    return float(
        a[0, 1] * b[2, 3] - a[0, 2] * b[1, 3] + a[0, 3] * b[1, 2]
        + b[0, 1] * a[2, 3] - b[0, 2] * a[1, 3] + b[0, 3] * a[1, 2]
    )


def eval_wedge_pair(alpha: TwoForm, beta: TwoForm, V) -> float:
    """(alpha ^ beta)(w1, w2, w3, w4) through the pairing expansion."""
    W = _checked_frame(V)
    return wedge_pair_matrix(restrict_matrix(alpha.coeffs, W), restrict_matrix(beta.coeffs, W))


def calibration_eval(Omega: HolVolumeForm, V) -> tuple[float, float]:
    """(Re Omega, Im Omega) on the oriented frame of V.

    Frames are orthonormal, so vol(V) = 1 and ``re`` compares directly with
    the calibration bound.
    """
    W = _checked_frame(V)
    b = restrict_matrix(Omega.omega_b.coeffs, W)
    c = restrict_matrix(Omega.omega_c.coeffs, W)
    return _pf(b) - _pf(c), wedge_pair_matrix(b, c)


def pfaffian_cofactor(m: np.ndarray) -> np.ndarray:
    """Antisymmetric C with dPf(M) = sum_{i<j} C_ij dM_ij."""
    return np.array(
        [
            [0.0, m[2, 3], -m[1, 3], m[1, 2]],
            [-m[2, 3], 0.0, m[0, 3], -m[0, 2]],
            [m[1, 3], -m[0, 3], 0.0, m[0, 1]],
            [-m[1, 2], m[0, 2], -m[0, 1], 0.0],
        ]
    )


def pfaffian_frame_gradient(coeffs: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Euclidean gradient of W -> Pf(W^T C W) with respect to the 8x4 frame."""
    C = 0.5 * (coeffs - coeffs.T)
    M = restrict_matrix(C, W)
    return -C @ W @ pfaffian_cofactor(M)
