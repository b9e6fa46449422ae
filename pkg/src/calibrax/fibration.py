"""Linear special Lagrangian torus fibrations of the flat torus R^8 / Z^8.

Fibers are the translates t + V0 of one rational calibrated 4-plane V0;
their closures are 4-tori.  The linear model has no singular fibers.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np
import scipy.linalg

from .frame import HyperkahlerFrame, Triple, rotate_frame, standard_frame
from .grassmann import (
    DEFAULT_TOL,
    LAGRANGIAN_B,
    LAGRANGIAN_C,
    CalibrationReport,
    Tolerances,
    classify,
    orthonormalize,
)
from .report import VerificationReport
from .trials import Outcome, summarize


class FibrationError(ValueError):
    pass


def _int_det(m: list) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * _int_det(minor)
    return total


def lattice_index(G: np.ndarray) -> int:
    """gcd of the 4x4 minors of an integer 8x4 matrix.

    Equals the index of the column lattice inside its saturation
    span_R(G) ∩ Z^8; 1 means the generators are primitive.
    """
    rows = [[int(x) for x in r] for r in G]
    minors = (abs(_int_det([rows[i] for i in idx])) for idx in itertools.combinations(range(8), 4))
    return reduce(math.gcd, minors, 0)


def covolume(G: np.ndarray) -> float:
    """Volume of the fundamental domain of the column lattice: sqrt(det G^T G)."""
    G = np.asarray(G, dtype=float)
    return float(np.sqrt(np.linalg.det(G.T @ G)))


def _failing_predicate(rep: CalibrationReport, tol: Tolerances) -> str:
    if rep.norms["axis"] > tol.lag:
        return f"not Lagrangian for omega_axis (|j*omega| = {rep.norms['axis']:.3g})"
    if abs(rep.im) > tol.lag:
        return f"Im(Omega) does not vanish ({rep.im:.3g})"
    return f"Re(Omega) = {rep.re:.6g} is below the calibration bound"


@dataclass(frozen=True, eq=False)
class FlatFibration:
    frame_data: HyperkahlerFrame
    triple: Triple
    generators: np.ndarray
    grid: np.ndarray = field(repr=False)
    index: int
    fiber_volume: float
    report: CalibrationReport

    @property
    def primitive(self) -> bool:
        return self.index == 1

    @property
    def fibers(self) -> int:
        return len(self.grid)


def build_fibration(
    H: Optional[HyperkahlerFrame],
    triple: Triple,
    generators,
    grid_size: int,
    tol: Tolerances = DEFAULT_TOL,
) -> FlatFibration:
    """Fibration by translates of span(generators) over a grid_size^4 base grid.

    The grid lives in the orthogonal complement of the fiber plane, which
    parametrises the transverse 4-torus.  Generators whose order gives the
    anti-calibrated orientation have their last two columns swapped.
    """
    H = standard_frame() if H is None else H
    G = np.asarray(generators)
    if G.shape != (8, 4):
        raise FibrationError(f"generators must be an 8x4 integer matrix, got shape {G.shape}")
    if not np.array_equal(G, np.round(G)):
        raise FibrationError("generators must be integer vectors")
    G = G.astype(np.int64)
    if np.linalg.matrix_rank(G.astype(float)) != 4:
        raise FibrationError(f"generators have rank {np.linalg.matrix_rank(G.astype(float))}, need 4")
    if grid_size < 0:
        raise FibrationError("grid size must be non-negative")
    V0 = orthonormalize(G)
    rep = classify(V0, H, triple, tol)
    if rep.anti_calibrated:
        # fibers are unoriented tori; take the calibrated orientation
        G = G[:, [0, 1, 3, 2]]
        V0 = orthonormalize(G)
        rep = classify(V0, H, triple, tol)
    if not rep.special_lagrangian:
        raise FibrationError("fiber direction is not special Lagrangian: " + _failing_predicate(rep, tol))
    N = scipy.linalg.null_space(V0.frame.T)
    ks = np.array(list(itertools.product(range(grid_size), repeat=4)), dtype=float).reshape(-1, 4)
    grid = (ks / max(grid_size, 1)) @ N.T
    return FlatFibration(H, triple, G, grid, lattice_index(G), covolume(G), rep)


def fiber_tangent(F: FlatFibration, t: np.ndarray):
    """Tangent frame of the fiber through t: derivative of s -> t + G s."""
    return orthonormalize(F.generators.astype(float))


def check_fibers(F: FlatFibration, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Recompute every fiber's classification and compare it with the base one."""
    t0 = time.perf_counter()
    outs = []
    for t in F.grid:
        V = fiber_tangent(F, t)
        rep = classify(V, F.frame_data, F.triple, tol)
        ok = rep.special_lagrangian and rep == F.report
        resid = max(rep.norms["axis"], abs(rep.im), abs(1.0 - rep.re))
        outs.append(Outcome(ok, resid, V.frame))
    stats = {
        "fiber_volume": F.fiber_volume,
        "lattice_index": F.index,
        "primitive": F.primitive,
        "singular_fibers": 0,
        "note": "linear model: all fibers are translates of one plane, no singular fibers occur",
    }
    return summarize("fibration.check", outs, 0, _params(F), t0, stats)


def _params(F: FlatFibration) -> dict:
    return {
        "triple": F.triple.name,
        "generators": F.generators.tolist(),
        "fibers": F.fibers,
    }


def rotated_fibration(F: FlatFibration, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Hyperkähler-rotate so every fiber becomes a complex 2-torus.

    LAGRANGIAN_c fibrations rotate to (b; c, axis) and must be A_b-complex
    with the Wirtinger value 1/2 omega_b^2 = 1; LAGRANGIAN_b fibrations
    rotate to (c; axis, b) and are A_c-complex with the opposite
    orientation (1/2 omega_c^2 = -1).  In both cases the fibers must be
    Lagrangian for the rotated holomorphic 2-form.
    """
    label = F.report.label
    if label == LAGRANGIAN_C:
        new, role, expected = F.triple.cycled(), "b", 1.0
    elif label == LAGRANGIAN_B:
        new, role, expected = Triple(F.triple.c, F.triple.axis, F.triple.b), "c", -1.0
    else:
        raise FibrationError(f"fibration has no single Lagrangian label ({label})")
    R = new.as_matrix() @ F.triple.as_matrix().T
    back_triple = rotate_frame(new, R.T)
    t0 = time.perf_counter()
    outs = []
    for t in F.grid:
        V = fiber_tangent(F, t)
        old = classify(V, F.frame_data, F.triple, tol)
        rep = classify(V, F.frame_data, new, tol)
        cx = old.complex_residuals[role]
        wirt = abs(old.pfaffians[role] - expected)
        lag = max(rep.norms["b"], rep.norms["c"])
        back = classify(V, F.frame_data, back_triple, tol)
        ok = cx <= tol.cx and wirt <= 1e-8 and lag <= tol.lag and back.labels == F.report.labels
        outs.append(Outcome(ok, float(max(cx, wirt, lag)), V.frame))
    stats = {
        "rotation": f"{F.triple.name} -> {new.name}",
        "complex_axis": role,
        "orientation": "complex" if expected > 0 else "anti-complex",
    }
    return summarize("fibration.rotate", outs, 0, {**_params(F), "rotated_triple": new.name}, t0, stats)
