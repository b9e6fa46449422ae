"""Gradient ascent of Re(Omega) over the oriented Grassmannian Gr(4, 8).

Frames are points of the Stiefel manifold; the objective is invariant under
SO(4) acting on the frame, so gradients are projected onto the horizontal
space (orthogonal complement of the plane) and steps are retracted with an
orientation-preserving QR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exterior import _pf, pfaffian_frame_gradient, restrict_matrix
from .frame import HolVolumeForm
from .grassmann import Subspace4, _retract

FLAT = 1e-14


def objective(Omega: HolVolumeForm, W: np.ndarray) -> float:
    return _pf(restrict_matrix(Omega.omega_b.coeffs, W)) - _pf(restrict_matrix(Omega.omega_c.coeffs, W))


def euclidean_gradient(Omega: HolVolumeForm, W: np.ndarray) -> np.ndarray:
    return pfaffian_frame_gradient(Omega.omega_b.coeffs, W) - pfaffian_frame_gradient(
        Omega.omega_c.coeffs, W
    )


def horizontal_gradient(Omega: HolVolumeForm, W: np.ndarray) -> np.ndarray:
    G = euclidean_gradient(Omega, W)
    return G - W @ (W.T @ G)


@dataclass
class AscentResult:
    subspace: Subspace4
    value: float
    iterations: int
    grad_norm: float
    converged: bool
    escapes: int = 0
    probe_iterations: int = 0


@dataclass(frozen=True)
class AscentSettings:
    max_iters: int = 2000
    step: float = 1.0
    armijo: float = 0.3
    grad_tol: float = 1e-12
    min_step: float = 1e-14
    probes: int = 3
    probe_radius: float = 1e-3

    def as_dict(self) -> dict:
        return {
            "max_iters": self.max_iters,
            "step": self.step,
            "armijo": self.armijo,
            "grad_tol": self.grad_tol,
            "probes": self.probes,
            "probe_radius": self.probe_radius,
        }


def _ascend_once(Omega, W, settings: AscentSettings):
    f = objective(Omega, W)
    G = horizontal_gradient(Omega, W)
    gn = float(np.linalg.norm(G))
    for it in range(settings.max_iters):
        if gn <= settings.grad_tol:
            return W, f, it, gn, True
        t = settings.step
        while True:
            Wn = _retract(W + t * G)
            fn = objective(Omega, Wn)
            Gn = horizontal_gradient(Omega, Wn)
            gnn = float(np.linalg.norm(Gn))
            if fn >= f + settings.armijo * t * gn * gn:
                break
            # near a maximum the value is flat to rounding; progress shows in the gradient
            flat = FLAT * max(1.0, abs(f))
            if settings.armijo * t * gn * gn <= flat and fn >= f - flat and gnn < gn:
                break
            t *= 0.5
            if t < settings.min_step:
                return W, f, it, gn, True
        W, f, G, gn = Wn, fn, Gn, gnn
    return W, f, settings.max_iters, gn, False


def ascend(
    Omega: HolVolumeForm,
    start: Subspace4,
    rng: np.random.Generator,
    settings: AscentSettings = AscentSettings(),
) -> AscentResult:
    """Maximise Re(Omega) from ``start``.

    A stationary point is probed by small seeded horizontal perturbations;
    a probe that ascends higher replaces the point, which lets the search
    leave saddles such as the quaternionic lines (where the gradient is
    exactly zero).
    """
    W, f, its, gn, conv = _ascend_once(Omega, start.frame, settings)
    escapes = probe_its = 0
    for _ in range(settings.probes):
        if not conv:
            break
        xi = rng.standard_normal(W.shape)
        xi -= W @ (W.T @ xi)
        xi *= settings.probe_radius / np.linalg.norm(xi)
        Wp, fp, its_p, gn_p, conv_p = _ascend_once(Omega, _retract(W + xi), settings)
        if fp > f + 1e-10:
            W, f, gn, conv = Wp, fp, gn_p, conv_p
            its += its_p
            escapes += 1
        else:
            probe_its += its_p
            break
    return AscentResult(Subspace4(W), float(f), its, float(gn), conv, escapes, probe_its)
