"""Oriented 4-planes in R^8, pointwise predicates and constrained samplers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.stats import unitary_group

from .exterior import TAU_FRAME, _pf, restrict_matrix, wedge_pair_matrix
from .frame import HyperkahlerFrame, TwoForm, Triple

SeedLike = Union[int, tuple, list, np.random.Generator]

ROLES = ("axis", "b", "c")

FIRST_CASE = "FIRST_CASE"
SECOND_CASE = "SECOND_CASE"
LAGRANGIAN_B = "LAGRANGIAN_b"
LAGRANGIAN_C = "LAGRANGIAN_c"
OTHER = "OTHER"

MAX_REDRAWS = 100
COLLAPSE = 1e-6


class DegenerateFrameError(ValueError):
    pass


class SamplerError(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerances:
    lag: float = 1e-9
    symp: float = 1e-6
    cal: float = 1e-8
    cx: float = 1e-9

    def __post_init__(self):
        for name in ("lag", "symp", "cal", "cx"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name} must be positive")

    def as_dict(self) -> dict:
        return {"lag": self.lag, "symp": self.symp, "cal": self.cal, "cx": self.cx}


DEFAULT_TOL = Tolerances()


def as_rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class Subspace4:
    """Oriented 4-plane given by an ordered orthonormal frame (8x4, columns)."""

    frame: np.ndarray

    def __post_init__(self):
        W = np.array(self.frame, dtype=float)
        if W.shape != (8, 4):
            raise DegenerateFrameError(f"frame must be 8x4, got {W.shape}")
        err = np.abs(W.T @ W - np.eye(4)).max()
        if not err <= TAU_FRAME:
            raise DegenerateFrameError(f"frame is not orthonormal (Gram error {err:.3g})")
        W.setflags(write=False)
        object.__setattr__(self, "frame", W)

    def __eq__(self, other):
        return isinstance(other, Subspace4) and np.array_equal(self.frame, other.frame)

    __hash__ = None

    @property
    def vectors(self) -> list[np.ndarray]:
        return [self.frame[:, k] for k in range(4)]

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.T

    def reversed(self) -> "Subspace4":
        """Same plane, opposite orientation (last two frame vectors swapped)."""
        return Subspace4(self.frame[:, [0, 1, 3, 2]])

    def transformed(self, U: np.ndarray) -> "Subspace4":
        """Image under an orthogonal map."""
        return Subspace4(U @ self.frame)


def orthonormalize(raw) -> Subspace4:
    """Orientation-preserving Gram-Schmidt of four columns."""
    X = np.asarray(raw, dtype=float)
    if X.shape != (8, 4):
        raise DegenerateFrameError(f"expected 8x4 columns, got {X.shape}")
    s = np.linalg.svd(X, compute_uv=False)
    if s[-1] == 0 or s[0] / s[-1] > 1e8:
        rank = int(np.sum(s > s[0] * 1e-8)) if s[0] > 0 else 0
        raise DegenerateFrameError(
            f"columns are rank deficient: numerical rank {rank}, singular values {s.tolist()}"
        )
    Q, R = np.linalg.qr(X)
    return Subspace4(Q * np.sign(np.diag(R)))


def _retract(X: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(X)
    return Q * np.sign(np.diag(R))


def random_subspace(seed: SeedLike) -> Subspace4:
    rng = as_rng(seed)
    return Subspace4(_retract(rng.standard_normal((8, 4))))


def _coeffs(omega) -> np.ndarray:
    return omega.coeffs if isinstance(omega, TwoForm) else np.asarray(omega)


def is_lagrangian(V: Subspace4, omega, tau_lag: float = DEFAULT_TOL.lag) -> bool:
    return float(np.abs(restrict_matrix(_coeffs(omega), V.frame)).max()) <= tau_lag


def is_symplectic_restriction(V: Subspace4, omega, tau_symp: float = DEFAULT_TOL.symp) -> bool:
    return abs(_pf(restrict_matrix(_coeffs(omega), V.frame))) >= tau_symp


def complex_residual(V: Subspace4, H: HyperkahlerFrame, u) -> float:
    """Operator norm of (Id - P_V) A_u P_V."""
    return _leak(H.operator(u), V.frame)


def _leak(A: np.ndarray, W: np.ndarray) -> float:
    AW = A @ W
    R = AW - W @ (W.T @ AW)
    # spectral norm via the 4x4 Gram matrix
    return float(np.sqrt(max(np.linalg.eigvalsh(R.T @ R)[-1], 0.0)))


def is_complex(V: Subspace4, H: HyperkahlerFrame, u, tau_cx: float = DEFAULT_TOL.cx) -> bool:
    return complex_residual(V, H, u) <= tau_cx


@dataclass(frozen=True)
class CalibrationReport:
    """Pointwise classification of an oriented 4-plane against a triple.

    Per-role dictionaries are keyed by ``"axis"``, ``"b"`` and ``"c"``.
    """

    triple: Triple
    norms: dict
    pfaffians: dict
    labels: dict
    complex_residuals: dict
    complex_flags: dict
    re: float
    im: float
    phase: float
    special_lagrangian: bool
    anti_calibrated: bool
    case: str

    @property
    def label(self) -> Optional[str]:
        """Fiber label: which of omega_b, omega_c vanishes (None if neither, "BOTH" if both)."""
        lb = self.labels["b"] == "lagrangian"
        lc = self.labels["c"] == "lagrangian"
        if lb and lc:
            return "BOTH"
        if lb:
            return LAGRANGIAN_B
        if lc:
            return LAGRANGIAN_C
        return None

    def wirtinger(self, role: str) -> float:
        """1/2 omega_role^2 on the frame, i.e. the Pfaffian of the restriction."""
        return self.pfaffians[role]


def _label(norm: float, pf: float, tol: Tolerances) -> str:
    if norm <= tol.lag:
        return "lagrangian"
    if abs(pf) >= tol.symp:
        return "symplectic"
    return "neither"


def proof_case(labels: dict) -> str:
    lb, lc = labels["b"], labels["c"]
    if lb == "lagrangian":
        return LAGRANGIAN_B
    if lb == "symplectic":
        return FIRST_CASE
    if lc == "lagrangian":
        return LAGRANGIAN_C
    if lc == "neither":
        return SECOND_CASE
    return OTHER


def classify(
    V: Subspace4, H: HyperkahlerFrame, triple: Triple, tol: Tolerances = DEFAULT_TOL
) -> CalibrationReport:
    H.require_euclidean()
    W = V.frame
    vecs = dict(zip(ROLES, (triple.axis, triple.b, triple.c)))
    ops = {r: H.operator(u) for r, u in vecs.items()}
    # omega_u has coefficient matrix A_u^T g = A_u^T when g = Id
    mats = {r: restrict_matrix(A.T, W) for r, A in ops.items()}
    norms = {r: float(np.abs(m).max()) for r, m in mats.items()}
    pfs = {r: _pf(m) for r, m in mats.items()}
    labels = {r: _label(norms[r], pfs[r], tol) for r in ROLES}
    cres = {r: _leak(A, W) for r, A in ops.items()}
    cflags = {r: cres[r] <= tol.cx for r in ROLES}
    re = pfs["b"] - pfs["c"]
    im = wedge_pair_matrix(mats["b"], mats["c"])
    lag_axis = norms["axis"] <= tol.lag and abs(im) <= tol.lag
    return CalibrationReport(
        triple=triple,
        norms=norms,
        pfaffians=pfs,
        labels=labels,
        complex_residuals=cres,
        complex_flags=cflags,
        re=re,
        im=im,
        phase=float(np.arctan2(im, re)),
        special_lagrangian=lag_axis and re >= 1 - tol.cal,
        anti_calibrated=lag_axis and re <= -(1 - tol.cal),
        case=proof_case(labels),
    )


def _complement_projection(x: np.ndarray, constraints: np.ndarray) -> np.ndarray:
    Q, _ = np.linalg.qr(constraints)
    return x - Q @ (Q.T @ x)


def _unit_vector(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(8)
    return v / np.linalg.norm(v)


def sample_lagrangian(H: HyperkahlerFrame, u, seed: SeedLike) -> Subspace4:
    """Random omega_u-Lagrangian plane, built one vector at a time."""
    H.require_euclidean()
    A = H.operator(u)
    rng = as_rng(seed)
    for _ in range(MAX_REDRAWS):
        vecs = [_unit_vector(rng)]
        for _r in range(3):
            cons = np.column_stack(vecs + [A @ v for v in vecs])
            x = _complement_projection(rng.standard_normal(8), cons)
            n = np.linalg.norm(x)
            if n < COLLAPSE:
                break
            vecs.append(x / n)
        if len(vecs) == 4:
            return Subspace4(np.column_stack(vecs))
    raise SamplerError(f"sample_lagrangian: projection collapsed {MAX_REDRAWS} times")


def sample_special_lagrangian(H: HyperkahlerFrame, triple: Triple, seed: SeedLike) -> Subspace4:
    """Calibrated plane obtained by hyperkähler rotation from a complex Lagrangian one.

    Returns the A_b-complex frame (v1, A_b v1, v2, A_b v2) with v2 chosen
    so that omega_axis and omega_c vanish; its label is LAGRANGIAN_c.
    """
    H.require_euclidean()
    Aa, Ab, Ac = (H.operator(u) for u in (triple.axis, triple.b, triple.c))
    rng = as_rng(seed)
    for _ in range(MAX_REDRAWS):
        v1 = _unit_vector(rng)
        first = [v1, Ab @ v1]
        cons = np.column_stack(first + [Aa @ p for p in first] + [Ac @ p for p in first])
        x = _complement_projection(rng.standard_normal(8), cons)
        n = np.linalg.norm(x)
        if n < COLLAPSE:
            continue
        v2 = x / n
        return Subspace4(np.column_stack([v1, Ab @ v1, v2, Ab @ v2]))
    raise SamplerError(f"sample_special_lagrangian: projection collapsed {MAX_REDRAWS} times")


def sample_calibrated(H: HyperkahlerFrame, triple: Triple, seed: SeedLike) -> Subspace4:
    """Generic calibrated plane: a special-unitary image of a calibrated base plane.

    Identifies R^8 with C^4 through an A_axis-totally-real base plane M
    (x + i y -> M x + A_axis M y).  SU(4) then preserves g, A_axis and
    Omega, and acts transitively on the calibrated planes, so this covers
    the whole special Lagrangian Grassmannian, not only the rotated
    complex-Lagrangian family.
    """
    rng = as_rng(seed)
    base = sample_special_lagrangian(H, triple, rng)
    U = unitary_group.rvs(4, random_state=rng)
    U = U / np.linalg.det(U) ** 0.25
    M = base.frame
    Aa = H.operator(triple.axis)
    return Subspace4(_retract(M @ U.real + Aa @ M @ U.imag))


@dataclass(frozen=True, eq=False)
class SymplecticBasis:
    """Darboux data of omega restricted to V.

    rank 4: ``frame`` holds (u1, u2, u3, u4) with omega(u1,u2) = omega(u3,u4) = 1.
    rank 2: ``plane`` spans a symplectic 2-plane and ``annihilator`` its
    omega-annihilator inside V.
    """

    rank: int
    frame: Optional[np.ndarray] = None
    plane: Optional[np.ndarray] = None
    annihilator: Optional[np.ndarray] = None


def symplectic_basis(
    V: Subspace4, omega: TwoForm, tol: Tolerances = DEFAULT_TOL
) -> SymplecticBasis:
    W = V.frame
    M = restrict_matrix(omega.coeffs, W)
    if np.abs(M).max() <= tol.lag:
        return SymplecticBasis(rank=0)
    i, j = np.unravel_index(np.argmax(np.abs(np.triu(M, 1))), M.shape)
    # work in frame coordinates, then map back with W
    u1 = np.eye(4)[i]
    u2 = np.eye(4)[j] / M[i, j]
    rest = [np.eye(4)[k] for k in range(4) if k not in (i, j)]
    om = lambda x, y: x @ M @ y  # noqa: E731
    rest = [x - om(x, u2) * u1 + om(x, u1) * u2 for x in rest]
    if abs(_pf(M)) < tol.symp:
        return SymplecticBasis(
            rank=2,
            plane=W @ np.column_stack([u1, u2]),
            annihilator=W @ np.column_stack(rest),
        )
    u3, x4 = rest
    u4 = x4 / om(u3, x4)
    return SymplecticBasis(rank=4, frame=W @ np.column_stack([u1, u2, u3, u4]))


def pairing_table(omega: TwoForm, vectors) -> np.ndarray:
    X = np.column_stack(vectors)
    return X.T @ omega.coeffs @ X
