"""Flat hyperkähler linear model on R^8 = H^2.

Coordinates: e0..e3 are (1, i, j, k) of the first quaternion factor and
e4..e7 the same for the second.  The complex structures act by left
multiplication, so I J = K holds on the nose.

A 2-form is stored by its coefficient matrix ``C`` with
``omega(x, y) = x @ C @ y``.  For the Kähler form of a structure ``A``,
``omega_A(x, y) = g(A x, y)`` gives ``C = A.T @ g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

TAU_EXACT = 1e-12
TAU_DERIVED = 1e-10

AXIS_NAMES = {(1, 0, 0): "I", (0, 1, 0): "J", (0, 0, 1): "K"}


class FrameError(ValueError):
    """Invalid hyperkähler data (non-unit axis, bad triple, bad rotation...)."""


def _left_mult(q: Sequence[float]) -> np.ndarray:
    a, b, c, d = q
    return np.array(
        [
            [a, -b, -c, -d],
            [b, a, -d, c],
            [c, d, a, -b],
            [d, -c, b, a],
        ],
        dtype=float,
    )


def axis_name(u: Sequence[float]) -> str:
    """Short display name of a point of the twistor sphere ("I", "-J", or the vector)."""
    r = tuple(int(round(x)) for x in u)
    if np.allclose(u, r, atol=1e-12):
        if r in AXIS_NAMES:
            return AXIS_NAMES[r]
        neg = tuple(-x for x in r)
        if neg in AXIS_NAMES:
            return "-" + AXIS_NAMES[neg]
    return "(" + ",".join(f"{x:.6g}" for x in u) + ")"


def _unit(u, name: str = "u") -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (3,):
        raise FrameError(f"{name} must be a 3-vector, got shape {u.shape}")
    n = float(np.linalg.norm(u))
    if abs(n - 1.0) > TAU_EXACT:
        raise FrameError(
            f"{name} must be a unit vector (|{name}| = {n!r}); pass {name} / |{name}| instead"
        )
    return u


@dataclass(frozen=True, eq=False)
class HyperkahlerFrame:
    """Metric ``g`` and a quaternionic triple of complex structures on R^8."""

    g: np.ndarray
    I: np.ndarray
    J: np.ndarray
    K: np.ndarray
    tol: float = TAU_DERIVED
    _ops: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        ident = np.eye(8)
        for name in ("g", "I", "J", "K"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (8, 8):
                raise FrameError(f"{name} must be 8x8, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        g = self.g
        if np.abs(g - g.T).max() > self.tol or np.linalg.eigvalsh(g).min() <= 0:
            raise FrameError("g must be symmetric positive definite")
        for name, A in (("I", self.I), ("J", self.J), ("K", self.K)):
            if np.abs(A @ A + ident).max() > self.tol:
                raise FrameError(f"{name}^2 != -Id")
            if np.abs(A.T @ g @ A - g).max() > self.tol:
                raise FrameError(f"{name} is not g-orthogonal")
        if np.abs(self.I @ self.J - self.K).max() > self.tol:
            raise FrameError("I J != K")

    def operator(self, u) -> np.ndarray:
        """A_u = u1 I + u2 J + u3 K for a unit 3-vector u."""
        key = tuple(u) if isinstance(u, tuple) else None
        if key is not None and key in self._ops:
            return self._ops[key]
        u = _unit(u)
        A = u[0] * self.I + u[1] * self.J + u[2] * self.K
        A.setflags(write=False)
        if key is not None:
            self._ops[key] = A
        return A

    @cached_property
    def is_euclidean(self) -> bool:
        return bool(np.array_equal(self.g, np.eye(8)))

    def require_euclidean(self) -> None:
        if not self.is_euclidean:
            raise FrameError("this operation needs g = identity (frames are Euclidean-orthonormal)")

    @cached_property
    def sp_algebra(self) -> np.ndarray:
        """Basis (10, 8, 8) of g-skew maps commuting with I, J and K.

        These generate the quaternionic unitary group, which preserves
        every Kähler form of the frame.
        """
        n = 8
        eye = np.eye(n)
        rows = []
        for A in (self.I, self.J, self.K):
            # vec(XA - AX) = (A^T (x) Id - Id (x) A) vec(X), column-major vec
            rows.append(np.kron(A.T, eye) - np.kron(eye, A))
        # g X + X^T g = 0
        perm = np.zeros((n * n, n * n))
        for i in range(n):
            for j in range(n):
                perm[i * n + j, j * n + i] = 1.0
        rows.append(np.kron(eye, self.g) + np.kron(self.g, eye) @ perm)
        basis = scipy.linalg.null_space(np.vstack(rows))
        return np.stack([basis[:, k].reshape(n, n, order="F") for k in range(basis.shape[1])])


def standard_frame() -> HyperkahlerFrame:
    """Left multiplication by i, j, k on H^2 with the Euclidean metric."""
    eye2 = np.eye(2)
    return HyperkahlerFrame(
        g=np.eye(8),
        I=np.kron(eye2, _left_mult((0, 1, 0, 0))),
        J=np.kron(eye2, _left_mult((0, 0, 1, 0))),
        K=np.kron(eye2, _left_mult((0, 0, 0, 1))),
        tol=TAU_EXACT,
    )


@dataclass(frozen=True, eq=False)
class TwoForm:
    coeffs: np.ndarray
    label: Optional[tuple] = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.shape != (8, 8):
            raise FrameError(f"2-form coefficients must be 8x8, got {c.shape}")
        if not np.array_equal(c, -c.T):
            c = 0.5 * (c - c.T)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __call__(self, x, y) -> float:
        return float(np.asarray(x) @ self.coeffs @ np.asarray(y))

    @property
    def name(self) -> str:
        return "omega_" + axis_name(self.label) if self.label is not None else "omega"


def kahler_form(H: HyperkahlerFrame, u) -> TwoForm:
    """omega_u(x, y) = g(A_u x, y)."""
    A = H.operator(u)
    return TwoForm(A.T @ H.g, label=tuple(float(x) for x in u))


@dataclass(frozen=True)
class Triple:
    """Right-handed orthonormal triple (axis; b, c) on the twistor sphere.

    The axis is the complex structure in which the volume form
    ``Omega = 1/2 (omega_b + i omega_c)^2`` is holomorphic.
    """

    axis: tuple
    b: tuple
    c: tuple

    def __post_init__(self):
        vecs = []
        for name in ("axis", "b", "c"):
            v = _unit(getattr(self, name), name)
            object.__setattr__(self, name, tuple(float(x) for x in v))
            vecs.append(v)
        a, b, c = vecs
        gram = np.array([[x @ y for y in vecs] for x in vecs])
        if np.abs(gram - np.eye(3)).max() > TAU_EXACT:
            raise FrameError("triple is not orthonormal")
        if np.abs(np.cross(b, c) - a).max() > TAU_EXACT:
            raise FrameError("triple is not right-handed (need axis = b x c)")

    @classmethod
    def preset(cls, name: str) -> "Triple":
        """"K" = (K; I, J), "I" = (I; J, K), "J" = (J; K, I)."""
        e = {"I": (1.0, 0.0, 0.0), "J": (0.0, 1.0, 0.0), "K": (0.0, 0.0, 1.0)}
        order = {"K": "KIJ", "I": "IJK", "J": "JKI"}
        try:
            a, b, c = order[name]
        except KeyError:
            raise FrameError(f"unknown triple preset {name!r}; expected one of K, I, J") from None
        return cls(e[a], e[b], e[c])

    @classmethod
    def from_rotation(cls, R) -> "Triple":
        """Image of (K; I, J) under the rotation R."""
        R = np.asarray(R, dtype=float)
        return cls(R[:, 2], R[:, 0], R[:, 1])

    def as_matrix(self) -> np.ndarray:
        """Columns (axis, b, c)."""
        return np.column_stack([self.axis, self.b, self.c])

    @property
    def name(self) -> str:
        return f"({axis_name(self.axis)};{axis_name(self.b)},{axis_name(self.c)})"

    def cycled(self) -> "Triple":
        """(axis; b, c) -> (b; c, axis): the hyperkähler rotation onto the b-axis."""
        return Triple(self.b, self.c, self.axis)

    def quarter_turn(self) -> "Triple":
        """Rotate (b, c) by pi/2 about the axis: (axis; c, -b)."""
        return Triple(self.axis, self.c, tuple(-x for x in self.b))


def check_rotation(R) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise FrameError(f"rotation must be 3x3, got {R.shape}")
    if np.abs(R.T @ R - np.eye(3)).max() > TAU_EXACT:
        raise FrameError("rotation matrix is not orthogonal")
    if np.linalg.det(R) < 0:
        raise FrameError("rotation matrix is improper (det = -1)")
    return R


def rotate_frame(triple: Triple, R) -> Triple:
    """Apply a proper rotation of S^2 to every member of the triple."""
    R = check_rotation(R)
    m = R @ triple.as_matrix()
    return Triple(m[:, 0], m[:, 1], m[:, 2])


def rotation_about(axis, angle: float) -> np.ndarray:
    from scipy.spatial.transform import Rotation

    axis = _unit(axis, "axis")
    return Rotation.from_rotvec(angle * axis).as_matrix()


@dataclass(frozen=True, eq=False)
class HolVolumeForm:
    """Omega = 1/2 (omega_b + i omega_c)^2, kept as its two generating 2-forms.

    Re Omega = 1/2 (omega_b^2 - omega_c^2) and Im Omega = omega_b ^ omega_c;
    both are evaluated lazily on 4-frames by :mod:`calibrax.exterior`.
    """

    frame: HyperkahlerFrame
    triple: Triple
    omega_b: TwoForm
    omega_c: TwoForm

    @property
    def axis(self) -> tuple:
        return self.triple.axis

    @property
    def re_pair(self) -> tuple:
        return (self.omega_b, self.omega_c)

    @property
    def im_pair(self) -> tuple:
        return (self.omega_b, self.omega_c)


def hol_volume(H: HyperkahlerFrame, triple: Triple) -> HolVolumeForm:
    if not isinstance(triple, Triple):
        triple = Triple(*triple)
    return HolVolumeForm(H, triple, kahler_form(H, triple.b), kahler_form(H, triple.c))


@dataclass(frozen=True, eq=False)
class CoordFrame:
    """Four complex linear functionals l_j(x) = alpha_j . x + i beta_j . x.

    ``alpha`` and ``beta`` are 4x8 arrays.  Every functional is
    A_u-holomorphic: ``l(A_u x) = i l(x)``.
    """

    alpha: np.ndarray
    beta: np.ndarray
    axis: tuple

    def __post_init__(self):
        for name in ("alpha", "beta"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (4, 8):
                raise FrameError(f"{name} must be 4x8, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def realification(self) -> np.ndarray:
        """8x8 map x -> (Re l(x), Im l(x))."""
        return np.vstack([self.alpha, self.beta])

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.alpha @ x + 1j * (self.beta @ x)

    def holomorphy_residual(self, H: HyperkahlerFrame) -> float:
        A = H.operator(self.axis)
        # l(A x) - i l(x) over the basis, as coefficient arrays
        re = self.alpha @ A + self.beta
        im = self.beta @ A - self.alpha
        return float(max(np.abs(re).max(), np.abs(im).max()))

    def point(self, z) -> np.ndarray:
        """Inverse map: the x in R^8 with coordinates z."""
        z = np.asarray(z, dtype=complex)
        return np.linalg.solve(self.realification(), np.concatenate([z.real, z.imag]))


def hol_coordinates(H: HyperkahlerFrame, u) -> CoordFrame:
    """Complex coordinates for the structure A_u.

    Real parts are picked greedily from the standard covectors, so for the
    standard frame the I-coordinates are (x0 + i x1, x2 + i x3, ...).
    """
    A = H.operator(u)
    alphas, betas = [], []
    rows = np.zeros((0, 8))
    for k in range(8):
        alpha = np.eye(8)[k]
        beta = -A.T @ alpha
        cand = np.vstack([rows, alpha, beta])
        if np.linalg.matrix_rank(cand, tol=1e-9) == cand.shape[0]:
            rows = cand
            alphas.append(alpha)
            betas.append(beta)
        if len(alphas) == 4:
            break
    return CoordFrame(np.array(alphas), np.array(betas), tuple(float(x) for x in u))


def coord_change(src: CoordFrame, dst: CoordFrame) -> tuple[np.ndarray, np.ndarray]:
    """Matrices (A, B) with z = A w + B conj(w).

    ``z`` are the coordinates of ``src`` and ``w`` those of ``dst``, both as
    functions on R^8.  B vanishes exactly when the two structures agree.
    """
    Rs, Rd = src.realification(), dst.realification()
    for name, R in (("source", Rs), ("target", Rd)):
        if np.linalg.cond(R) > 1e10:
            raise FrameError(f"{name} coordinate frame is degenerate")
    T = Rs @ np.linalg.inv(Rd)
    T11, T12, T21, T22 = T[:4, :4], T[:4, 4:], T[4:, :4], T[4:, 4:]
    A = 0.5 * ((T11 + T22) + 1j * (T21 - T12))
    B = 0.5 * ((T11 - T22) + 1j * (T21 + T12))
    return A, B


def compose_changes(first, second):
    """Compose z = A w + B w̄ with w = A' v + B' v̄ into z = A'' v + B'' v̄."""
    A, B = first
    A2, B2 = second
    return A @ A2 + B @ B2.conj(), A @ B2 + B @ A2.conj()
