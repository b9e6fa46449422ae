"""Numerical checks of the bi-Lagrangian dichotomy, its case analysis, the
comass certificate, the hyperkähler rotation and the analytic coordinate
change, all at the level of tangent 4-planes in flat R^8.

Every ``verify_*`` sweep is a pure function of its arguments: trials draw
from generators keyed by (seed, stream, index) and reports aggregate in
index order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.spatial.transform import Rotation

from .comass import AscentSettings, ascend
from .exterior import _pf, restrict_matrix
from .frame import (
    HyperkahlerFrame,
    Triple,
    coord_change,
    hol_coordinates,
    hol_volume,
    kahler_form,
    standard_frame,
)
from .grassmann import (
    DEFAULT_TOL,
    LAGRANGIAN_B,
    LAGRANGIAN_C,
    MAX_REDRAWS,
    DegenerateFrameError,
    SamplerError,
    Subspace4,
    Tolerances,
    classify,
    complex_residual,
    is_symplectic_restriction,
    orthonormalize,
    random_subspace,
    sample_calibrated,
    sample_lagrangian,
    sample_special_lagrangian,
    symplectic_basis,
)
from .report import VerificationReport
from .trials import Outcome, run_trials, summarize, trial_rng

# criterion-level thresholds
RESID = 1e-8
EXACT = 1e-12
COMASS_LOW = 1e-6
COMASS_HIGH = 1e-8
DICHOTOMY_GAP = 0.1

STREAM_TRIPLES, STREAM_TRIALS = 0, 1


class PathError(RuntimeError):
    """A path meant to stay inside the calibrated set left it."""


def _frame(H: Optional[HyperkahlerFrame]) -> HyperkahlerFrame:
    return standard_frame() if H is None else H


def random_triple(rng: np.random.Generator) -> Triple:
    return Triple.from_rotation(Rotation.random(random_state=rng).as_matrix())


def _check_count(name: str, n: int, minimum: int = 1) -> None:
    if not isinstance(n, (int, np.integer)) or n < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {n!r}")


# ---------------------------------------------------------------- dichotomy


def dichotomy_check(V: Subspace4, H: HyperkahlerFrame, triple: Triple, tol: Tolerances = DEFAULT_TOL) -> Outcome:
    """Exactly one of omega_b, omega_c vanishes on a calibrated plane, and the
    other structure is complex (b) or anti-complex (c) by Wirtinger."""
    rep = classify(V, H, triple, tol)
    nb, nc = rep.norms["b"], rep.norms["c"]
    zero_b, zero_c = nb <= tol.lag, nc <= tol.lag
    resid = [min(nb, nc), abs(rep.im), max(0.0, 1.0 - rep.re)]
    ok = rep.special_lagrangian and (zero_b != zero_c)
    if zero_c and not zero_b:
        resid += [abs(rep.pfaffians["b"] - 1.0), rep.complex_residuals["b"]]
        ok = ok and resid[-2] <= RESID and resid[-1] <= tol.cx
    elif zero_b and not zero_c:
        resid += [abs(rep.pfaffians["c"] + 1.0), rep.complex_residuals["c"]]
        ok = ok and resid[-2] <= RESID and resid[-1] <= tol.cx
    return Outcome(bool(ok), float(max(resid)), V.frame, {"label": rep.label, "gap": max(nb, nc)})


def verify_dichotomy(
    trials: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
    n_triples: int = 10,
    sampler: str = "rotated",
    H: Optional[HyperkahlerFrame] = None,
) -> VerificationReport:
    """Sweep calibrated planes under ``n_triples`` random triples.

    ``sampler="rotated"`` draws from :func:`sample_special_lagrangian`; every
    odd trial is re-read under the quarter-turned triple with reversed
    orientation so both labels occur.  ``sampler="general"`` draws from the
    full special-unitary orbit instead.
    """
    _check_count("trials", trials)
    _check_count("n_triples", n_triples)
    if sampler not in ("rotated", "general"):
        raise ValueError(f"unknown sampler {sampler!r}")
    H = _frame(H)
    t0 = time.perf_counter()
    triples = [random_triple(trial_rng(seed, STREAM_TRIPLES, k)) for k in range(n_triples)]
    turned = [T.quarter_turn() for T in triples]

    def one(i: int) -> Outcome:
        rng = trial_rng(seed, STREAM_TRIALS, i)
        T = triples[i % n_triples]
        if sampler == "general":
            return dichotomy_check(sample_calibrated(H, T, rng), H, T, tol)
        V = sample_special_lagrangian(H, T, rng)
        if i % 2:
            return dichotomy_check(V.reversed(), H, turned[i % n_triples], tol)
        return dichotomy_check(V, H, T, tol)

    outs = run_trials(one, trials)
    gaps = [o.extra["gap"] for o in outs]
    labels = [o.extra["label"] for o in outs]
    stats = {
        "label_b": labels.count(LAGRANGIAN_B),
        "label_c": labels.count(LAGRANGIAN_C),
        "unlabelled": sum(1 for x in labels if x is None),
        "both": labels.count("BOTH"),
        "min_gap": float(min(gaps)),
        "gap_below_threshold": sum(1 for g in gaps if g < DICHOTOMY_GAP),
    }
    params = {"trials": trials, "n_triples": n_triples, "sampler": sampler, "tol": tol.as_dict()}
    return summarize("dichotomy", outs, seed, params, t0, stats)


# ---------------------------------------------------------- case identities


def _null_direction(rows: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    N = scipy.linalg.null_space(rows)
    x = N @ rng.standard_normal(N.shape[1])
    return x / np.linalg.norm(x)


def _axis_ops(H: HyperkahlerFrame, triple: Triple):
    return tuple(H.operator(u) for u in (triple.axis, triple.b, triple.c))


def split_pair_plane(H: HyperkahlerFrame, triple: Triple, v1: np.ndarray, rng: np.random.Generator) -> Subspace4:
    """span(v1, A_b v1, v2, A_c v2) with v2 solving the four omega_axis conditions.

    The first two frame vectors span an omega_b-symplectic 2-plane, the
    last two an omega_c-symplectic one.
    """
    Aa, Ab, Ac = _axis_ops(H, triple)
    Ca = kahler_form(H, triple.axis).coeffs
    v1 = np.asarray(v1, float) / np.linalg.norm(v1)
    rows = []
    for p in (v1, Ab @ v1):
        rows.append(Ca.T @ p)  # omega_a(p, v2)
        rows.append(Ac.T @ Ca.T @ p)  # omega_a(p, A_c v2)
    v2 = _null_direction(np.array(rows), rng)
    return orthonormalize(np.column_stack([v1, Ab @ v1, v2, Ac @ v2]))


def orbit_plane(H: HyperkahlerFrame, triple: Triple, v1: np.ndarray, rng: np.random.Generator) -> Subspace4:
    """span(v1, A_b v1, A_c v1, w) with w in the omega_axis-annihilator of the first three."""
    Aa, Ab, Ac = _axis_ops(H, triple)
    Ca = kahler_form(H, triple.axis).coeffs
    v1 = np.asarray(v1, float) / np.linalg.norm(v1)
    first = [v1, Ab @ v1, Ac @ v1]
    w = _null_direction(np.array([Ca.T @ p for p in first]), rng)
    return orthonormalize(np.column_stack(first + [w]))


def _configuration_sweep(name, builder, trials, seed, stream, H, triple):
    Omega = hol_volume(H, triple)
    Ca = kahler_form(H, triple.axis).coeffs

    def one(i: int) -> Outcome:
        rng = trial_rng(seed, stream, i)
        for _ in range(MAX_REDRAWS):
            try:
                V = builder(H, triple, rng.standard_normal(8), rng)
                break
            except DegenerateFrameError:
                continue
        else:
            raise SamplerError(f"{name}: linear solve degenerate {MAX_REDRAWS} times")
        W = V.frame
        re = _pf(restrict_matrix(Omega.omega_b.coeffs, W)) - _pf(restrict_matrix(Omega.omega_c.coeffs, W))
        axis_norm = float(np.abs(restrict_matrix(Ca, W)).max())
        return Outcome(abs(re) <= RESID, abs(re), W, {"axis_norm": axis_norm})

    return run_trials(one, trials)


def verify_case_identities(
    trials: int, seed: int, triple: Optional[Triple] = None, H: Optional[HyperkahlerFrame] = None
) -> list[VerificationReport]:
    """Re(Omega) = 0 on both mixed configurations, and omega_c(v, A_b v) = 0."""
    _check_count("trials", trials)
    H = _frame(H)
    triple = Triple.preset("K") if triple is None else triple
    params = {"trials": trials, "triple": triple.name, "tolerance": RESID}
    reports = []

    t0 = time.perf_counter()
    outs = _configuration_sweep("split_pairs", split_pair_plane, trials, seed, 10, H, triple)
    norms = [o.extra["axis_norm"] for o in outs]
    reports.append(
        summarize("cases.split_pairs", outs, seed, params, t0, {"max_axis_restriction": float(max(norms))})
    )

    t0 = time.perf_counter()
    outs = _configuration_sweep("orbit", orbit_plane, trials, seed, 11, H, triple)
    norms = [o.extra["axis_norm"] for o in outs]
    # omega_axis(A_b v1, A_c v1) = |v1|^2, so these planes are never axis-Lagrangian
    stats = {
        "min_axis_restriction": float(min(norms)),
        "axis_lagrangian_configurations": sum(1 for n in norms if n <= DEFAULT_TOL.lag),
    }
    reports.append(summarize("cases.orbit", outs, seed, params, t0, stats))

    t0 = time.perf_counter()
    Ab, Ac = H.operator(triple.b), H.operator(triple.c)
    Cc = kahler_form(H, triple.c).coeffs
    Aa = H.operator(triple.axis)

    def line_pairing(i: int) -> Outcome:
        v = trial_rng(seed, 12, i).standard_normal(8)
        v /= np.linalg.norm(v)
        val = abs(float(v @ Cc @ (Ab @ v)))
        frame = None
        if val > EXACT:
            frame = orthonormalize(np.column_stack([v, Ab @ v, Ac @ v, Aa @ v])).frame
        return Outcome(val <= EXACT, val, frame)

    outs = run_trials(line_pairing, trials)
    reports.append(summarize("cases.line_pairing", outs, seed, {**params, "tolerance": EXACT}, t0))
    return reports


# --------------------------------------------------------------- first case


@dataclass
class NormalForm:
    frame: Optional[np.ndarray]
    residual: float


def first_case_normal_form(V: Subspace4, H: HyperkahlerFrame, u_b, tol: Tolerances = DEFAULT_TOL) -> NormalForm:
    """Try to write a Darboux basis of omega_b|V as (v1, A_b v1, v2, A_b v2).

    Possible exactly when V is A_b-invariant; ``residual`` measures how far
    A_b v1 and A_b v2 stick out of V.
    """
    sb = symplectic_basis(V, kahler_form(H, u_b), tol)
    if sb.rank != 4:
        return NormalForm(None, float("inf"))
    Ab = H.operator(u_b)
    P = V.projector()
    v1 = sb.frame[:, 0] / np.linalg.norm(sb.frame[:, 0])
    r1 = np.linalg.norm(Ab @ v1 - P @ (Ab @ v1))
    x = sb.frame[:, 2]
    for q in (v1, Ab @ v1):
        x = x - (x @ q) * q
    v2 = x / np.linalg.norm(x)
    r2 = np.linalg.norm(Ab @ v2 - P @ (Ab @ v2))
    resid = float(max(r1, r2))
    if resid > RESID:
        return NormalForm(None, resid)
    return NormalForm(np.column_stack([v1, Ab @ v1, v2, Ab @ v2]), resid)


def first_case_check(V: Subspace4, H: HyperkahlerFrame, triple: Triple, tol: Tolerances = DEFAULT_TOL) -> Outcome:
    """On an omega_axis-Lagrangian, omega_b-symplectic plane: normal form
    exists and all six omega_c pairings vanish."""
    nf = first_case_normal_form(V, H, triple.b, tol)
    Cc = kahler_form(H, triple.c).coeffs
    X = nf.frame if nf.frame is not None else V.frame
    table = float(np.abs(X.T @ Cc @ X).max())
    ok = nf.frame is not None and table <= RESID
    return Outcome(ok, table, V.frame, {"normal_form": nf.frame is not None, "normal_form_residual": nf.residual})


def verify_first_case(
    trials: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
    sampler: str = "lagrangian",
    triple: Optional[Triple] = None,
    H: Optional[HyperkahlerFrame] = None,
) -> VerificationReport:
    """``sampler``: "lagrangian" (any omega_axis-Lagrangian plane), "calibrated"
    (generic calibrated plane) or "rotated" (the complex-Lagrangian family)."""
    _check_count("trials", trials)
    samplers = {
        "lagrangian": lambda H, T, rng: sample_lagrangian(H, T.axis, rng),
        "calibrated": sample_calibrated,
        "rotated": sample_special_lagrangian,
    }
    if sampler not in samplers:
        raise ValueError(f"unknown sampler {sampler!r}")
    draw = samplers[sampler]
    H = _frame(H)
    triple = Triple.preset("K") if triple is None else triple
    Cb = kahler_form(H, triple.b)
    t0 = time.perf_counter()

    def one(i: int) -> Outcome:
        rng = trial_rng(seed, 20, i)
        for _ in range(MAX_REDRAWS):
            V = draw(H, triple, rng)
            if is_symplectic_restriction(V, Cb, tol.symp):
                return first_case_check(V, H, triple, tol)
        raise SamplerError(f"no omega_b-symplectic plane in {MAX_REDRAWS} draws")

    outs = run_trials(one, trials)
    stats = {
        "normal_form_failures": sum(1 for o in outs if not o.extra["normal_form"]),
        "min_pairing_table": float(min(o.residual for o in outs)),
    }
    params = {"trials": trials, "sampler": sampler, "triple": triple.name, "tol": tol.as_dict()}
    return summarize("first_case", outs, seed, params, t0, stats)


# ------------------------------------------------------------------ comass


def verify_comass(
    starts: int,
    seed: int,
    max_iters: int = 2000,
    step: float = 1.0,
    tol: Tolerances = DEFAULT_TOL,
    triple: Optional[Triple] = None,
    H: Optional[HyperkahlerFrame] = None,
) -> VerificationReport:
    """Multistart ascent of Re(Omega) over Gr(4, 8).

    One outcome per start (a maximiser at value >= 1 - 1e-6 must be special
    Lagrangian, and no value may exceed 1 + 1e-8) plus a final certificate
    outcome for the best value over all starts.
    """
    _check_count("starts", starts)
    _check_count("max_iters", max_iters)
    if not step > 0:
        raise ValueError("step must be positive")
    H = _frame(H)
    triple = Triple.preset("K") if triple is None else triple
    Omega = hol_volume(H, triple)
    settings = AscentSettings(max_iters=max_iters, step=step)
    t0 = time.perf_counter()

    def one(i: int) -> Outcome:
        rng = trial_rng(seed, 30, i)
        res = ascend(Omega, random_subspace(rng), rng, settings)
        rep = classify(res.subspace, H, triple, tol)
        resid = max(res.value - 1.0, 0.0)
        ok = res.value <= 1.0 + COMASS_HIGH
        high = res.value >= 1.0 - COMASS_LOW
        if high:
            ok = ok and rep.special_lagrangian
            resid = max(resid, rep.norms["axis"], abs(rep.im), abs(1.0 - rep.re))
        bi = rep.label in (LAGRANGIAN_B, LAGRANGIAN_C)
        return Outcome(
            ok,
            resid,
            res.subspace.frame,
            {"value": res.value, "converged": res.converged, "its": res.iterations,
             "escapes": res.escapes, "high": high, "sl": rep.special_lagrangian, "bi": bi},
        )

    outs = run_trials(one, starts, chunk=16)
    best = max(outs, key=lambda o: o.extra["value"])
    bv = best.extra["value"]
    cert_ok = 1.0 - COMASS_LOW <= bv <= 1.0 + COMASS_HIGH
    outs.append(Outcome(cert_ok, abs(bv - 1.0), best.frame))
    stats = {
        "best_value": bv,
        "converged_starts": sum(1 for o in outs[:-1] if o.extra["converged"]),
        "calibrated_maximizers": sum(1 for o in outs[:-1] if o.extra["high"] and o.extra["sl"]),
        "bi_lagrangian_maximizers": sum(1 for o in outs[:-1] if o.extra["high"] and o.extra["bi"]),
        "max_iterations": max(o.extra["its"] for o in outs[:-1]),
        "saddle_escapes": sum(o.extra["escapes"] for o in outs[:-1]),
    }
    params = {"starts": starts, "triple": triple.name, "optimizer": settings.as_dict(), "tol": tol.as_dict()}
    return summarize("comass", outs, seed, params, t0, stats)


# ---------------------------------------------------------------- rotation


def normalize_orientation(V: Subspace4, H: HyperkahlerFrame, triple: Triple) -> Subspace4:
    """Flip an anti-calibrated frame so that Re(Omega) >= 0."""
    rep = classify(V, H, triple)
    return V.reversed() if rep.re < 0 else V


def rotation_check(V: Subspace4, H: HyperkahlerFrame, triple: Triple, tol: Tolerances = DEFAULT_TOL) -> Outcome:
    """Calibrated, omega_c-Lagrangian V: 1/2 omega_b^2 = 1, V is A_b-complex and
    Lagrangian for omega_c + i omega_axis (the rotated holomorphic 2-form)."""
    V = normalize_orientation(V, H, triple)
    rep = classify(V, H, triple, tol)
    vol = abs(rep.wirtinger("b") - 1.0)
    cx = rep.complex_residuals["b"]
    lag = max(rep.norms["c"], rep.norms["axis"])
    ok = vol <= RESID and cx <= tol.cx and lag <= tol.lag
    return Outcome(ok, float(max(vol, cx, lag)), V.frame)


def complex_lagrangian_base(H: HyperkahlerFrame, triple: Triple) -> Subspace4:
    """Deterministic A_b-complex plane Lagrangian for omega_c and omega_axis.

    For the standard frame and (K; I, J) this is span(e0, e1, e4, e5).
    """
    Aa, Ab, Ac = _axis_ops(H, triple)
    E = np.eye(8)
    v1 = E[0]
    Q = orthonormalize(np.column_stack([v1, Ab @ v1, Ac @ v1, Aa @ v1])).frame
    for k in range(1, 8):
        x = E[k] - Q @ (Q.T @ E[k])
        if np.linalg.norm(x) > 0.5:
            v2 = x / np.linalg.norm(x)
            return Subspace4(np.column_stack([v1, Ab @ v1, v2, Ab @ v2]))
    raise DegenerateFrameError("no complement direction found")  # pragma: no cover


def random_sp_element(H: HyperkahlerFrame, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Generator of the quaternionic unitary group (commutes with I, J, K)."""
    basis = H.sp_algebra
    return scale * np.tensordot(rng.standard_normal(len(basis)), basis, axes=1)


def verify_rotation(
    trials: int, seed: int, tol: Tolerances = DEFAULT_TOL, H: Optional[HyperkahlerFrame] = None
) -> list[VerificationReport]:
    """Forward: sampled calibrated LAGRANGIAN_c planes for (K; I, J).
    Converse: I-complex, omega_J/omega_K-Lagrangian planes from the
    quaternionic unitary orbit of a base plane must be calibrated."""
    _check_count("trials", trials)
    H = _frame(H)
    triple = Triple.preset("K")
    params = {"trials": trials, "triple": triple.name, "tol": tol.as_dict()}

    t0 = time.perf_counter()

    def forward(i: int) -> Outcome:
        V = sample_special_lagrangian(H, triple, trial_rng(seed, 40, i))
        return rotation_check(V, H, triple, tol)

    fwd = summarize("rotation.forward", run_trials(forward, trials), seed, params, t0)

    t0 = time.perf_counter()
    base = complex_lagrangian_base(H, triple)

    def converse(i: int) -> Outcome:
        rng = trial_rng(seed, 41, i)
        U = scipy.linalg.expm(random_sp_element(H, rng))
        V = orthonormalize(U @ base.frame)
        rep = classify(V, H, triple, tol)
        built = max(rep.complex_residuals["b"], rep.norms["c"], rep.norms["axis"])
        resid = max(abs(rep.re - 1.0), abs(rep.im))
        ok = built <= tol.cx and resid <= RESID and rep.special_lagrangian
        return Outcome(ok, float(max(resid, built)), V.frame)

    conv = summarize("rotation.converse", run_trials(converse, trials), seed, params, t0)
    return [fwd, conv]


# ----------------------------------------------------------- path labels


@dataclass
class LabelPath:
    frames: list
    labels: list
    step: float

    def __post_init__(self):
        if len(self.frames) != len(self.labels):
            raise ValueError("one label per frame")
        for A, B in zip(self.frames, self.frames[1:]):
            ang = float(np.max(scipy.linalg.subspace_angles(A.frame, B.frame)))
            if ang > self.step + 1e-9:
                raise ValueError(f"consecutive planes are {ang:.3g} apart, above step {self.step:.3g}")

    @property
    def switches(self) -> int:
        return sum(1 for a, b in zip(self.labels, self.labels[1:]) if a != b)


def path_from_generator(
    H: HyperkahlerFrame,
    triple: Triple,
    V0: Subspace4,
    X: np.ndarray,
    steps: int,
    t_max: float = np.pi,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[LabelPath, list]:
    """Planes exp(t X) V0 for t on a uniform grid of [0, t_max], with reports."""
    _check_count("steps", steps, 2)
    norm = float(np.linalg.norm(X, 2))
    h = t_max / (steps - 1)
    frames, reports = [], []
    for k in range(steps):
        V = Subspace4(scipy.linalg.expm(k * h * X) @ V0.frame)
        rep = classify(V, H, triple, tol)
        if not rep.special_lagrangian:
            raise PathError(f"step {k}: plane left the calibrated set (re = {rep.re!r})")
        frames.append(V)
        reports.append(rep)
    path = LabelPath(frames, [r.label for r in reports], step=h * norm)
    return path, reports


def verify_path_constancy(
    paths: int,
    steps: int,
    seed: int,
    tol: Tolerances = DEFAULT_TOL,
    t_max: float = np.pi,
    H: Optional[HyperkahlerFrame] = None,
) -> VerificationReport:
    """Labels along continuous families of calibrated planes never switch."""
    _check_count("paths", paths)
    _check_count("steps", steps, 2)
    H = _frame(H)
    base_triple = Triple.preset("K")

    def one(p: int) -> Outcome:
        rng = trial_rng(seed, 50, p)
        triple = base_triple
        V0 = sample_special_lagrangian(H, triple, rng)
        if p % 2:
            triple, V0 = triple.quarter_turn(), V0.reversed()
        X = random_sp_element(H, rng)
        X /= np.linalg.norm(X, 2)
        path, reps = path_from_generator(H, triple, V0, X, steps, t_max, tol)
        margin = min(max(r.norms["b"], r.norms["c"]) for r in reps)
        vanish = max(min(r.norms["b"], r.norms["c"]) for r in reps)
        valid = all(lab in (LAGRANGIAN_B, LAGRANGIAN_C) for lab in path.labels)
        ok = valid and path.switches == 0 and margin > RESID
        bad = next((f.frame for f, lab in zip(path.frames, path.labels) if lab != path.labels[0]), V0.frame)
        return Outcome(ok, vanish, bad, {"switches": path.switches, "margin": margin})

    t0 = time.perf_counter()
    outs = run_trials(one, paths, chunk=8)
    stats = {
        "label_switches": sum(o.extra["switches"] for o in outs),
        "min_both_margin": float(min(o.extra["margin"] for o in outs)),
    }
    params = {"paths": paths, "steps": steps, "t_max": t_max, "tol": tol.as_dict()}
    return summarize("paths", outs, seed, params, t0, stats)


# --------------------------------------------------------- analytic change


def defining_functionals(V: Subspace4, zframe) -> np.ndarray:
    """2x4 complex matrix F with F z(x) = 0 exactly for x in V.

    Requires V to be complex for the structure of ``zframe``.
    """
    Z = zframe(V.frame)  # 4x4: coordinates of the frame vectors
    N = scipy.linalg.null_space(Z.conj().T, rcond=1e-8)
    if N.shape[1] != 2:
        raise DegenerateFrameError(f"plane is not complex for this frame (kernel dim {N.shape[1]})")
    return N.conj().T


def verify_analytic_change(
    seed: int, points: int = 100, H: Optional[HyperkahlerFrame] = None
) -> VerificationReport:
    """z (I-coordinates) as a real-linear function of w (K-coordinates), and
    the zero set of the pulled-back defining functions of a calibrated plane."""
    H = _frame(H)
    triple = Triple.preset("K")
    zf = hol_coordinates(H, triple.b)
    wf = hol_coordinates(H, triple.axis)
    t0 = time.perf_counter()
    rng = trial_rng(seed, 60, 0)
    V = sample_special_lagrangian(H, triple, rng)
    outs = []

    A, B = coord_change(zf, wf)
    T = zf.realification() @ np.linalg.inv(wf.realification())
    xs = rng.standard_normal((points, 8))
    recon = max(
        float(np.abs(zf(x) - (A @ wf(x) + B @ wf(x).conj())).max()) for x in xs
    )
    invertible = np.linalg.cond(T) < 1e8
    outs.append(Outcome(invertible and recon <= 1e-10, recon, V.frame))
    bnorm = float(np.linalg.norm(B))
    outs.append(Outcome(bnorm > 1e-6, 0.0, V.frame))
    Ai, Bi = coord_change(wf, wf)
    ident = float(max(np.abs(Ai - np.eye(4)).max(), np.abs(Bi).max()))
    outs.append(Outcome(ident <= EXACT, ident, V.frame))

    F = defining_functionals(V, zf)
    P, Q = F @ A, F @ B

    def pulled(x):
        w = wf(x)
        return P @ w + Q @ w.conj()

    x, y = rng.standard_normal(8), rng.standard_normal(8)
    r = rng.standard_normal()
    lin = float(max(np.abs(pulled(x + y) - pulled(x) - pulled(y)).max(),
                    np.abs(pulled(r * x) - r * pulled(x)).max()))
    outs.append(Outcome(lin <= 1e-10, lin, V.frame))

    W = V.frame
    Pv = V.projector()
    threshold = 1e-8
    for _ in range(points):
        x = W @ rng.standard_normal(4)
        val = float(np.abs(pulled(x)).max()) / np.linalg.norm(x)
        direct = float(np.abs(F @ zf(x)).max()) / np.linalg.norm(x)
        outs.append(Outcome(val <= threshold and direct <= threshold, max(val, direct), W))
    for _ in range(points):
        d = rng.standard_normal(8)
        n = d - Pv @ d
        x = W @ rng.standard_normal(4) + n
        val = float(np.abs(pulled(x)).max()) / np.linalg.norm(x)
        outs.append(Outcome(val > threshold, 0.0, W))

    stats = {"B_norm": bnorm, "realification_cond": float(np.linalg.cond(T))}
    params = {"points": points, "z_axis": "I", "w_axis": "K", "threshold": threshold}
    return summarize("analytic", outs, seed, params, t0, stats)
