"""Command-line driver.

    calibrax verify {dichotomy|cases|first-case|comass|rotation|paths|analytic} --seed S ...
    calibrax fibration {build|check|rotate} --seed S --generators e0,e1,e4,e5 --grid 3

Exit status: 0 when every check passed, 1 when some check failed (the
counterexample frame is in the report), 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import fibration, verifier
from .frame import FrameError, Triple
from .grassmann import DegenerateFrameError, Tolerances
from .report import VerificationReport, emit_report
from .trials import worker_count

VERIFY = ("dichotomy", "cases", "first-case", "comass", "rotation", "paths", "analytic")
FIBRATION = ("build", "check", "rotate")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    seed: int
    trials: int = 1000
    starts: int = 100
    steps: int = 200
    tolerances: dict = field(default_factory=dict)
    triple: str = "K"
    out: Optional[str] = None
    format: str = "json"
    sampler: Optional[str] = None
    max_iters: int = 2000
    step_size: float = 1.0
    points: int = 100
    generators: str = "e0,e1,e4,e5"
    grid: int = 3

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        for name in ("trials", "starts", "steps", "max_iters", "points"):
            if getattr(self, name) < 1:
                raise ConfigError(f"--{name.replace('_', '-')} must be a positive integer")
        if self.steps < 2:
            raise ConfigError("--steps must be at least 2")
        if self.grid < 0:
            raise ConfigError("--grid must be non-negative")
        for k, v in self.tolerances.items():
            if not v > 0:
                raise ConfigError(f"tolerance {k} must be positive, got {v}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")

    def tol(self) -> Tolerances:
        return Tolerances(**self.tolerances)


def parse_triple(spec: str) -> Triple:
    """A preset name (K, I, J) or three unit 3-vectors "a;b;c" with comma-separated entries."""
    spec = spec.strip()
    if spec in ("K", "I", "J"):
        return Triple.preset(spec)
    parts = spec.split(";")
    if len(parts) != 3:
        raise ConfigError(f"cannot parse triple {spec!r}")
    try:
        vecs = [tuple(float(x) for x in p.split(",")) for p in parts]
    except ValueError:
        raise ConfigError(f"cannot parse triple {spec!r}") from None
    try:
        return Triple(*vecs)
    except FrameError as exc:
        raise ConfigError(str(exc)) from None


_TERM = re.compile(r"([+-]?)(\d*)e([0-7])")


def parse_generators(spec: str) -> np.ndarray:
    """Four comma-separated integer combinations of e0..e7, e.g. "e0+e1,e0-e1,e4,e5"."""
    cols = spec.split(",")
    if len(cols) != 4:
        raise ConfigError("--generators needs exactly four vectors")
    G = np.zeros((8, 4), dtype=np.int64)
    for j, col in enumerate(cols):
        col = col.replace(" ", "")
        pos = 0
        for m in _TERM.finditer(col):
            if m.start() != pos:
                break
            sign = -1 if m.group(1) == "-" else 1
            G[int(m.group(3)), j] += sign * int(m.group(2) or 1)
            pos = m.end()
        if pos != len(col) or not col:
            raise ConfigError(f"cannot parse generator {col!r}")
    return G


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="calibrax", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="group", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, required=True)
        sp.add_argument("--tol-lag", type=float)
        sp.add_argument("--tol-cal", type=float)
        sp.add_argument("--tol-symp", type=float)
        sp.add_argument("--triple", default="K")
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    v = sub.add_parser("verify")
    v.add_argument("name", choices=VERIFY)
    common(v)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--starts", type=int, default=100)
    v.add_argument("--steps", type=int, default=200)
    v.add_argument("--max-iters", type=int, default=2000)
    v.add_argument("--step-size", type=float, default=1.0)
    v.add_argument("--points", type=int, default=100)
    v.add_argument("--sampler")

    f = sub.add_parser("fibration")
    f.add_argument("name", choices=FIBRATION)
    common(f)
    f.add_argument("--generators", default="e0,e1,e4,e5")
    f.add_argument("--grid", type=int, default=3)
    return p


def config_from_args(argv: Sequence[str]) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    tols = {k: getattr(ns, f"tol_{k}") for k in ("lag", "cal", "symp") if getattr(ns, f"tol_{k}") is not None}
    kw = dict(
        command=f"{ns.group} {ns.name}",
        seed=ns.seed,
        tolerances=tols,
        triple=ns.triple,
        out=ns.out,
        format=ns.format,
    )
    if ns.group == "verify":
        kw.update(trials=ns.trials, starts=ns.starts, steps=ns.steps, max_iters=ns.max_iters,
                  step_size=ns.step_size, points=ns.points, sampler=ns.sampler)
    else:
        kw.update(generators=ns.generators, grid=ns.grid)
    return RunConfig(**kw)


def _dispatch(cfg: RunConfig) -> list[VerificationReport]:
    tol = cfg.tol()
    triple = parse_triple(cfg.triple)
    group, name = cfg.command.split()
    if group == "verify":
        if name == "dichotomy":
            return [verifier.verify_dichotomy(cfg.trials, cfg.seed, tol, sampler=cfg.sampler or "rotated")]
        if name == "cases":
            return verifier.verify_case_identities(cfg.trials, cfg.seed, triple)
        if name == "first-case":
            return [verifier.verify_first_case(cfg.trials, cfg.seed, tol, cfg.sampler or "lagrangian", triple)]
        if name == "comass":
            if cfg.step_size <= 0:
                raise ConfigError("--step-size must be positive")
            return [verifier.verify_comass(cfg.starts, cfg.seed, cfg.max_iters, cfg.step_size, tol, triple)]
        if name == "rotation":
            return verifier.verify_rotation(cfg.trials, cfg.seed, tol)
        if name == "paths":
            return [verifier.verify_path_constancy(cfg.trials, cfg.steps, cfg.seed, tol)]
        if name == "analytic":
            return [verifier.verify_analytic_change(cfg.seed, cfg.points)]
    if group == "fibration":
        G = parse_generators(cfg.generators)
        try:
            F = fibration.build_fibration(None, triple, G, cfg.grid, tol)
        except fibration.FibrationError as exc:
            if np.linalg.matrix_rank(G.astype(float)) != 4:
                raise ConfigError(str(exc)) from None
            print(f"calibrax: {exc}", file=sys.stderr)
            return [_rejected_build(G, cfg.seed, str(exc))]
        if name == "build":
            return [_build_report(F, cfg.seed)]
        rep = fibration.check_fibers(F, tol) if name == "check" else fibration.rotated_fibration(F, tol)
        rep.seed = cfg.seed
        return [rep]
    raise ConfigError(f"unknown command {cfg.command!r}")  # pragma: no cover


def _build_report(F, seed: int) -> VerificationReport:
    stats = {
        "fibers": F.fibers,
        "lattice_index": F.index,
        "primitive": F.primitive,
        "fiber_volume": F.fiber_volume,
        "label": F.report.label,
    }
    params = {"triple": F.triple.name, "generators": F.generators.tolist()}
    return VerificationReport("fibration.build", seed, 1, 1, 0.0, params, None, stats)


def _rejected_build(G, seed: int, reason: str) -> VerificationReport:
    from .grassmann import orthonormalize

    frame = orthonormalize(G.astype(float)).frame
    params = {"generators": G.tolist()}
    return VerificationReport("fibration.build", seed, 1, 0, 1.0, params, frame, {"reason": reason})


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a configuration and write its report; returns (exit code, document)."""
    handle = None
    if cfg.out:
        try:
            handle = open(cfg.out, "w", encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot write {cfg.out}: {exc}") from None
    try:
        reports = _dispatch(cfg)
        doc = emit_report(reports if len(reports) > 1 else reports[0], cfg.format)
        if handle is not None:
            handle.write(doc)
    finally:
        if handle is not None:
            handle.close()
    code = 0 if all(r.ok for r in reports) else 1
    return code, doc


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
        worker_count()
        code, doc = run(cfg)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except (ConfigError, FrameError, DegenerateFrameError, ValueError) as exc:
        print(f"calibrax: {exc}", file=sys.stderr)
        return 2
    if not cfg.out:
        sys.stdout.write(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
