"""Command line interface.

Subcommands
-----------
verify
    Load a serialized algebra instance and run the axiom checks.
spectrum
    Run the spectral-theorem verification on an instance.
gen
    Emit an instance file: a function algebra over N points, optionally
    conjugated by a seeded random unitary.
counterexample
    Sweep the deformed two-dimensional family over a theta grid, both
    involution signs, and report which cells satisfy which axioms.

Exit codes: 0 all checks passed, 1 some check failed, 2 malformed input or
arguments, 3 spectral-theorem hypothesis failure.  Reports are JSON and are
deterministic functions of the input bytes and flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kalgebra
from .finite_krein import (
    AlgebraValidationError,
    InstanceFormatError,
    CheckResult,
    KreinAlgebra,
    algebra_from_instance_dict,
    algebra_to_instance_dict,
    build_function_algebra,
    check_bimodule_axioms,
    check_commutative_symmetric,
    check_cstar_identity,
    check_decomposition,
    check_full,
    check_imprimitivity,
    check_krein_identity,
    check_odd_symmetry,
    conjugate_algebra,
    function_algebra_instance,
    random_unitary,
)
from .spectrum import SpectralHypothesisError, verify_spectral_theorem

__all__ = ["RunConfig", "run_verify", "run_spectrum", "run_gen", "run_counterexample", "main"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_HYPOTHESIS = 3


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: one command plus its inputs and knobs."""

    command: str
    input_path: Path | None = None
    output_path: Path | None = None
    tol: float = 1e-9
    seed: int = 42
    samples: int = 100
    points: int = 2
    conjugate: bool = False
    grid: int = 64

    def validated(self) -> "RunConfig":
        if self.command not in ("verify", "spectrum", "gen", "counterexample"):
            raise ValueError(f"unknown command {self.command!r}")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if self.command in ("verify", "spectrum") and self.input_path is None:
            raise ValueError(f"{self.command} requires an input file")
        if self.command == "gen" and self.output_path is None:
            raise ValueError("gen requires an output file")
        if self.command == "gen" and self.points < 1:
            raise ValueError("points must be >= 1")
        if self.command == "counterexample":
            if self.grid < 2 or self.grid % 2 != 0:
                raise ValueError("grid must be an even integer >= 2 so 0 and pi are grid points")
        return self


def _dump_json(data: dict, path: Path | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if path is not None:
        path.write_text(text)


def _load_algebra(cfg: RunConfig) -> KreinAlgebra:
    try:
        raw = json.loads(cfg.input_path.read_text())
    except OSError as exc:
        raise InstanceFormatError(f"cannot read input: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return algebra_from_instance_dict(raw, tol=cfg.tol)


def _print_checks(checks: list[CheckResult]) -> None:
    width = max(len(c.name) for c in checks) + 2
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        extra = f"  {c.detail}" if c.detail else ""
        print(f"  {c.name:<{width}}{status}   max residual {c.max_residual:.3e}{extra}")


def run_verify(cfg: RunConfig) -> int:
    """Axiom checks for one instance; exit 1 if a check fails, 2 on bad input."""
    try:
        algebra = _load_algebra(cfg)
    except (InstanceFormatError, AlgebraValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    tol, samples, seed = cfg.tol, cfg.samples, cfg.seed
    checks: list[CheckResult] = []
    construction = max(
        v for k, v in algebra.validation_residuals.items() if k != "basis_independence"
    )
    checks.append(CheckResult("construction", construction <= tol, construction))
    checks.append(check_cstar_identity(algebra, samples, seed, tol))
    checks.append(check_krein_identity(algebra, samples, seed + 1, tol))
    checks.append(check_decomposition(algebra, samples, seed + 2, tol))
    checks.extend(check_bimodule_axioms(algebra, samples, seed + 3, tol))
    checks.append(check_imprimitivity(algebra, samples, seed + 4, tol))

    full = check_full(algebra, tol)
    dim_even = algebra.even_basis.shape[1]
    checks.append(
        CheckResult("fullness", full, 0.0 if full else 1.0, detail=f"even dim {dim_even}")
    )

    cs = check_commutative_symmetric(algebra, tol)
    checks.append(
        CheckResult(
            "commutative_symmetric",
            cs.commutative == cs.symmetric_bimodule,
            max(cs.commutator_residual, cs.symmetry_residual)
            if cs.commutative != cs.symmetric_bimodule
            else 0.0,
            detail=f"commutative={cs.commutative} symmetric_bimodule={cs.symmetric_bimodule}",
        )
    )

    ov = check_odd_symmetry(algebra, samples, seed + 5, tol)
    if ov.absent:
        checks.append(
            CheckResult(
                "odd_symmetry", True, 0.0, detail="odd generator absent; existence unknown"
            )
        )
    else:
        detail = "; ".join(ov.failures) if ov.failures else None
        checks.append(
            CheckResult(
                "odd_symmetry",
                bool(ov.exists and ov.isometric),
                ov.max_residual,
                detail=detail,
            )
        )

    passed = all(c.passed for c in checks)
    print(f"verify: {cfg.input_path}")
    _print_checks(checks)
    print("all checks passed" if passed else "CHECKS FAILED")
    report = {
        "command": "verify",
        "tol": tol,
        "seed": seed,
        "samples": samples,
        "checks": [c.to_dict() for c in checks],
        "passed": passed,
    }
    _dump_json(report, cfg.output_path)
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def run_spectrum(cfg: RunConfig) -> int:
    """Spectral-theorem suite; exit 3 when a hypothesis fails."""
    try:
        algebra = _load_algebra(cfg)
    except (InstanceFormatError, AlgebraValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT

    try:
        report = verify_spectral_theorem(algebra, cfg.samples, cfg.seed, cfg.tol)
    except SpectralHypothesisError as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        _dump_json(
            {
                "command": "spectrum",
                "error": {"hypothesis": exc.hypothesis, "message": str(exc)},
            },
            cfg.output_path,
        )
        return EXIT_HYPOTHESIS

    print(f"spectrum: {cfg.input_path}")
    print(f"  spectrum size {report.spectrum_size}, transform rank {report.transform_rank}")
    _print_checks(report.checks)
    print("spectral theorem verified" if report.passed else "CHECKS FAILED")
    data = report.to_dict()
    data["command"] = "spectrum"
    data["tol"] = cfg.tol
    _dump_json(data, cfg.output_path)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def run_gen(cfg: RunConfig) -> int:
    """Write an instance file; identical seeds give identical bytes."""
    if cfg.conjugate:
        base = build_function_algebra(cfg.points, tol=cfg.tol)
        rng = np.random.default_rng(cfg.seed)
        Q = random_unitary(base.ambient_dim, rng)
        data = algebra_to_instance_dict(conjugate_algebra(base, Q))
    else:
        data = function_algebra_instance(cfg.points)
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    cfg.output_path.write_text(text)
    print(f"wrote {cfg.output_path}")
    return EXIT_OK


def run_counterexample(cfg: RunConfig) -> int:
    """Sweep the deformed family over the theta grid, both signs.

    Expected landscape: every theta != 0 cell fails at least one axiom, the
    explicit witness breaks submultiplicativity at theta = pi by the factor
    sqrt(2), the sign +1 twin of theta = 0 fails the Krein identity, and
    (theta = 0, sign -1) is the unique fully passing cell.  Exit 1 when the
    computed landscape does not match.
    """
    cells = []
    passing = []
    pi_cells = []
    for j in range(cfg.grid):
        theta = 2.0 * math.pi * j / cfg.grid
        for sign in (1, -1):
            alg = kalgebra.DeformedAlgebra(theta, sign)
            verdict = kalgebra.deformed_check(alg, cfg.samples, cfg.seed)
            cell = {
                "theta_index": j,
                "theta": theta,
                "sign": sign,
                "is_banach": verdict.is_banach,
                "is_krein": verdict.is_krein,
                "norm_discrepancy": verdict.norm_discrepancy,
            }
            if verdict.witness is not None:
                wit = verdict.witness
                cell["witness"] = {
                    "check": wit.check,
                    "x": [[wit.x[0].real, wit.x[0].imag], [wit.x[1].real, wit.x[1].imag]],
                    "y": [[wit.y[0].real, wit.y[0].imag], [wit.y[1].real, wit.y[1].imag]],
                    "lhs": wit.lhs,
                    "rhs": wit.rhs,
                    "ratio": wit.lhs / wit.rhs if wit.rhs else float("inf"),
                }
            cells.append(cell)
            if verdict.is_banach and verdict.is_krein:
                passing.append((j, sign))
            if j == cfg.grid // 2:
                pi_cells.append((sign, verdict))

    unique_pass = passing == [(0, -1)]
    pi_flagged = all(
        not v.is_banach
        and v.witness is not None
        and v.witness.check == "submultiplicative"
        and abs(v.witness.lhs / v.witness.rhs - math.sqrt(2.0)) <= 1e-9
        for _, v in pi_cells
    )
    ok = unique_pass and pi_flagged

    print(f"counterexample sweep: {cfg.grid} theta points x 2 signs")
    print(f"  cells passing Banach and Krein checks: {passing}")
    for sign, v in pi_cells:
        w = v.witness
        ratio = w.lhs / w.rhs if w is not None and w.rhs else float("nan")
        print(
            f"  theta=pi sign={sign:+d}: is_banach={v.is_banach}, "
            f"witness ratio {ratio:.12f} (expected sqrt(2) = {math.sqrt(2):.12f})"
        )
    print("landscape as expected" if ok else "LANDSCAPE MISMATCH")

    report = {
        "command": "counterexample",
        "grid": cfg.grid,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "cells": cells,
        "passing_cells": [list(p) for p in passing],
        "unique_pass_at_theta0_minus": unique_pass,
        "pi_flagged_non_banach": pi_flagged,
    }
    _dump_json(report, cfg.output_path)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kreinalg",
        description="Verify finite-dimensional Krein C*-algebra constructions numerically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
        p.add_argument("--seed", type=int, default=42, help="RNG seed")
        p.add_argument("--samples", type=int, default=100, help="random samples per check")

    p = sub.add_parser("verify", help="run axiom checks on an instance file")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--report", type=Path, default=None, help="write the JSON report here")
    common(p)

    p = sub.add_parser("spectrum", help="run the spectral-theorem suite on an instance file")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--report", type=Path, default=None)
    common(p)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--points", required=True, type=int, help="number of points")
    p.add_argument(
        "--conjugate",
        action="store_true",
        help="conjugate by a seeded random unitary and emit the matrix form",
    )
    p.add_argument("--out", required=True, type=Path)
    common(p)

    p = sub.add_parser("counterexample", help="sweep the deformed family over a theta grid")
    p.add_argument("--grid", type=int, default=64, help="theta grid size (even)")
    p.add_argument("--report", type=Path, default=None)
    common(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        input_path=getattr(ns, "input", None),
        output_path=getattr(ns, "report", None) or getattr(ns, "out", None),
        tol=ns.tol,
        seed=ns.seed,
        samples=ns.samples,
        points=getattr(ns, "points", 2),
        conjugate=getattr(ns, "conjugate", False),
        grid=getattr(ns, "grid", 64),
    )


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns).validated()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    runner = {
        "verify": run_verify,
        "spectrum": run_spectrum,
        "gen": run_gen,
        "counterexample": run_counterexample,
    }[cfg.command]
    return runner(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
