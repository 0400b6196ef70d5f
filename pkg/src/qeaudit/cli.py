"""Command-line front end and file formats.

Matrix files are JSON documents ``{"dims": [d1, ..., dN], "entries": [[re,
im], ...]}`` with row-major entries of length (d1*...*dN)^2. Floats are
serialized with Python's shortest round-trip repr, so a state written and
read back is bit-identical.

Exit codes: 0 = certificate/sweep passed, 1 = a certificate failed,
2 = invalid input (parse or validation error). The ``QE_AUDIT_TOL``
environment variable overrides the default certificate tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import certificates as certs
from . import harness
from .errors import AuditError
from .linalg import frobenius_norm
from .states import (
    Block,
    BlockSpec,
    DensityMatrix,
    equality_family,
    marginal,
    slater_pair,
    validate_density,
)

TOLERANCE_ENV = "QE_AUDIT_TOL"
SLATER_N_MAX = 11

VERIFY_CHECKS_ONE = ("subadditivity", "multipartite")
VERIFY_CHECKS_TWO = ("divergence_bounds", "monotonicity")


def default_tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    return float(raw) if raw else certs.DEFAULT_TOLERANCE


# ---------------------------------------------------------------------------
# Matrix files and canonical JSON
# ---------------------------------------------------------------------------

def _sanitize(obj):
    """Replace non-finite floats by strings so output is portable JSON."""
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {key: _sanitize(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(value) for value in obj]
    return obj


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, lossless floats, trailing newline."""
    return json.dumps(_sanitize(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def matrix_payload(m: np.ndarray, dims) -> dict:
    entries = [[float(z.real), float(z.imag)] for z in np.asarray(m, dtype=complex).ravel()]
    return {"dims": [int(d) for d in dims], "entries": entries}


def save_matrix(path, m: np.ndarray, dims) -> None:
    write_atomic(path, canonical_json(matrix_payload(m, dims)))


def load_matrix(path) -> tuple[np.ndarray, tuple[int, ...]]:
    """Parse a matrix file; raises ValueError on malformed documents."""
    with open(path) as handle:
        data = json.load(handle)
    if not isinstance(data, dict) or "dims" not in data or "entries" not in data:
        raise ValueError(f"{path}: expected an object with 'dims' and 'entries'")
    dims = tuple(int(d) for d in data["dims"])
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"{path}: dims must be positive integers, got {dims}")
    total = math.prod(dims)
    entries = data["entries"]
    if len(entries) != total * total:
        raise ValueError(
            f"{path}: expected {total * total} entries for dims {dims}, got {len(entries)}"
        )
    flat = np.empty(total * total, dtype=complex)
    for k, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"{path}: entry {k} is not an [re, im] pair")
        flat[k] = complex(float(pair[0]), float(pair[1]))
    return flat.reshape(total, total), dims


def load_state(path) -> tuple[DensityMatrix, tuple[int, ...]]:
    m, dims = load_matrix(path)
    return validate_density(m), dims


# ---------------------------------------------------------------------------
# Payloads for certificates and reports
# ---------------------------------------------------------------------------

def certificate_payload(cert: certs.Certificate) -> dict:
    return {
        "schema": "qeaudit-certificate-v1",
        "name": cert.name,
        "lhs": cert.lhs,
        "bounds": dict(cert.bounds),
        "slacks": dict(cert.slacks),
        "residuals": dict(cert.residuals),
        "residual_limits": dict(cert.residual_limits),
        "tolerance": cert.tolerance,
        "verdict": cert.verdict,
        "flags": list(cert.flags),
    }


def report_payload(report: harness.Report) -> dict:
    cfg = report.config
    return {
        "schema": "qeaudit-report-v1",
        "config": {
            "checks": list(cfg.checks),
            "dims": [list(shape) for shape in cfg.dims],
            "trials": cfg.trials,
            "seed": cfg.seed,
            "eps_mix": cfg.eps_mix,
            "tolerance": cfg.tolerance,
        },
        "rows": [
            {
                "check": row.check,
                "shape": list(row.shape),
                "count": row.count,
                "failures": row.failures,
                "errors": row.errors,
                "min_slack": row.min_slack,
                "max_residual": row.max_residual,
                "worst_trial": row.worst_trial,
                "worst_seed": row.worst_seed,
                "details": dict(row.details),
            }
            for row in report.rows
        ],
        "totals": {
            "count": report.total_count,
            "failures": report.total_failures,
            "errors": report.total_errors,
        },
    }


def print_certificate(cert: certs.Certificate) -> None:
    print(f"certificate {cert.name}: {cert.verdict}")
    print(f"  lhs = {cert.lhs:.12g}")
    for label, value in cert.bounds.items():
        print(f"  bound {label:<20} = {value:<22.12g} slack = {cert.slacks[label]:.3e}")
    for label, value in cert.residuals.items():
        limit = cert.residual_limits.get(label)
        suffix = f" (limit {limit:g})" if limit is not None else ""
        print(f"  residual {label:<17} = {value:.3e}{suffix}")
    if cert.flags:
        print(f"  flags: {', '.join(cert.flags)}")


def print_report(report: harness.Report) -> None:
    header = (
        f"{'check':<18} {'shape':<10} {'trials':>6} {'fail':>5} {'err':>4} "
        f"{'min slack':>13} {'max residual':>13} {'worst trial':>12}"
    )
    print(header)
    print("-" * len(header))
    for row in report.rows:
        shape = "x".join(str(d) for d in row.shape)
        slack = f"{row.min_slack:.3e}" if row.min_slack is not None else "-"
        residual = f"{row.max_residual:.3e}" if row.max_residual is not None else "-"
        worst = str(row.worst_trial) if row.worst_trial is not None else "-"
        print(
            f"{row.check:<18} {shape:<10} {row.count:>6} {row.failures:>5} "
            f"{row.errors:>4} {slack:>13} {residual:>13} {worst:>12}"
        )
    print(
        f"totals: {report.total_count} certificates, {report.total_failures} failures, "
        f"{report.total_errors} errors ({report.wall_time_s:.2f} s)"
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    tolerance = default_tolerance()
    check = args.check.replace("-", "_")
    paths = args.inputs
    if check in VERIFY_CHECKS_ONE:
        if len(paths) != 1:
            raise ValueError(f"check {check} takes exactly one matrix file")
        state, dims = load_state(paths[0])
        if check == "subadditivity":
            cert = certs.subadditivity_certificate(state, dims, tolerance)
        else:
            cert = certs.multipartite_certificate(state, dims, tolerance)
    elif check in VERIFY_CHECKS_TWO:
        if len(paths) != 2:
            raise ValueError(f"check {check} takes exactly two matrix files")
        state_a, dims_a = load_state(paths[0])
        state_b, dims_b = load_state(paths[1])
        if dims_a != dims_b:
            raise ValueError(f"file shapes differ: {dims_a} vs {dims_b}")
        if check == "divergence_bounds":
            cert = certs.divergence_bounds_certificate(state_a, state_b, tolerance)
        else:
            cert = certs.monotonicity_certificate(state_a, state_b, dims_a, tolerance)
    else:
        known = ", ".join(VERIFY_CHECKS_ONE + VERIFY_CHECKS_TWO)
        raise ValueError(f"unknown check {args.check!r}; known: {known}")

    if args.json:
        print(canonical_json(certificate_payload(cert)), end="")
    else:
        print_certificate(cert)
    return 0 if cert.passed else 1


def cmd_slater(args) -> int:
    n = args.n
    if not 2 <= n <= SLATER_N_MAX:
        raise ValueError(f"n must lie in [2, {SLATER_N_MAX}], got {n}")
    rho, sigma, dims = slater_pair(n)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        save_matrix(out / "rho.json", rho.matrix, dims)
        save_matrix(out / "sigma.json", sigma.matrix, dims)
    row = harness.slater_row(n)
    if args.json:
        print(canonical_json({"n": n, **row.details, "failures": row.failures}), end="")
    else:
        d = row.details
        print(f"{'n':>3} {'D(rho||sigma)':>15} {'trace dist':>12} {'overlap':>10} "
              f"{'renyi':>12} {'pinsker':>12} {'hs':>12}")
        print(f"{n:>3} {d['relative_entropy']:>15.9f} {d['trace_distance']:>12.9f} "
              f"{d['overlap']:>10.6f} {d['renyi_bound']:>12.9f} "
              f"{d['pinsker_bound']:>12.9f} {d['hs_bound']:>12.9f}")
        if args.out:
            print(f"wrote rho.json, sigma.json to {args.out}")
    return 0 if row.failures == 0 else 1


def _parse_dims(text: str) -> tuple[tuple[int, ...], ...]:
    shapes = []
    for part in text.split(","):
        dims = tuple(int(d) for d in part.lower().split("x"))
        shapes.append(dims)
    return tuple(shapes)


def cmd_sweep(args) -> int:
    config = harness.SweepConfig(
        checks=tuple(args.checks.split(",")) if args.checks else harness.DEFAULT_CHECKS,
        dims=_parse_dims(args.dims) if args.dims else harness.DEFAULT_DIMS,
        trials=args.trials,
        seed=args.seed,
        eps_mix=args.eps_mix,
        tolerance=default_tolerance(),
    )
    report = harness.run_sweep(config)
    if args.report:
        write_atomic(args.report, canonical_json(report_payload(report)))
    if args.json:
        print(canonical_json(report_payload(report)), end="")
    else:
        print_report(report)
    if report.total_failures > 0:
        worst = [
            f"{row.check}@{'x'.join(map(str, row.shape))}: trial {row.worst_trial} "
            f"(seed {row.worst_seed})"
            for row in report.rows
            if row.failures > 0
        ]
        print("failures; worst cases: " + "; ".join(worst), file=sys.stderr)
        return 1
    return 0


def _parse_blocks(text: str) -> BlockSpec:
    blocks = []
    for part in text.split(";"):
        fields = part.split(",")
        if len(fields) != 4:
            raise ValueError(
                f"block {part!r} must be weight_q,weight_r,left_dim,right_dim"
            )
        blocks.append(
            Block(
                weight_q=float(fields[0]),
                weight_r=float(fields[1]),
                left_dim=int(fields[2]),
                right_dim=int(fields[3]),
            )
        )
    return BlockSpec(tuple(blocks))


def cmd_equality_family(args) -> int:
    spec = _parse_blocks(args.blocks)
    rho12, sigma12, dims = equality_family(spec, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_matrix(out / "rho12.json", rho12.matrix, dims)
    save_matrix(out / "sigma12.json", sigma12.matrix, dims)
    cert = certs.monotonicity_certificate(rho12, sigma12, dims, default_tolerance())
    petz_residual = certs.petz_equality_residual(rho12, sigma12, dims)
    if args.json:
        payload = certificate_payload(cert)
        payload["petz_residual"] = petz_residual
        print(canonical_json(payload), end="")
    else:
        print_certificate(cert)
        print(f"  petz residual = {petz_residual:.3e}")
        print(f"wrote rho12.json, sigma12.json to {args.out}")
    return 0 if cert.passed else 1


def cmd_petz_check(args) -> int:
    tolerance = default_tolerance()
    rho12, dims = load_state(args.rho12)
    if len(dims) != 2:
        raise ValueError(f"petz-check needs a bipartite state file, got dims {dims}")
    rho1 = marginal(rho12, dims, [0])
    recovered = certs.petz_recovery(rho12, dims, rho1)
    recovery_residual = frobenius_norm(recovered.matrix - rho12.matrix)
    ok = recovery_residual <= certs.RECOVERY_TOL
    results = {"recovery_residual": recovery_residual}
    if args.sigma12:
        sigma12, dims_b = load_state(args.sigma12)
        if dims_b != dims:
            raise ValueError(f"file shapes differ: {dims} vs {dims_b}")
        petz_residual = certs.petz_equality_residual(rho12, sigma12, dims)
        results["petz_residual"] = petz_residual
        ok = ok and petz_residual <= tolerance
    if args.json:
        print(canonical_json({**results, "verdict": "pass" if ok else "fail"}), end="")
    else:
        print(f"recovery residual ||T(rho_1) - rho_12||_F = {recovery_residual:.3e}")
        if "petz_residual" in results:
            print(f"petz residual Tr[(T(sigma_1) - sigma_12)^2] = {results['petz_residual']:.3e}")
        print(f"verdict: {'pass' if ok else 'fail'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qeaudit",
        description="Compute and certify quantum entropy inequalities on density matrix files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run one certificate on matrix files")
    p_verify.add_argument("inputs", nargs="+", help="one or two matrix files")
    p_verify.add_argument("--check", required=True,
                          help="subadditivity | multipartite | divergence_bounds | monotonicity")
    p_verify.add_argument("--json", action="store_true", help="emit the certificate as JSON")
    p_verify.set_defaults(func=cmd_verify)

    p_slater = sub.add_parser("slater", help="closed-form antisymmetric pair and its bounds")
    p_slater.add_argument("--n", type=int, required=True, help=f"levels, 2..{SLATER_N_MAX}")
    p_slater.add_argument("--out", help="directory for rho.json / sigma.json")
    p_slater.add_argument("--json", action="store_true")
    p_slater.set_defaults(func=cmd_slater)

    p_sweep = sub.add_parser("sweep", help="randomized certificate sweep")
    p_sweep.add_argument("--checks", help="comma-separated check names (default: all)")
    p_sweep.add_argument("--dims", help="comma-separated shapes like 2x2,2x3,3x3,2x2x2")
    p_sweep.add_argument("--trials", type=int, default=harness.DEFAULT_TRIALS)
    p_sweep.add_argument("--seed", type=int, default=harness.DEFAULT_SEED)
    p_sweep.add_argument("--eps-mix", type=float, default=1e-6, dest="eps_mix")
    p_sweep.add_argument("--report", help="write the report JSON here (atomically)")
    p_sweep.add_argument("--json", action="store_true", help="emit the report JSON on stdout")
    p_sweep.set_defaults(func=cmd_sweep)

    p_eq = sub.add_parser("equality-family",
                          help="generate a pair saturating monotonicity and certify it")
    p_eq.add_argument("--blocks", required=True,
                      help="semicolon-separated blocks: weight_q,weight_r,left_dim,right_dim")
    p_eq.add_argument("--seed", type=int, default=0)
    p_eq.add_argument("--out", required=True, help="directory for rho12.json / sigma12.json")
    p_eq.add_argument("--json", action="store_true")
    p_eq.set_defaults(func=cmd_equality_family)

    p_petz = sub.add_parser("petz-check", help="recovery-map consistency checks")
    p_petz.add_argument("rho12", help="bipartite state file defining the recovery map")
    p_petz.add_argument("sigma12", nargs="?", default=None,
                        help="optional second state; checks recovery of its marginal")
    p_petz.add_argument("--json", action="store_true")
    p_petz.set_defaults(func=cmd_petz_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
