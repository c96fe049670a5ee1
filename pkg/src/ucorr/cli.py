"""Command-line surface.

Subcommands: ``embezzle`` (per-r convergence tables), ``norm`` (cross-norm
bounds for a matrix), ``qmax-cert`` (positivity certificate), ``nsb``
(non-signalling box checks) and ``report`` (the one-shot reproduction
document).  Exit codes: 0 success, 1 an invariant violation was detected,
2 usage or input error.  Every command honors --seed; numeric output uses
17 significant digits so reruns with the same seed are byte-identical.
The UCORR_THREADS environment variable caps worker threads in the norm
search routines.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import nnls

from . import _io, embezzle, linalg, norms, nsbox, qmaxcert
from .correlation import compress, phase_twirl, validate

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2

REPORT_PAIRS = ((2, 2), (2, 3), (3, 3))


class UsageError(Exception):
    pass


class InvariantViolation(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 2
    m: int = 2
    r_values: list[int] = field(default_factory=lambda: [1])
    seed: int = 0
    tol: float = 1e-10
    out: str | None = None
    fmt: str = "json"
    dense: bool = False
    target_path: str | None = None
    alpha_inline: str | None = None
    preset: str | None = None
    matrix_path: str | None = None
    box_path: str | None = None
    restarts: int = norms.DEFAULT_RESTARTS
    unitaries: int = 64

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.fmt not in ("json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")


def _parse_r(spec: str) -> list[int]:
    try:
        if ":" in spec:
            lo, hi = spec.split(":", 1)
            lo, hi = int(lo), int(hi)
            if lo < 1 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        r = int(spec)
        if r < 1:
            raise ValueError
        return [r]
    except ValueError:
        raise UsageError(f"bad --r value {spec!r}; use an integer >= 1 or lo:hi") from None


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _resolve_target(cfg: RunConfig) -> np.ndarray:
    n, m = cfg.n, cfg.m
    if cfg.target_path:
        obj = _load_json(cfg.target_path)
        try:
            vec = _io.vector_from_obj(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad vector file {cfg.target_path}: {exc}") from exc
        return vec
    if cfg.alpha_inline:
        try:
            vec = np.array([complex(tok) for tok in cfg.alpha_inline.split(",")])
        except ValueError as exc:
            raise UsageError(f"bad --alpha entries: {exc}") from exc
        return vec
    preset = cfg.preset or "max-entangled"
    if preset == "max-entangled":
        k = min(n, m)
        vec = np.zeros(n * m, dtype=complex)
        for i in range(k):
            vec[i * m + i] = 1.0 / math.sqrt(k)
        return vec
    if preset == "anchor":
        vec = np.zeros(n * m, dtype=complex)
        vec[0] = 1.0
        return vec
    raise UsageError(f"unknown preset {preset!r}")


def _emit(cfg: RunConfig, payload: dict, csv_rows: list | None = None, csv_header: tuple | None = None) -> None:
    if cfg.fmt == "json":
        text = _io.dumps_canonical(payload) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if csv_header:
            writer.writerow(csv_header)
        for row in csv_rows or []:
            writer.writerow(row)
        text = buf.getvalue()
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_embezzle(cfg: RunConfig) -> dict:
    """Per-r table: overlap, Frobenius distance to the limit, max off-first-column entry."""
    vec = _resolve_target(cfg)
    try:
        target = embezzle.make_target(vec, cfg.n, cfg.m)
    except ValueError as exc:
        raise UsageError(f"bad target vector: {exc}") from exc
    limit = embezzle.limit_correlation(target, cfg.n, cfg.m)
    rows = []
    for r in cfg.r_values:
        proto = embezzle.build_protocol(target, r)
        comp = embezzle.compressed_correlation(proto)
        off = comp.X.copy()
        off[:, 0] = 0.0
        row = {
            "r": r,
            "overlap": embezzle.overlap(proto),
            "frobenius_to_limit": float(np.linalg.norm(comp.X - limit.X)),
            "max_off_first_column": float(np.max(np.abs(off))),
        }
        if cfg.dense:
            try:
                dense = embezzle.dense_correlation(proto)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            closed = embezzle.closed_form_correlation(proto)
            dev = float(np.max(np.abs(dense.coords - closed.coords)))
            row["dense_deviation"] = dev
            if dev > cfg.tol:
                raise InvariantViolation(
                    f"closed form deviates from the dense oracle by {dev:.3e} at r={r}"
                )
        rows.append(row)
    payload = {
        "command": "embezzle",
        "n": cfg.n,
        "m": cfg.m,
        "seed": cfg.seed,
        "target": _io.vector_to_obj(target.alpha),
        "rows": rows,
    }
    header = ("r", "overlap", "frobenius_to_limit", "max_off_first_column")
    csv_rows = [
        (row["r"],) + tuple(_io.format_float(row[k]) for k in header[1:])
        for row in rows
    ]
    _emit(cfg, payload, csv_rows, header)
    return payload


def _load_square_matrix(cfg: RunConfig) -> np.ndarray:
    if not cfg.matrix_path:
        raise UsageError("--matrix FILE is required")
    obj = _load_json(cfg.matrix_path)
    try:
        M = _io.matrix_from_obj(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad matrix file {cfg.matrix_path}: {exc}") from exc
    d = cfg.n * cfg.m
    if M.shape != (d, d):
        raise UsageError(
            f"matrix is {M.shape[0]} x {M.shape[1]} but --n {cfg.n} --m {cfg.m} needs {d} x {d}"
        )
    return M


def cmd_norm(cfg: RunConfig) -> dict:
    """Cross-norm table plus the membership verdict for limit-pattern matrices."""
    M = _load_square_matrix(cfg)
    corr = _as_correlation(M, cfg.n, cfg.m)
    report = norms.sandwich_report(corr, seed=cfg.seed, restarts=cfg.restarts)
    verdict: dict = {"applicable": False}
    try:
        loc = norms.loc_membership(corr, pattern_tol=cfg.tol)
        verdict = {
            "applicable": True,
            "member": loc.member,
            "pi_value": loc.pi_value,
            "schmidt_coefficients": list(loc.schmidt_coefficients),
        }
    except ValueError as exc:
        verdict["reason"] = str(exc)
    payload = {
        "command": "norm",
        "n": cfg.n,
        "m": cfg.m,
        "seed": cfg.seed,
        "injective_lower": report.injective.lower,
        "operator": report.operator.lower,
        "projective_lower": report.projective.lower,
        "projective_upper": report.projective.upper,
        "ordering_ok": report.ordering_ok,
        "violations": report.violations,
        "loc_membership": verdict,
    }
    header = ("quantity", "value")
    csv_rows = [
        ("injective_lower", _io.format_float(report.injective.lower)),
        ("operator", _io.format_float(report.operator.lower)),
        ("projective_lower", _io.format_float(report.projective.lower)),
        ("projective_upper", _io.format_float(report.projective.upper)),
    ]
    _emit(cfg, payload, csv_rows, header)
    if not report.ordering_ok:
        raise InvariantViolation("; ".join(report.violations))
    return payload


def _as_correlation(M: np.ndarray, n: int, m: int):
    from .correlation import CorrelationMatrix

    return CorrelationMatrix(n=n, m=m, X=M, claimed_class="unclassified")


def cmd_qmaxcert(cfg: RunConfig) -> dict:
    M = _load_square_matrix(cfg)
    cert = qmaxcert.certify(M, cfg.n, cfg.m)
    payload = {
        "command": "qmax-cert",
        "n": cfg.n,
        "m": cfg.m,
        "operator_norm": linalg.operator_norm(M),
        "min_eig": cert.min_eig,
        "kernel_residual": cert.kernel_residual,
        "recovery_residual": cert.recovery_residual,
        "valid": cert.valid,
    }
    header = ("quantity", "value")
    csv_rows = [(k, _io.format_float(payload[k])) for k in ("operator_norm", "min_eig", "kernel_residual", "recovery_residual")]
    _emit(cfg, payload, csv_rows, header)
    return payload


def cmd_nsb(cfg: RunConfig) -> dict:
    if cfg.box_path:
        obj = _load_json(cfg.box_path)
        try:
            p = np.array(obj["p"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad box file {cfg.box_path}: {exc}") from exc
    elif cfg.preset == "uniform":
        p = nsbox.uniform_box(cfg.n, cfg.m).p
    else:
        p = nsbox.pr_box().p
    try:
        ok, report = nsbox.is_nonsignalling(p, tol=cfg.tol if cfg.tol < 1e-6 else nsbox.NS_TOL)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    payload = {"command": "nsb", "check": report}
    if ok:
        box = nsbox.NSBox(n=report["n"], m=report["m"], p=p)
        func = nsbox.to_functional(box)
        back = nsbox.from_functional(func)
        dist, _ = nsbox.local_hull_fit(box)
        payload.update(
            {
                "unit": func.unit,
                "roundtrip_exact": bool(np.array_equal(back.p, box.p)),
                "local_hull_distance": dist,
            }
        )
    header = ("condition", "ok")
    csv_rows = [(v["condition"], "fail") for v in report["violations"]] or [("all", "pass")]
    _emit(cfg, payload, csv_rows, header)
    if not ok:
        raise InvariantViolation(
            f"box violates {report['violations'][0]['condition']} "
            f"by {report['violations'][0]['residual']:.3e}"
        )
    return payload


def _convex_unitary_fit(X: np.ndarray, count: int, rng: np.random.Generator, weight: float = 1e4) -> float:
    """Best Frobenius distance from X to convex combinations of sampled unitaries."""
    dim = X.shape[0]
    cols = []
    for _ in range(count):
        W = linalg.haar_unitary(dim, rng)
        v = W.reshape(-1)
        cols.append(np.concatenate([v.real, v.imag]))
    V = np.stack(cols, axis=1)
    target = np.concatenate([X.reshape(-1).real, X.reshape(-1).imag])
    A = np.vstack([V, weight * np.ones((1, V.shape[1]))])
    b = np.concatenate([target, [weight]])
    w, _ = nnls(A, b)
    s = w.sum()
    if s > 0:
        w = w / s
    return float(np.linalg.norm(V @ w - target))


def _pair_report(n: int, m: int, seed: int, r_values: list[int], cert_count: int, unitaries: int) -> dict:
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, m]))
    k = min(n, m)
    alpha = np.zeros(n * m, dtype=complex)
    for i in range(k):
        alpha[i * m + i] = 1.0 / math.sqrt(k)
    target = embezzle.make_target(alpha, n, m)
    limit = embezzle.limit_correlation(target, n, m)

    rows = []
    for r in r_values:
        proto = embezzle.build_protocol(target, r)
        comp = embezzle.compressed_correlation(proto)
        off = comp.X.copy()
        off[:, 0] = 0.0
        rows.append(
            {
                "r": r,
                "overlap": embezzle.overlap(proto),
                "frobenius_to_limit": float(np.linalg.norm(comp.X - limit.X)),
                "max_off_first_column": float(np.max(np.abs(off))),
            }
        )

    loc = norms.loc_membership(limit)

    worst_eig = 0.0
    worst_kernel = 0.0
    worst_recovery = 0.0
    for _ in range(cert_count):
        X = linalg.random_contraction(n * m, rng)
        cert = qmaxcert.certify(X, n, m)
        worst_eig = max(worst_eig, max(0.0, -cert.min_eig))
        worst_kernel = max(worst_kernel, cert.kernel_residual)
        worst_recovery = max(worst_recovery, cert.recovery_residual)

    svals = linalg.singular_values(limit.X)
    fit = _convex_unitary_fit(limit.X, unitaries, rng)
    evidence = {
        "operator_norm": float(svals[0]),
        "min_singular_value": float(svals[-1]),
        "is_unitary": bool(svals[-1] > 1.0 - 1e-9),
        "sampled_unitaries": unitaries,
        "convex_fit_distance": fit,
    }

    return {
        "n": n,
        "m": m,
        "embezzlement": {"rows": rows},
        "loc_separation": {
            "pi_value": loc.pi_value,
            "expected": math.sqrt(k),
            "member": loc.member,
        },
        "certificates": {
            "count": cert_count,
            "max_abs_min_eig_defect": worst_eig,
            "max_kernel_residual": worst_kernel,
            "max_recovery_residual": worst_recovery,
        },
        "extreme_point_evidence": evidence,
    }


def cmd_report(cfg: RunConfig) -> dict:
    """Regenerate every desk-scale result; writes report.json and report.csv."""
    pairs = [
        _pair_report(n, m, cfg.seed, cfg.r_values, cert_count=20, unitaries=cfg.unitaries)
        for n, m in REPORT_PAIRS
    ]

    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 999]))
    pr = nsbox.pr_box()
    pr_ok, _ = nsbox.is_nonsignalling(pr.p)
    pr_dist, _ = nsbox.local_hull_fit(pr)
    dets = nsbox.deterministic_boxes(2, 2)
    mix_pass = 0
    roundtrip = True
    for _ in range(20):
        lam = rng.dirichlet(np.ones(len(dets)))
        box = nsbox.mixture_box(lam, dets)
        ok, _ = nsbox.is_nonsignalling(box.p)
        mix_pass += int(ok)
        back = nsbox.from_functional(nsbox.to_functional(box))
        roundtrip = roundtrip and bool(np.array_equal(back.p, box.p))

    payload = {
        "seed": cfg.seed,
        "pairs": pairs,
        "nonsignalling": {
            "pr_box_passes": bool(pr_ok),
            "pr_box_local_distance": pr_dist,
            "mixture_boxes_pass": mix_pass,
            "roundtrip_exact": roundtrip,
        },
    }

    out_dir = Path(cfg.out) if cfg.out else Path("ucorr_report")
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "report.json"
    csv_path = out_dir / "report.csv"
    json_path.write_text(_io.dumps_canonical(payload) + "\n", encoding="utf-8")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("n", "m", "r", "overlap", "frobenius_to_limit", "max_off_first_column"))
        for pair in pairs:
            for row in pair["embezzlement"]["rows"]:
                writer.writerow(
                    (
                        pair["n"],
                        pair["m"],
                        row["r"],
                        _io.format_float(row["overlap"]),
                        _io.format_float(row["frobenius_to_limit"]),
                        _io.format_float(row["max_off_first_column"]),
                    )
                )
    sys.stdout.write(f"wrote {json_path} and {csv_path}\n")
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ucorr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--n", type=int, default=2)
        p.add_argument("--m", type=int, default=2)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("embezzle", help="per-r protocol convergence table")
    common(p)
    p.add_argument("--r", type=str, default="1:12", help="step count or inclusive range lo:hi")
    p.add_argument("--target", type=str, default=None, help="JSON vector file")
    p.add_argument("--alpha", type=str, default=None, help="inline comma-separated complex entries")
    p.add_argument("--preset", choices=("max-entangled", "anchor"), default=None)
    p.add_argument("--dense", action="store_true", help="cross-check against the dense oracle")

    p = sub.add_parser("norm", help="cross-norm bounds for an nm x nm matrix")
    common(p)
    p.add_argument("--matrix", type=str, required=True, help="JSON matrix file")
    p.add_argument("--restarts", type=int, default=norms.DEFAULT_RESTARTS)

    p = sub.add_parser("qmax-cert", help="operator-norm ball membership certificate")
    common(p)
    p.add_argument("--matrix", type=str, required=True, help="JSON matrix file")

    p = sub.add_parser("nsb", help="non-signalling box checks")
    common(p)
    p.add_argument("--box", type=str, default=None, help="JSON box file with key 'p'")
    p.add_argument("--preset", choices=("pr", "uniform"), default="pr")

    p = sub.add_parser("report", help="one-shot reproduction document (JSON + CSV)")
    common(p)
    p.add_argument("--r", type=str, default="1:12")
    p.add_argument("--unitaries", type=int, default=64)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        n=args.n,
        m=args.m,
        seed=args.seed,
        tol=args.tol,
        out=args.out,
        fmt=args.fmt,
    )
    if hasattr(args, "r"):
        cfg.r_values = _parse_r(args.r)
    if getattr(args, "dense", False):
        cfg.dense = True
    cfg.target_path = getattr(args, "target", None)
    cfg.alpha_inline = getattr(args, "alpha", None)
    cfg.preset = getattr(args, "preset", None)
    cfg.matrix_path = getattr(args, "matrix", None)
    cfg.box_path = getattr(args, "box", None)
    cfg.restarts = getattr(args, "restarts", norms.DEFAULT_RESTARTS)
    cfg.unitaries = getattr(args, "unitaries", 64)
    return cfg


COMMANDS = {
    "embezzle": cmd_embezzle,
    "norm": cmd_norm,
    "qmax-cert": cmd_qmaxcert,
    "nsb": cmd_nsb,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        COMMANDS[cfg.command](cfg)
        return EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
