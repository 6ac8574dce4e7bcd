"""Command line front end.

Subcommands:
  verify    run an exact-identity or property suite, emit a JSON report
  sweep     per-stage bound-versus-achieved table over a range of m, CSV
  theorem   full construction run; writes report.json, stages.csv, f_E.csv

Exit codes: 0 all certifications pass, 1 a certification failed, 2 usage or
configuration error. Reports are deterministic for a fixed (config, seed,
timestamp); floats in CSV are printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidInputError, SchurCommError, SizeLimitError
from .funcs import build_damped_abs, build_slow_growth, power_function, smooth_step, verify_c1
from .construct import build_model_matrices, commutator_ba, make_tensor_lift, verify_intertwining, verify_norm_sandwich
from .pipeline import (
    PipelineConfig,
    build_stage,
    check_commutator_bounds,
    construction_schedule,
    run_construction,
    sqrt_log_growth,
)
from .schur import DiagonalOperator, verify_schur_commutator_identity
from .symnorm import (
    kyfan,
    lorentz,
    orlicz_exp,
    schatten,
    singular_values,
    spec_from_json,
    spec_to_json,
    symmetric_norm,
    verify_norm_axioms,
)

FLOAT_FMT = ".17g"


def _fmt(x) -> str:
    return format(float(x), FLOAT_FMT)


def parse_space(text: str):
    """Parse compact space syntax: schatten:p | kyfan:k | lorentz:w1,w2,... |
    orlicz:power:p | orlicz:exp. schatten accepts 'inf'."""
    parts = text.split(":")
    kind = parts[0]
    try:
        if kind == "schatten" and len(parts) == 2:
            return schatten(math.inf if parts[1] == "inf" else float(parts[1]))
        if kind == "kyfan" and len(parts) == 2:
            return kyfan(int(parts[1]))
        if kind == "lorentz" and len(parts) == 2:
            return lorentz([float(w) for w in parts[1].split(",")])
        if kind == "orlicz" and len(parts) >= 2:
            if parts[1] == "exp":
                return orlicz_exp()
            if parts[1] == "power" and len(parts) == 3:
                from .symnorm import orlicz_power

                return orlicz_power(float(parts[2]))
    except (ValueError, InvalidInputError) as exc:
        raise InvalidInputError(f"bad space {text!r}: {exc}") from exc
    raise InvalidInputError(f"unrecognized space syntax {text!r}")


def parse_range(text: str):
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
    else:
        lo = hi = int(text)
    if hi < lo:
        raise InvalidInputError(f"empty range {text!r}")
    return lo, hi


def _check(value, bound, kind, tol):
    if kind == "le":
        margin = bound - value
    elif kind == "ge":
        margin = value - bound
    else:
        margin = bound - abs(value)
    return {"pass": bool(margin >= -tol), "value": float(value), "bound": float(bound),
            "margin": float(margin), "tol": float(tol), "kind": kind}


def _timestamp(args) -> str:
    if args.timestamp is not None:
        return args.timestamp
    return datetime.now(timezone.utc).isoformat()


def _manifest(args, outcome: dict) -> dict:
    return {
        "command": " ".join(sys.argv[1:]) if sys.argv[1:] else args.cmd,
        "version": __version__,
        "timestamp": _timestamp(args),
        "seed": getattr(args, "seed", 0),
        "outcome": outcome,
    }


def _emit_json(args, payload: dict, name: str):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / name).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------

def _suite_identities(n: int, trials: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    out = {}
    worst = 0.0
    for _ in range(trials):
        size = int(rng.integers(2, n + 1))
        exponent = int(rng.integers(2, 4))
        f = power_function(exponent)
        b = DiagonalOperator(rng.uniform(-1.0, 1.0, size))
        x = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        scale = (1.0 + np.abs(f.value(b.eigenvalues)).max()) * np.linalg.norm(x)
        worst = max(worst, verify_schur_commutator_identity(f, b, x) / scale)
    out["schur_commutator_identity"] = _check(worst, 0.0, "abs", 1e-12)

    worst = 0.0
    for _ in range(max(1, trials // 4)):
        size = int(rng.integers(2, 9))
        width = int(rng.integers(1, 4))
        x0 = np.sort(rng.uniform(0.2, 1.0, width))[::-1]
        lift = make_tensor_lift(size, x0)
        f = power_function(int(rng.integers(2, 4)))
        b = DiagonalOperator(rng.uniform(-1.0, 1.0, size))
        x = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        scale = (1.0 + np.abs(f.value(b.eigenvalues)).max()) * np.linalg.norm(lift.psi(x))
        worst = max(worst, verify_intertwining(lift, f, b, x) / scale)
    out["intertwining"] = _check(worst, 0.0, "abs", 1e-12)

    bad = 0
    for _ in range(max(1, trials // 4)):
        size = int(rng.integers(2, 7))
        x = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        lift = make_tensor_lift(size, [1.0])
        ok_sup, _ = verify_norm_sandwich(lift, kyfan(1), x, 0.5, "sup")
        ok_sum, _ = verify_norm_sandwich(lift, schatten(1), x, 0.5, "sum")
        bad += (not ok_sup) + (not ok_sum)
    out["norm_sandwich"] = _check(bad, 0.0, "abs", 0.0)
    return out


def _suite_hilbert(m_hi: int) -> dict:
    values = []
    for m in range(3, m_hi + 1):
        values.append(float(singular_values(commutator_ba(build_model_matrices(m))).values[0]))
    arr = np.array(values)
    out = {
        "hilbert_bound": _check(float(arr.max()), math.pi, "le", 1e-12 * math.pi),
        "hilbert_monotone": _check(
            float(np.min(np.diff(arr))) if arr.size > 1 else 0.0, 0.0, "ge", 1e-10
        ),
    }
    return out


def _suite_norms(trials: int, seed: int) -> dict:
    shipped = [schatten(1), schatten(2), schatten(math.inf), kyfan(3), lorentz([1.0, 0.5, 0.25]), orlicz_exp()]
    out = {}
    for spec in shipped:
        rep = verify_norm_axioms(spec, trials, seed)
        out[f"axioms[{spec.label}]"] = _check(len(rep.violations), 0.0, "abs", 0.0)
    return out


def _suite_functions(m_max: int = 32) -> dict:
    cfg = PipelineConfig(spec=kyfan(1), m_max=m_max)
    _, schedule = construction_schedule(cfg, m_max)
    growth = build_slow_growth(schedule)
    contrast = build_damped_abs(growth)
    out = {}
    node_vals = np.asarray(growth.value(schedule.s))
    out["envelope_nodes"] = _check(
        float(np.max(np.abs(node_vals - schedule.q) / schedule.q)), 0.0, "abs", 1e-12
    )
    grid = np.linspace(0.0, float(schedule.s[-1]) + 5.0, 10001)
    rate = np.asarray(growth.derivative(grid[1:])) / np.asarray(growth.value(grid[1:]))
    out["envelope_rate"] = _check(float(rate.max()), 1.0, "le", 1e-12)
    for eps in (0.25, 1.0, 3.0):
        step = smooth_step(eps)
        g = np.linspace(-0.5, 1.5, 10001)
        out[f"step_slope[eps={eps:g}]"] = _check(
            float(np.max(step.derivative(g))), (1.0 + eps) * (1.0 + 1e-12), "le", 0.0
        )
    t = np.linspace(1e-6, 1.0 - 1e-6, 10001)
    fp = np.asarray(contrast.derivative(t))
    cap = 2.0 / np.asarray(growth.value(np.log(t)))
    out["derivative_nonnegative"] = _check(float(fp.min()), 0.0, "ge", 1e-15)
    out["derivative_cap"] = _check(float(np.max(fp - cap)), 0.0, "le", 1e-12)
    rep = verify_c1(contrast, np.linspace(-0.9, 0.9, 2001), 1e-6)
    out["c1_certification"] = _check(len(rep.flagged), 0.0, "abs", 0.0)
    return out


def cmd_verify(args) -> int:
    suites = {}
    if args.suite in ("identities", "all"):
        suites.update(_suite_identities(args.n, args.trials, args.seed))
    if args.suite in ("hilbert", "all"):
        suites.update(_suite_hilbert(args.m))
    if args.suite in ("norms", "all"):
        suites.update(_suite_norms(min(args.trials, 200), args.seed))
    if args.suite in ("functions", "all"):
        suites.update(_suite_functions())
    payload = {"manifest": _manifest(args, suites)}
    _emit_json(args, payload, "report.json")
    return 0 if all(c["pass"] for c in suites.values()) else 1


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def cmd_sweep(args) -> int:
    lo, hi = args.m_range
    if lo < 3:
        raise InvalidInputError("sweep needs m >= 3")
    spec = parse_space(args.space)
    cfg = PipelineConfig(spec=spec, mode=args.mode, x0=np.asarray(args.x0), m_max=max(hi, 3), eps=args.eps)
    p, schedule = construction_schedule(cfg, hi)
    growth = build_slow_growth(schedule)
    contrast = build_damped_abs(growth)

    rows = []
    all_ok = True
    for m in range(lo, hi + 1):
        try:
            stage = build_stage(cfg, m, p, contrast, growth)
        except SizeLimitError as exc:
            rows.append([str(m), "", "", "", "", "skip", str(exc)])
            continue
        achieved = stage.witness.ratio
        bound = stage.lower_bound
        ok = achieved >= bound - 1e-9
        all_ok &= ok
        rows.append(
            [str(m), _fmt(stage.p), _fmt(bound), _fmt(achieved), _fmt(achieved - bound),
             "ok" if ok else "fail", ""]
        )

    header = ["m", "p", "bound", "achieved", "margin", "status", "reason"]
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        target = (outdir / "sweep.csv").open("w", newline="")
    else:
        target = sys.stdout
    writer = csv.writer(target)
    writer.writerow(header)
    writer.writerows(rows)
    if target is not sys.stdout:
        target.close()
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# theorem
# ---------------------------------------------------------------------------

DEFAULT_CONFIG = {
    "space": {"kind": "kyfan", "k": 1, "label": "kyfan(1)"},
    "mode": "sup",
    "x0": [1.0],
    "m_max": 32,
    "eps": 0.5,
}


def load_config(path) -> PipelineConfig:
    obj = dict(DEFAULT_CONFIG)
    if path:
        obj.update(json.loads(Path(path).read_text()))
    space = obj["space"]
    spec = parse_space(space) if isinstance(space, str) else spec_from_json(space)
    return PipelineConfig(
        spec=spec,
        mode=obj.get("mode", "sup"),
        x0=np.asarray(obj.get("x0", [1.0]), dtype=float),
        m_max=int(obj.get("m_max", 32)),
        eps=float(obj.get("eps", 0.5)),
        tolerances=obj.get("tolerances", {}),
    )


def cmd_theorem(args) -> int:
    cfg = load_config(args.config)
    report = run_construction(cfg)
    payload = report.to_dict()
    if args.dump_matrices:
        dumps = {}
        for st in report.stages:
            if st.size <= 16:
                dumps[str(st.m)] = {
                    "w_eigenvalues": st.w.eigenvalues.tolist(),
                    "witness_real": st.witness.test_matrix.real.tolist(),
                    "witness_imag": st.witness.test_matrix.imag.tolist(),
                }
        payload["matrices"] = dumps
    payload["manifest"] = _manifest(
        args, {"passed": payload["passed"], "stages": len(report.stages)}
    )

    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")

    with (outdir / "stages.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["m", "p", "s", "q", "w_norm", "bound", "achieved", "all_checks_pass"])
        for st in report.stages:
            writer.writerow(
                [st.m, _fmt(st.p), _fmt(st.s), _fmt(st.q), _fmt(st.w_norm),
                 _fmt(st.lower_bound), _fmt(st.witness.ratio), str(st.passed).lower()]
            )

    growth = build_slow_growth(report.schedule)
    contrast = build_damped_abs(growth)
    ts = np.linspace(-0.999, 0.999, 1999)
    with (outdir / "f_E.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value", "derivative"])
        for t in ts:
            writer.writerow([_fmt(t), _fmt(contrast.value(t)), _fmt(contrast.derivative(t))])

    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurcomm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="directory for report files")
        sp.add_argument("--tol", type=float, default=None, help="override the global relative tolerance")
        sp.add_argument("--timestamp", default=None, help="fix the manifest timestamp (reproducible reports)")

    sp = sub.add_parser("verify", help="run an identity or property suite")
    sp.add_argument("--suite", choices=["identities", "hilbert", "norms", "functions", "all"], default="all")
    sp.add_argument("--n", type=int, default=16, help="largest matrix size for random trials")
    sp.add_argument("--m", type=int, default=64, help="largest model size for the hilbert suite")
    sp.add_argument("--trials", type=int, default=200)
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("sweep", help="bound vs achieved ratio over a range of m")
    sp.add_argument("--m", dest="m_range", type=parse_range, required=True, metavar="LO..HI")
    sp.add_argument("--space", default="schatten:inf")
    sp.add_argument("--mode", choices=["sup", "sum"], default="sup")
    sp.add_argument("--x0", type=lambda s: [float(v) for v in s.split(",")], default=[1.0])
    sp.add_argument("--eps", type=float, default=0.5)
    common(sp)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("theorem", help="full construction run with report files")
    sp.add_argument("--config", default=None, help="JSON config mirroring PipelineConfig")
    sp.add_argument("--dump-matrices", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_theorem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", 1) < 1 or getattr(args, "trials", 1) < 1:
        parser.error("--n and --trials must be positive")
    if getattr(args, "m", 3) < 3:
        parser.error("--m must be at least 3")
    if args.tol is not None:
        from .config import set_option

        set_option("rel_tol", args.tol)
    try:
        return args.fn(args)
    except SchurCommError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
