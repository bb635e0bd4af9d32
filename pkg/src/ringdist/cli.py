"""Command-line surface: evaluate, verify, sample, fit, and sweep.

Every command is deterministic given its full flag set (seeds included).
Numeric CSV/JSON payloads are written with 17 significant digits so reruns
are byte-identical; the wall-clock timestamp lives only in the metadata
sidecar written next to each output file, never in the payload itself.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .approx import KL_LOG_BASE, fit_beta, kl_sweep, threshold_crossing
from .closed_form import build_pdf, eval_cdf, eval_pdf, moments
from .errors import QuadratureError, RingdistError
from .geometry import Dim, RegionPair, Scenario
from .montecarlo import GENERATOR_NAME, SampleConfig, empirical_pdf, sample_distances
from .oracle import numeric_pdf

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _common_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None,
                     help="key=value defaults file; explicit flags override")


def _region_args(sub: argparse.ArgumentParser) -> None:
    _common_args(sub)
    sub.add_argument("--dim", type=int, choices=(2, 3), required=True)
    sub.add_argument("--scenario", choices=("s1", "s2"), required=True)
    sub.add_argument("--r1", type=float, required=True)
    sub.add_argument("--r2", type=float, required=True)


def _pair(args) -> RegionPair:
    return RegionPair(dim=Dim(args.dim), r1=args.r1, r2=args.r2)


def _scenario(args) -> Scenario:
    return Scenario(args.scenario)


def _metadata(command: str, params: dict, seed=None) -> dict:
    meta = {
        "tool": "ringdist",
        "version": __version__,
        "command": command,
        "params": params,
        "generator": GENERATOR_NAME if seed is not None else None,
        "seed": seed,
        "kl_log_base": KL_LOG_BASE,
    }
    return meta


def _write_sidecar(out_path: Path, meta: dict) -> None:
    stamped = dict(meta)
    stamped["created"] = (
        datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat()
    )
    sidecar = out_path.with_name(out_path.name + ".meta.json")
    sidecar.write_text(json.dumps(stamped, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_text(out_path: Path, text: str) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(text, encoding="utf-8", newline="\n")


def _cmd_pdf(args) -> int:
    if args.grid < 2:
        raise RingdistError("--grid must be at least 2")
    pair = _pair(args)
    pdf = build_pdf(pair, _scenario(args))
    rs = np.linspace(0.0, pair.support, args.grid)
    vals = eval_pdf(pdf, rs)
    out = Path(args.out)
    params = {
        "dim": args.dim, "scenario": args.scenario, "r1": args.r1, "r2": args.r2,
        "grid": args.grid, "format": args.format,
    }
    meta = _metadata("pdf", params)
    if args.format == "csv":
        lines = ["r,pdf"] + [f"{_fmt(r)},{_fmt(v)}" for r, v in zip(rs, vals)]
        _write_text(out, "\n".join(lines) + "\n")
    else:
        payload = {
            "meta": meta,
            "support": float(pair.support),
            "points": [{"r": float(r), "pdf": float(v)} for r, v in zip(rs, vals)],
        }
        _write_text(out, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    _write_sidecar(out, meta)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.points < 1:
        raise RingdistError("--points must be at least 1")
    pair = _pair(args)
    scenario = _scenario(args)
    pdf = build_pdf(pair, scenario)
    # Midpoint grid: strictly interior, never lands on a branch breakpoint.
    rs = pair.support * (np.arange(args.points) + 0.5) / args.points
    closed = eval_pdf(pdf, rs)
    worst_dev, worst_r = -1.0, 0.0
    for r, c in zip(rs, closed):
        dev = abs(numeric_pdf(pair, scenario, float(r)) - c)
        if dev > worst_dev:
            worst_dev, worst_r = dev, float(r)
    passed = worst_dev <= args.tol
    print(
        f"verify dim={args.dim} scenario={args.scenario} r1={_fmt(args.r1)} "
        f"r2={_fmt(args.r2)} points={args.points}: "
        f"max abs deviation {worst_dev:.3e} at r={worst_r:.6g} "
        f"(tol {args.tol:.3e}) -> {'PASS' if passed else 'FAIL'}"
    )
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def _cmd_sample(args) -> int:
    pair = _pair(args)
    cfg = SampleConfig(seed=args.seed, n=args.n, bins=args.bins)
    samples = sample_distances(pair, _scenario(args), cfg.n, cfg.seed)
    hist = empirical_pdf(samples, cfg, pair.support)
    out = Path(args.out)
    lines = ["bin_lo,bin_hi,density"] + [
        f"{_fmt(lo)},{_fmt(hi)},{_fmt(d)}"
        for lo, hi, d in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.densities)
    ]
    _write_text(out, "\n".join(lines) + "\n")
    params = {
        "dim": args.dim, "scenario": args.scenario, "r1": args.r1, "r2": args.r2,
        "n": args.n, "seed": args.seed, "bins": args.bins,
    }
    _write_sidecar(out, _metadata("sample", params, seed=args.seed))
    return EXIT_OK


def _cmd_fit_beta(args) -> int:
    pair = _pair(args)
    pdf = build_pdf(pair, _scenario(args))
    p = fit_beta(pdf)
    norm_mean = moments(pdf, 1) / p.scale
    norm_var = moments(pdf, 2) / p.scale**2 - norm_mean**2
    print(
        json.dumps(
            {
                "alpha": p.alpha,
                "beta": p.beta,
                "scale": p.scale,
                "mean": norm_mean,
                "variance": norm_var,
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def _cmd_kl_sweep(args) -> int:
    if not 1.0 < args.ratio_min < args.ratio_max:
        raise RingdistError("need 1 < ratio-min < ratio-max")
    if args.step <= 0:
        raise RingdistError("--step must be positive")
    n = int(np.floor((args.ratio_max - args.ratio_min) / args.step + 1e-9)) + 1
    ratios = [args.ratio_min + i * args.step for i in range(n)]
    curve = kl_sweep(Dim(args.dim), _scenario(args), ratios)
    out = Path(args.out)
    lines = ["ratio,kl_nats"] + [
        f"{_fmt(x)},{_fmt(v)}" for x, v in zip(curve.ratios, curve.kl)
    ]
    _write_text(out, "\n".join(lines) + "\n")
    params = {
        "dim": args.dim, "scenario": args.scenario,
        "ratio_min": args.ratio_min, "ratio_max": args.ratio_max, "step": args.step,
    }
    _write_sidecar(out, _metadata("kl-sweep", params))
    crossing = threshold_crossing(curve, 1e-2)
    print(f"crossing: {'none' if crossing is None else format(crossing, '.6g')}")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringdist",
        description=(
            "Distance distributions between a node in a disk/ball and a node "
            "in the concentric annulus/spherical shell."
        ),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("pdf", help="tabulate the closed-form density on a grid")
    _region_args(p)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(run=_cmd_pdf)

    p = sub.add_parser("verify", help="compare the closed form against direct integration")
    _region_args(p)
    p.add_argument("--points", type=int, default=512)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("sample", help="draw seeded distances and write a histogram")
    _region_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--out", required=True)
    p.set_defaults(run=_cmd_sample)

    p = sub.add_parser("fit-beta", help="moment-matched beta parameters as JSON")
    _region_args(p)
    p.set_defaults(run=_cmd_fit_beta)

    p = sub.add_parser("kl-sweep", help="KL divergence of the beta fit over radius ratios")
    p.add_argument("--dim", type=int, choices=(2, 3), required=True)
    p.add_argument("--scenario", choices=("s1", "s2"), required=True)
    p.add_argument("--ratio-min", type=float, required=True)
    p.add_argument("--ratio-max", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(run=_cmd_kl_sweep)

    return parser


def _load_config(path: str) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise RingdistError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("_", "-")] = value.strip()
    return values


def _merge_config(argv: list) -> list:
    """Inject config-file values as flags for any option not given on the line."""
    if "--config" not in [a.split("=", 1)[0] for a in argv if a.startswith("--")]:
        return argv
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return argv
    given = {a[2:].split("=", 1)[0] for a in argv if a.startswith("--")}
    extra = []
    for key, value in _load_config(known.config).items():
        if key not in given and key != "config":
            extra.extend([f"--{key}", value])
    return argv + extra


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _merge_config(argv)
        args = parser.parse_args(argv)
    except RingdistError as exc:
        print(f"ringdist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.run(args)
    except QuadratureError as exc:
        print(f"ringdist: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RingdistError as exc:
        print(f"ringdist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
