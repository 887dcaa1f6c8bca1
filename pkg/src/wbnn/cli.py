"""Command-line front end: ``wbnn {learn,sweep,density,swarm,transform}``.

Every command writes a CSV table (header row, comma separated, 17 significant
digits) plus a ``<command>.manifest.json`` describing the run.  CSV content
depends only on the arguments, so reruns are byte-identical.  Exit codes:
0 ok, 1 usage error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import hashlib
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, activation, corpus
from .besov import BesovParams
from .density import risk_experiment
from .learner import DEFAULT_SWARM_OFFSETS, LearnConfig, compression_sweep, learn, swarm_learn
from .svg import line_plot
from .wavelet import SampleGrid, analyze, make_daubechies, no_wrap_j0

OUT_DIR_ENV = "WBNN_OUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(v) for v in r])
    return buf.getvalue()


def _float_list(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}")


def _inf_float(text: str) -> float:
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


class _Run:
    def __init__(self, args, command):
        self.args = args
        self.command = command
        self.out_dir = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or ".")
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.files = {}

    def write(self, name: str, text: str):
        path = self.out_dir / name
        path.write_text(text)
        self.files[name] = hashlib.sha256(text.encode()).hexdigest()

    def manifest(self, config: dict):
        data = {
            "command": self.command,
            "config": config,
            "seed": getattr(self.args, "seed", None),
            "tool_version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "outputs": self.files,
        }
        (self.out_dir / f"{self.command}.manifest.json").write_text(json.dumps(data, indent=2, default=str) + "\n")


# --------------------------------------------------------------------------
# argument helpers


def _add_common(p, target_required=True):
    p.add_argument("--target", help=f"corpus id ({', '.join(i.replace('_', '-') for i in corpus.IDS)})")
    p.add_argument("--signal", help="text/CSV file of samples (last column); power-of-two length")
    p.add_argument("--domain", help="lo,hi domain for --signal (default 0,1)")
    p.add_argument("--n", type=int, default=1024, help="grid size (power of two)")
    p.add_argument("--filter-order", type=int, default=4, help="Daubechies vanishing moments")
    p.add_argument("--j0", default="0", help="coarsest level, or 'auto' for the smallest level without periodic wrap")
    p.add_argument("--p", type=_inf_float, default=None)
    p.add_argument("--q", type=_inf_float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--svg", action="store_true", help="also write an SVG plot")


def _add_rule(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--compress", type=float, help="target compression percentage")
    g.add_argument("--delta", type=float, help="threshold on normalized coefficients")
    g.add_argument("--top-k", type=int, help="keep the k largest normalized coefficients")
    g.add_argument("--soft", type=float, help="non-threshold shrinkage parameter lambda")


def _rule(args):
    if args.compress is not None:
        if not 0 <= args.compress <= 100:
            raise UsageError("--compress must lie in [0, 100]")
        return activation.compress(args.compress)
    if args.delta is not None:
        if not args.delta > 0:
            raise UsageError("--delta must be positive")
        return activation.threshold(args.delta)
    if args.top_k is not None:
        if args.top_k < 0:
            raise UsageError("--top-k must be nonnegative")
        return activation.top_k(args.top_k)
    if args.soft is not None:
        if args.soft < 0:
            raise UsageError("--soft must be nonnegative")
        return activation.soft(args.soft)
    return activation.identity()


def _load_signal(path, domain_text):
    try:
        rows = [line.replace(",", " ").split() for line in Path(path).read_text().splitlines()]
        rows = [r for r in rows if r and not r[0].startswith("#")]
        try:
            float(rows[0][-1])
        except ValueError:
            rows = rows[1:]  # header
        values = np.array([float(r[-1]) for r in rows])
    except (OSError, ValueError, IndexError) as exc:
        raise UsageError(f"cannot read signal file {path}: {exc}")
    domain = tuple(_float_list(domain_text)) if domain_text else (0.0, 1.0)
    if len(domain) != 2 or not domain[1] > domain[0]:
        raise UsageError("--domain must be lo,hi with lo < hi")
    n = len(values)
    if n < 2 or n & (n - 1):
        raise UsageError(f"signal file must hold a power-of-two number of samples, got {n}")
    return SampleGrid(domain, values)


def _targets(args):
    """List of (name, grid, corpus entry or None)."""
    if args.signal:
        return [("signal", _load_signal(args.signal, args.domain), None)]
    if not args.target:
        raise UsageError("give --target or --signal")
    names = corpus.IDS if args.target == "all" else [args.target]
    out = []
    for name in names:
        try:
            entry = corpus.get(name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
        if args.n < 2 or args.n & (args.n - 1):
            raise UsageError(f"--n must be a power of two, got {args.n}")
        out.append((entry.id, corpus.sample(entry, args.n), entry))
    return out


def _config(args, grid, entry, rule=None) -> LearnConfig:
    if not 1 <= args.filter_order <= 10:
        raise UsageError("--filter-order must lie in [1, 10]")
    if entry is not None:
        base = corpus.register_besov(entry, args.p if args.p is not None else 2.0)
    else:
        if args.s is None:
            raise UsageError("--s is required for --signal input")
        base = BesovParams(2.0, math.inf, args.s)
    params = BesovParams(args.p if args.p is not None else base.p,
                         args.q if args.q is not None else base.q,
                         args.s if args.s is not None else base.s)
    filt = make_daubechies(args.filter_order)
    if args.j0 == "auto":
        j0 = no_wrap_j0(grid, filt)
    else:
        try:
            j0 = int(args.j0)
        except ValueError:
            raise UsageError(f"--j0 must be an integer or 'auto', got {args.j0!r}")
    return LearnConfig(params, rule or activation.identity(), args.filter_order, j0)


def _config_dict(cfg: LearnConfig) -> dict:
    b = cfg.besov
    return {"p": b.p, "q": b.q, "s": b.s, "tau": b.tau, "filter_order": cfg.filter_order,
            "j0": cfg.j0, "rule": cfg.rule.describe()}


# --------------------------------------------------------------------------
# commands


def cmd_learn(args) -> int:
    run = _Run(args, "learn")
    (name, grid, entry), = _targets(args)[:1]
    cfg = _config(args, grid, entry, _rule(args))
    rep = learn(grid, cfg)
    x = grid.x
    rows = zip(x, grid.values, rep.learned_grid.values, rep.error_profile)
    run.write("learn.csv", _csv_text(["x", "target", "learned", "abs_error"], rows))
    if args.svg:
        run.write("learn.svg", line_plot(x, [
            ("target", grid.values, "black", True),
            ("learned", rep.learned_grid.values, "red", False),
            ("error", rep.error_profile, "blue", False),
        ], title=f"{name}: {rep.compression_pct:.3f}% compression"))
    print(f"target: {name}")
    print(f"compression_pct: {rep.compression_pct:.6f}")
    print(f"kept: {rep.kept_count} of {rep.active_count}")
    print(f"mise: {rep.mise:.10g}")
    print(f"relative_mise: {rep.relative_mise():.10g}")
    print(f"sup_error: {rep.sup_error:.10g}")
    run.manifest({"target": name, "n": grid.n_samples, **_config_dict(cfg)})
    return EXIT_OK


def cmd_sweep(args) -> int:
    run = _Run(args, "sweep")
    pcts = _float_list(args.pcts)
    if any(not 0 <= p <= 100 for p in pcts):
        raise UsageError("percentages must lie in [0, 100]")
    rows, series, cfgs = [], [], {}
    for name, grid, entry in _targets(args):
        cfg = _config(args, grid, entry)
        cfgs[name] = _config_dict(cfg)
        table = compression_sweep(grid, cfg, pcts, args.normalization)
        for pct, rel, rep in table:
            rows.append((name, pct, rel, rep.mise, rep.compression_pct))
            print(f"{name:20s} {pct:7.3f}% -> relative_mise {rel:.6g}")
        series.append((name, [t[1] for t in table]))
    run.write("sweep.csv", _csv_text(["target", "pct", "relative_mise", "mise", "achieved_pct"], rows))
    if args.svg:
        colors = ["black", "blue", "green", "red"]
        run.write("sweep.svg", line_plot(pcts, [
            (n, np.log10(np.maximum(v, 1e-300)), colors[i % 4], False) for i, (n, v) in enumerate(series)
        ], title="log10 relative MISE vs compression", xlabel="compression %"))
    run.manifest({"pcts": pcts, "normalization": args.normalization, "n": args.n, "targets": cfgs})
    return EXIT_OK


def cmd_density(args) -> int:
    run = _Run(args, "density")
    name = (args.target or "sinusoidal-density").replace("-", "_")
    if name == "sinusoidal_density":
        entry = corpus.sinusoidal_density()
        pdf, domain, s = entry._formula, (-math.pi, math.pi), 0.5
    elif name == "uniform":
        pdf = lambda x: np.where((x >= 0) & (x <= 1), 1.0, 0.0)  # noqa: E731
        domain, s = (0.0, 1.0), None
    else:
        raise UsageError("density supports --target sinusoidal-density or uniform")
    if args.s is not None:
        s = args.s
    if args.reps < 2:
        raise UsageError("--reps must be >= 2")
    n_list = [2 ** k for k in range(args.log2_min, args.log2_max + 1)]
    if len(n_list) < 3:
        raise UsageError("need at least three sample sizes")
    level = None if args.level is None else args.level
    table = risk_experiment(pdf, domain, n_list, reps=args.reps, seed=args.seed, s=s, level=level)
    rows = [(n, J, m, r, table.slope_fit) for n, J, m, r in table.rows()]
    run.write("density.csv", _csv_text(["N", "level", "mean_mise", "risk", "fitted_slope"], rows))
    if args.svg:
        run.write("density.svg", line_plot(np.log2(table.n), [
            ("log10 risk", np.log10(table.risk), "red", False)], title=f"{name} risk", xlabel="log2 N"))
    lo, hi = table.slope_ci
    print(f"fitted_slope: {table.slope_fit:.6f} (95% CI {lo:.4f} .. {hi:.4f})")
    print(f"mise_slope: {table.mise_slope:.6f}")
    if s is not None:
        print(f"theoretical slope: {-s / (1 + 2 * s):.6f}")
    run.manifest({"target": name, "n_list": n_list, "reps": args.reps, "s": s, "level": args.level})
    return EXIT_OK


def cmd_swarm(args) -> int:
    run = _Run(args, "swarm")
    (name, grid, entry), = _targets(args)[:1]
    cfg = _config(args, grid, entry, _rule(args))
    offsets = _float_list(args.offsets)
    reports = swarm_learn(grid, cfg, offsets, max_workers=args.workers)
    header = ["x", "target"] + [f"learned_{i}" for i in range(len(reports))]
    cols = [grid.x, grid.values] + [r.learned_grid.values for r in reports]
    run.write("swarm.csv", _csv_text(header, zip(*cols)))
    ref = reports[offsets.index(0.0)].kept_set() if 0.0 in offsets else reports[0].kept_set()
    summary = []
    for i, (off, r) in enumerate(zip(offsets, reports)):
        ks = r.kept_set()
        summary.append((i, off, cfg.besov.s + off, r.kept_count, r.mise, len(ks & ref), r.compression_pct))
        print(f"member {i} (s{off:+g}): kept {r.kept_count}, mise {r.mise:.6g}, shared with reference {len(ks & ref)}")
    run.write("swarm_summary.csv", _csv_text(
        ["member", "s_offset", "s", "kept_count", "mise", "shared_with_reference", "compression_pct"], summary))
    if args.svg:
        colors = ["blue", "green", "red", "orange", "purple"]
        run.write("swarm.svg", line_plot(grid.x, [("target", grid.values, "black", True)] + [
            (f"s{off:+g}", r.learned_grid.values, colors[i % 5], False)
            for i, (off, r) in enumerate(zip(offsets, reports))], title=f"{name} swarm"))
    run.manifest({"target": name, "offsets": offsets, **_config_dict(cfg)})
    return EXIT_OK


def cmd_transform(args) -> int:
    run = _Run(args, "transform")
    (name, grid, entry), = _targets(args)[:1]
    filt = make_daubechies(args.filter_order)
    try:
        j0 = no_wrap_j0(grid, filt) if args.j0 == "auto" else int(args.j0)
    except ValueError:
        raise UsageError(f"--j0 must be an integer or 'auto', got {args.j0!r}")
    # a raw dump: no zero-margin requirement
    tree = analyze(grid, filt, j0, check_support=False)
    run.write("transform.csv", _csv_text(["kind", "j", "k", "coefficient"], tree.to_rows()))
    print(f"{name}: {len(tree.to_rows())} coefficients, j0={tree.j0}, J={tree.J}, active betas {tree.active_count}")
    run.manifest({"target": name, "n": grid.n_samples, "filter_order": args.filter_order, "j0": j0})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wbnn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("learn", help="learn one target and write learn.csv")
    _add_common(p)
    _add_rule(p)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("sweep", help="relative MISE over a list of compression rates")
    _add_common(p)
    p.add_argument("--pcts", default="0,50,85,98,99")
    p.add_argument("--normalization", choices=["mean_square", "energy", "none"], default="mean_square")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("density", help="Haar density estimator risk versus sample size")
    p.add_argument("--target", default="sinusoidal-density")
    p.add_argument("--log2-min", type=int, default=8)
    p.add_argument("--log2-max", type=int, default=14)
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--level", type=int, default=None, help="fixed level J (default: balanced)")
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("swarm", help="learn with perturbed smoothness indices")
    _add_common(p)
    _add_rule(p)
    p.add_argument("--offsets", default=",".join(str(o) for o in DEFAULT_SWARM_OFFSETS))
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_swarm)

    p = sub.add_parser("transform", help="dump wavelet coefficients")
    _add_common(p)
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("choose a command: learn, sweep, density, swarm, transform")
        return args.func(args)
    except UsageError as exc:
        print(f"wbnn: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"wbnn: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
