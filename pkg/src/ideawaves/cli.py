"""Command-line entry point.

Exit codes: 0 success, 2 usage / invalid flags, 3 numerical failure, 4 I/O or input-file error.
Every file written is accompanied by ``<file>.manifest.json`` recording the
subcommand, flags, seed, tool version and input digests.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .integrator import IntegrationError, hopf_sweep, simulate
from .model import DomainError, Params, State, endemic_equilibrium, fixed_point
from .pipeline import FitConfig, LoadError, compare_residual, load_trends_csv, residual_for, run_report
from .stability import classify_region, hopf_alpha, stability_map
from .timeseries import decompose

EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _range(text):
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}")
    return tuple(vals)


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _manifest(args, outputs, inputs=(), extra=None):
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    man = {
        "subcommand": args.command,
        "flags": flags,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "inputs": {os.path.basename(p): _digest(p) for p in inputs},
    }
    if extra:
        man.update(extra)
    text = json.dumps(man, indent=2, sort_keys=True, default=list) + "\n"
    for out in outputs:
        if out and out != "-":
            with open(out + ".manifest.json", "w") as fh:
                fh.write(text)


def _initial(args):
    return State(args.s0, args.i0, args.gamma0)


# -- subcommands -----------------------------------------------------------------


def cmd_simulate(args):
    params = Params(args.beta, args.xi, args.alpha, args.delta)
    traj = simulate(params, _initial(args), args.t_end, args.dt, args.stride)
    traj.write_csv(args.out)
    extra = {}
    if params.frozen_gamma:
        eq = endemic_equilibrium(params, args.gamma0).state
        extra["equilibrium"] = eq.to_dict()
    elif params.alpha > 0 and params.delta > 0:
        extra["equilibrium"] = fixed_point(params).state.to_dict()
        extra["region"] = classify_region(params).value
    if args.svg:
        from .plots import trajectory_svg

        trajectory_svg(traj, args.svg)
    _manifest(args, [args.out, args.svg], extra=extra)


def cmd_stability_map(args):
    smap = stability_map(args.beta, args.xi, args.alpha_range, args.delta_range, args.resolution)
    smap.write_csv(args.out)
    hopf = hopf_alpha(args.beta, args.xi)
    extra = {"ties": "points on the boundary delta = alpha^2 xi/((alpha-beta)(alpha-beta-xi)) are labelled unstable"}
    if hopf.condition_holds:
        extra["hopf_point"] = [hopf.alpha, hopf.alpha]
        print(f"Hopf point of the alpha = delta model at ({hopf.alpha:.6g}, {hopf.alpha:.6g})")
    if args.svg:
        from .plots import stability_svg

        stability_svg(smap, args.svg, hopf.alpha if hopf.condition_holds else None)
    _manifest(args, [args.out, args.svg], extra=extra)


def cmd_hopf_scan(args):
    entries = hopf_sweep(args.beta, args.xi, args.alphas, _initial(args), args.t_end, args.dt, args.stride)
    lines = ["alpha,class,period,amplitude_i"]
    for e in entries:
        v = e.verdict
        period = repr(v.period) if e.kind == "cycle" else ""
        amp = repr(v.amplitude_i) if e.kind == "cycle" else ""
        lines.append(f"{e.alpha!r},{e.kind},{period},{amp}")
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    _manifest(args, [args.out], extra={"hopf_alpha": hopf_alpha(args.beta, args.xi).alpha})


def _select(corpus, word):
    if word is None:
        return corpus[0]
    for w, s in corpus:
        if w == word:
            return w, s
    raise UsageError(f"word {word!r} not found in input")


def cmd_decompose(args):
    corpus = load_trends_csv(args.input, wide=args.wide)
    word, series = _select(corpus, args.word)
    dec = decompose(series, args.period)
    dec.write_csv(args.out, series.dates)
    _manifest(args, [args.out], inputs=[args.input], extra={"word": word})


def _config(args):
    return FitConfig(
        beta_min=args.beta_min,
        beta_max=args.beta_max,
        beta_steps=args.beta_steps,
        n_random_walks=args.walks,
        period=args.period,
    )


def cmd_compare(args):
    corpus = load_trends_csv(args.input, wide=args.wide)
    word, series = _select(corpus, args.word)
    idx = [w for w, _ in corpus].index(word)
    rec = compare_residual(word, residual_for(series, _config(args)), _config(args), args.seed, idx)
    from dataclasses import asdict

    text = json.dumps(asdict(rec), indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    _manifest(args, [args.out], inputs=[args.input])


def cmd_report(args):
    corpus = load_trends_csv(args.input, wide=args.wide)
    report = run_report(corpus, _config(args), args.seed)
    report.write_json(args.out)
    scatter = args.scatter or os.path.splitext(args.out)[0] + "_scatter.csv"
    report.write_scatter_csv(scatter)
    if args.svg:
        from .plots import scatter_svg

        scatter_svg(report, args.svg)
    print(f"{len(report.records)} words, {len(report.skipped)} skipped, "
          f"fraction significant {report.fraction_significant:.3f}")
    _manifest(args, [args.out, scatter, args.svg], inputs=[args.input])


# -- parser ----------------------------------------------------------------------


def _default_seed():
    env = os.environ.get("IDEAWAVES_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"IDEAWAVES_SEED must be an integer, got {env!r}") from None


def build_parser():
    p = argparse.ArgumentParser(
        prog="ideawaves",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def rates(sp, required=True):
        sp.add_argument("--beta", type=float, required=True)
        sp.add_argument("--xi", type=float, required=True)
        if required:
            sp.add_argument("--alpha", type=float, required=True)
            sp.add_argument("--delta", type=float, required=True)

    def initial(sp):
        sp.add_argument("--s0", type=float, default=0.9)
        sp.add_argument("--i0", type=float, default=0.1)
        sp.add_argument("--gamma0", type=float, default=0.1)

    sp = sub.add_parser("simulate", help="integrate the model and write a trajectory CSV")
    rates(sp)
    initial(sp)
    sp.add_argument("--t-end", type=float, default=1000.0)
    sp.add_argument("--dt", type=float, default=0.01)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("stability-map", help="label the (alpha, delta) plane by local stability")
    rates(sp, required=False)
    sp.add_argument("--alpha-range", type=_range, default=(0.0, 3.0), metavar="LO,HI")
    sp.add_argument("--delta-range", type=_range, default=(0.0, 3.0), metavar="LO,HI")
    sp.add_argument("--resolution", type=int, default=200)
    sp.add_argument("--out", required=True)
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_stability_map)

    sp = sub.add_parser("hopf-scan", help="classify long-run behaviour along alpha = delta")
    rates(sp, required=False)
    initial(sp)
    sp.add_argument("--alphas", type=_floats, required=True)
    sp.add_argument("--t-end", type=float, default=10000.0)
    sp.add_argument("--dt", type=float, default=0.01)
    sp.add_argument("--stride", type=int, default=10)
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_hopf_scan)

    def corpus_args(sp):
        sp.add_argument("input", help="weekly CSV, header date,word,value (or --wide)")
        sp.add_argument("--wide", action="store_true", help="input has one column per word")
        sp.add_argument("--period", type=int, default=52)

    def fit_args(sp):
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--beta-min", type=float, default=0.01)
        sp.add_argument("--beta-max", type=float, default=0.3)
        sp.add_argument("--beta-steps", type=int, default=30)
        sp.add_argument("--walks", type=int, default=500)

    sp = sub.add_parser("decompose", help="trend / seasonal / residual split of one word")
    corpus_args(sp)
    sp.add_argument("--word")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("compare", help="best-fit model and random-walk baseline for one word")
    corpus_args(sp)
    fit_args(sp)
    sp.add_argument("--word")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("report", help="run the comparison over a whole corpus")
    corpus_args(sp)
    fit_args(sp)
    sp.add_argument("--out", required=True, help="report JSON path")
    sp.add_argument("--scatter", help="scatter CSV path (default: <out>_scatter.csv)")
    sp.add_argument("--svg")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        args.func(args)
    except UsageError as exc:
        print(f"ideawaves: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LoadError, OSError) as exc:
        print(f"ideawaves: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IntegrationError as exc:
        print(f"ideawaves: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ValueError) as exc:
        print(f"ideawaves: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"ideawaves: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
