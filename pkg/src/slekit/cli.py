"""Command-line interface.

Exact subcommands (params, bn) print rationals as p/q strings so no
precision is lost at the boundary. Report subcommands print a single line
of JSON with sorted keys by default, or CSV with --format csv; either way
the output is stable across runs for a fixed seed, so it can be diffed or
committed. Report subcommands also accept --plot PATH to render the
matching figure next to the delimited output.

Exit status: 0 on success, 1 when a verification check fails, 2 on bad
arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import mc, verify
from .loewner import sample_driving, trace_from_driving
from .symbolic import to_string
from .virasoro import params_of_kappa
from .ward import build_B


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _slit(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,EPS: {text!r}")
    try:
        x, eps = (float(Fraction(p)) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected X,EPS: {text!r}") from exc
    if eps <= 0.0:
        raise argparse.ArgumentTypeError("slit EPS must be positive")
    return x, eps


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(Fraction(p)) for p in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a float list: {text!r}") from exc


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _emit_csv(header, rows) -> None:
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])


def _estimate_dict(r: mc.EstimateResult) -> dict:
    return {"mean": r.mean, "stderr": r.stderr, "n_samples": r.n_samples,
            "theory": r.theory, "deviation": r.deviation(),
            "horizon": r.horizon, "config_digest": r.config_digest}


def _estimate_rows(label: str, r: mc.EstimateResult):
    return [(label, r.mean, r.stderr, r.n_samples,
             "" if r.theory is None else r.theory, r.horizon)]


def _add_plot(p: argparse.ArgumentParser) -> None:
    p.add_argument("--plot", metavar="PATH",
                   help="also render the figure to this file")


def _add_format(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--format", choices=("json", "csv"), default=default)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slekit", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="central charge, weight, and coupling "
                                      "for a given kappa (exact)")
    p.add_argument("--kappa", type=_rational, required=True)

    p = sub.add_parser("bn", help="restriction correlator B_n as a "
                                  "canonical rational function (exact)")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("verify", help="run the built-in identity checks")
    p.add_argument("--module", choices=sorted(verify.SUITES), default=None)
    p.add_argument("--fast", action="store_true",
                   help="smaller Monte Carlo sizes for the slow suites")

    p = sub.add_parser("trace", help="sample a driving path and emit its trace")
    p.add_argument("--kappa", type=_rational, required=True)
    p.add_argument("--T", type=_rational, default=Fraction(1))
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    _add_format(p, "csv")
    _add_plot(p)

    p = sub.add_parser("restriction",
                       help="Monte Carlo slit-avoidance probability")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--kappa", type=_rational,
                   default=Fraction(8, 3))
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--T", type=float, default=None,
                   help="horizon; resolved automatically when omitted")
    p.add_argument("--threads", type=int, default=1)
    _add_format(p, "json")
    _add_plot(p)

    p = sub.add_parser("hitting",
                       help="Monte Carlo probability of hitting every slit "
                            "in a family")
    p.add_argument("--slit", type=_slit, action="append", required=True,
                   metavar="X,EPS", help="repeatable")
    p.add_argument("--kappa", type=_rational, default=Fraction(8, 3))
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--steps", type=int, default=8000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)
    _add_format(p, "json")
    _add_plot(p)

    p = sub.add_parser("martingale",
                       help="check E[Y at (t ^ tau)] = Y_0 for the "
                            "avoidance weight")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--kappa", type=_rational, default=Fraction(8, 3))
    p.add_argument("--times", type=_float_list, default=(0.1, 0.25, 0.5))
    p.add_argument("--n", type=int, default=4000)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    _add_format(p, "json")
    _add_plot(p)

    p = sub.add_parser("dimension",
                       help="box-counting dimension of the trace")
    p.add_argument("--kappa", type=_rational, required=True)
    p.add_argument("--n-paths", type=int, default=12)
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    _add_format(p, "json")
    _add_plot(p)

    p = sub.add_parser("drift", help="t -> 0 drift of the shifted removal "
                                     "map at kappa = 0")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--dts", type=_float_list,
                   default=(0.01, 0.005, 0.0025, 0.00125))
    _add_format(p, "json")
    _add_plot(p)

    return ap


def _cmd_params(args) -> int:
    try:
        d = params_of_kappa(args.kappa)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit_json({"kappa": str(args.kappa), "c": str(d["c"]),
                "h": str(d["h"]), "lambda": str(d["lambda"])})
    return 0


def _cmd_bn(args) -> int:
    if args.n < 1:
        print("error: n must be >= 1", file=sys.stderr)
        return 2
    bv = build_B(args.alpha, args.n)
    _emit_json({"alpha": str(args.alpha), "n": args.n,
                "bn": to_string(bv[args.n])})
    return 0


def _cmd_verify(args) -> int:
    names = [args.module] if args.module else sorted(verify.SUITES)
    failures = 0
    total = 0
    for name in names:
        suite = verify.SUITES[name]
        try:
            results = suite(fast=args.fast)
        except TypeError:
            results = suite()
        for res in results:
            total += 1
            if res.ok:
                print(f"ok   {name}.{res.name}")
            else:
                failures += 1
                detail = f": {res.detail}" if res.detail else ""
                print(f"FAIL {name}.{res.name}{detail}")
    print(f"passed {total - failures}/{total}")
    return 1 if failures else 0


def _cmd_trace(args) -> int:
    if args.steps < 1 or args.T <= 0 or args.kappa < 0:
        print("error: need steps >= 1, T > 0, kappa >= 0", file=sys.stderr)
        return 2
    d = sample_driving(float(args.kappa), float(args.T), args.steps, args.seed)
    tr = trace_from_driving(d)
    if args.plot:
        from .plots import plot_trace
        plot_trace(tr.points, args.plot,
                   title=f"kappa={float(args.kappa):g}, T={float(args.T):g}, "
                         f"seed={args.seed}")
    if args.format == "json":
        _emit_json({"kappa": float(args.kappa), "T": float(args.T),
                    "steps": args.steps, "seed": args.seed,
                    "t": [float(t) for t in tr.times],
                    "re": [float(p.real) for p in tr.points],
                    "im": [float(p.imag) for p in tr.points]})
    else:
        _emit_csv(("t", "re", "im"),
                  [(float(t), float(p.real), float(p.imag))
                   for t, p in zip(tr.times, tr.points)])
    return 0


def _cmd_restriction(args) -> int:
    res = mc.estimate_avoidance(args.x, args.eps, kappa=float(args.kappa),
                                n_samples=args.n, steps=args.steps,
                                seed=args.seed, T=args.T,
                                threads=args.threads)
    if args.plot:
        from .plots import plot_estimates
        plot_estimates([res], [f"avoid ({args.x:g}, {args.eps:g})"],
                       args.plot, title="slit avoidance")
    if args.format == "json":
        _emit_json(_estimate_dict(res))
    else:
        _emit_csv(("check", "mean", "stderr", "n_samples", "theory",
                   "horizon"), _estimate_rows("avoidance", res))
    return 0


def _cmd_hitting(args) -> int:
    res = mc.estimate_hitting(args.slit, kappa=float(args.kappa),
                              n_samples=args.n, steps=args.steps,
                              seed=args.seed, T=args.T, threads=args.threads)
    label = " & ".join(f"({x:g}, {eps:g})" for x, eps in args.slit)
    if args.plot:
        from .plots import plot_estimates
        plot_estimates([res], [f"hit {label}"], args.plot,
                       title="slit hitting")
    if args.format == "json":
        _emit_json(_estimate_dict(res))
    else:
        _emit_csv(("check", "mean", "stderr", "n_samples", "theory",
                   "horizon"), _estimate_rows("hitting", res))
    return 0


def _cmd_martingale(args) -> int:
    rep = mc.martingale_check_Yt(args.x, args.eps, kappa=float(args.kappa),
                                 times=args.times, n_samples=args.n,
                                 steps=args.steps, seed=args.seed)
    if args.plot:
        from .plots import plot_martingale
        plot_martingale(rep, args.plot)
    if args.format == "json":
        _emit_json({"times": list(rep.times),
                    "means": [e.mean for e in rep.estimates],
                    "stderrs": [e.stderr for e in rep.estimates],
                    "initial_value": rep.initial_value,
                    "max_value": rep.max_value,
                    "n_samples": rep.n_samples,
                    "n_discarded": rep.n_discarded,
                    "within_2_stderr": rep.within(),
                    "config_digest": rep.config_digest})
    else:
        _emit_csv(("t", "mean", "stderr", "initial_value"),
                  [(t, e.mean, e.stderr, rep.initial_value)
                   for t, e in zip(rep.times, rep.estimates)])
    return 0


def _cmd_dimension(args) -> int:
    rep = mc.estimate_dimension(float(args.kappa), n_paths=args.n_paths,
                                steps=args.steps, seed=args.seed)
    if args.plot:
        from .plots import plot_dimension
        plot_dimension(rep, args.plot)
    if args.format == "json":
        _emit_json({"kappa": rep.kappa, "estimate": rep.estimate,
                    "target": rep.target,
                    "box_sizes": list(rep.box_sizes),
                    "counts": list(rep.counts),
                    "n_paths": rep.n_paths,
                    "config_digest": rep.config_digest})
    else:
        _emit_csv(("box_size", "count"),
                  list(zip(rep.box_sizes, rep.counts)))
    return 0


def _cmd_drift(args) -> int:
    rep = mc.drift_check_t0(args.x, args.eps, dts=args.dts)
    if args.plot:
        from .plots import plot_drift
        plot_drift(rep, args.plot)
    if args.format == "json":
        _emit_json({"slit": list(rep.slit), "dts": list(rep.dts),
                    "lhs": list(rep.lhs), "rhs": rep.rhs,
                    "rel_errors": list(rep.rel_errors),
                    "order": rep.order,
                    "config_digest": rep.config_digest})
    else:
        _emit_csv(("dt", "lhs", "rhs", "rel_error"),
                  [(dt, lhs, rep.rhs, rel) for dt, lhs, rel
                   in zip(rep.dts, rep.lhs, rep.rel_errors)])
    return 0


_COMMANDS = {
    "params": _cmd_params,
    "bn": _cmd_bn,
    "verify": _cmd_verify,
    "trace": _cmd_trace,
    "restriction": _cmd_restriction,
    "hitting": _cmd_hitting,
    "martingale": _cmd_martingale,
    "dimension": _cmd_dimension,
    "drift": _cmd_drift,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
