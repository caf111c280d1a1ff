"""Command-line entry point ``weylab``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import classes as cl
from . import harmonic as hm
from . import metric as mt
from . import verify as vf
from .errors import WeylabError
from .grids import PhaseGrid, SymbolField
from .io import load_any_field, load_kernel, save_field, save_kernel
from .quantization import build_kernel
from .schatten import schatten_norm, singular_values
from .splines import BSpline
from .symbolic import Analytic, phase_space_symbols


def _floats(text):
    return [math.inf if v.strip() in ("inf", "Infinity") else float(v) for v in text.split(",")]


def _emit(obj, path=None):
    text = json.dumps(vf._clean(obj), sort_keys=True, indent=1)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def _grid(args, default="1,8,64"):
    return PhaseGrid.parse(args.grid or default)


def _symbol_from_expr(text, grid):
    import sympy as sp

    v = phase_space_symbols(grid.n)
    names = {str(s): s for s in v}
    names.update({"x": v[0], "xi": v[grid.n]})
    expr = sp.parse_expr(text, local_dict=names)
    return SymbolField.from_generator(grid, Analytic(expr, v))


def cmd_quantize(args):
    if args.symbol:
        a = load_any_field(args.symbol)
    elif args.expr:
        a = _symbol_from_expr(args.expr, _grid(args))
    else:
        raise WeylabError("quantize needs --symbol or --expr")
    K = build_kernel(a, args.t, method=args.method, max_size=args.max_size)
    save_kernel(args.out, K)
    _emit({"grid": [a.grid.n, a.grid.L, a.grid.N], "t": args.t, "out": args.out, "size": K.K.shape[0]})
    return 0


def cmd_schatten(args):
    K = load_kernel(args.kernel)
    spec = singular_values(K)
    ps = _floats(args.p)
    _emit({"sigma_head": spec.head(16), "norms": {vf._pkey(p): schatten_norm(spec, p) for p in ps},
           "residual": spec.residual, "t": K.t}, args.report)
    return 0


def _quad(A):
    return np.asarray(A.A if hasattr(A, "A") else A).tolist()


def cmd_metric(args):
    if args.check:
        spec = cl.ClassSpec.parse(args.cls) if args.cls else cl.ClassSpec(0, 0, (1, 0), (0, 0))
        g = cl.class_metric(spec)
        S = mt.box_samples(spec.n, args.box, args.samples, args.seed)
        if args.check == "slow":
            rep = mt.slowly_varying_report(g, S, args.c, seed=args.seed).as_dict()
        elif args.check == "temperate":
            rep = mt.temperate_report(g, S).as_dict()
        else:
            rep = mt.feasible_check(g, S, args.c, seed=args.seed).as_dict()
        _emit({"check": args.check, "spec": spec.as_list(), "box": args.box, "samples": args.samples,
               "seed": args.seed, "report": rep}, args.report)
        return 0
    if not args.cls or not args.probe:
        raise WeylabError("metric needs --class and --probe, or --check")
    spec = cl.ClassSpec.parse(args.cls)
    X = np.array(_floats(args.probe))
    A = cl.class_metric(spec)(X[None])[0]
    core = mt.symplectic_core(A)
    _emit({"A": _quad(A), "A_sigma": _quad(mt.dual_metric(A)), "lambda": mt.symplectic_eigenvalues(A).tolist(),
           "h_g": mt.planck(A), "Lambda_g": mt.capacity(A), "core": _quad(core.A)}, args.report)
    return 0


def cmd_class(args):
    spec = cl.ClassSpec.parse(args.spec)
    grid = _grid(args, f"{spec.n},8,64")
    if args.emit:
        a = cl.make_test_symbol(spec, grid, args.kind)
        save_field(args.emit, a)
        _emit({"spec": spec.as_list(), "kind": args.kind, "grid": [grid.n, grid.L, grid.N], "out": args.emit})
        return 0
    if args.membership:
        a = load_any_field(args.membership)
        P = mt.box_samples(spec.n, args.box, args.probes, args.seed)
        rep = cl.membership_report(a, spec, args.N, P, seed=args.seed)
        _emit({"spec": spec.as_list(), "N": args.N, "box": args.box, "probes": args.probes,
               "report": rep.as_dict()}, args.report)
        return 0
    raise WeylabError("class needs --emit or --membership")


def cmd_harmonic(args):
    if args.which == "bspline":
        B = BSpline(args.j)
        t = np.linspace(0, args.j, 9)
        _emit({"j": args.j, "integral": str(B.integral()), "t": t.tolist(), "values": B(t).tolist()}, args.report)
        return 0
    if args.which == "abound":
        import sympy as sp

        t = sp.Symbol("t", real=True)
        f = sp.parse_expr(args.expr or "sin(t) + t**3", local_dict={"t": t})
        rep = hm.derivative_bound_report(f, [(0.0, args.r)], args.N, p=args.p, kind=args.kind, eps=args.eps)
        _emit({"kind": args.kind, "lhs": rep.lhs, "rhs": rep.rhs, "ratio": rep.ratio, "extra": rep.extra}, args.report)
        return 0
    grid = _grid(args)
    if args.symbol:
        syms = [load_any_field(args.symbol)]
    else:
        rng = np.random.default_rng(args.seed)
        if args.which == "bernstein":
            from .families import BumpSum

            syms = [SymbolField.from_generator(grid, BumpSum.random(rng, grid.dim, support=1.0))
                    for _ in range(args.count)]
        else:
            syms = [vf.modulation_family(grid, rng) for _ in range(args.count)]
    if args.which == "bernstein":
        N = args.N if args.N is not None else hm.bernstein_threshold(args.p, args.q, grid.n)
        reps = [hm.bernstein_gap(a, args.p, args.q, N) for a in syms]
    else:
        reps = [hm.mp_schatten_gap(a, args.p) for a in syms]
    ratios = [r.ratio for r in reps]
    _emit({"which": args.which, "p": args.p, "lhs": [r.lhs for r in reps], "rhs": [r.rhs for r in reps],
           "ratio": ratios, "ratio_min": min(ratios), "ratio_max": max(ratios),
           "band": max(ratios) / min(ratios)}, args.report)
    return 0


def _scalar(v):
    return isinstance(v, (int, float, str, bool)) or v is None


def write_csv(report, outdir):
    """Write the scalar columns of cases and verdicts as CSV, and line plots of numeric list fields."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    cases = vf._clean(report.cases)
    keys = sorted({k for c in cases for k, v in c.items() if _scalar(v)})
    with open(out / f"{report.suite}_cases.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys, extrasaction="ignore")
        w.writeheader()
        for c in cases:
            w.writerow({k: c.get(k) for k in keys})
    with open(out / f"{report.suite}_verdicts.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "invariant", "value", "threshold", "passed", "hard"])
        for v in vf._clean(report.verdicts):
            w.writerow([v["name"], v["invariant"], json.dumps(v["value"]), json.dumps(v["threshold"]),
                        v["passed"], v["hard"]])
    curves = {}
    for i, c in enumerate(cases):
        for k, v in c.items():
            if k not in ("spec", "L") and isinstance(v, list) and len(v) > 1 and all(isinstance(x, (int, float)) for x in v):
                curves.setdefault(k, []).append((i, v))
    if curves:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        for k, rows in curves.items():
            fig, ax = plt.subplots(figsize=(5, 3.5))
            for i, v in rows:
                ax.plot(range(len(v)), v, marker="o", lw=1, label=str(i))
            ax.set_xlabel("index")
            ax.set_ylabel(k)
            ax.set_title(f"{report.suite}: {k}")
            if len(rows) <= 8:
                ax.legend(fontsize=7)
            fig.tight_layout()
            fig.savefig(out / f"{report.suite}_{k}.png", dpi=100)
            plt.close(fig)


def cmd_verify(args):
    if args.suite == "list":
        for name, desc in vf.list_suites().items():
            print(f"{name:24s} {desc}")
        return 0
    cfg = {}
    if args.config:
        cfg = json.loads(Path(args.config).read_text())
    cfg["suite"] = args.suite
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.grid:
        cfg["grid"] = [float(v) for v in args.grid.split(",")]
        cfg["grid"][0], cfg["grid"][2] = int(cfg["grid"][0]), int(cfg["grid"][2])
    if args.max_size is not None:
        cfg["max_size"] = args.max_size
    report = vf.run_suite(cfg)
    text = report.to_json()
    if args.report:
        Path(args.report).write_text(text + "\n")
    else:
        print(text)
    if args.emit_csv:
        write_csv(report, args.emit_csv)
    for v in report.verdicts:
        tag = "PASS" if v["passed"] else ("FAIL" if v.get("hard", True) else "note")
        print(f"[{tag}] {report.suite}/{v['name']}: {v['invariant']}", file=sys.stderr)
    return 0 if report.passed else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="weylab", description="Numerical Weyl-calculus toolkit.")
    ap.add_argument("--grid", help="phase-space grid as n,L,N")
    # accepted after the subcommand too; SUPPRESS keeps a top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", default=argparse.SUPPRESS, help="phase-space grid as n,L,N")
    sub = ap.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quantize", parents=[common], help="build an operator kernel from a symbol")
    q.add_argument("--symbol", help="field file (.bin or .json)")
    q.add_argument("--expr", help="sympy expression in x1.., xi1.. (or x, xi)")
    q.add_argument("--t", type=float, default=0.5)
    q.add_argument("--method", choices=["fourier", "exact"], default="fourier")
    q.add_argument("--max-size", type=int)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_quantize)

    s = sub.add_parser("schatten", parents=[common], help="singular values and Schatten norms of a kernel")
    s.add_argument("--kernel", required=True)
    s.add_argument("--p", default="1,2,inf")
    s.add_argument("--report")
    s.set_defaults(func=cmd_schatten)

    m = sub.add_parser("metric", parents=[common], help="metric quantities at a point, or sampled checks")
    m.add_argument("--class", dest="cls", help="r,s,rho...,delta...")
    m.add_argument("--probe", help="x,xi")
    m.add_argument("--check", choices=["slow", "temperate", "feasible"])
    m.add_argument("--box", type=float, default=10.0)
    m.add_argument("--samples", type=int, default=200)
    m.add_argument("--c", type=float, default=0.25)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--report")
    m.set_defaults(func=cmd_metric)

    c = sub.add_parser("class", parents=[common], help="emit class test symbols or estimate membership")
    c.add_argument("--spec", required=True)
    c.add_argument("--emit")
    c.add_argument("--kind", choices=["plain", "oscillatory", "truncated"], default="plain")
    c.add_argument("--membership")
    c.add_argument("--N", type=int, default=2)
    c.add_argument("--box", type=float, default=10.0)
    c.add_argument("--probes", type=int, default=64)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--report")
    c.set_defaults(func=cmd_class)

    h = sub.add_parser("harmonic", parents=[common], help="harmonic-analysis bound reports")
    h.add_argument("which", choices=["bernstein", "mp-gap", "bspline", "abound"])
    h.add_argument("--symbol")
    h.add_argument("--p", type=float, default=1.0)
    h.add_argument("--q", type=float, default=2.0)
    h.add_argument("--N", type=int)
    h.add_argument("--j", type=int, default=3)
    h.add_argument("--r", type=float, default=1.0)
    h.add_argument("--eps", type=float, default=0.5)
    h.add_argument("--kind", choices=["endpoint", "sector", "same_domain"], default="endpoint")
    h.add_argument("--expr")
    h.add_argument("--count", type=int, default=5)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--report")
    h.set_defaults(func=cmd_harmonic)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite, or 'list'")
    v.add_argument("suite")
    v.add_argument("--config")
    v.add_argument("--emit-csv", dest="emit_csv")
    v.add_argument("--seed", type=int)
    v.add_argument("--max-size", type=int)
    v.add_argument("--report")
    v.set_defaults(func=cmd_verify)
    return ap


# comma lists such as "-2,-2,1,1,0,0" would otherwise be taken for flags
_LIST_FLAGS = {"--spec", "--class", "--probe", "--grid", "--p"}


def _attach_lists(argv):
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _LIST_FLAGS and nxt is not None and nxt[:1] == "-" and nxt[1:2].isdigit():
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_lists(argv))
    if args.command == "harmonic" and args.which == "abound" and args.N is None:
        args.N = 2
    try:
        return args.func(args)
    except (WeylabError, KeyError, OSError, ValueError) as exc:
        print(f"weylab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
