"""Command-line front end.

Every run writes a JSON manifest holding the resolved configuration, the
master seed, input digests and timestamps. Passing that manifest back through
``--config`` reproduces the run.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import math
import os
import sys

from . import __version__, _rng
from .algebra import build_merge_table
from .compare import case1_compare, case2_compare
from .counting import CountContext, count_induced, network_moment
from .experiments import B_RULES, ExperimentGrid, ks_error_experiment, rows_to_csv
from .graph import load_edge_list
from .graphon import builtin_graphon, limiting_covariance, parse_schedule, population_moment, sample_graph
from .motifs import MOTIF_NAMES, parse_motif, parse_motif_list
from .subsample import SubsampleConfig, diagnostics, run_subsampling

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2

# options that never enter the recorded configuration
_META = {"command", "sub", "config", "manifest", "func", "threads"}


class UsageError(Exception):
    pass


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load(args, key):
    path = getattr(args, key)
    if not path:
        raise UsageError(f"--{key.replace('_', '-')} is required")
    return load_edge_list(path, index_base=args.index_base, drop_self_loops=args.drop_self_loops)


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) in (None, ""):
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _motifs(args):
    _need(args, "motifs")
    try:
        return parse_motif_list(args.motifs)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None


def _rho(text, n):
    try:
        return float(text)
    except ValueError:
        return parse_schedule(text)(n)


# -- subcommands ---------------------------------------------------------------


def cmd_count(args, ctx):
    motifs = _motifs(args)
    g = _load(args, "input")
    ctx["inputs"].append(args.input)
    cc = CountContext(g)
    lines = []
    for m in motifs:
        if args.mode == "induced":
            x = count_induced(g, m, cc)
        else:
            x = cc.count(m)
        lines.append(f"{m.name} {x}\n")
    _write(args.out, "".join(lines))


def cmd_moment(args, ctx):
    motifs = _motifs(args)
    g = _load(args, "input")
    ctx["inputs"].append(args.input)
    cc = CountContext(g)
    _write(args.out, "".join(f"{m.name} {network_moment(g, m, args.mode, cc)!r}\n" for m in motifs))


def cmd_merge_table(args, ctx):
    try:
        r, rp = parse_motif(args.r), parse_motif(args.rp)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    table = build_merge_table(r, rp)
    if args.json:
        rows = [{"q": e.q, "s": e.s, "edges": e.sfrak, "c": e.c, "aut": e.aut_count,
                 "name": e.name, "key": e.key} for e in table]
        _write(args.out, _dump({"r": r.name, "rp": rp.name, "entries": rows}))
        return
    lines = ["q\ts\tedges\tc\taut\tgraph\n"]
    lines += [f"{e.q}\t{e.s}\t{e.sfrak}\t{e.c}\t{e.aut_count}\t{e.name}\n" for e in table]
    _write(args.out, "".join(lines))


def cmd_simulate(args, ctx):
    _need(args, "n", "out")
    model = builtin_graphon(args.graphon)
    rho = _rho(args.rho, args.n)
    g = sample_graph(model.at(rho), args.n, args.seed)
    _write(args.out, g.to_edge_list())
    ctx["summary"] = {"n": g.n, "m": g.m, "rho": rho}


def cmd_subsample(args, ctx):
    _need(args, "b", "nsub", "out")
    motifs = _motifs(args)
    g = _load(args, "input")
    ctx["inputs"].append(args.input)
    cfg = SubsampleConfig(args.b, args.nsub, motifs, args.mode, args.seed)
    ms = run_subsampling(g, cfg, args.threads)
    _write(args.out, ms.to_csv())
    side = ms.sidecar()
    side["host_digest"] = _digest(args.input)
    _write(args.out + ".json", _dump(side))
    ctx["outputs"].append(args.out + ".json")
    for k, v in diagnostics(ms).items():
        print(f"{k} {v!r}", file=sys.stderr)


def cmd_case1(args, ctx):
    _need(args, "nsub")
    motifs = _motifs(args)
    big, small = _load(args, "large"), _load(args, "small")
    ctx["inputs"] += [args.large, args.small]
    rep = case1_compare(big, small, motifs, args.nsub, args.mode, args.seed, level=args.level,
                        bandwidth=args.bandwidth, rescaled=args.rescaled, threads=args.threads)
    _finish_compare(args, ctx, rep)


def cmd_case2(args, ctx):
    _need(args, "nsub", "subsample_size")
    motifs = _motifs(args)
    ga, gb = _load(args, "a"), _load(args, "b")
    ctx["inputs"] += [args.a, args.b]
    rep = case2_compare(ga, gb, args.subsample_size, motifs, args.nsub, args.mode, args.seed,
                        threads=args.threads)
    _finish_compare(args, ctx, rep)


def _finish_compare(args, ctx, rep):
    _write(args.report, _dump(rep.to_dict()))
    if args.cloud:
        _write(args.cloud, rep.cloud_csv())
        ctx["outputs"].append(args.cloud)


def cmd_ks_error(args, ctx):
    _need(args, "n", "out")
    try:
        ns = tuple(int(x) for x in args.n.split(","))
    except ValueError:
        raise UsageError("--n must be a comma-separated list of integers") from None
    sets = tuple(tuple(m.strip() for m in s.split("+")) for s in args.motif_sets.split(";") if s.strip())
    grid = ExperimentGrid(args.graphon, ns, args.b_rule, args.rho, sets, args.nsub, args.reps,
                          args.seed, args.mode, args.reference_size, args.pool_size)
    progress = (lambda n, k: print(f"n={n} replicate {k + 1}/{grid.reps}", file=sys.stderr)) \
        if args.verbose else None
    rows = ks_error_experiment(grid, args.threads, progress)
    _write(args.out, rows_to_csv(rows))


def cmd_graphon_moment(args, ctx):
    _need(args, "motif")
    model = builtin_graphon(args.graphon)
    try:
        r = parse_motif(args.motif)
        rp = parse_motif(args.with_motif) if args.with_motif else None
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None
    p = population_moment(model, r, args.draws, args.seed)
    out = {"graphon": model.name, "normalisation": model.norm, "motif": r.name,
           "P_w": p.value, "P_w_se": p.std_error, "draws": p.n_draws,
           "limit_mean": math.factorial(r.r) / r.aut_count * p.value}
    if rp is not None:
        v, se = limiting_covariance(model, r, rp, args.draws, args.seed, return_se=True)
        out.update({"with": rp.name, "limit_covariance": v, "limit_covariance_se": se})
    _write(args.out, _dump(out))


# -- parser ----------------------------------------------------------------------


def _common(p, seed=True, graph_input=False):
    p.add_argument("--config", help="JSON config or manifest; explicit flags take precedence")
    p.add_argument("--manifest", help="where to write the run manifest")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: NETMOMENTS_THREADS or all cores)")
    if seed:
        p.add_argument("--seed", type=int, default=None,
                       help="master seed; drawn at random and recorded when omitted")
    if graph_input:
        p.add_argument("--index-base", type=int, default=0, help="smallest node id in the file")
        p.add_argument("--drop-self-loops", action="store_true",
                       help="discard self-loops instead of failing")


def _mode(p):
    p.add_argument("--mode", choices=("noninduced", "induced"), default="noninduced")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netmoments",
                                 description="Network moments, motif algebra and node subsampling.")
    ap.add_argument("--version", action="version", version=f"netmoments {__version__}")
    sub = ap.add_subparsers(dest="command", metavar="command")
    motif_help = f"comma-separated motifs ({', '.join(MOTIF_NAMES)}) or [i-j,...] templates"

    for name, fn, text in (("count", cmd_count, "motif counts of a graph"),
                           ("moment", cmd_moment, "network moments U = X / C(n, r)")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--in", dest="input", help="edge-list file")
        p.add_argument("--motifs", help=motif_help)
        p.add_argument("--out", help="output file (default: stdout)")
        _mode(p)
        _common(p, seed=False, graph_input=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("merge-table", help="gluings of two motifs with multiplicities c_S")
    p.add_argument("r")
    p.add_argument("rp")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    _common(p, seed=False)
    p.set_defaults(func=cmd_merge_table)

    p = sub.add_parser("simulate", help="draw a graph from a built-in graphon")
    p.add_argument("--graphon", default="1")
    p.add_argument("--n", type=int)
    p.add_argument("--rho", "--rho-schedule", dest="rho", default="1",
                   help="number or schedule such as 0.25*n^-0.1")
    p.add_argument("--out")
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("subsample", help="uniform node subsampling of network moments")
    p.add_argument("--in", dest="input")
    p.add_argument("--b", type=int)
    p.add_argument("--nsub", type=int)
    p.add_argument("--motifs", help=motif_help)
    p.add_argument("--out", help="CSV of raw moments; a JSON sidecar goes to OUT.json")
    _mode(p)
    _common(p, graph_input=True)
    p.set_defaults(func=cmd_subsample)

    p = sub.add_parser("compare", help="compare unmatchable networks")
    csub = p.add_subparsers(dest="sub", metavar="case")
    c1 = csub.add_parser("case1", help="small graph against subsamples of a large one")
    c1.add_argument("--large")
    c1.add_argument("--small")
    c1.add_argument("--level", type=float, default=0.90)
    c1.add_argument("--bandwidth", type=float)
    c1.add_argument("--rescaled", action="store_true")
    c1.set_defaults(func=cmd_case1)
    c2 = csub.add_parser("case2", help="two graphs subsampled at a common size")
    c2.add_argument("--a")
    c2.add_argument("--b")
    c2.add_argument("--subsample-size", type=int)
    c2.set_defaults(func=cmd_case2)
    for c in (c1, c2):
        c.add_argument("--motifs", help=motif_help)
        c.add_argument("--nsub", type=int)
        c.add_argument("--report", help="JSON report (default: stdout)")
        c.add_argument("--cloud", help="CSV of subsample replicates")
        _mode(c)
        _common(c, graph_input=True)

    p = sub.add_parser("experiment", help="simulation experiments")
    esub = p.add_subparsers(dest="sub", metavar="name")
    e = esub.add_parser("ks-error", help="KS error of subsampling against the graphon law")
    e.add_argument("--graphon", default="1")
    e.add_argument("--n", help="comma-separated host sizes, increasing")
    e.add_argument("--b-rule", choices=sorted(B_RULES), default="n23")
    e.add_argument("--rho", default="0.25*n^-0.1")
    e.add_argument("--motif-sets", default="twostar;triangle;threestar;twostar+triangle;"
                   "twostar+threestar;triangle+threestar",
                   help="';'-separated sets, motifs within a set joined by '+'")
    e.add_argument("--nsub", type=int, default=500)
    e.add_argument("--reps", type=int, default=10)
    e.add_argument("--reference-size", type=int, default=2000)
    e.add_argument("--pool-size", type=int, default=2000)
    e.add_argument("--out")
    e.add_argument("--verbose", action="store_true")
    _mode(e)
    _common(e)
    e.set_defaults(func=cmd_ks_error)

    p = sub.add_parser("graphon-moment", help="population moments of a built-in graphon")
    p.add_argument("--graphon", default="1")
    p.add_argument("--motif")
    p.add_argument("--with", dest="with_motif", help="second motif: also report the limiting covariance")
    p.add_argument("--draws", type=int, default=2_000_000)
    p.add_argument("--out")
    _common(p)
    p.set_defaults(func=cmd_graphon_moment)
    return ap


def _find_sub(parser, argv):
    """Subparser that will handle ``argv`` (walking nested subcommands)."""
    node = parser
    for tok in argv:
        acts = [a for a in node._actions if isinstance(a, argparse._SubParsersAction)]
        if not acts or tok not in acts[0].choices:
            continue
        node = acts[0].choices[tok]
    return node


def _config_from(path):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    if "config" in data and "command" in data:
        return data["command"], data["config"]
    return None, data


def _command_name(args):
    return " ".join(x for x in (args.command, getattr(args, "sub", None)) if x)


def _default_manifest(args):
    for key in ("out", "report"):
        path = getattr(args, key, None)
        if path and path != "-":
            return path + ".manifest.json"
    return f"netmoments-{_command_name(args).replace(' ', '-')}.manifest.json"


def _parse(parser, argv):
    args = parser.parse_args(argv)
    if args.command is None or not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)
    if args.config:
        command, cfg = _config_from(args.config)
        if command is not None and command != _command_name(args):
            raise UsageError(f"manifest is for '{command}', not '{_command_name(args)}'")
        sub = _find_sub(parser, argv)
        known = {a.dest for a in sub._actions}
        unknown = sorted(k for k in (k.replace("-", "_") for k in cfg) if k not in known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        try:
            args = _parse(parser, argv)
        except UsageError as exc:
            parser.print_usage(sys.stderr)
            print(f"netmoments: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except (OSError, json.JSONDecodeError) as exc:
            print(f"netmoments: error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    if hasattr(args, "seed") and args.seed is None:
        args.seed = _rng.fresh_seed()
    ctx = {"inputs": [], "outputs": []}
    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    try:
        args.func(args, ctx)
    except UsageError as exc:
        print(f"netmoments: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - report any failure as a runtime error
        print(f"netmoments: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    config = {k: v for k, v in vars(args).items() if k not in _META}
    manifest = {
        "command": _command_name(args),
        "config": config,
        "seed": config.get("seed"),
        "version": __version__,
        "inputs": {p: _digest(p) for p in ctx["inputs"]},
        "outputs": ctx["outputs"],
        "started": started,
        "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    if "summary" in ctx:
        manifest["summary"] = ctx["summary"]
    try:
        _write(args.manifest or _default_manifest(args), _dump(manifest))
    except OSError as exc:
        print(f"netmoments: error: cannot write manifest: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
