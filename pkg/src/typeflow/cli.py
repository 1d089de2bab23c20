"""Command-line driver.

Exit statuses: 0 success, 1 analysis mismatch, 2 usage error, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diff as differential
from .frontend import FrontendError, build_class_table, format_program, parse_program
from .generator import ConfigError, GenConfig, gen_corpus
from .minimize import bisim_minimize, quotient
from .pta import pta_fixpoint
from .tfa import reaching_types, tfa_fixpoint

OK, MISMATCH, USAGE, INPUT = 0, 1, 2, 3
ANALYSES = ("cha", "rta", "vta", "tfa", "pta")

# engines used by `diff`; replaceable for negative-path testing
ENGINES = {"tfa": tfa_fixpoint, "pta": pta_fixpoint}


class InputError(Exception):
    pass


def _read_program(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    try:
        return parse_program(text)
    except FrontendError as e:
        where = f"{path}:{e.pos.line}:{e.pos.col}" if e.pos else str(path)
        raise InputError(f"{where}: error: {e.message}") from None


def _inputs(args) -> list:
    paths = [Path(p) for p in getattr(args, "files", None) or []]
    if getattr(args, "corpus_dir", None):
        d = Path(args.corpus_dir)
        if not d.is_dir():
            raise InputError(f"{d}: not a directory")
        paths.extend(sorted(d.glob("*.tfl")))
    return paths


def _write(args, text: str):
    if getattr(args, "out", None):
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise InputError(f"{args.out}: {e.strerror or e}") from None
    else:
        sys.stdout.write(text)


def _selected(name: str) -> tuple:
    return ANALYSES if name == "all" else (name,)


def _analysis_views(p, selected) -> dict:
    """Per analysis: call graph plus its fact dump lines."""
    suite = differential.run_all(p)
    views = {}
    for name in selected:
        if name == "cha":
            views[name] = (suite.cha, [])
        elif name == "rta":
            views[name] = (suite.rta, [])
        elif name == "vta":
            g = suite.vta
            facts = [f"REACH\t{n}\t{c}" for n in sorted(g.reach, key=str) for c in sorted(g.reach[n])]
            views[name] = (g.callgraph, facts)
        elif name == "tfa":
            views[name] = (suite.tfa.callgraph, suite.tfa.store.dump())
        elif name == "pta":
            views[name] = (suite.pta.callgraph, suite.pta.dump())
    return views, suite


def cmd_analyze(args) -> int:
    paths = _inputs(args)
    if len(paths) != 1:
        raise InputError("analyze takes exactly one input file")
    p = _read_program(paths[0])
    views, suite = _analysis_views(p, _selected(args.analysis))
    stats = differential.collect_stats(paths[0].name, suite) if args.analysis == "all" else None
    for d in suite.tfa.diagnostics:
        print(f"warning: {d}", file=sys.stderr)

    if args.emit == "dot":
        text = "".join(cg.to_dot(name) for name, (cg, _) in views.items())
    elif args.emit == "json":
        doc = {
            name: {
                "edges": [[e["site"], e["target"]] for e in cg.to_json()],
                "facts": [line.split("\t") for line in facts],
            }
            for name, (cg, facts) in views.items()
        }
        if stats is not None:
            doc["stats"] = dict(zip(stats.header(), stats.values()))
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        lines = []
        for name, (cg, facts) in views.items():
            lines.append(f"# {name}")
            lines.extend(cg.dump())
            lines.extend(facts)
        if stats is not None:
            lines.append("# stats")
            lines.extend(f"STAT\t{k}\t{v}" for k, v in zip(stats.header(), stats.values()))
        text = "\n".join(lines) + "\n"
    _write(args, text)
    return OK


def cmd_diff(args) -> int:
    paths = _inputs(args)
    if not paths:
        raise InputError("no input files")
    rows = ["name,ok,mismatches,tfa_edges,pta_edges"]
    status = OK
    for path in paths:
        p = _read_program(path)
        rep = differential.check_program(p, ENGINES["tfa"], ENGINES["pta"])
        rows.append(
            f"{path.name},{int(rep.ok)},{len(rep.mismatches)},{rep.stats['tfa_edges']},{rep.stats['pta_edges']}"
        )
        if not rep.ok:
            status = MISMATCH
            print(f"{path}: type flow and points-to results differ", file=sys.stderr)
            for line in rep.render():
                print(f"  {line}", file=sys.stderr)
            if rep.witness is not None:
                print("witness:", file=sys.stderr)
                sys.stderr.write(format_program(rep.witness))
    _write(args, "\n".join(rows) + "\n")
    return status


def _config(args) -> GenConfig:
    text = ""
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"{args.config}: {e.strerror or e}") from None
    overrides = {} if args.seed is None else {"seed": args.seed}
    try:
        return GenConfig.from_text(text, **overrides)
    except (ConfigError, TypeError) as e:
        raise InputError(f"{args.config or 'config'}: {e}") from None


def cmd_gen(args) -> int:
    cfg = _config(args)
    programs = list(gen_corpus(cfg, args.count))
    if args.out is None:
        if len(programs) != 1:
            raise InputError("--out DIR is required when --count > 1")
        sys.stdout.write(format_program(programs[0][1]))
        return OK
    out = Path(args.out)
    if len(programs) == 1 and out.suffix == ".tfl":
        out.write_text(format_program(programs[0][1]), encoding="utf-8")
        return OK
    out.mkdir(parents=True, exist_ok=True)
    for seed, p in programs:
        (out / f"gen_{seed:06d}.tfl").write_text(format_program(p), encoding="utf-8")
    return OK


def cmd_minimize(args) -> int:
    paths = _inputs(args)
    if len(paths) != 1:
        raise InputError("minimize takes exactly one input file")
    p = _read_program(paths[0])
    r = tfa_fixpoint(p, build_class_table(p))
    part = bisim_minimize(r)
    q = quotient(r, part)
    sound = all(reaching_types(q, v) == reaching_types(r, v) for v in r.variables)
    dump = "\n".join(part.dump()) + ("\n" if part.blocks else "")
    summary = f"RATIO\t{part.reduction():.4f}\t{len(part)}/{len(part.variables)}\n"
    if args.out:
        _write(args, dump)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(dump + summary)
    if not sound:
        print("quotient changed reaching types", file=sys.stderr)
        return MISMATCH
    return OK


def cmd_stats(args) -> int:
    rows = []
    paths = _inputs(args)
    if paths:
        for path in paths:
            rows.append(differential.collect_stats(path.name, differential.run_all(_read_program(path)), args.timings))
    else:
        cfg = _config(args)
        for seed, p in gen_corpus(cfg, args.count):
            rows.append(differential.collect_stats(f"gen_{seed:06d}", differential.run_all(p), args.timings))
    _write(args, differential.stats_csv(rows))
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="typeflow", description="Type flow analysis workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, files=True):
        if files:
            p.add_argument("files", nargs="*", help=".tfl input files")
            p.add_argument("--corpus-dir", help="analyze every .tfl file in this directory")
        p.add_argument("--out", help="output path (default: standard output)")

    p = sub.add_parser("analyze", help="run analyses and emit call graphs and relation dumps")
    common(p)
    p.add_argument("--analysis", choices=ANALYSES + ("all",), default="tfa")
    p.add_argument("--emit", choices=("dot", "json", "tsv"), default="tsv")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("diff", help="check type flow against points-to results")
    common(p)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("gen", help="generate random programs")
    common(p, files=False)
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="key=value generator configuration file")
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("minimize", help="bisimulation partition and reduction ratio")
    common(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("stats", help="CSV of relation sizes and call edges per analysis")
    common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--config")
    p.add_argument("--count", type=int, default=100, help="generated programs when no files are given")
    p.add_argument("--timings", action="store_true", help="fill in runtime columns (not reproducible)")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "count", 1) is not None and getattr(args, "count", 1) < 1:
        print("typeflow: error: --count must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except InputError as e:
        print(f"typeflow: {e}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
