"""Acceptance criteria, one PASS/FAIL line each.

Run standalone with ``python3 tests/test_acceptance.py`` or as part of
``pytest``; the lines are repeated in pytest's terminal summary.
"""

import csv
import io
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, CORPUS, load  # noqa: E402
from oracles import entry_var, naive_pta, naive_tfa  # noqa: E402
from typeflow import (  # noqa: E402
    alias_scc,
    bisim_minimize,
    build_class_table,
    check_refinement,
    check_theorem1,
    class_projection,
    cha_callgraph,
    collect_stats,
    pta_fixpoint,
    quotient,
    reaching_types,
    rta_callgraph,
    run_all,
    tfa_fixpoint,
    vta_propagate,
)
from typeflow.callgraph import Site  # noqa: E402
from typeflow.classic import FieldNode  # noqa: E402
from typeflow.diff import StatsRow, ladder_violations, stats_csv  # noqa: E402
from typeflow.facts import extract_facts  # noqa: E402
from typeflow.generator import GenConfig, gen_corpus  # noqa: E402

pytestmark = pytest.mark.acceptance

# up to 10 classes, hierarchy depth 4, at most 200 statements
CORPUS_CFG = GenConfig(seed=0, classes=(1, 10), max_depth=4, max_statements=200)
N_THEOREM = 1000
N_ORACLE = 200


def report(number: int, title: str, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


_programs = None


def programs():
    global _programs
    if _programs is None:
        _programs = list(gen_corpus(CORPUS_CFG, N_THEOREM))
    return _programs


def test_1_running_example_golden():
    p = load("running_example.tfl")
    ct = build_class_table(p)
    facts = extract_facts(p, ct)
    start = time.perf_counter()
    tfa = tfa_fixpoint(p, ct, facts)
    pta = pta_fixpoint(p, ct, facts)
    cha = cha_callgraph(p, ct)
    rta = rta_callgraph(p, ct, cha)
    vta = vta_propagate(p, ct, cha, facts)
    elapsed = (time.perf_counter() - start) * 1e3
    z = entry_var("z")
    edge = {(Site("main", "main", 7), ("A", "m"))}
    checks = {
        "tfa z={B}": reaching_types(tfa, z) == {"B"},
        "vta z={B,C}": vta.reach_of(z) == {"B", "C"},
        "pta z={B}": class_projection(pta, z) == {"B"},
        "vta A.f={B,C}": vta.reach_of(FieldNode("A", "f")) == {"B", "C"},
        "cha/rta cg": cha.edges == edge and rta.edges == edge,
    }
    failed = [k for k, v in checks.items() if not v]
    ok = not failed and elapsed < 10.0
    assert report(1, "running example golden values", ok, f"{len(checks) - len(failed)}/{len(checks)} exact, {elapsed:.2f} ms (< 10 ms)")


def test_2_reach_equivalence_on_generated_programs():
    progs = programs()
    start = time.perf_counter()
    bad = []
    for seed, p in progs:
        ct = build_class_table(p)
        facts = extract_facts(p, ct)
        tfa, pta = tfa_fixpoint(p, ct, facts), pta_fixpoint(p, ct, facts)
        if not check_theorem1(tfa, pta).ok or tfa.callgraph != pta.callgraph:
            bad.append(seed)
    elapsed = time.perf_counter() - start
    ok = not bad and len(progs) >= 1000 and elapsed < 60
    detail = f"{len(progs) - len(bad)}/{len(progs)} programs agree, {elapsed:.1f} s (< 60 s)"
    if bad:
        detail += f", first failing seed {bad[0]}"
    assert report(2, "TFA reach equals PTA class projection", ok, detail)


def test_3_semi_naive_equals_naive():
    start = time.perf_counter()
    bad = []
    for seed, p in programs()[:N_ORACLE]:
        r = tfa_fixpoint(p)
        tf, order, fld, edges = naive_tfa(p)
        same_tfa = (r.store.typeflow, r.store.order, r.store.fieldaccess, r.callgraph.edges) == (tf, order, fld, edges)
        pr = pta_fixpoint(p)
        env, heap, pedges = naive_pta(p)
        same_env = all({(o.site, o.cls) for o in pr.points_to(v)} == objs for v, objs in env.items())
        same_heap = {((o.site, o.cls), f): {(t.site, t.cls) for t in ts} for (o, f), ts in pr.heap.items() if ts} == heap
        if not (same_tfa and same_env and same_heap and pr.callgraph.edges == pedges):
            bad.append(seed)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    detail = f"{N_ORACLE - len(bad)}/{N_ORACLE} programs identical on all relations, {elapsed:.1f} s (< 120 s)"
    assert report(3, "worklist solvers equal naive re-evaluation", ok, detail)


def test_4_precision_ladder():
    violations = []
    for seed, p in programs():
        for v in ladder_violations(run_all(p)):
            violations.append(f"seed {seed}: {v}")
    for path in sorted(CORPUS.glob("*.tfl")):
        violations += [f"{path.name}: {v}" for v in ladder_violations(run_all(load(path.name)))]
    detail = f"{len(violations)} violations over {len(programs())} generated + corpus programs"
    if violations:
        detail += f"; first: {violations[0]}"
    assert report(4, "PTA = TFA <= VTA <= RTA <= CHA", not violations, detail)


def test_5_refinement():
    ok_count = sum(check_refinement(alias_scc(r), bisim_minimize(r)) for r in (tfa_fixpoint(p) for _, p in programs()))
    total = len(programs())
    assert report(5, "alias SCC partition refines bisimulation", ok_count == total and total >= 1000, f"{ok_count}/{total}")


def test_6_quotient_soundness():
    bad = []
    for seed, p in programs():
        r = tfa_fixpoint(p)
        part = bisim_minimize(r)
        q = quotient(r, part)
        same = all(reaching_types(q, v) == reaching_types(r, v) for v in r.variables)
        again = bisim_minimize(q)
        idempotent = again.blocks == tuple((b[0],) for b in part.blocks)
        if not (same and idempotent):
            bad.append(seed)
    detail = f"{len(programs()) - len(bad)}/{len(programs())} programs keep reach and minimize idempotently"
    assert report(6, "bisimulation quotient soundness", not bad, detail)


def test_7_stats_csv_shape():
    rows = [collect_stats(f"gen_{seed:06d}", run_all(p)) for seed, p in programs()[:100]]
    parsed = list(csv.reader(io.StringIO(stats_csv(rows))))
    header = parsed[0]
    wanted = ["r_tf", "r_ord", "r_fld", "cs_cha", "cs_rta", "cs_vta", "cs_tfa", "cs_pta", "nodes_origin", "nodes_opt", "reduce"]
    ok = (
        header == StatsRow.header()
        and all(c in header for c in wanted)
        and len(parsed) == 101
        and all(len(r) == len(header) for r in parsed[1:])
    )
    assert report(7, "stats CSV columns", ok, f"{len(header)} columns, {len(parsed) - 1} rows")


def _cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    res = subprocess.run([sys.executable, "-m", "typeflow", *args], capture_output=True, env=env)
    return res.returncode, res.stdout


def test_8_determinism(tmp_path):
    example = str(CORPUS / "running_example.tfl")
    commands = [
        ["analyze", "--analysis", "all", example],
        ["analyze", "--analysis", "all", "--emit", "json", example],
        ["analyze", "--analysis", "all", "--emit", "dot", example],
        ["diff", "--corpus-dir", str(CORPUS)],
        ["gen", "--seed", "3"],
        ["minimize", str(CORPUS / "this_filter.tfl")],
        ["stats", "--count", "20", "--seed", "100"],
    ]
    differing = []
    for args in commands:
        a, b = _cli(args, 1), _cli(args, 2)
        if a != b or a[0] != 0:
            differing.append(args[0])
    gen_dirs = []
    for hs in (1, 2):
        d = tmp_path / f"gen{hs}"
        env = dict(os.environ, PYTHONHASHSEED=str(hs))
        subprocess.run([sys.executable, "-m", "typeflow", "gen", "--count", "5", "--out", str(d)], env=env, check=True)
        gen_dirs.append({f.name: f.read_bytes() for f in d.iterdir()})
    if gen_dirs[0] != gen_dirs[1]:
        differing.append("gen --out")
    total = len(commands) + 1
    detail = f"{total - len(differing)}/{total} invocations byte-identical across hash seeds"
    if differing:
        detail += f"; differing: {', '.join(differing)}"
    assert report(8, "deterministic output", not differing, detail)


if __name__ == "__main__":
    import tempfile

    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                pass
