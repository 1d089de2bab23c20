import csv
import io

import pytest

from conftest import load
from typeflow import check_program, check_theorem1, collect_stats, compare_callgraphs, parse_program
from typeflow import pta_fixpoint, run_all, tfa_fixpoint
from typeflow.callgraph import CallGraph, Site
from typeflow.diff import StatsRow, ladder_violations, shrink, stats_csv, without_statement
from typeflow.tfa import RelationStore


def test_equivalence_on_running_example(example):
    rep = check_theorem1(tfa_fixpoint(example), pta_fixpoint(example))
    assert rep.ok and rep.render() == ["OK"]
    assert rep.stats["tfa_edges"] == rep.stats["pta_edges"] == 1


def test_equivalence_rejects_foreign_results(example):
    with pytest.raises(ValueError):
        check_theorem1(tfa_fixpoint(example), pta_fixpoint(load("null_witness.tfl")))


def _forgetful_tfa(p, ct=None, facts=None):
    """Drops every derived type flow fact; a deliberately broken engine."""
    from dataclasses import replace

    r = tfa_fixpoint(p, ct, facts)
    store = RelationStore(r.base.typeflow, r.store.order, r.store.fieldaccess)
    return replace(r, store=store)


def test_broken_engine_gets_small_witness(example):
    rep = check_program(example, tfa_fn=_forgetful_tfa)
    assert not rep.ok
    assert rep.witness is not None
    assert rep.witness.statement_count() < example.statement_count()
    assert not check_program(rep.witness, tfa_fn=_forgetful_tfa, minimize_witness=False).ok


def test_shrink_reaches_one_minimal_statement(example):
    from typeflow.frontend import Call

    def has_call(q):
        return any(isinstance(s, Call) for _, _, s in q.statements())

    small = shrink(example, has_call)
    assert [type(s).__name__ for _, _, s in small.statements()] == ["Call"]


def test_without_statement_in_method(example):
    q = without_statement(example, ("A", "m"), 1)
    assert q.classes[0].methods[0].body == ()
    assert q.entry_body == example.entry_body


def test_compare_callgraphs():
    s1, s2 = Site("main", "main", 1), Site("main", "main", 2)
    a = CallGraph(frozenset({(s1, ("A", "m")), (s2, ("A", "m"))}))
    b = CallGraph(frozenset({(s1, ("A", "m")), (s1, ("B", "m"))}))
    d = compare_callgraphs(a, b)
    assert d.only_a == {(s2, ("A", "m"))}
    assert d.only_b == {(s1, ("B", "m"))}
    assert d.shared == {(s1, ("A", "m"))}
    assert not d.symmetric
    assert compare_callgraphs(a, a).symmetric


def test_compare_callgraphs_unknown_site(example):
    bogus = CallGraph(frozenset({(Site("main", "main", 1), ("A", "m"))}))
    with pytest.raises(ValueError, match="not a call"):
        compare_callgraphs(bogus, bogus, example)


@pytest.mark.parametrize("name", ["running_example.tfl", "override_chain.tfl", "this_filter.tfl"])
def test_ladder_on_corpus(name):
    assert ladder_violations(run_all(load(name))) == []


def test_stats_running_example(example):
    row = collect_stats("running_example", run_all(example))
    assert (row.r_tf, row.r_ord, row.r_fld) == (4, 0, 2)
    assert (row.cs_cha, row.cs_rta, row.cs_vta, row.cs_tfa, row.cs_pta) == (1, 1, 1, 1, 1)
    assert (row.nodes_origin, row.nodes_opt) == (9, 4)
    assert row.t_tfa_ms is None
    text = stats_csv([row])
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == StatsRow.header()
    assert rows[1][rows[0].index("reduce")] == "0.5556"


def test_stats_with_timings(example):
    row = collect_stats("running_example", run_all(example), timings=True)
    assert row.t_tfa_ms is not None and row.t_tfa_ms >= 0


def test_empty_program_stats():
    row = collect_stats("empty", run_all(parse_program("main { }")))
    assert row.reduce == 0.0 and row.nodes_origin == 0
