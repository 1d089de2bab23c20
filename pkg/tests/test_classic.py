from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load
from oracles import entry_var
from typeflow import build_class_table, cha_callgraph, cha_resolve, instantiated_classes, parse_program
from typeflow import rta_callgraph, vta_propagate
from typeflow.classic import FieldNode
from typeflow.frontend import VarId
from typeflow.generator import GenConfig, gen_program


def targets(cg):
    return {t for _, t in cg.edges}


def test_cha_override_chain():
    p = load("override_chain.tfl")
    ct = build_class_table(p)
    assert cha_resolve(ct, "A", "m") == {("A", "m"), ("B", "m"), ("C", "m")}
    assert cha_resolve(ct, "B", "m") == {("B", "m"), ("C", "m")}
    assert targets(cha_callgraph(p, ct)) == {("A", "m"), ("B", "m"), ("C", "m")}


def test_rta_keeps_only_instantiated():
    p = load("override_chain.tfl")
    ct = build_class_table(p)
    assert instantiated_classes(p) == {"B"}
    assert targets(rta_callgraph(p, ct)) == {("B", "m")}


def test_cha_empty_resolution_is_logged(caplog):
    p = parse_program("class A {} class B { m(B p) { return p; } } main { A x; x = x.m(x); }")
    ct = build_class_table(p)
    assert cha_resolve(ct, "A", "m") == frozenset()
    assert "m" in caplog.text


def test_vta_running_example(example):
    ct = build_class_table(example)
    g = vta_propagate(example, ct)
    assert g.reach_of(entry_var("z")) == {"B", "C"}
    assert g.reach_of(FieldNode("A", "f")) == {"B", "C"}
    assert g.reach_of(VarId("A", "m", "this")) == {"A"}
    assert targets(g.callgraph) == {("A", "m")}


def test_vta_uses_given_call_graph(example):
    from typeflow.callgraph import CallGraph

    ct = build_class_table(example)
    g = vta_propagate(example, ct, CallGraph(frozenset()))
    assert g.reach_of(entry_var("z")) == frozenset()
    assert len(g.callgraph) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_rta_within_cha(seed):
    p = gen_program(GenConfig(seed=seed))
    ct = build_class_table(p)
    cha = cha_callgraph(p, ct)
    assert rta_callgraph(p, ct, cha).edges <= cha.edges
