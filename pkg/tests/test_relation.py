import json

import pytest
from hypothesis import given, settings

from condnorm.expr import Atom, ExprUniverse, If, parse
from condnorm.measures import lex_less, lex_norm2_measure, m
from condnorm.normalize import RuleTag, is_normal, norm, norm2
from condnorm.relation import (
    RelationKind,
    longest_chain,
    prec_norm,
    prec_norm2,
    preds_norm,
    preds_norm2,
    syntactic_preds_norm2,
    verify_measure_witness,
)

from .conftest import exprs

a, b, c, u, v, w, y, z = map(Atom, "abcuvwyz")
IFIF = parse("(if (if u v w) y z)")


def test_preds_norm_examples():
    assert preds_norm(a) == []
    assert preds_norm(If(a, b, c)) == [b, c]
    assert preds_norm(If(a, b, b)) == [b]
    assert preds_norm(IFIF) == [parse("(if u (if v y z) (if w y z))")]


def test_prec_norm_examples():
    assert prec_norm(b, If(a, b, c)) and prec_norm(c, If(a, b, c))
    assert not prec_norm(a, If(a, b, c))  # the test is never called on
    assert not prec_norm(a, a)
    assert prec_norm(parse("(if u (if v y z) (if w y z))"), IFIF)
    assert not prec_norm(If(v, y, z), IFIF)


def test_prec_norm2_examples():
    assert prec_norm2(If(v, y, z), IFIF) and prec_norm2(If(w, y, z), IFIF)
    # outer call: If(u, v', w') for any normal v', w'
    assert prec_norm2(If(u, a, If(b, c, a)), IFIF)
    assert not prec_norm2(If(u, If(If(a, b, c), a, b), a), IFIF)
    assert not prec_norm2(If(v, a, b), IFIF)
    assert prec_norm2(b, If(a, b, c)) and not prec_norm2(a, If(a, b, c))
    assert not prec_norm2(a, a)


def _direct_callees(out, e):
    return {t.callee for t in out.trace if t.caller == e and t.depth == 1}


def test_norm_relation_agrees_with_traces(universe2):
    for e in universe2:
        assert _direct_callees(norm(e, trace=True), e) == set(preds_norm(e))


def test_norm_relation_is_exactly_preds(universe2):
    # prec_norm(x, y) iff x in preds_norm(y), over every pair
    for yy in universe2:
        preds = set(preds_norm(yy))
        for xx in universe2:
            assert prec_norm(xx, yy) == (xx in preds)
        assert all(prec_norm(xx, yy) for xx in preds)


def test_norm2_relation_agrees_with_traces(universe2):
    for e in universe2:
        out = norm2(e, trace=True)
        top = [t for t in out.trace if t.caller == e and t.depth == 1]
        for t in top:
            assert prec_norm2(t.callee, e)
        inner = {t.callee for t in top if t.rule is not RuleTag.IF_IF_OUTER}
        assert inner == set(syntactic_preds_norm2(e))


def test_norm2_minimality(universe2):
    # beyond the syntactic preds, only If(u, v', w') with normal v', w' relate
    for yy in universe2:
        syn = set(syntactic_preds_norm2(yy))
        for xx in universe2:
            if xx in syn:
                assert prec_norm2(xx, yy)
                continue
            expected = (
                isinstance(yy, If) and isinstance(yy.test, If) and isinstance(xx, If)
                and xx.test == yy.test.test and is_normal(xx.then) and is_normal(xx.else_)
            )
            assert prec_norm2(xx, yy) == expected


def test_preds_norm2_pool():
    pool = [a, b, If(If(a, b, c), a, b)]
    preds = preds_norm2(IFIF, pool)
    assert preds[:2] == [If(v, y, z), If(w, y, z)]
    outer = preds[2:]
    assert len(outer) == 4  # the non-normal pool member is dropped
    assert all(prec_norm2(x, IFIF) for x in preds)


@pytest.mark.parametrize(
    "text, longest",
    [("a", 0), ("(if a b c)", 1), ("(if (if u v w) y z)", 3), ("(if (if (if a b c) v w) y z)", 5)],
)
def test_longest_chain_norm(text, longest):
    e = parse(text)
    rep = longest_chain(RelationKind.PREC_NORM, e)
    assert rep.longest == longest
    assert not rep.budget_hit and not rep.cycle_found
    assert len(rep.witness_chain) == longest + 1


@settings(max_examples=50)
@given(exprs(max_leaves=12))
def test_longest_norm_chain_is_deepest_call(e):
    # a chain under the call relation is a path in the call tree
    rep = longest_chain("PREC_NORM", e)
    assert rep.longest == norm(e).max_depth
    for big, small in zip(rep.witness_chain, rep.witness_chain[1:]):
        assert prec_norm(small, big) and m(small) < m(big)


def test_longest_chain_norm2_with_pool():
    pool = [a, b, If(a, b, a)]
    rep = longest_chain(RelationKind.PREC_NORM2, IFIF, pool=pool)
    assert rep.longest == 3 and not rep.budget_hit
    for big, small in zip(rep.witness_chain, rep.witness_chain[1:]):
        assert prec_norm2(small, big)
        assert lex_less(lex_norm2_measure(small), lex_norm2_measure(big))


def test_longest_chain_budget():
    rep = longest_chain("PREC_NORM", parse("(if (if (if a b c) v w) y z)"), budget=3)
    assert rep.budget_hit and rep.nodes_visited == 3
    with pytest.raises(ValueError):
        longest_chain("PREC_NORM", a, budget=0)


@pytest.mark.parametrize("kind", list(RelationKind))
def test_measure_witness_has_no_counterexamples(kind, universe3):
    rep = verify_measure_witness(kind, ExprUniverse(3, ("a", "b")))
    assert rep.passed and rep.edges_checked > 1000
    doc = rep.to_json()
    assert list(doc) == ["kind", "edgesChecked", "counterexamples"]
    assert doc["kind"] == kind.value and doc["counterexamples"] == []
    json.dumps(doc)


def test_measure_witness_reports_a_wrong_edge(monkeypatch):
    import condnorm.relation as rel

    monkeypatch.setattr(rel, "m", lambda e: 1)
    rep = rel.verify_measure_witness("PREC_NORM", [If(a, b, c)])
    assert not rep.passed
    assert rep.to_json()["counterexamples"] == [{"x": "b", "y": "(if a b c)"}, {"x": "c", "y": "(if a b c)"}]
