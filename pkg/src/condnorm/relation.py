"""Recursion relations of ``norm`` and ``norm2`` and evidence that they are well-founded.

``x < y`` under a recursion relation means evaluating the function on ``y``
calls it directly on ``x``.  Nothing here proves well-foundedness; instead
:func:`verify_measure_witness` checks that a measure into a well-founded order
drops along every edge, and :func:`longest_chain` searches for long
descending chains under a visit budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .expr import Atom, Expr, ExprUniverse, If, to_text
from .measures import lex_less, lex_norm2_measure, m
from .normalize import is_normal, norm2_reference


class RelationKind(str, enum.Enum):
    PREC_NORM = "PREC_NORM"
    PREC_NORM2 = "PREC_NORM2"


def preds_norm(y: Expr) -> list[Expr]:
    """All ``x`` with ``x < y`` under the recursion relation of ``norm``."""
    if isinstance(y, Atom):
        return []
    if isinstance(y.test, Atom):
        # a set: If(At a, t, t) has one predecessor
        return [y.then] if y.then == y.else_ else [y.then, y.else_]
    u, v, w = y.test.test, y.test.then, y.test.else_
    return [If(u, If(v, y.then, y.else_), If(w, y.then, y.else_))]


def prec_norm(x: Expr, y: Expr) -> bool:
    if isinstance(y, Atom):
        return False
    if isinstance(y.test, Atom):
        return x == y.then or x == y.else_
    u, v, w = y.test.test, y.test.then, y.test.else_
    return (
        isinstance(x, If)
        and x.test == u
        and isinstance(x.then, If)
        and isinstance(x.else_, If)
        and x.then == If(v, y.then, y.else_)
        and x.else_ == If(w, y.then, y.else_)
    )


def syntactic_preds_norm2(y: Expr) -> list[Expr]:
    """Predecessors of ``y`` under ``norm2``'s relation, minus the existential family."""
    if isinstance(y, Atom):
        return []
    if isinstance(y.test, Atom):
        return [y.then] if y.then == y.else_ else [y.then, y.else_]
    u, v, w = y.test.test, y.test.then, y.test.else_
    left, right = If(v, y.then, y.else_), If(w, y.then, y.else_)
    return [left] if left == right else [left, right]


def prec_norm2(x: Expr, y: Expr) -> bool:
    """Recursion relation of ``norm2``.

    For ``y = If(If(u, v, w), p, q)`` the outer call's argument is
    ``If(u, v', w')`` for normal ``v'``, ``w'``; that existential is decided by
    matching the shape of ``x``.
    """
    if isinstance(y, Atom):
        return False
    if isinstance(y.test, Atom):
        return x == y.then or x == y.else_
    u, v, w = y.test.test, y.test.then, y.test.else_
    if x == If(v, y.then, y.else_) or x == If(w, y.then, y.else_):
        return True
    return isinstance(x, If) and x.test == u and is_normal(x.then) and is_normal(x.else_)


def preds_norm2(y: Expr, pool: Sequence[Expr]) -> list[Expr]:
    """Predecessors of ``y`` under ``norm2``'s relation with ``v'``, ``w'`` from ``pool``.

    ``pool`` is filtered to normal expressions.  The true predecessor set of an
    If-If node is infinite; this is the finite slice that ``pool`` allows.
    """
    out = syntactic_preds_norm2(y)
    if isinstance(y, If) and isinstance(y.test, If):
        u = y.test.test
        normal = [p for p in pool if is_normal(p)]
        seen = set(out)
        for v2 in normal:
            for w2 in normal:
                cand = If(u, v2, w2)
                if cand not in seen:
                    seen.add(cand)
                    out.append(cand)
    return out


# -- chains -------------------------------------------------------------------


@dataclass
class ChainReport:
    """Longest strictly descending chain found from ``start``.

    ``longest`` counts edges.  ``budget_hit`` means the search stopped early;
    it says nothing about infinite chains.  ``cycle_found`` means some
    expression was reached again below itself, which a well-founded relation
    cannot allow.
    """

    start: Expr
    longest: int
    budget_hit: bool
    witness_chain: list[Expr]
    nodes_visited: int = 0
    cycle_found: bool = False


def longest_chain(
    kind: RelationKind,
    start: Expr,
    budget: int = 10_000,
    pool: Optional[Sequence[Expr]] = None,
) -> ChainReport:
    """Depth-first search for the longest descending chain from ``start``.

    The predecessor graph is explored once per distinct node (memoized), so
    ``budget`` bounds the number of distinct expressions expanded.  For
    ``PREC_NORM2`` the existential predecessors come from ``pool``.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    kind = RelationKind(kind)
    if kind is RelationKind.PREC_NORM:
        preds = preds_norm
    else:
        pool = list(pool or ())
        preds = lambda y: preds_norm2(y, pool)  # noqa: E731

    best: dict[Expr, tuple[int, Optional[Expr]]] = {}
    on_path: set[Expr] = set()
    visited = 0
    budget_hit = False
    cycle = False
    stack: list[tuple[Expr, Optional[list[Expr]]]] = [(start, None)]
    while stack:
        node, children = stack.pop()
        if children is None:
            if node in best:
                continue
            if node in on_path:
                cycle = True
                continue
            if visited >= budget:
                budget_hit = True
                best[node] = (0, None)
                continue
            visited += 1
            kids = preds(node)
            on_path.add(node)
            stack.append((node, kids))
            stack.extend((k, None) for k in kids if k not in best)
        else:
            on_path.discard(node)
            length, nxt = 0, None
            for k in children:
                if k in best and best[k][0] + 1 > length:
                    length, nxt = best[k][0] + 1, k
            best[node] = (length, nxt)

    chain = [start]
    while best[chain[-1]][1] is not None:
        chain.append(best[chain[-1]][1])
    return ChainReport(start, best[start][0], budget_hit, chain, visited, cycle)


# -- measure witnesses ----------------------------------------------------------


@dataclass
class WitnessReport:
    kind: RelationKind
    edges_checked: int = 0
    counterexamples: list[tuple[Expr, Expr]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        pairs = sorted((to_text(x), to_text(y)) for x, y in self.counterexamples)
        return {
            "kind": self.kind.value,
            "edgesChecked": self.edges_checked,
            "counterexamples": [{"x": x, "y": y} for x, y in pairs],
        }


def _check_norm_edges(roots: Iterable[Expr], report: WitnessReport, limit: int) -> None:
    # Closure of the roots under preds_norm.  The visited set keeps the walk
    # finite only if the relation has no cycles; ``limit`` guards that case.
    seen: set[Expr] = set()
    stack = list(roots)
    while stack:
        y = stack.pop()
        if y in seen:
            continue
        seen.add(y)
        if len(seen) > limit:
            raise RuntimeError(f"predecessor closure exceeded {limit} expressions")
        my = m(y)
        for x in preds_norm(y):
            report.edges_checked += 1
            if not (prec_norm(x, y) and m(x) < my):
                report.counterexamples.append((x, y))
            stack.append(x)


def _check_norm2_edge(x: Expr, y: Expr, report: WitnessReport) -> None:
    report.edges_checked += 1
    if not (prec_norm2(x, y) and lex_less(lex_norm2_measure(x), lex_norm2_measure(y))):
        report.counterexamples.append((x, y))


def verify_measure_witness(
    kind: RelationKind,
    universe: ExprUniverse | Iterable[Expr],
    pool: Optional[Sequence[Expr]] = None,
    closure_limit: int = 1_000_000,
    norm2_fuel: Optional[int] = None,
) -> WitnessReport:
    """Check that the measure drops along every recursion edge.

    ``PREC_NORM``: ``m(x) < m(y)`` for every pair in the ``preds_norm`` closure
    of the universe.

    ``PREC_NORM2``: ``(tested ifs, size)`` drops lexicographically along every
    edge of every ``norm2`` trace on the universe, every syntactic predecessor
    of every member, and the existential predecessors ``If(u, v', w')`` of each
    If-If member with ``v'``, ``w'`` drawn from the normal members of ``pool``
    (default: the normal universe members with at most one if-node).
    """
    kind = RelationKind(kind)
    members = list(universe)
    report = WitnessReport(kind)
    if kind is RelationKind.PREC_NORM:
        _check_norm_edges(members, report, closure_limit)
    else:
        if pool is None:
            pool = [e for e in members if e.if_count <= 1]
        pool = [p for p in pool if is_normal(p)]
        for y in members:
            out = norm2_reference(y, fuel=norm2_fuel, trace=True)
            for edge in out.trace:
                _check_norm2_edge(edge.callee, edge.caller, report)
            for x in preds_norm2(y, pool):
                _check_norm2_edge(x, y, report)
    report.counterexamples.sort(key=lambda p: (to_text(p[0]), to_text(p[1])))
    return report
