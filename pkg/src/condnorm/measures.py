"""Measure functions on expressions and well-founded relation combinators.

A relation here is just a decidable predicate ``holds(smaller, larger)``.
``inverse_image`` and ``lex_combine`` build new relations from old ones the
usual way, so a measure that drops on every recursive call is a witness that
the call relation has no infinite descending chain.
"""

from __future__ import annotations

from typing import Any, Callable, NamedTuple

from .expr import Expr, If, fold


Relation = Callable[[Any, Any], bool]


def m(e: Expr) -> int:
    """Shostak's measure: 1 on atoms, ``m(x) * (1 + m(y) + m(z))`` on ``If(x, y, z)``.

    Exact integers; values grow multiplicatively with the nesting of tests.
    """
    return fold(e, lambda _a: 1, lambda _n, x, y, z: x + x * y + x * z)


def tested_if_count(e: Expr) -> int:
    """Number of subexpressions of shape ``If(If(u, v, w), y, z)``."""
    return fold(
        e,
        lambda _a: 0,
        lambda n, x, y, z: (1 if isinstance(n.test, If) else 0) + x + y + z,
    )


def if_depth(e: Expr) -> int:
    """Length of the test spine: atoms 0, ``If(x, _, _)`` is ``1 + if_depth(x)``.

    This is a reconstruction of the classic IF.DEPTH.  It is informational
    only and no check relies on it.
    """
    depth = 0
    while isinstance(e, If):
        depth += 1
        e = e.test
    return depth


class LexMeasure(NamedTuple):
    """(tested-if count, size), compared lexicographically.

    Tuple ordering already is lexicographic, so ``<`` works as expected.
    """

    tested_ifs: int
    size: int

    def __str__(self):
        return f"({self.tested_ifs},{self.size})"


def lex_norm2_measure(e: Expr) -> LexMeasure:
    return LexMeasure(tested_if_count(e), e.size)


def natural_less(a, b) -> bool:
    return a < b


def inverse_image(f: Callable[[Any], Any], less: Relation = natural_less) -> Relation:
    """Relation ``a' < a`` iff ``less(f(a'), f(a))``."""

    def holds(a_prime, a) -> bool:
        return less(f(a_prime), f(a))

    return holds


def lex_combine(rel_a: Relation, rel_b: Relation) -> Relation:
    """Lexicographic combination on pairs.

    ``(a', b') < (a, b)`` iff ``rel_a(a', a)``, or ``a' == a`` and ``rel_b(b', b)``.
    """

    def holds(p_prime, p) -> bool:
        a_prime, b_prime = p_prime
        a, b = p
        return rel_a(a_prime, a) or (a_prime == a and rel_b(b_prime, b))

    return holds


lex_less: Relation = lex_combine(natural_less, natural_less)

MEASURES: dict[str, Callable[[Expr], Any]] = {
    "m": m,
    "tested-ifs": tested_if_count,
    "if-depth": if_depth,
    "size": lambda e: e.size,
    "lex": lex_norm2_measure,
}
