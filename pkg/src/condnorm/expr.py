"""Conditional expressions: atoms and three-way ``if`` nodes.

Expressions are immutable trees.  Every traversal here is iterative so very
deep trees (long test spines, say) never hit the interpreter recursion limit.

Concrete syntax::

    expr ::= SYMBOL | "(" "if" expr expr expr ")"

with ``SYMBOL`` matching ``[A-Za-z_][A-Za-z0-9_]*`` other than ``if``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator, Sequence, TypeVar

T = TypeVar("T")

RESERVED = "if"
_SYMBOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"\s*(?:(\()|(\))|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ExprSyntaxError(ValueError):
    """Malformed expression text.  ``pos`` is the offending character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def check_symbol(name: str) -> str:
    if not isinstance(name, str) or not _SYMBOL_RE.match(name):
        raise ValueError(f"invalid symbol {name!r}")
    if name == RESERVED:
        raise ValueError(f"{RESERVED!r} is reserved and cannot be used as an atom")
    return name


class Expr:
    """Base class of :class:`Atom` and :class:`If`."""

    __slots__ = ("_hash", "size", "if_count", "depth")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if a._hash != b._hash or a.size != b.size:
                return False
            if isinstance(a, Atom):
                if not isinstance(b, Atom) or a.name != b.name:
                    return False
            else:
                if not isinstance(b, If):
                    return False
                stack.append((a.else_, b.else_))
                stack.append((a.then, b.then))
                stack.append((a.test, b.test))
        return True

    def __hash__(self):
        return self._hash

    def __str__(self):
        return to_text(self)

    def __setattr__(self, key, value):
        raise AttributeError("expressions are immutable")


class Atom(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        check_symbol(name)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("At", name)))
        object.__setattr__(self, "size", 1)
        object.__setattr__(self, "if_count", 0)
        object.__setattr__(self, "depth", 0)

    def __repr__(self):
        return f"Atom({self.name!r})"

    def __reduce__(self):
        return (Atom, (self.name,))


class If(Expr):
    __slots__ = ("test", "then", "else_")

    def __init__(self, test: Expr, then: Expr, else_: Expr):
        for child in (test, then, else_):
            if not isinstance(child, Expr):
                raise TypeError(f"If children must be expressions, got {child!r}")
        set_ = object.__setattr__
        set_(self, "test", test)
        set_(self, "then", then)
        set_(self, "else_", else_)
        set_(self, "_hash", hash(("If", test._hash, then._hash, else_._hash)))
        set_(self, "size", 1 + test.size + then.size + else_.size)
        set_(self, "if_count", 1 + test.if_count + then.if_count + else_.if_count)
        set_(self, "depth", 1 + max(test.depth, then.depth, else_.depth))

    def __repr__(self):
        return f"If({self.test!r}, {self.then!r}, {self.else_!r})"

    def __reduce__(self):
        return (If, (self.test, self.then, self.else_))


def fold(e: Expr, on_atom: Callable[[Atom], T], on_if: Callable[[If, T, T, T], T]) -> T:
    """Bottom-up catamorphism without Python recursion."""
    values: list = []
    stack: list = [(e, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Atom):
            values.append(on_atom(node))
        elif expanded:
            z = values.pop()
            y = values.pop()
            x = values.pop()
            values.append(on_if(node, x, y, z))
        else:
            stack.append((node, True))
            stack.append((node.else_, False))
            stack.append((node.then, False))
            stack.append((node.test, False))
    return values[0]


# -- text ------------------------------------------------------------------


def parse(text: str) -> Expr:
    """Parse one expression; the whole input must be consumed."""
    pos = 0
    n = len(text)
    # Each open frame collects children of an ``(if ...`` form.
    frames: list[tuple[int, list[Expr]]] = []
    result: Expr | None = None
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        pos = m.end()
        lpar, rpar, sym, junk = m.groups()
        if junk is not None:
            raise ExprSyntaxError(f"unexpected character {junk!r}", start)
        if result is not None:
            raise ExprSyntaxError("trailing input after expression", start)
        if lpar:
            m2 = _TOKEN_RE.match(text, pos)
            if m2 is None or m2.group(3) != RESERVED:
                where = m2.start(m2.lastindex) if m2 else n
                raise ExprSyntaxError("expected 'if' after '('", where)
            pos = m2.end()
            frames.append((start, []))
            continue
        if rpar:
            if not frames:
                raise ExprSyntaxError("unbalanced ')'", start)
            open_pos, kids = frames.pop()
            if len(kids) != 3:
                raise ExprSyntaxError(
                    f"'if' takes exactly 3 arguments, got {len(kids)}", start
                )
            node: Expr = If(*kids)
        else:
            if sym == RESERVED:
                raise ExprSyntaxError(f"reserved word {RESERVED!r} used as an atom", start)
            node = Atom(sym)
        if frames:
            kids = frames[-1][1]
            if len(kids) == 3:
                raise ExprSyntaxError("'if' takes exactly 3 arguments, got more", start)
            kids.append(node)
        else:
            result = node
    if frames:
        raise ExprSyntaxError("unclosed '('", n)
    if result is None:
        raise ExprSyntaxError("empty input", n)
    return result


def to_text(e: Expr) -> str:
    """Canonical text: ``(if x y z)`` with single spaces."""
    out: list[str] = []
    stack: list = [e]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Atom):
            out.append(item.name)
        else:
            out.append("(if ")
            stack.extend((")", item.else_, " ", item.then, " ", item.test))
    return "".join(out)


# -- metrics ---------------------------------------------------------------


def size(e: Expr) -> int:
    """Node count; atoms and if-nodes each count one."""
    return e.size


def atoms_of(e: Expr) -> list[str]:
    """Distinct atom names in first-occurrence (left-to-right) order."""
    seen: dict[str, None] = {}
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            seen.setdefault(node.name)
        else:
            stack.extend((node.else_, node.then, node.test))
    return list(seen)


def subterms(e: Expr) -> Iterator[Expr]:
    """Preorder walk over every subexpression, ``e`` included."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, If):
            stack.extend((node.else_, node.then, node.test))


# -- generators ------------------------------------------------------------


@dataclass(frozen=True)
class ExprUniverse:
    """All expressions with at most ``max_ifs`` if-nodes over ``alphabet``."""

    max_ifs: int
    alphabet: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if self.max_ifs < 0:
            raise ValueError("max_ifs must be nonnegative")
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet has duplicate symbols")
        for name in self.alphabet:
            check_symbol(name)

    def __iter__(self) -> Iterator[Expr]:
        return enumerate_universe(self)

    def count(self) -> int:
        return sum(universe_count(k, len(self.alphabet)) for k in range(self.max_ifs + 1))


def universe_count(ifs: int, n_symbols: int) -> int:
    """Number of expressions with exactly ``ifs`` if-nodes: ternary Catalan x n^(2k+1)."""
    from math import comb

    shapes = comb(3 * ifs, ifs) // (2 * ifs + 1)
    return shapes * n_symbols ** (2 * ifs + 1)


@lru_cache(maxsize=None)
def _exact(ifs: int, alphabet: tuple[str, ...]) -> tuple[Expr, ...]:
    if ifs == 0:
        return tuple(Atom(a) for a in alphabet)
    out: list[Expr] = []
    for i in range(ifs):
        for j in range(ifs - i):
            k = ifs - 1 - i - j
            for x, y, z in product(_exact(i, alphabet), _exact(j, alphabet), _exact(k, alphabet)):
                out.append(If(x, y, z))
    out.sort(key=to_text)
    return tuple(out)


def enumerate_universe(u: ExprUniverse) -> Iterator[Expr]:
    """Each member exactly once: if-count ascending, then by canonical text."""
    for k in range(u.max_ifs + 1):
        yield from _exact(k, u.alphabet)


def random_expr(seed: int, max_depth: int, alphabet: Sequence[str], p_if: float = 0.3) -> Expr:
    """Random expression of depth at most ``max_depth``, deterministic in ``seed``.

    The root is an if-node whenever ``max_depth > 0``; every other position
    above the depth cap becomes one with probability ``p_if``.  Normal forms
    grow exponentially with test nesting, so large ``p_if`` makes the upper
    tail expensive to normalize.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be nonnegative")
    if not alphabet:
        raise ValueError("alphabet must be nonempty")
    rng = random.Random(seed)
    atoms = [Atom(a) for a in alphabet]

    # Build top-down decisions, then assemble bottom-up.
    values: list[Expr] = []
    stack: list = [(0, False)]
    while stack:
        depth, expanded = stack.pop()
        if expanded:
            z = values.pop()
            y = values.pop()
            x = values.pop()
            values.append(If(x, y, z))
        elif depth < max_depth and (depth == 0 or rng.random() < p_if):
            stack.append((depth, True))
            stack.extend([(depth + 1, False)] * 3)
        else:
            values.append(rng.choice(atoms))
    return values[0]

