"""The three normalizers and the normal-form predicate.

``norm`` and ``norm2`` may in principle diverge, so they run under an explicit
fuel budget (one unit per invocation) and report exhaustion as an ordinary
outcome.  ``norm1`` and ``normif`` are structurally recursive and need none.

Every function simulates the textbook recursion with an explicit stack.  The
simulation visits calls in exactly the order the naive recursive program
would, so call counts, depths and traces are those of the naive program.

When no trace is requested, ``norm`` and ``norm2`` run on the compiled kernel
over a flat prefix encoding (see :mod:`condnorm.kernels`); the Expr-level
reference here is used for tracing and as the cross-check for the kernels.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional

from . import kernels
from .expr import Atom, Expr, If, to_text
from .measures import m

DEFAULT_NORM2_FUEL = 10**6


class RuleTag(str, enum.Enum):
    AT = "AT"
    IF_AT_LEFT = "IF_AT_LEFT"
    IF_AT_RIGHT = "IF_AT_RIGHT"
    IF_IF = "IF_IF"
    IF_IF_INNER_V = "IF_IF_INNER_V"
    IF_IF_INNER_W = "IF_IF_INNER_W"
    IF_IF_OUTER = "IF_IF_OUTER"


@dataclass(frozen=True)
class CallEdge:
    """One recursive call: ``caller`` invoked the function on ``callee``.

    ``depth`` is the depth of the callee invocation (the outermost call has
    depth 0, so edges start at 1); ``seq`` is the 0-based emission order.
    """

    caller: Expr
    callee: Expr
    rule: RuleTag
    depth: int
    seq: int

    def to_json(self) -> dict:
        return {
            "seq": self.seq,
            "depth": self.depth,
            "rule": self.rule.value,
            "caller": to_text(self.caller),
            "callee": to_text(self.callee),
        }


class Status(str, enum.Enum):
    COMPLETED = "completed"
    FUEL_EXHAUSTED = "fuel_exhausted"


@dataclass
class NormOutcome:
    status: Status
    result: Optional[Expr]
    call_count: int
    max_depth: int
    trace: Optional[list[CallEdge]] = field(default=None, repr=False)

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED


class FuelExhausted(Exception):
    """Raised by :func:`normal_form` when a normalizer runs out of fuel."""


def trace_to_json(trace: list[CallEdge], **dump_kwargs) -> str:
    return json.dumps([edge.to_json() for edge in trace], **dump_kwargs)


def is_normal(e: Expr) -> bool:
    """True iff ``e`` has no subexpression ``If(If(...), _, _)``."""
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, If):
            if isinstance(node.test, If):
                return False
            stack.append(node.else_)
            stack.append(node.then)
    return True


# -- norm -------------------------------------------------------------------

_EVAL, _BUILD, _OUTER = 0, 1, 2


class _Run:
    """Fuel, counters and trace buffer shared by one top-level call."""

    __slots__ = ("fuel", "calls", "max_depth", "trace")

    def __init__(self, fuel: int, trace: bool):
        self.fuel = fuel
        self.calls = 0
        self.max_depth = 0
        self.trace: Optional[list[CallEdge]] = [] if trace else None

    def enter(self, depth: int, caller, callee, rule) -> bool:
        if self.calls >= self.fuel:
            return False
        self.calls += 1
        if depth > self.max_depth:
            self.max_depth = depth
        if self.trace is not None and caller is not None:
            self.trace.append(CallEdge(caller, callee, rule, depth, len(self.trace)))
        return True

    def outcome(self, result: Optional[Expr]) -> NormOutcome:
        status = Status.COMPLETED if result is not None else Status.FUEL_EXHAUSTED
        return NormOutcome(status, result, self.calls, self.max_depth, self.trace)


def _check_fuel(fuel: int) -> int:
    if fuel < 1:
        raise ValueError("fuel must be at least 1")
    return fuel


def norm_reference(e: Expr, fuel: Optional[int] = None, trace: bool = False) -> NormOutcome:
    """``norm`` by direct simulation of its three equations::

        norm(At a)                = At a
        norm(If(At a, y, z))      = If(At a, norm y, norm z)
        norm(If(If(u, v, w), y, z)) = norm(If(u, If(v, y, z), If(w, y, z)))
    """
    run = _Run(_check_fuel(m(e) if fuel is None else fuel), trace)
    values: list[Expr] = []
    # (op, expr, depth, caller, rule)
    stack: list[tuple] = [(_EVAL, e, 0, None, None)]
    while stack:
        op, x, depth, caller, rule = stack.pop()
        if op == _BUILD:
            rz = values.pop()
            ry = values.pop()
            values.append(If(x, ry, rz))
            continue
        if not run.enter(depth, caller, x, rule):
            return run.outcome(None)
        if isinstance(x, Atom):
            values.append(x)
        elif isinstance(x.test, Atom):
            stack.append((_BUILD, x.test, depth, None, None))
            stack.append((_EVAL, x.else_, depth + 1, x, RuleTag.IF_AT_RIGHT))
            stack.append((_EVAL, x.then, depth + 1, x, RuleTag.IF_AT_LEFT))
        else:
            u, v, w = x.test.test, x.test.then, x.test.else_
            y, z = x.then, x.else_
            stack.append((_EVAL, If(u, If(v, y, z), If(w, y, z)), depth + 1, x, RuleTag.IF_IF))
    return run.outcome(values[0])


def norm2_reference(e: Expr, fuel: Optional[int] = None, trace: bool = False) -> NormOutcome:
    """``norm2``: like ``norm`` but the If-If case nests its recursive calls::

        norm2(If(If(u, v, w), y, z)) =
            norm2(If(u, norm2(If(v, y, z)), norm2(If(w, y, z))))

    The outer call's argument is built from the two inner results.
    """
    run = _Run(_check_fuel(DEFAULT_NORM2_FUEL if fuel is None else fuel), trace)
    values: list[Expr] = []
    stack: list[tuple] = [(_EVAL, e, 0, None, None)]
    while stack:
        op, x, depth, caller, rule = stack.pop()
        if op == _BUILD:
            rz = values.pop()
            ry = values.pop()
            values.append(If(x, ry, rz))
            continue
        if op == _OUTER:
            rw = values.pop()
            rv = values.pop()
            stack.append((_EVAL, If(x, rv, rw), depth + 1, caller, RuleTag.IF_IF_OUTER))
            continue
        if not run.enter(depth, caller, x, rule):
            return run.outcome(None)
        if isinstance(x, Atom):
            values.append(x)
        elif isinstance(x.test, Atom):
            stack.append((_BUILD, x.test, depth, None, None))
            stack.append((_EVAL, x.else_, depth + 1, x, RuleTag.IF_AT_RIGHT))
            stack.append((_EVAL, x.then, depth + 1, x, RuleTag.IF_AT_LEFT))
        else:
            u, v, w = x.test.test, x.test.then, x.test.else_
            y, z = x.then, x.else_
            stack.append((_OUTER, u, depth, x, None))
            stack.append((_EVAL, If(w, y, z), depth + 1, x, RuleTag.IF_IF_INNER_W))
            stack.append((_EVAL, If(v, y, z), depth + 1, x, RuleTag.IF_IF_INNER_V))
    return run.outcome(values[0])


def _via_kernel(kernel_fn, e: Expr, fuel: int) -> NormOutcome:
    symtab: dict[str, int] = {}
    codes = kernels.encode(e, symtab)
    ok, out, calls, depth = kernel_fn(codes, fuel)
    result = kernels.decode(out, list(symtab)) if ok else None
    return NormOutcome(Status.COMPLETED if ok else Status.FUEL_EXHAUSTED, result, calls, depth)


def norm(e: Expr, fuel: Optional[int] = None, trace: bool = False) -> NormOutcome:
    """Normalize with ``norm``.  Default fuel is ``m(e)``, which always suffices."""
    if trace:
        return norm_reference(e, fuel, trace=True)
    return _via_kernel(kernels.norm_codes, e, _check_fuel(m(e) if fuel is None else fuel))


def norm2(e: Expr, fuel: Optional[int] = None, trace: bool = False) -> NormOutcome:
    """Normalize with the nested-recursive ``norm2``.  Default fuel is 10**6."""
    if trace:
        return norm2_reference(e, fuel, trace=True)
    return _via_kernel(
        kernels.norm2_codes, e, _check_fuel(DEFAULT_NORM2_FUEL if fuel is None else fuel)
    )


# -- normif / norm1 -----------------------------------------------------------

_N1, _NI, _PUSH2 = 0, 1, 2


def _run_normif_machine(stack: list, values: list) -> Expr:
    # _N1 e:        push norm1(e)
    # _NI x:        pop z, pop y, push normif(x, y, z)
    # _PUSH2 (y,z): push y then z
    while stack:
        op, x = stack.pop()
        if op == _N1:
            if isinstance(x, Atom):
                values.append(x)
            else:
                stack.append((_NI, x.test))
                stack.append((_N1, x.else_))
                stack.append((_N1, x.then))
        elif op == _NI:
            z = values.pop()
            y = values.pop()
            if isinstance(x, Atom):
                values.append(If(x, y, z))
            else:
                # normif(If(u, v, w), y, z) = normif(u, normif(v, y, z), normif(w, y, z))
                stack.append((_NI, x.test))
                stack.append((_NI, x.else_))
                stack.append((_PUSH2, (y, z)))
                stack.append((_NI, x.then))
                values.append(y)
                values.append(z)
        else:
            values.extend(x)
    return values[-1]


def normif(x: Expr, y: Expr, z: Expr) -> Expr:
    """Structural recursion on ``x``::

        normif(At a, y, z)        = If(At a, y, z)
        normif(If(u, v, w), y, z) = normif(u, normif(v, y, z), normif(w, y, z))
    """
    return _run_normif_machine([(_NI, x)], [y, z])


def norm1(e: Expr) -> Expr:
    """``norm1(At a) = At a``; ``norm1(If(x, y, z)) = normif(x, norm1 y, norm1 z)``."""
    return _run_normif_machine([(_N1, e)], [])


ALGORITHMS = ("norm", "norm1", "norm2")


def normal_form(e: Expr, algo: str = "norm", fuel: Optional[int] = None) -> Expr:
    """Result of the chosen normalizer; raises :class:`FuelExhausted` on exhaustion."""
    if algo == "norm1":
        return norm1(e)
    if algo == "norm":
        out = norm(e, fuel)
    elif algo == "norm2":
        out = norm2(e, fuel)
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    if not out.completed:
        raise FuelExhausted(f"{algo} ran out of fuel after {out.call_count} calls")
    return out.result
