"""Exhaustive property suites over an enumerated universe of expressions.

Each suite returns a :class:`SuiteResult` with counts and (capped, sorted)
counterexamples.  Suites are independent, so :func:`run_suites` may farm them
out to worker processes; results always come back in suite order.
"""

from __future__ import annotations

import itertools
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import kernels
from .expr import Expr, ExprUniverse, If, atoms_of, random_expr, to_text
from .measures import m, tested_if_count
from .normalize import (
    DEFAULT_NORM2_FUEL,
    RuleTag,
    is_normal,
    norm1,
    norm2_reference,
    norm_reference,
)
from .relation import (
    RelationKind,
    preds_norm,
    prec_norm,
    prec_norm2,
    syntactic_preds_norm2,
    verify_measure_witness,
)
from .semantics import eval_expr, falsifying_assignment, is_tautology, semantically_equal

SUITES = (
    "measure-decrease",
    "equivalence",
    "isn",
    "idempotence",
    "fold-lemma",
    "semantics",
    "relation-edges",
    "lex-witness",
    "taut-oracle",
)
HARD_CAP = 4
MAX_STORED_COUNTEREXAMPLES = 25
# norm2 has no known call bound in terms of m; this only has to be generous.
VERIFY_NORM2_FUEL = 10**8
IF_CODE = array("i", [kernels.IF])


class ConfigError(ValueError):
    pass


@dataclass
class VerifySuiteConfig:
    max_ifs: int = 3
    alphabet: tuple[str, ...] = ("a", "b")
    suites: tuple[str, ...] = SUITES
    fuel_override: Optional[int] = None
    parallelism: int = 1
    hard_cap: int = HARD_CAP
    fold_max_ifs: int = 2
    random_samples: int = 0
    random_depth: int = 6
    random_alphabet: Optional[tuple[str, ...]] = None
    seed: int = 0

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        self.suites = tuple(self.suites)
        if not self.suites:
            raise ConfigError("at least one suite is required")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suite(s): {', '.join(unknown)}")
        if not 0 <= self.max_ifs <= self.hard_cap:
            raise ConfigError(f"max-ifs must be between 0 and the hard cap {self.hard_cap}")
        if self.fuel_override is not None and self.fuel_override < 1:
            raise ConfigError("fuel must be at least 1")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be at least 1")
        if self.random_samples < 0 or self.random_depth < 0:
            raise ConfigError("random sample settings must be nonnegative")
        try:
            self.universe()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def universe(self) -> ExprUniverse:
        return ExprUniverse(self.max_ifs, self.alphabet)

    def to_json(self) -> dict:
        return {
            "maxIfs": self.max_ifs,
            "alphabet": list(self.alphabet),
            "suites": list(self.suites),
            "fuelOverride": self.fuel_override,
            "foldMaxIfs": self.fold_max_ifs,
            "randomSamples": self.random_samples,
            "randomDepth": self.random_depth,
            "seed": self.seed,
        }


@dataclass
class SuiteResult:
    suite: str
    expressions_checked: int = 0
    edges_checked: int = 0
    failures: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, check: str, **details) -> None:
        self.failures += 1
        if len(self.counterexamples) < MAX_STORED_COUNTEREXAMPLES:
            self.counterexamples.append({"check": check, **details})

    def merge(self, other: "SuiteResult") -> None:
        self.expressions_checked += other.expressions_checked
        self.edges_checked += other.edges_checked
        self.failures += other.failures
        room = MAX_STORED_COUNTEREXAMPLES - len(self.counterexamples)
        self.counterexamples.extend(other.counterexamples[: max(room, 0)])
        for k, v in other.stats.items():
            self.stats[k] = max(self.stats.get(k, v), v)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "expressionsChecked": self.expressions_checked,
            "edgesChecked": self.edges_checked,
            "failures": self.failures,
            "counterexamples": sorted(self.counterexamples, key=lambda c: sorted(c.items())),
            "stats": dict(sorted(self.stats.items())),
        }


def _bump(stats: dict, key: str, value: int) -> None:
    if value > stats.get(key, -1):
        stats[key] = value


# -- individual suites ------------------------------------------------------


def check_measure_decrease(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    """m drops on every norm call edge, by exactly m(u)(m(y)+m(z)) on If-If edges,
    and norm completes within fuel m(e)."""
    res = SuiteResult("measure-decrease")
    for e in members:
        res.expressions_checked += 1
        me = m(e)
        fuel = cfg.fuel_override or me
        out = norm_reference(e, fuel=fuel, trace=True)
        if not out.completed:
            res.fail("fuel-exhausted", expr=to_text(e), fuel=fuel, calls=out.call_count)
        elif out.call_count > me:
            res.fail("call-count-above-m", expr=to_text(e), calls=out.call_count, m=me)
        _bump(res.stats, "maxCallCount", out.call_count)
        for edge in out.trace:
            res.edges_checked += 1
            mx, my = m(edge.callee), m(edge.caller)
            if not mx < my:
                res.fail("m-not-decreasing", caller=to_text(edge.caller), callee=to_text(edge.callee))
            if edge.rule is RuleTag.IF_IF:
                u = edge.caller.test.test
                mu = m(u)
                expected = mu * m(edge.caller.then) + mu * m(edge.caller.else_)
                if my - mx != expected:
                    res.fail(
                        "if-if-difference",
                        caller=to_text(edge.caller),
                        difference=my - mx,
                        expected=expected,
                    )
    return res


def _random_members(cfg: VerifySuiteConfig) -> list[Expr]:
    alphabet = cfg.random_alphabet or cfg.alphabet
    return [random_expr(cfg.seed + i, cfg.random_depth, alphabet) for i in range(cfg.random_samples)]


def _norm_fuel(e: Expr, cfg: VerifySuiteConfig) -> int:
    return cfg.fuel_override or m(e)


def check_equivalence(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    """norm, norm1 and norm2 agree; compiled kernels agree with the reference.

    Universe members go through both the Expr-level reference and the kernels.
    Random samples (if configured) run on the kernels only, since their normal
    forms can have hundreds of thousands of nodes.
    """
    res = SuiteResult("equivalence")
    norm2_fuel = cfg.fuel_override or VERIFY_NORM2_FUEL
    for e in members:
        res.expressions_checked += 1
        r = norm_reference(e, fuel=_norm_fuel(e, cfg))
        r2 = norm2_reference(e, fuel=norm2_fuel)
        r1 = norm1(e)
        if not (r.completed and r2.completed):
            res.fail("fuel-exhausted", expr=to_text(e))
            continue
        _bump(res.stats, "maxNorm2CallCount", r2.call_count)
        if not (r.result == r1 == r2.result):
            res.fail("disagree", expr=to_text(e))
        symtab: dict[str, int] = {}
        codes = kernels.encode(e, symtab)
        names = list(symtab)
        k = kernels.norm_codes(codes, _norm_fuel(e, cfg))
        k2 = kernels.norm2_codes(codes, norm2_fuel)
        k1 = kernels.norm1_codes(codes)
        if (
            k[1] is None
            or k2[1] is None
            or kernels.decode(k[1], names) != r.result
            or kernels.decode(k2[1], names) != r.result
            or kernels.decode(k1, names) != r.result
            or k[2:] != (r.call_count, r.max_depth)
            or k2[2:] != (r2.call_count, r2.max_depth)
        ):
            res.fail("kernel-mismatch", expr=to_text(e), backend=kernels.BACKEND)
    for e in _random_members(cfg):
        res.expressions_checked += 1
        codes = kernels.encode(e, {})
        ok, a, calls, _ = kernels.norm_codes(codes, _norm_fuel(e, cfg))
        ok2, b, calls2, _ = kernels.norm2_codes(codes, norm2_fuel)
        c = kernels.norm1_codes(codes)
        if not (ok and ok2):
            res.fail("fuel-exhausted", expr=to_text(e))
            continue
        _bump(res.stats, "maxRandomNormCallCount", calls)
        _bump(res.stats, "maxNorm2CallCount", calls2)
        _bump(res.stats, "maxRandomResultSize", len(a))
        if not (a == b == c):
            res.fail("disagree", expr=to_text(e))
    return res


def check_isn(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    """Every result is normal; normal inputs give normal norm2 results; the
    tested-if counter vanishes exactly on normal forms."""
    res = SuiteResult("isn")
    norm2_fuel = cfg.fuel_override or VERIFY_NORM2_FUEL
    for e in members:
        res.expressions_checked += 1
        if (tested_if_count(e) == 0) != is_normal(e):
            res.fail("counter-vs-isn", expr=to_text(e))
        r = norm_reference(e, fuel=_norm_fuel(e, cfg))
        r2 = norm2_reference(e, fuel=norm2_fuel)
        if not (r.completed and r2.completed):
            res.fail("fuel-exhausted", expr=to_text(e))
            continue
        for algo, out in (("norm", r.result), ("norm1", norm1(e)), ("norm2", r2.result)):
            if not is_normal(out) or tested_if_count(out) != 0:
                res.fail("result-not-normal", algo=algo, expr=to_text(e))
        if is_normal(e):
            res.stats["normalInputs"] = res.stats.get("normalInputs", 0) + 1
            if not is_normal(r2.result):
                res.fail("isn-not-preserved", expr=to_text(e))
    return res


def check_idempotence(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    res = SuiteResult("idempotence")
    for e in members:
        res.expressions_checked += 1
        once = norm_reference(e, fuel=_norm_fuel(e, cfg))
        if not once.completed:
            res.fail("fuel-exhausted", expr=to_text(e))
            continue
        twice = norm_reference(once.result, fuel=_norm_fuel(once.result, cfg))
        if not twice.completed or twice.result != once.result:
            res.fail("not-idempotent", expr=to_text(e))
    return res


def fold_lemma_shard(
    pool: Sequence[Expr], x_indices: Sequence[int], fuel_override: Optional[int] = None
) -> SuiteResult:
    """norm(If(x, norm y, norm z)) == norm(If(x, y, z)) for x in the shard, all y, z.

    Runs on the kernels over prefix codes: this is the hottest loop in the
    package (the full triple product of the sub-universe).
    """
    res = SuiteResult("fold-lemma")
    symtab: dict[str, int] = {}
    codes = [kernels.encode(e, symtab) for e in pool]
    ms = [m(e) for e in pool]
    normed = []
    for c, mc in zip(codes, ms):
        ok, out, _, _ = kernels.norm_codes(c, fuel_override or mc)
        if not ok:
            raise RuntimeError("norm exhausted its fuel on a fold-lemma operand")
        normed.append(out)
    names = list(symtab)
    ms_normed = [m(kernels.decode(c, names)) for c in normed]
    n = len(pool)
    norm_codes = kernels.norm_codes
    for i in x_indices:
        head = IF_CODE + codes[i]
        mx = ms[i]
        for j in range(n):
            head_y = head + codes[j]
            head_ny = head + normed[j]
            for k in range(n):
                rhs = norm_codes(head_y + codes[k], fuel_override or mx * (1 + ms[j] + ms[k]))
                lhs = norm_codes(
                    head_ny + normed[k], fuel_override or mx * (1 + ms_normed[j] + ms_normed[k])
                )
                if not (lhs[0] and rhs[0]):
                    res.fail("fuel-exhausted", x=to_text(pool[i]), y=to_text(pool[j]), z=to_text(pool[k]))
                elif lhs[1] != rhs[1]:
                    res.fail("fold-lemma", x=to_text(pool[i]), y=to_text(pool[j]), z=to_text(pool[k]))
        res.expressions_checked += n * n
    return res


def _fold_pool(cfg: VerifySuiteConfig) -> list[Expr]:
    return list(ExprUniverse(min(cfg.fold_max_ifs, cfg.max_ifs), cfg.alphabet))


def check_fold_lemma(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    pool = _fold_pool(cfg)
    return fold_lemma_shard(pool, range(len(pool)), cfg.fuel_override)


def check_semantics(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    res = SuiteResult("semantics")
    norm2_fuel = cfg.fuel_override or VERIFY_NORM2_FUEL
    for e in members:
        res.expressions_checked += 1
        r = norm_reference(e, fuel=_norm_fuel(e, cfg))
        r2 = norm2_reference(e, fuel=norm2_fuel)
        if not (r.completed and r2.completed):
            res.fail("fuel-exhausted", expr=to_text(e))
            continue
        for algo, out in (("norm", r.result), ("norm1", norm1(e)), ("norm2", r2.result)):
            if not semantically_equal(e, out):
                res.fail("meaning-changed", algo=algo, expr=to_text(e))
    return res


def check_relation_edges(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    """Trace edges lie in the recursion relations, and per caller the callees
    are exactly the relation's (syntactic) predecessors."""
    res = SuiteResult("relation-edges")
    norm2_fuel = cfg.fuel_override or VERIFY_NORM2_FUEL
    for e in members:
        res.expressions_checked += 1
        out = norm_reference(e, fuel=_norm_fuel(e, cfg), trace=True)
        callees: dict[Expr, set[Expr]] = {}
        for edge in out.trace:
            res.edges_checked += 1
            callees.setdefault(edge.caller, set()).add(edge.callee)
            if not prec_norm(edge.callee, edge.caller):
                res.fail("norm-edge", caller=to_text(edge.caller), callee=to_text(edge.callee))
        for caller, got in callees.items():
            if got != set(preds_norm(caller)):
                res.fail("norm-callees", caller=to_text(caller))

        out2 = norm2_reference(e, fuel=norm2_fuel, trace=True)
        inner: dict[Expr, set[Expr]] = {}
        for edge in out2.trace:
            res.edges_checked += 1
            x, y = edge.callee, edge.caller
            if not prec_norm2(x, y):
                res.fail("norm2-edge", rule=edge.rule.value, caller=to_text(y), callee=to_text(x))
            if edge.rule is RuleTag.IF_IF_OUTER:
                u, v, w = y.test.test, y.test.then, y.test.else_
                rv = norm2_reference(If(v, y.then, y.else_), fuel=norm2_fuel).result
                rw = norm2_reference(If(w, y.then, y.else_), fuel=norm2_fuel).result
                if x != If(u, rv, rw) or not (is_normal(rv) and is_normal(rw)):
                    res.fail("norm2-outer", caller=to_text(y), callee=to_text(x))
            else:
                inner.setdefault(y, set()).add(x)
        for caller, got in inner.items():
            if got != set(syntactic_preds_norm2(caller)):
                res.fail("norm2-callees", caller=to_text(caller))
    return res


def check_lex_witness(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    res = SuiteResult("lex-witness")
    res.expressions_checked = len(members)
    for kind in (RelationKind.PREC_NORM, RelationKind.PREC_NORM2):
        rep = verify_measure_witness(kind, members, norm2_fuel=cfg.fuel_override or VERIFY_NORM2_FUEL)
        res.edges_checked += rep.edges_checked
        res.stats[f"{kind.value}.edges"] = rep.edges_checked
        for x, y in rep.counterexamples:
            res.fail(kind.value, x=to_text(x), y=to_text(y))
    return res


def check_taut_oracle(members: Sequence[Expr], cfg: VerifySuiteConfig) -> SuiteResult:
    res = SuiteResult("taut-oracle")
    for e in members:
        res.expressions_checked += 1
        atoms = atoms_of(e)
        oracle = all(
            eval_expr(e, dict(zip(atoms, bits)))
            for bits in itertools.product((False, True), repeat=len(atoms))
        )
        if is_tautology(e) != oracle:
            res.fail("oracle-disagrees", expr=to_text(e), oracle=oracle)
        rho = falsifying_assignment(e)
        if (rho is None) != oracle or (rho is not None and eval_expr(e, rho)):
            res.fail("bad-falsifier", expr=to_text(e))
    return res


SUITE_FUNCS: dict[str, Callable[[Sequence[Expr], VerifySuiteConfig], SuiteResult]] = {
    "measure-decrease": check_measure_decrease,
    "equivalence": check_equivalence,
    "isn": check_isn,
    "idempotence": check_idempotence,
    "fold-lemma": check_fold_lemma,
    "semantics": check_semantics,
    "relation-edges": check_relation_edges,
    "lex-witness": check_lex_witness,
    "taut-oracle": check_taut_oracle,
}


def run_suite(name: str, cfg: VerifySuiteConfig) -> SuiteResult:
    return SUITE_FUNCS[name](list(cfg.universe()), cfg)


def _fold_shard_task(cfg: VerifySuiteConfig, shard: list[int]) -> SuiteResult:
    return fold_lemma_shard(_fold_pool(cfg), shard, cfg.fuel_override)


def run_suites(cfg: VerifySuiteConfig) -> list[SuiteResult]:
    """Run every configured suite; parallel when ``cfg.parallelism > 1``."""
    if cfg.parallelism == 1:
        return [run_suite(name, cfg) for name in cfg.suites]
    with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
        futures: list = []
        for name in cfg.suites:
            if name == "fold-lemma":
                n = len(_fold_pool(cfg))
                shards = [list(range(i, n, cfg.parallelism)) for i in range(cfg.parallelism)]
                futures.append([pool.submit(_fold_shard_task, cfg, s) for s in shards if s])
            else:
                futures.append([pool.submit(run_suite, name, cfg)])
        results = []
        for name, group in zip(cfg.suites, futures):
            merged = SuiteResult(name)
            for fut in group:
                merged.merge(fut.result())
            results.append(merged)
        return results


def report_json(cfg: VerifySuiteConfig, results: Sequence[SuiteResult]) -> dict:
    return {
        "config": cfg.to_json(),
        "universeSize": cfg.universe().count(),
        "backend": kernels.BACKEND,
        "passed": all(r.passed for r in results),
        "suites": [r.to_json() for r in results],
    }
