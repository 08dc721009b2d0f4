"""Boolean meaning of expressions and a tautology checker on normal forms."""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

from . import kernels
from .expr import Atom, Expr, If, atoms_of
from .normalize import norm1

DEFAULT_ATOM_LIMIT = 20


class UnboundAtomError(KeyError):
    pass


class TooManyAtomsError(ValueError):
    pass


def eval_expr(e: Expr, rho: Mapping[str, bool]) -> bool:
    """``If(x, y, z)`` is ``y`` when ``x`` holds and ``z`` otherwise."""
    missing = [a for a in atoms_of(e) if a not in rho]
    if missing:
        raise UnboundAtomError(f"no value for atom(s) {', '.join(missing)}")
    node = e
    # Evaluating the test needs a value; the branch is then a tail position.
    pending: list[tuple[Expr, Expr]] = []
    while True:
        while isinstance(node, If):
            pending.append((node.then, node.else_))
            node = node.test
        value = bool(rho[node.name])
        if not pending:
            return value
        then, else_ = pending.pop()
        node = then if value else else_


def truth_table(e: Expr, atoms: Optional[list[str]] = None) -> tuple[int, list[str]]:
    """Truth table of ``e`` as an int bitmask, plus the atom order it uses.

    Bit ``i`` is the value under the assignment giving ``atoms[j]`` the value
    of bit ``j`` of ``i``.
    """
    if atoms is None:
        atoms = atoms_of(e)
    symtab = {a: i for i, a in enumerate(atoms)}
    codes = kernels.encode(e, symtab)
    if len(symtab) != len(atoms):
        raise UnboundAtomError("expression has atoms outside the given order")
    return kernels.truth_table(codes, len(atoms)), atoms


def _union_atoms(exprs: Iterable[Expr], limit: int) -> list[str]:
    seen: dict[str, None] = {}
    for e in exprs:
        for a in atoms_of(e):
            seen.setdefault(a)
    if len(seen) > limit:
        raise TooManyAtomsError(f"{len(seen)} atoms exceeds the brute-force limit of {limit}")
    return list(seen)


def semantically_equal(e1: Expr, e2: Expr, limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    """Equal under every assignment to the atoms of either expression."""
    atoms = _union_atoms((e1, e2), limit)
    return truth_table(e1, atoms)[0] == truth_table(e2, atoms)[0]


def is_tautology_by_table(e: Expr, limit: int = DEFAULT_ATOM_LIMIT) -> bool:
    """Brute-force oracle: true under all ``2**k`` assignments."""
    atoms = _union_atoms((e,), limit)
    return truth_table(e, atoms)[0] == (1 << (1 << len(atoms))) - 1


class NotNormalError(RuntimeError):
    """The tautology walk met a tested if; only normal forms are walkable."""


def _walk(nf: Expr) -> Optional[dict[str, bool]]:
    """Return assumptions along a falsifying path of normal form ``nf``, or None."""
    # Each frame: (node, assumptions).  Assumption dicts are copied per branch;
    # their size is bounded by the number of distinct atoms.
    stack: list[tuple[Expr, dict[str, bool]]] = [(nf, {})]
    while stack:
        node, assumed = stack.pop()
        if isinstance(node, Atom):
            if assumed.get(node.name) is not True:
                falsified = dict(assumed)
                falsified[node.name] = False
                return falsified
            continue
        test = node.test
        if not isinstance(test, Atom):
            raise NotNormalError("tested if encountered during tautology walk")
        known = assumed.get(test.name)
        if known is True:
            stack.append((node.then, assumed))
        elif known is False:
            stack.append((node.else_, assumed))
        else:
            stack.append((node.else_, {**assumed, test.name: False}))
            stack.append((node.then, {**assumed, test.name: True}))
    return None


def falsifying_assignment(e: Expr) -> Optional[dict[str, bool]]:
    """An assignment over ``atoms_of(e)`` making ``e`` false, or None for a tautology.

    Atoms not constrained by the falsifying path default to false.
    """
    path = _walk(norm1(e))
    if path is None:
        return None
    return {a: path.get(a, False) for a in atoms_of(e)}


def is_tautology(e: Expr) -> bool:
    """Normalize with ``norm1`` then walk the normal form under assumptions."""
    return _walk(norm1(e)) is None


def format_assignment(rho: Mapping[str, bool]) -> str:
    return ",".join(f"{k}={int(bool(v))}" for k, v in rho.items())


def parse_assignment(text: str) -> dict[str, bool]:
    """Parse ``name=0|1`` pairs separated by commas."""
    rho: dict[str, bool] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, value = part.partition("=")
        name = name.strip()
        value = value.strip()
        if not sep or value not in ("0", "1") or not name:
            raise ValueError(f"bad assignment entry {part!r}; expected name=0 or name=1")
        rho[name] = value == "1"
    return rho
