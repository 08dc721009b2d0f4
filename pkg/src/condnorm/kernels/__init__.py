"""Hot loops over a flat prefix encoding of expressions.

An expression is encoded in preorder as a sequence of ints: ``IF`` (-1) for
an if-node, and a nonnegative symbol index for an atom.  ``(if a b c)`` with
symbols ``a, b, c`` numbered 0, 1, 2 becomes ``[-1, 0, 1, 2]``.  Two
expressions are equal iff their encodings (under one symbol table) are.

Two interchangeable backends provide the same functions:

``_ckernels``
    Cython extension, built by ``setup.py``.
``_pykernels``
    Pure Python, always available.

The compiled backend is used when it imports; set ``CONDNORM_PURE_PYTHON=1``
to force the fallback.  ``BACKEND`` names the one in use.

Kernel functions:

``norm_codes(codes, fuel)`` / ``norm2_codes(codes, fuel)``
    -> ``(completed, result_codes_or_None, call_count, max_depth)``
``norm1_codes(codes)`` -> result codes
``is_normal_codes(codes)`` -> bool
``truth_table(codes, nvars)`` -> int whose bit ``i`` is the value under
    the assignment giving symbol ``j`` the value of bit ``j`` of ``i``.
"""

from __future__ import annotations

import os
from array import array
from typing import Sequence

from ..expr import Atom, Expr, If

IF = -1
MAX_FUEL = 2**62

from . import _pykernels as python_backend  # noqa: E402

compiled_backend = None
if not os.environ.get("CONDNORM_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        compiled_backend = None

_active = compiled_backend or python_backend
BACKEND = "cython" if _active is compiled_backend else "python"


def _clamp(fuel: int) -> int:
    return fuel if fuel < MAX_FUEL else MAX_FUEL


def norm_codes(codes, fuel: int):
    return _active.norm_codes(codes, _clamp(fuel))


def norm2_codes(codes, fuel: int):
    return _active.norm2_codes(codes, _clamp(fuel))


norm1_codes = _active.norm1_codes
is_normal_codes = _active.is_normal_codes
truth_table = _active.truth_table


def encode(e: Expr, symtab: dict[str, int]) -> array:
    """Preorder codes for ``e``; unseen atoms are appended to ``symtab``."""
    out = array("i")
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            code = symtab.get(node.name)
            if code is None:
                code = symtab[node.name] = len(symtab)
            out.append(code)
        else:
            out.append(IF)
            stack.extend((node.else_, node.then, node.test))
    return out


def decode(codes: Sequence[int], names: Sequence[str]) -> Expr:
    atoms = [Atom(n) for n in names]
    values: list[Expr] = []
    for code in reversed(codes):
        if code == IF:
            x = values.pop()
            y = values.pop()
            z = values.pop()
            values.append(If(x, y, z))
        else:
            values.append(atoms[code])
    if len(values) != 1:
        raise ValueError("codes do not encode exactly one expression")
    return values[0]
