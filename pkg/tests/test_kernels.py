import os
import subprocess
import sys
from array import array

import pytest
from hypothesis import given

from condnorm import kernels
from condnorm.expr import Atom, If, parse, random_expr
from condnorm.normalize import is_normal, norm1, norm2_reference, norm_reference

from . import oracles
from .conftest import exprs


def _encode(e):
    symtab = {}
    codes = kernels.encode(e, symtab)
    return codes, list(symtab)


def test_encoding_example():
    codes, names = _encode(parse("(if a b c)"))
    assert list(codes) == [-1, 0, 1, 2]
    assert names == ["a", "b", "c"]


@given(exprs())
def test_encode_decode_round_trip(e):
    codes, names = _encode(e)
    assert len(codes) == e.size
    assert kernels.decode(codes, names) == e


def test_decode_rejects_garbage():
    with pytest.raises((ValueError, IndexError)):
        kernels.decode([-1, 0], ["a"])
    with pytest.raises(ValueError):
        kernels.decode([0, 0], ["a"])


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if kernels.compiled_backend is not None:
        assert kernels.BACKEND == "cython"


def test_universe_matches_reference(backend, universe3):
    for e in universe3:
        codes, names = _encode(e)
        for kernel, ref in ((backend.norm_codes, norm_reference), (backend.norm2_codes, norm2_reference)):
            expected = ref(e, fuel=10**7)
            ok, out, calls, depth = kernel(codes, 10**7)
            assert ok
            assert kernels.decode(out, names) == expected.result
            assert (calls, depth) == (expected.call_count, expected.max_depth)
        assert kernels.decode(backend.norm1_codes(codes), names) == oracles.norm1(e)
        assert backend.is_normal_codes(codes) == oracles.normal(e)


def test_random_samples_match(backend):
    for seed in range(300):
        e = random_expr(seed, 5, ["a", "b", "c", "d"])
        codes, names = _encode(e)
        ref = norm_reference(e)
        ok, out, calls, depth = backend.norm_codes(codes, 10**9)
        assert ok and kernels.decode(out, names) == ref.result
        assert (calls, depth) == (ref.call_count, ref.max_depth)
        assert kernels.decode(backend.norm1_codes(codes), names) == ref.result


@pytest.mark.parametrize("fuel", [1, 2, 5, 7, 8])
def test_fuel_exhaustion_matches_reference(backend, fuel):
    e = parse("(if (if u v w) y z)")
    codes, _ = _encode(e)
    for kernel, ref in ((backend.norm_codes, norm_reference), (backend.norm2_codes, norm2_reference)):
        expected = ref(e, fuel=fuel)
        ok, out, calls, _depth = kernel(codes, fuel)
        assert ok == expected.completed
        assert calls == expected.call_count
        assert (out is None) == (not ok)


def test_kernels_accept_lists(backend):
    ok, out, calls, _ = backend.norm_codes([-1, 0, 1, 2], 10)
    assert ok and list(out) == [-1, 0, 1, 2] and calls == 3
    assert isinstance(out, array)


def test_empty_codes_rejected(backend):
    with pytest.raises(ValueError):
        backend.norm_codes(array("i"), 10)
    with pytest.raises(ValueError):
        backend.is_normal_codes([])


@given(exprs(alphabet=("a", "b", "c", "d", "e", "f", "g", "h")))
def test_truth_table_matches_evaluation(e):
    codes, names = _encode(e)
    expected = oracles.table(e, names)
    for _, backend in ((n, b) for n, b in [("py", kernels.python_backend), ("c", kernels.compiled_backend)] if b):
        assert backend.truth_table(codes, len(names)) == expected


def test_truth_table_many_variables(backend):
    # projection onto the 9th variable: bit i set iff bit 8 of i is set
    names = [f"x{i}" for i in range(9)]
    e = If(Atom("x0"), Atom("x8"), Atom("x8"))
    codes = kernels.encode(e, {n: i for i, n in enumerate(names)})
    table = backend.truth_table(codes, 9)
    assert table == sum(1 << i for i in range(512) if i >> 8 & 1)


def test_truth_table_bad_symbol(backend):
    with pytest.raises(ValueError):
        backend.truth_table(array("i", [3]), 2)


def test_is_normal_codes_agrees(backend, universe2):
    for e in universe2:
        codes, _ = _encode(e)
        assert backend.is_normal_codes(codes) == is_normal(e)
        assert backend.is_normal_codes(kernels.encode(norm1(e), {})) is True


def test_pure_python_switch():
    env = dict(os.environ, CONDNORM_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from condnorm import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
