import pytest
from hypothesis import given, settings

from condnorm.expr import (
    Atom,
    ExprSyntaxError,
    ExprUniverse,
    If,
    atoms_of,
    parse,
    random_expr,
    size,
    to_text,
    universe_count,
)

from .conftest import exprs

a, b, c, u, v, w, y, z = map(Atom, "abcuvwyz")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("a", a),
        ("(if a b c)", If(a, b, c)),
        ("(if (if u v w) y z)", If(If(u, v, w), y, z)),
        ("  ( if\n(if u v w)\ty   z )  ", If(If(u, v, w), y, z)),
        ("(if(if u v w)y z)", If(If(u, v, w), y, z)),
        ("_x9", Atom("_x9")),
    ],
)
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize(
    "text, pos",
    [
        ("", 0),
        ("(if a b)", 7),
        ("(if a b c d)", 10),
        ("(a b c)", 1),
        ("(if a b c", 9),
        ("a b", 2),
        (")", 0),
        ("(if a b 9)", 8),
        ("(if a b c))", 10),
    ],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.pos == pos


def test_reserved_word_is_not_an_atom():
    with pytest.raises(ExprSyntaxError, match="reserved"):
        parse("(if if b c)")
    with pytest.raises(ExprSyntaxError, match="reserved"):
        parse("if")
    with pytest.raises(ValueError):
        Atom("if")


def test_print():
    assert to_text(a) == "a"
    assert to_text(If(a, b, c)) == "(if a b c)"
    assert str(If(If(u, v, w), y, z)) == "(if (if u v w) y z)"


@given(exprs())
def test_round_trip_hypothesis(e):
    assert parse(to_text(e)) == e


def test_round_trip_random_exprs():
    for seed in range(1000):
        e = random_expr(seed, 6, ["a", "b", "c", "d"])
        assert parse(to_text(e)) == e


def test_size():
    assert size(a) == 1
    assert size(If(a, b, c)) == 4
    assert size(If(If(u, v, w), y, z)) == 7


@given(exprs(), exprs(), exprs())
def test_size_grows_under_if(x, y_, z_):
    e = If(x, y_, z_)
    assert size(e) == 1 + size(x) + size(y_) + size(z_)
    assert size(e) > max(size(x), size(y_), size(z_)) >= 1


def test_atoms_of():
    assert atoms_of(a) == ["a"]
    assert atoms_of(If(a, b, a)) == ["a", "b"]
    assert atoms_of(If(If(u, v, w), y, z)) == ["u", "v", "w", "y", "z"]


def test_equality_and_hash_are_structural():
    assert If(a, b, c) == parse("(if a b c)")
    assert hash(If(a, b, c)) == hash(parse("(if a b c)"))
    assert If(a, b, c) != If(a, c, b)
    assert a != If(a, a, a)
    with pytest.raises(AttributeError):
        a.name = "q"


def test_deep_expressions_need_no_recursion():
    e = a
    for _ in range(50_000):
        e = If(e, b, c)
    text = to_text(e)
    assert parse(text) == e
    assert e.depth == 50_000


@pytest.mark.parametrize("k, expected", [(0, 1), (1, 2), (2, 5)])
def test_enumeration_counts_single_symbol(k, expected):
    assert len(list(ExprUniverse(k, ("a",)))) == expected


def test_enumeration_small_cases_by_hand():
    assert list(ExprUniverse(0, ("a",))) == [a]
    assert list(ExprUniverse(1, ("a",))) == [a, If(a, a, a)]
    two = list(ExprUniverse(2, ("a",)))
    assert set(two[2:]) == {If(If(a, a, a), a, a), If(a, If(a, a, a), a), If(a, a, If(a, a, a))}


def _brute_force(k, alphabet):
    # independent oracle: every tree with exactly k if-nodes
    if k == 0:
        return {Atom(s) for s in alphabet}
    out = set()
    for i in range(k):
        for j in range(k - i):
            for x in _brute_force(i, alphabet):
                for y_ in _brute_force(j, alphabet):
                    for z_ in _brute_force(k - 1 - i - j, alphabet):
                        out.add(If(x, y_, z_))
    return out


@pytest.mark.parametrize("k, alphabet", [(3, ("a", "b")), (2, ("p", "q", "r")), (4, ("a",))])
def test_enumeration_complete_distinct_ordered(k, alphabet):
    members = list(ExprUniverse(k, alphabet))
    expected = set().union(*(_brute_force(i, alphabet) for i in range(k + 1)))
    assert len(members) == len(set(members)) == len(expected)
    assert set(members) == expected
    keys = [(e.if_count, to_text(e)) for e in members]
    assert keys == sorted(keys)
    assert ExprUniverse(k, alphabet).count() == len(members)
    assert sum(universe_count(i, len(alphabet)) for i in range(k + 1)) == len(members)


def test_universe_validation():
    with pytest.raises(ValueError):
        ExprUniverse(1, ())
    with pytest.raises(ValueError):
        ExprUniverse(1, ("a", "a"))
    with pytest.raises(ValueError):
        ExprUniverse(-1, ("a",))
    with pytest.raises(ValueError):
        ExprUniverse(1, ("if",))


def test_random_expr():
    assert isinstance(random_expr(7, 0, ["a", "b"]), Atom)
    assert random_expr(42, 6, ["a", "b"]) == random_expr(42, 6, ["a", "b"])
    samples = [random_expr(s, 6, ["a", "b"]) for s in range(1000)]
    assert all(e.depth <= 6 for e in samples)
    assert all(isinstance(e, If) for e in samples)
    assert len({to_text(e) for e in samples}) > 500


@settings(max_examples=50)
@given(exprs())
def test_pickle_round_trip(e):
    import pickle

    assert pickle.loads(pickle.dumps(e)) == e
