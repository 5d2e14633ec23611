import pytest
from hypothesis import given, settings

from bimodal_sat.formula import lengths, parse, subformulas
from bimodal_sat.tableau import (
    Logic,
    cloud_iterator,
    cloud_successor,
    enumerate_tableau_sets,
    enumerate_tableau_sets_naive,
    is_cloud,
    is_tableau_set,
    set_successor,
    universe,
)
from support import LOGICS, formulas, small_corpus

S4, K4, SSL = Logic.S4xS5, Logic.K4xS5, Logic.SSL


def sets_of(u):
    return [u.table.describe(F) for F in u.sets]


def cloud(u, *descriptions):
    return u.cloud_of(sets_of(u).index(d) for d in descriptions)


def test_logic_parse():
    assert Logic.parse("S4xS5") is S4 and Logic.parse("k4s5") is K4 and Logic.parse("SSL") is SSL
    with pytest.raises(ValueError):
        Logic.parse("s5")


def test_is_tableau_set_examples():
    t = subformulas(parse("x0"))
    assert is_tableau_set(0, t, S4)
    t = subformulas(parse("[]x0"))
    only_box = t.to_bits([parse("[]x0")])
    assert not is_tableau_set(only_box, t, S4)
    assert is_tableau_set(only_box, t, K4)


def test_enumerate_examples():
    assert sets_of(universe(parse("x0"), S4)) == ["{}", "{x0}"]
    for x in LOGICS:
        assert sets_of(universe(parse("Kx0"), x)) == ["{}", "{x0}", "{x0, Kx0}"]
    # alphabetical order of the bitstrings (x0, []x0)
    assert sets_of(universe(parse("[]x0"), K4)) == ["{}", "{[]x0}", "{x0}", "{x0, []x0}"]


def test_counting_anchors():
    for x in (S4, SSL):
        assert universe(parse("x0"), x).A == 2
        assert universe(parse("[]x0"), x).A == 3
        assert universe(parse("Kx0"), x).A == 3
        assert universe(parse("[][][]x0"), x).A == 5


def test_set_successor_examples():
    t = subformulas(parse("[]x0"))
    x0, box = t.to_bits([parse("x0")]), t.to_bits([parse("[]x0")])
    assert not set_successor(x0, 0, t, SSL)
    assert set_successor(x0, 0, t, S4)
    assert not set_successor(box, x0, t, K4)
    assert set_successor(box, x0 | box, t, K4)
    assert not set_successor(box, box, t, K4)


def test_is_cloud_examples():
    u = universe(parse("Kx0"), S4)
    assert not is_cloud(cloud(u, "{x0}"), u)
    assert is_cloud(cloud(u, "{}", "{x0}"), u)
    assert not is_cloud(cloud(u, "{}", "{x0, Kx0}"), u)
    assert not is_cloud(0, u)


def test_cloud_iterator_examples():
    u = universe(parse("Kx0"), S4)
    got = list(cloud_iterator(u))
    expected = {cloud(u, "{}"), cloud(u, "{x0, Kx0}"), cloud(u, "{}", "{x0}")}
    assert set(got) == expected
    # ascending bitstring order over (set 0, set 1, set 2)
    assert [u.describe_cloud(c) for c in got] == ["{{x0, Kx0}}", "{{}}", "{{}, {x0}}"]
    phi = u.containing(u.table.root_index)
    assert [u.describe_cloud(c) for c in cloud_iterator(u, lambda c: bool(c & phi))] == ["{{x0, Kx0}}"]


def test_cloud_successor_ssl_versus_product():
    # over the SSL set relation {x0} is the only father of {x0}; the other
    # members of f have no son in g, so only the backward condition holds
    u = universe(parse("(x0 & x1)"), SSL)
    f = u.cloud_of(range(u.A))
    g = cloud(u, "{x0}")
    assert cloud_successor(f, g, u, SSL)
    assert not cloud_successor(f, g, u, K4)
    assert not cloud_successor(f, g, u, S4)


@pytest.mark.parametrize("text", ["x0", "Kx0", "[]x0", "K[]~x0", "(K[]x0 & <>~Kx0)", "~(x0 -> []x0)"])
def test_cloud_iterator_matches_brute_force(text):
    for x in LOGICS:
        u = universe(parse(text), x)
        if u.A > 12:
            continue
        brute = [c for c in range(1, 1 << u.A) if is_cloud(c, u)]
        assert list(cloud_iterator(u)) == brute
        within = u.reach(brute[len(brute) // 2])
        assert list(cloud_iterator(u, within=within)) == [c for c in brute if not c & ~within]


def test_s4_and_ssl_universes_coincide():
    for f in small_corpus():
        assert universe(f, S4).sets == universe(f, SSL).sets


@settings(max_examples=120, deadline=None)
@given(formulas(max_leaves=5))
def test_pruned_enumeration_equals_naive(f):
    t = subformulas(f)
    for x in LOGICS:
        sets = enumerate_tableau_sets(t, x)
        assert sets == enumerate_tableau_sets_naive(t, x)
        assert sets == sorted(sets)


@settings(max_examples=120, deadline=None)
@given(formulas(max_leaves=6))
def test_size_bound(f):
    n, ell = lengths(f)
    for x in (S4, SSL):
        A = universe(f, x).A
        assert A <= 2 ** subformulas(f).a
        if ell >= 4:
            assert A < 2 ** (2 * ell / 3)
        elif ell == 3:
            assert A <= 4


@pytest.mark.parametrize("text", ["[][]x0", "K[]x0", "[]Kx0", "KKx0"])
def test_two_modalities_over_an_atom_meet_the_bound(text):
    # A = 4 = 2**(2*3/3): the strict bound is not met at simplified length 3
    f = parse(text)
    assert lengths(f)[1] == 3
    for x in (S4, SSL):
        assert universe(f, x).A == 4


def _check_set_relation(u, x):
    A = u.A
    le = [[bool(u.succ[j] & u.cbit(k)) for k in range(A)] for j in range(A)]
    for j in range(A):
        for k in range(A):
            if le[j][k]:
                assert all(le[j][m] for m in range(A) if le[k][m])
        if x.reflexive:
            assert le[j][j]


def test_set_successor_algebra():
    for f in small_corpus():
        for x in LOGICS:
            _check_set_relation(universe(f, x), x)


@pytest.mark.parametrize("text", ["Kx0", "[]x0", "K[]x0", "[]Kx0", "(x0 & []x1)", "~[]~Kx0", "K~[]x0"])
def test_cloud_successor_algebra(text):
    for x in LOGICS:
        u = universe(parse(text), x)
        cs = list(cloud_iterator(u))
        le = {(c, d): cloud_successor(c, d, u, x) for c in cs for d in cs}
        for c in cs:
            if x.reflexive:
                assert le[c, c]
            for d in cs:
                if not le[c, d]:
                    continue
                for e in cs:
                    if le[d, e]:
                        assert le[c, e]
