import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz.perm import (GroupTooLarge, Permutation, PermError, center, centralizer, closure,
                          commutator, commutator_subgroup, conjugacy_class, conjugate, generated_subgroup,
                          is_transitive, normal_closure, parse_perm, symmetric_group)

from conftest import P


def perms(d):
    return st.permutations(list(range(d))).map(Permutation)


def test_left_to_right_product():
    assert P("(1 2)") * P("(2 3)") == P("(1 3 2)")
    assert P("(1 2)") * P("(1 3)") == P("(1 2 3)")
    assert Permutation.identity(3) * P("(1 2 3)") == P("(1 2 3)")
    assert P("(1 2)") * P("(1 2)") == Permutation.identity(3)


def test_conjugation_relabels():
    assert conjugate(P("(1 2)"), P("(2 3)")) == P("(1 3)")
    assert conjugate(P("(1 2)"), P("(1 2 3)")) == P("(2 3)")
    assert conjugate(P("(1 2 3)"), P("(1 2 3)")) == P("(1 2 3)")
    g, h = P("(1 2 3)"), P("(1 2)")
    assert conjugate(g, h) == h.inverse() * g * h


def test_commutator_convention():
    a, b = P("(1 2)"), P("(1 3)")
    assert commutator(a, b) == a * b * a.inverse() * b.inverse()
    assert commutator(P("(1 3)"), P("(2 3)")) == P("(1 3 2)")


@pytest.mark.parametrize("text,cycles", [
    ("(1 2)(3 4 5)", [(1, 2), (3, 4, 5)]), ("(1,2)", [(1, 2)]), (" (2 3) ", [(2, 3)]), ("e", []),
])
def test_parse(text, cycles):
    assert parse_perm(text, 5) == Permutation.from_cycles(cycles, 5)


@pytest.mark.parametrize("bad", ["(1 2", "1 2)", "(1 1)", "(0 1)", "(1 6)", "(a b)", "", "(1 2)x"])
def test_parse_rejects(bad):
    with pytest.raises(PermError):
        parse_perm(bad, 5)


def test_str_roundtrip():
    g = P("(1 3)(2 4 5)", 5)
    assert str(g) == "(1 3)(2 4 5)"
    assert parse_perm(str(g), 5) == g
    assert str(Permutation.identity(4)) == "e"


def test_degree_mismatch():
    with pytest.raises(PermError):
        P("(1 2)", 3) * P("(1 2)", 4)


def test_group_orders():
    assert closure([P("(1 2)"), P("(2 3)")]).order == 6
    assert closure([P("(1 2 3)")]).order == 3
    assert closure([P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4)]).order == 4
    assert symmetric_group(5).order == 120
    with pytest.raises(GroupTooLarge):
        symmetric_group(6, bound=100)


def test_classes_and_subgroups():
    S3, S4 = symmetric_group(3), symmetric_group(4)
    assert conjugacy_class(S3, P("(1 2)")) == {P("(1 2)"), P("(1 3)"), P("(2 3)")}
    assert len(conjugacy_class(S4, P("(1 2)", 4))) == 6
    V = closure([P("(1 2)(3 4)", 4), P("(1 3)(2 4)", 4)])
    assert conjugacy_class(V, P("(1 2)(3 4)", 4)) == {P("(1 2)(3 4)", 4)}
    assert commutator_subgroup(S3).order == 3
    assert commutator_subgroup(S4).order == 12
    assert center(S3).order == 1
    assert centralizer(S3, [P("(1 2 3)")]).order == 3
    assert normal_closure(S4, [P("(1 2)(3 4)", 4)]).order == 4
    assert is_transitive(S4) and not is_transitive(closure([P("(1 2)", 4)]))
    with pytest.raises(PermError):
        conjugacy_class(closure([P("(1 2 3)")]), P("(1 2)"))


def test_generated_subgroup_skips_redundant():
    H = generated_subgroup(sorted(symmetric_group(4).elements))
    assert H.order == 24 and len(H.generators) <= 4


@settings(max_examples=200, deadline=None)
@given(perms(6), perms(6), perms(6))
def test_group_axioms(a, b, c):
    e = Permutation.identity(6)
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == e == a.inverse() * a
    assert (a * b).sign() == a.sign() * b.sign()
    assert conjugate(a * b, c) == conjugate(a, c) * conjugate(b, c)
    assert conjugate(conjugate(a, b), c) == conjugate(a, b * c)


@settings(max_examples=200, deadline=None)
@given(perms(7))
def test_cycle_structure(g):
    ct = g.cycle_type()
    assert sum(ct) == 7
    assert g.order() == math.lcm(*ct)
    assert g ** g.order() == Permutation.identity(7)
    assert parse_perm(str(g), 7) == g
