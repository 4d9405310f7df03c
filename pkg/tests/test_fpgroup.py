import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz import acceptance as A
from hurwitz import fpgroup
from hurwitz.equipped import equipment_from_reps
from hurwitz.fpgroup import (CosetEnumerationError, Presentation, PresentationError, ambiguity_index,
                             c_group_presentation, enumerate_cosets, finite_quotient, lift_word,
                             lifting_invariant)
from hurwitz.orbits import OrbitQuery, orbit_decompose
from hurwitz.perm import closure, parse_perm, symmetric_group
from hurwitz.tuples import apply_move, available_moves, make_tuple, product

from conftest import P


def _a4(both=False):
    G = closure([parse_perm("(1 2 3)", 4), parse_perm("(2 3 4)", 4)])
    return equipment_from_reps(G, ["(1 2 3)", "(1 3 2)"] if both else ["(1 2 3)"])


def _s4_all():
    return equipment_from_reps(symmetric_group(4), ["(1 2)", "(1 2 3)", "(1 2)(3 4)", "(1 2 3 4)"])


EQUIPMENTS = {
    "Z3": A.cyclic3, "V4": A.klein_four, "S3t": A.s3_transpositions, "S3m": A.s3_mixed,
    "S4t": A.s4_transpositions, "S4m": A.s4_mixed, "A4": _a4, "A4both": lambda: _a4(True),
    "S4all": _s4_all, "S5t": lambda: equipment_from_reps(symmetric_group(5), ["(1 2)"]),
}

# frozen from the coset enumerator; the small cases are re-derived with sympy below
QUOTIENTS = {"Z3": (3, 1), "V4": (8, 1), "S3t": (6, 1), "S3m": (18, 1), "S4t": (24, 1),
             "S4m": (72, 1), "A4": (24, 2), "A4both": (72, 2), "S4all": (576, 1), "S5t": (120, 1)}


@pytest.mark.parametrize("name", sorted(QUOTIENTS))
def test_quotient_order_and_ambiguity(name):
    E = EQUIPMENTS[name]()
    Q = finite_quotient(E)
    assert (Q.order, ambiguity_index(E)) == QUOTIENTS[name]
    # Q1 -> G is onto with central kernel, and Q1^ab has order prod p_i
    assert Q.order % E.group.order == 0
    assert Q.abelianization_order() == math.prod(E.class_orders)


@pytest.mark.parametrize("name", ["Z3", "V4", "S3t", "S3m", "A4"])
def test_quotient_order_matches_sympy(name):
    from sympy.combinatorics.fp_groups import FpGroup
    from sympy.combinatorics.free_groups import free_group

    E = EQUIPMENTS[name]()
    Q = finite_quotient(E)
    F, *gens = free_group(" ".join(Q.presentation.symbols))
    rels = []
    for r in Q.presentation.relators + Q.power_relators:
        w = F.identity
        for g, e in r:
            w = w * gens[g] ** e
        if w != F.identity:
            rels.append(w)
    assert FpGroup(F, rels).order() == Q.order


def test_presentation_shape(s3t, s3m):
    P3 = c_group_presentation(s3t)
    assert P3.n_generators == 3 and len(P3.relators) == 9
    assert len(c_group_presentation(s3m).relators) == 25
    assert str(P3).startswith("< x1, x2, x3 | ")
    with pytest.raises(PresentationError):
        Presentation(("x1",), (((1, 1),),))
    with pytest.raises(PresentationError):
        c_group_presentation(equipment_from_reps(symmetric_group(4), ["(1 2)(3 4)"]))


def test_enumerate_cosets_small():
    # <x | x^5> and <x, y | x^2, y^3, (xy)^2> = S3
    assert enumerate_cosets(1, [((0, 1),) * 5]).shape == (5, 2)
    s3 = enumerate_cosets(2, [((0, 1),) * 2, ((1, 1),) * 3, ((0, 1), (1, 1)) * 2])
    assert s3.shape[0] == 6
    assert sorted(s3[:, 0].tolist()) == list(range(6))


def test_coset_bound():
    with pytest.raises(CosetEnumerationError) as exc:
        finite_quotient(_s4_all(), bound=50)
    assert exc.value.defined >= 50


def test_quotient_json(s3t):
    d = finite_quotient(s3t).to_dict()
    assert d["order"] == 6 and set(d["generators"]) == {"x1", "x2", "x3"}


def test_monotone_under_enlarging_o(s3t, s3m):
    assert finite_quotient(s3t).order <= finite_quotient(s3m).order


def test_lift_word(s3t):
    g = P("(1 2 3)")
    w = lift_word(s3t, g)
    assert len(w) == 2 and w[0] * w[1] == g
    assert P("(1 2)") * P("(1 3)") == g       # another shortest word
    assert lift_word(s3t, s3t.group.identity) == []
    for h in s3t.group.elements:
        w = lift_word(s3t, h)
        acc = s3t.group.identity
        for x in w:
            acc = acc * x
        assert acc == h and len(w) <= 2
    with pytest.raises(PresentationError):
        lift_word(s3t, P("(1 2)", 4))


def test_lifting_invariant_separates_a4_orbits(a4):
    rep = orbit_decompose(OrbitQuery(a4, (6,), boundary=a4.group.identity, require_full_group=True),
                          with_invariants=True)
    assert rep.orbit_count == 2
    assert len(set(rep.lifting_invariants)) == 2
    assert 0 in rep.lifting_invariants


def test_lifting_invariant_example(s3t):
    t = make_tuple(s3t, [P("(1 2)"), P("(1 3)")])
    inv = lifting_invariant(s3t, t)
    Q = inv.quotient
    idx = s3t.o_index
    assert inv.value == Q.mul(Q.walk(0, [2 * idx[P("(1 2)")]]), Q.walk(0, [2 * idx[P("(1 3)")]]))
    assert not inv.is_identity()
    assert sorted(inv.permutation.tolist()) == list(range(Q.order))


def _rand(E, rng, n, p):
    G = sorted(E.group.elements)
    return make_tuple(E, [rng.choice(E.O) for _ in range(n)],
                      [(rng.choice(G), rng.choice(G)) for _ in range(p)])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["S3m", "A4", "S4t"]))
def test_lifting_invariant_is_move_invariant(seed, name):
    E = EQUIPMENTS[name]()
    rng = random.Random(seed)
    t = _rand(E, rng, rng.randint(2, 5), rng.randint(0, 2))
    v = lifting_invariant(E, t)
    for mv in available_moves(t, zeta=True):
        assert lifting_invariant(E, apply_move(t, mv)) == v


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lifting_invariant_is_multiplicative(seed):
    E = _a4()
    rng = random.Random(seed)
    t1, t2 = _rand(E, rng, 2, rng.randint(0, 1)), _rand(E, rng, 3, rng.randint(0, 1))
    assert lifting_invariant(E, product(t1, t2)) == lifting_invariant(E, t1) * lifting_invariant(E, t2)


def test_lifting_invariant_independent_of_lift(s3m):
    # other words for the same elements: shortest word for g x^-1 followed by x
    def padded(g):
        x = s3m.O[0]
        return lift_word(s3m, g * ~x) + [x]

    def long_lift(g):
        x = s3m.O[-1]
        return lift_word(s3m, g * x) + [x] * (x.order() - 1)

    rng = random.Random(7)
    for _ in range(100):
        t = _rand(s3m, rng, rng.randint(1, 3), rng.randint(1, 2))
        v = lifting_invariant(s3m, t)
        assert lifting_invariant(s3m, t, lift=padded) == v
        assert lifting_invariant(s3m, t, lift=long_lift) == v


def test_table_memory_limit(monkeypatch, s4t):
    monkeypatch.setattr(fpgroup, "MAX_TABLE_CELLS", 12 * 10)
    # |O| = 6 gives 12 columns, so at most 10 cosets, fewer than |S4| = 24
    with pytest.raises(fpgroup.CosetEnumerationError, match="at least"):
        fpgroup.finite_quotient(s4t)
    with pytest.raises(fpgroup.CosetEnumerationError, match="exceeded 10 cosets"):
        fpgroup.enumerate_cosets(6, fpgroup.c_group_presentation(s4t).relators)
