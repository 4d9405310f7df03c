import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hurwitz.perm import Permutation
from hurwitz.tuples import (Move, NotReducible, TupleError, apply_move, apply_word, available_moves, boundary,
                            conjugate_tuple, empty_tuple, format_tuple, generated_subgroup_of, h_move,
                            lambda_move, make_tuple, mu_move, normalize_handles, parse_tuple, product,
                            tuple_type, zeta_move)

from conftest import P

E_ = Permutation.identity(3)


@pytest.fixture
def t0(s3t):
    return make_tuple(s3t, [P("(1 2)")], [(P("(1 3)"), P("(2 3)"))])


def test_boundary_examples(s3t, t0):
    assert boundary(make_tuple(s3t, [P("(1 3)")])) == P("(1 3)")
    assert boundary(make_tuple(s3t, [])) == E_
    assert boundary(t0) == P("(2 3)")


def test_type_genus_subgroup(s3m, s3t):
    t = make_tuple(s3m, [P("(1 2)"), P("(1 3)"), P("(1 2 3)")])
    assert tuple_type(t) == (2, 1)
    g = make_tuple(s3t, [], [(P("(1 2)"), E_), (E_, E_)])
    assert g.genus == 2
    assert generated_subgroup_of(make_tuple(s3t, [P("(1 2)")], [(P("(1 2 3)"), E_)])).order == 6


def test_h_move_examples(s3t):
    t = make_tuple(s3t, [P("(1 2)"), P("(2 3)")])
    assert h_move(t, 1, 1).branch == (P("(2 3)"), P("(1 3)"))
    g = make_tuple(s3t, [P("(1 2)"), P("(1 2)")])
    assert h_move(g, 1, 1) == g


def test_handle_move_examples(t0):
    assert format_tuple(lambda_move(t0, 1, 1)) == "[(1 2) | (1 2 3),(2 3)]"
    assert format_tuple(mu_move(t0, 1, 1)) == "[(1 3) | (1 3),(1 2 3)]"
    assert format_tuple(zeta_move(t0, 1, 1)) == "[(1 3) | (1 3),(1 2)]"
    for mv in (lambda_move, mu_move, zeta_move):
        s = mv(t0, 1, 1)
        assert boundary(s) == boundary(t0) == P("(2 3)")
        assert mv(s, 1, -1) == t0
        assert mv(mv(t0, 1, -1), 1, 1) == t0


def test_handle_moves_with_trivial_handle(s3t):
    g = P("(1 2)")
    t = make_tuple(s3t, [g], [(E_, E_)])
    s = lambda_move(t, 1, 1)
    assert s.branch[-1] == g and s.handles[0] == (g, E_)
    s = mu_move(t, 1, 1)
    assert s.handles[0][1] == g.inverse()


def test_zeta_commuting_handle(s3t):
    # [a,b] = e: only a, b are conjugated
    a = P("(1 2)")
    t = make_tuple(s3t, [P("(1 3)")], [(a, a)])
    s = zeta_move(t, 1, 1)
    assert s.branch == t.branch
    k = P("(1 3)")
    assert s.handles[0] == (k.inverse() * a * k, k.inverse() * a * k)


def test_move_errors(s3t, t0):
    with pytest.raises(TupleError):
        h_move(t0, 1, 1)          # only one branch letter
    with pytest.raises(TupleError):
        lambda_move(t0, 2, 1)
    with pytest.raises(TupleError):
        lambda_move(make_tuple(s3t, [], [(E_, E_)]), 1, 1)
    with pytest.raises(TupleError):
        h_move(make_tuple(s3t, [P("(1 2)")] * 2), 1, 2)


def test_conjugate_and_product(s3t, t0):
    t = make_tuple(s3t, [P("(1 2)")])
    assert conjugate_tuple(t, P("(1 2 3)")).branch == (P("(2 3)"),)
    assert conjugate_tuple(t0, E_) == t0
    h = P("(1 3)")
    assert boundary(conjugate_tuple(t0, h)) == h.inverse() * boundary(t0) * h
    with pytest.raises(TupleError):
        conjugate_tuple(t, P("(1 2)", 4))
    g1, g2 = make_tuple(s3t, [P("(1 2)")]), make_tuple(s3t, [P("(1 3)")])
    assert product(g1, g2).branch == (P("(1 2)"), P("(1 3)"))
    x = make_tuple(s3t, [], [(P("(1 3)"), P("(2 3)"))])
    prod = product(x, make_tuple(s3t, [P("(1 2)")]))
    assert format_tuple(prod) == "[(2 3) | (1 3),(2 3)]"
    assert boundary(prod) == P("(1 3)") == boundary(x) * P("(1 2)")
    assert product(t0, empty_tuple(s3t)) == t0


def test_product_errors(s3t, s3m):
    with pytest.raises(TupleError):
        product(make_tuple(s3t, []), make_tuple(s3m, []))


def test_make_tuple_validation(s3t):
    with pytest.raises(TupleError):
        make_tuple(s3t, [P("(1 2 3)")])
    with pytest.raises(TupleError):
        make_tuple(s3t, [P("(1 2)")], [(P("(1 2)", 4), P("(1 2)", 4))])


def test_literal_roundtrip(s3m):
    text = "[(1 2),(1 3) | (1 2 3),(1 3); (2 3),e]"
    t = parse_tuple(s3m, text)
    assert t.n == 2 and t.genus == 2
    assert format_tuple(t) == text
    assert parse_tuple(s3m, "[(1 2)]").handles == ()
    for bad in ["(1 2)", "[(1 2) | (1 2)]", "[(1 2 | e,e]", "[(1 2) | e,e | e,e]"]:
        with pytest.raises(TupleError):
            parse_tuple(s3m, bad)


def test_normalize_examples(s3t):
    t = make_tuple(s3t, [P("(1 2)")] * 2, [(E_, E_)])
    assert normalize_handles(t).tuple == t
    with pytest.raises(NotReducible):
        normalize_handles(make_tuple(s3t, [], [(P("(1 2)"), P("(1 3)"))]))
    # tau = 8 > n1 p1 = 6 with handle ((1 2 3),(1 3)); complete the boundary to e
    a, b = P("(1 2 3)"), P("(1 3)")
    U = a * b * a.inverse() * b.inverse()
    br = [P("(1 2)"), P("(1 3)"), P("(2 3)"), P("(1 2)"), P("(1 2)"), P("(1 3)"), P("(2 3)")]
    pre = E_
    for g in br:
        pre = pre * g
    last = pre.inverse() * U.inverse()
    t = make_tuple(s3t, br + [last], [(a, b)])
    assert boundary(t) == E_ and generated_subgroup_of(t).order == 6
    nf = normalize_handles(t)
    assert nf.tuple.handles == ((E_, E_),)
    assert apply_word(t, nf.moves) == nf.tuple


def _random_tuple(E, rng, nmax=5, pmax=2):
    G = sorted(E.group.elements)
    return make_tuple(E, [rng.choice(E.O) for _ in range(rng.randint(2, nmax))],
                      [(rng.choice(G), rng.choice(G)) for _ in range(rng.randint(0, pmax))])


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["s3m", "s4m"]))
def test_moves_preserve_invariants(seed, which):
    from hurwitz import acceptance as A

    E = A.s3_mixed() if which == "s3m" else A.s4_mixed()
    rng = random.Random(seed)
    t = _random_tuple(E, rng)
    for mv in available_moves(t, zeta=True):
        s = apply_move(t, mv)
        assert boundary(s) == boundary(t)
        assert tuple_type(s) == tuple_type(t)
        assert s.genus == t.genus
        assert generated_subgroup_of(s).elements == generated_subgroup_of(t).elements
        assert apply_move(s, mv.inverse()) == t


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_product_contract(seed):
    from hurwitz import acceptance as A

    E = A.s3_mixed()
    rng = random.Random(seed)
    t1, t2 = _random_tuple(E, rng), _random_tuple(E, rng)
    p = product(t1, t2)
    assert boundary(p) == boundary(t1) * boundary(t2)
    assert tuple_type(p) == tuple(a + b for a, b in zip(tuple_type(t1), tuple_type(t2)))
    assert p.genus == t1.genus + t2.genus
    h = rng.choice(sorted(E.group.elements))
    assert conjugate_tuple(p, h) == product(conjugate_tuple(t1, h), conjugate_tuple(t2, h))


def test_inverse_is_cycle_predecessor(s3t):
    # every move permutes the finite space, so mu^-1(t) is the predecessor of t on its mu-cycle
    rng = random.Random(3)
    for _ in range(50):
        t = _random_tuple(s3t, rng, 3, 1)
        for mv in available_moves(t, zeta=True, both_dirs=False):
            cyc, s = [t], apply_move(t, mv)
            while s != t:
                cyc.append(s)
                s = apply_move(s, mv)
            assert apply_move(t, mv.inverse()) == cyc[-1]


def test_move_str():
    assert str(Move("lambda", 1, 1)) == "lambda1+"
    assert Move("H", 2, -1).inverse() == Move("H", 2, 1)
