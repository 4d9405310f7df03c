import pytest

from hurwitz.oracle import (RELATIONS, X, Y, OracleBoundExceeded, class_count, is_reduced,
                            rewrite_neighbors, word_space, word_space_size, word_value)
from hurwitz.orbits import OrbitQuery, orbit_decompose

from conftest import P

E_ = P("()")


def test_word_space_sizes(s3t):
    assert len(word_space(s3t, 2, 0)) == word_space_size(s3t, 2, 0) == 9
    assert len(word_space(s3t, 1, 1)) == word_space_size(s3t, 1, 1) == 216
    with pytest.raises(OracleBoundExceeded):
        word_space(s3t, 6, 1, bound=1000)


def test_rewrite_examples(s3t):
    a, b, c = P("(1 2)"), P("(1 3)"), P("(2 3)")
    nb = rewrite_neighbors(s3t, (X(a), X(b)), ["rel11"])
    assert (X(b), X(c)) in nb              # (1 3)^-1 (1 2) (1 3) = (2 3)
    # a handle with trivial commutator lets X pass through unchanged
    assert (Y(E_, E_), X(a)) in rewrite_neighbors(s3t, (X(a), Y(E_, E_)), ["rel12"])
    # rel13 moves g into the first handle entry
    out = rewrite_neighbors(s3t, (X(a), Y(E_, E_)), ["rel13"], backward=False)
    assert out == {(X(a), Y(a, E_))}


def test_rewrites_preserve_value(s3m):
    import itertools
    for w in itertools.islice(word_space(s3m, 2, 1), 0, None, 37):
        v = word_value(w, E_)
        for u in rewrite_neighbors(s3m, w):
            assert word_value(u, E_) == v


def test_backward_rewrites_are_inverse(s3t):
    w = (X(P("(1 2)")), X(P("(2 3)")))
    for u in rewrite_neighbors(s3t, w, ["rel11"], backward=False):
        assert w in rewrite_neighbors(s3t, u, ["rel11"])


def test_is_reduced():
    x, y = X(P("(1 2)")), Y(E_, E_)
    assert is_reduced((x, x, y)) and not is_reduced((y, x))


def test_class_counts_basic(s3t):
    assert class_count(s3t, 2, 0).count == 5
    assert class_count(s3t, 1, 0).count == len(s3t.O)
    assert class_count(s3t, 0, 1).count == s3t.group.order ** 2
    assert class_count(s3t, 2, 0, boundary=E_).count == 3
    assert class_count(s3t, 2, 0, boundary=E_, require_full_group=True).count == 0


@pytest.mark.parametrize("n,p", [(2, 0), (3, 0), (4, 0), (1, 1), (2, 1)])
def test_engine_agreement(s3m, n, p):
    from hurwitz.orbits import type_vectors

    for tv in type_vectors(s3m.m, n):
        o = class_count(s3m, n, p, type_vector=tv)
        r = orbit_decompose(OrbitQuery(s3m, tv, p))
        assert o.count == r.orbit_count
        assert o.reduced_sizes == r.orbit_sizes
        assert o.representatives == [(t.branch, t.handles) for t in r.representatives]


def test_dropping_a_relation_splits_classes(s3t):
    full = class_count(s3t, 1, 1).count
    assert class_count(s3t, 1, 1, relations=[r for r in RELATIONS if r != "rel13"]).count > full
