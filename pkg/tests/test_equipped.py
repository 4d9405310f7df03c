import pytest

from hurwitz.equipped import (EquipmentError, build_equipment, c_graph, c_graph_isomorphic, class_index,
                              equipment_from_reps)
from hurwitz.perm import Permutation, closure, symmetric_group

from conftest import P


def test_basic_fields(s3t, s3m):
    assert (s3t.m, len(s3t.O), s3t.generates) == (1, 3, True)
    assert (s3m.m, len(s3m.O)) == (2, 5)
    assert s3m.class_sizes == (3, 2)
    assert s3m.class_orders == (2, 3)
    # letters in global lexicographic order of image arrays
    assert list(s3m.O) == sorted(s3m.O)


def test_rejects_bad_equipment(S3):
    with pytest.raises(EquipmentError):
        build_equipment(S3, [Permutation.identity(3)])
    with pytest.raises(EquipmentError):
        equipment_from_reps(S3, ["(1 2)", "(1 3)"])   # same class twice
    with pytest.raises(EquipmentError):
        equipment_from_reps(closure([P("(1 2 3)")]), ["(1 2)"])
    with pytest.raises(EquipmentError):
        equipment_from_reps(S3, ["(1 2"])


def test_non_generating_is_flagged():
    E = equipment_from_reps(symmetric_group(4), ["(1 2)(3 4)"])
    assert not E.generates


def test_class_index(s3m):
    assert class_index(s3m, P("(1 3)")) == 1
    assert class_index(s3m, P("(1 3 2)")) == 2
    with pytest.raises(EquipmentError):
        class_index(s3m, Permutation.identity(3))


def test_c_graph_counts(s3t, z3, v4):
    g = c_graph(s3t)
    assert (len(g.vertices), len(g.edges)) == (3, 9)
    g = c_graph(z3)
    assert len(g.vertices) == 1 and g.edges == ((0, 0, 0),)
    g = c_graph(v4)
    assert len(g.edges) == 9 and all(s == t for s, t, _ in g.edges)
    assert len(g.components()) == 3


def test_c_graph_dot(s3t):
    dot = c_graph(s3t).to_dot()
    assert dot.startswith("digraph C {") and dot.count("->") == 9


def test_c_graph_isomorphism(s3t, s4t, z3):
    ok, m = c_graph_isomorphic(c_graph(s3t), c_graph(s3t))
    assert ok and sorted(m) == [0, 1, 2]
    assert not c_graph_isomorphic(c_graph(s3t), c_graph(s4t))[0]
    other = equipment_from_reps(closure([P("(1 3 2)")]), ["(1 3 2)"])
    assert c_graph_isomorphic(c_graph(z3), c_graph(other))[0]


def test_c_graph_isomorphism_witness_under_relabeling():
    # the same equipment built on relabelled points gives an isomorphic graph
    S4 = symmetric_group(4)
    E1 = equipment_from_reps(S4, ["(1 2)", "(1 2 3)"])
    E2 = equipment_from_reps(S4, ["(3 4)", "(2 3 4)"])
    G1, G2 = c_graph(E1), c_graph(E2)
    ok, m = c_graph_isomorphic(G1, G2)
    assert ok
    edges2 = set(G2.edges)
    assert all((m[s], m[t], m[l]) in edges2 for s, t, l in G1.edges)
    # different class structure: not isomorphic
    E3 = equipment_from_reps(S4, ["(1 2)", "(1 2)(3 4)"])
    assert not c_graph_isomorphic(G1, c_graph(E3))[0]
