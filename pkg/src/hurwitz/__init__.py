"""Covering tuples, braid-type move orbits and C-group invariants for finite permutation groups."""
from .perm import (Permutation, PermGroup, PermError, GroupTooLarge, parse_perm, compose, conjugate,
                   commutator, closure, symmetric_group, conjugacy_class, commutator_subgroup)
from .equipped import (EquippedGroup, EquipmentError, build_equipment, class_index, c_graph,
                       c_graph_isomorphic, equipment_from_reps)
from .tuples import (CoveringTuple, Move, TupleError, NotReducible, make_tuple, boundary,
                     tuple_type, genus, h_move, lambda_move, mu_move, zeta_move, apply_move,
                     apply_word, conjugate_tuple, product, empty_tuple, normalize_handles,
                     parse_tuple, format_tuple)
from .orbits import (OrbitQuery, OrbitReport, QueryError, BoundExceeded, Inconclusive,
                     enumerate_tuples, orbit_decompose, count_components, orbit_equal,
                     compare_orbits, stabilization_scan)
from ._accel import backend, set_backend

__version__ = "0.1.0"
