"""Equipped groups (G, O), their type vectors and C-graphs."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .perm import (Permutation, PermError, PermGroup, conjugacy_class, conjugate,
                   generated_subgroup)


class EquipmentError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EquippedGroup:
    """A finite group with an ordered list of non-identity conjugacy classes.

    Each class is sorted lexicographically by image array.  ``O`` holds all
    class elements in that same global order; it is the canonical letter
    order used by every encoding in the package, so the integer encoding of
    tuples sorts them lexicographically.
    """

    group: PermGroup
    classes: tuple[tuple[Permutation, ...], ...]
    O: tuple[Permutation, ...] = field(init=False)
    generates: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "O", tuple(sorted(g for c in self.classes for g in c)))
        sub = generated_subgroup(self.O, degree=self.group.degree, bound=self.group.order)
        object.__setattr__(self, "generates", sub.order == self.group.order)

    @property
    def m(self) -> int:
        return len(self.classes)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def class_orders(self) -> tuple[int, ...]:
        return tuple(c[0].order() for c in self.classes)

    @property
    def degree(self) -> int:
        return self.group.degree

    @cached_property
    def _class_of(self) -> dict[Permutation, int]:
        return {g: i for i, c in enumerate(self.classes) for g in c}

    @cached_property
    def o_index(self) -> dict[Permutation, int]:
        return {g: i for i, g in enumerate(self.O)}

    def class_index(self, g: Permutation) -> int:
        """0-based index of the class containing g."""
        try:
            return self._class_of[g]
        except KeyError:
            raise EquipmentError(f"{g} is not in O") from None

    def __contains__(self, g: Permutation) -> bool:
        return g in self._class_of

    def representatives(self) -> tuple[Permutation, ...]:
        """Canonical representative (first element) of each class."""
        return tuple(c[0] for c in self.classes)

    def __repr__(self):
        reps = ", ".join(str(c[0]) for c in self.classes)
        return f"EquippedGroup(order={self.group.order}, classes=[{reps}], sizes={self.class_sizes})"


def build_equipment(G: PermGroup, class_reps: Sequence[Permutation]) -> EquippedGroup:
    classes = []
    seen: set[Permutation] = set()
    for r in class_reps:
        if r not in G:
            raise EquipmentError(f"representative {r} is not in the group")
        if r.is_identity():
            raise EquipmentError("the identity cannot belong to O")
        if r in seen:
            raise EquipmentError(f"duplicate class for representative {r}")
        cls = conjugacy_class(G, r)
        seen |= cls
        classes.append(tuple(sorted(cls)))
    if not classes:
        raise EquipmentError("an equipment needs at least one class")
    return EquippedGroup(G, tuple(classes))


def class_index(E: EquippedGroup, g: Permutation) -> int:
    """1-based class index of g, matching the coordinates of the type vector."""
    return E.class_index(g) + 1


@dataclass(frozen=True)
class CGraph:
    """Directed graph on O with an edge g1 -> g2 labelled g3 whenever g1^g3 = g2."""

    vertices: tuple[Permutation, ...]
    edges: tuple[tuple[int, int, int], ...]  # (source, target, label) as vertex indices

    def components(self) -> list[set[int]]:
        adj: dict[int, set[int]] = {i: set() for i in range(len(self.vertices))}
        for s, t, _ in self.edges:
            adj[s].add(t)
            adj[t].add(s)
        comps, seen = [], set()
        for v in range(len(self.vertices)):
            if v in seen:
                continue
            stack, comp = [v], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            comps.append(comp)
        return comps

    def to_dot(self, name: str = "C") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for s, t, lab in self.edges:
            lines.append(f'  "{self.vertices[s]}" -> "{self.vertices[t]}" [label="{self.vertices[lab]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def c_graph(E: EquippedGroup) -> CGraph:
    idx = E.o_index
    edges = []
    for i, g1 in enumerate(E.O):
        for k, g3 in enumerate(E.O):
            edges.append((i, idx[conjugate(g1, g3)], k))
    return CGraph(E.O, tuple(edges))


def c_graph_isomorphic(G1: CGraph, G2: CGraph, budget: int = 10**6):
    """Search for a vertex bijection carrying labelled edges onto labelled edges.

    Returns ``(True, mapping)`` with ``mapping[i]`` the image of vertex i, or
    ``(False, None)``.  Every vertex of a C-graph has exactly one outgoing edge
    per label, so the graph is a family of functions ``src -> dst`` indexed
    by labels and the bijection must intertwine them.
    """
    n = len(G1.vertices)
    if n != len(G2.vertices) or len(G1.edges) != len(G2.edges):
        return False, None

    def action(G):
        act = [[None] * n for _ in range(n)]  # act[label][src] = dst
        for s, t, lab in G.edges:
            if act[lab][s] is not None and act[lab][s] != t:
                return None
            act[lab][s] = t
        if any(x is None for row in act for x in row):
            return None
        return act

    A1, A2 = action(G1), action(G2)
    if A1 is None or A2 is None:
        return False, None

    def invariant(A, v):
        # loops through v and the size of v's class under the labels
        loops = sum(1 for lab in range(n) if A[lab][v] == v)
        fixes = sum(1 for u in range(n) if A[v][u] == u)
        return loops, fixes

    inv1 = [invariant(A1, v) for v in range(n)]
    inv2 = [invariant(A2, v) for v in range(n)]
    if sorted(inv1) != sorted(inv2):
        return False, None

    nodes = 0

    def propagate(mapping, rev, pending):
        # close the partial map under phi(A1[l][s]) = A2[phi(l)][phi(s)]
        while pending:
            pending.pop()
            changed = False
            for lab in list(mapping):
                for s in list(mapping):
                    t1 = A1[lab][s]
                    t2 = A2[mapping[lab]][mapping[s]]
                    if t1 in mapping:
                        if mapping[t1] != t2:
                            return False
                    else:
                        if t2 in rev or inv1[t1] != inv2[t2]:
                            return False
                        mapping[t1] = t2
                        rev[t2] = t1
                        changed = True
            if changed:
                pending.append(True)
        return True

    def search(mapping, rev):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise RuntimeError("C-graph isomorphism search exceeded its node budget")
        if len(mapping) == n:
            return mapping
        v = next(i for i in range(n) if i not in mapping)
        for w in range(n):
            if w in rev or inv1[v] != inv2[w]:
                continue
            m2, r2 = dict(mapping), dict(rev)
            m2[v] = w
            r2[w] = v
            if propagate(m2, r2, [True]):
                found = search(m2, r2)
                if found is not None:
                    return found
        return None

    result = search({}, {})
    if result is None:
        return False, None
    return True, [result[i] for i in range(n)]


def equipment_from_reps(G: PermGroup, reps_text: Sequence[str]) -> EquippedGroup:
    from .perm import parse_perm

    try:
        reps = [parse_perm(t, G.degree) for t in reps_text]
    except PermError as exc:
        raise EquipmentError(str(exc)) from exc
    return build_equipment(G, reps)
