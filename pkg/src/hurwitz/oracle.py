"""Word-level reference implementation of the strong covering semigroup.

Words over the letters X(g), g in O, and Y(a, b), a, b in G, are rewritten by
the local relations

    X(g1) X(g2)  = X(g2) X(g1^g2)
    X(g) Y(a,b)  = Y(a,b) X(g^[a,b])
    X(g) Y(a,b)  = X(g^c1) Y(ga, b),          c1 = a b^-1 a^-1 g^-1
    Y(a,b) X(g)  = Y(a, g^-1 b) X(g^c2),      c2 = b a^-1 b^-1 g
    X(g) Y(a,b)  = X(g^k) Y(a^k, b^k),        k = g^[a,b]

and classes of words are found by union-find over the whole word space.  It is
slow on purpose and shares nothing with the tuple engine except the
permutation arithmetic, so agreement between the two is a real check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .equipped import EquippedGroup
from .perm import Permutation, closure

DEFAULT_BOUND = 10**7

RELATIONS = ("rel11", "rel12", "rel13", "rel16", "rel19")


class OracleBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class X:
    g: Permutation

    def __str__(self):
        return f"X{self.g}"


@dataclass(frozen=True)
class Y:
    a: Permutation
    b: Permutation

    def __str__(self):
        return f"Y({self.a},{self.b})"


Letter = X | Y
CoveringWord = tuple  # of letters


def _comm(a, b):
    return a * b * ~a * ~b


def _conj(x, y):
    return ~y * x * y


def _forward(rel: str, u: Letter, v: Letter):
    """Right-hand side of ``rel`` for the pair (u, v), or None if it does not apply."""
    if rel == "rel11":
        if isinstance(u, X) and isinstance(v, X):
            return X(v.g), X(_conj(u.g, v.g))
        return None
    if rel == "rel16":
        if isinstance(u, Y) and isinstance(v, X):
            a, b, g = u.a, u.b, v.g
            c2 = b * ~a * ~b * g
            return Y(a, ~g * b), X(_conj(g, c2))
        return None
    if not (isinstance(u, X) and isinstance(v, Y)):
        return None
    g, a, b = u.g, v.a, v.b
    if rel == "rel12":
        return Y(a, b), X(_conj(g, _comm(a, b)))
    if rel == "rel13":
        c1 = a * ~b * ~a * ~g
        return X(_conj(g, c1)), Y(g * a, b)
    k = _conj(g, _comm(a, b))
    return X(k), Y(_conj(a, k), _conj(b, k))


class _Alphabet:
    def __init__(self, E: EquippedGroup):
        self.O = tuple(sorted(g for cls in E.classes for g in cls))
        self.G = tuple(sorted(closure(list(E.group.generators), degree=E.group.degree)))
        self.X = [X(g) for g in self.O]
        self.Y = [Y(a, b) for a in self.G for b in self.G]
        self.class_of = {g: i for i, cls in enumerate(E.classes) for g in cls}
        self.m = len(E.classes)

    def pair_letters(self, kind_u, kind_v):
        return itertools.product(self.X if kind_u is X else self.Y,
                                 self.X if kind_v is X else self.Y)


def word_space_size(E: EquippedGroup, n: int, p: int) -> int:
    return len(E.O) ** n * E.group.order ** (2 * p) * comb(n + p, n)


def word_space(E: EquippedGroup, n: int, p: int, bound: int = DEFAULT_BOUND) -> list[CoveringWord]:
    """All words with n X-letters and p Y-letters, Y positions varying slowest."""
    al = _Alphabet(E)
    size = word_space_size(E, n, p)
    if size > bound:
        raise OracleBoundExceeded(f"word space of size {size} exceeds bound {bound}")
    out = []
    for ypos in itertools.combinations(range(n + p), p):
        kinds = [al.Y if i in ypos else al.X for i in range(n + p)]
        out.extend(itertools.product(*kinds))
    return out


_LHS_KINDS = {"rel11": (X, X), "rel12": (X, Y), "rel13": (X, Y), "rel16": (Y, X), "rel19": (X, Y)}


def _backward(rel: str, u: Letter, v: Letter, al: _Alphabet) -> list[tuple[Letter, Letter]]:
    """All pairs that ``rel`` rewrites into (u, v); found by brute force."""
    return [(s, t) for s, t in al.pair_letters(*_LHS_KINDS[rel]) if _forward(rel, s, t) == (u, v)]


def rewrite_neighbors(E: EquippedGroup, w: Sequence[Letter],
                      relations: Sequence[str] = RELATIONS, backward: bool = True) -> set:
    """Every word one local rewrite away from w, in either direction."""
    al = _Alphabet(E) if backward else None
    w = tuple(w)
    out = set()
    for i in range(len(w) - 1):
        u, v = w[i], w[i + 1]
        for rel in relations:
            rhs = _forward(rel, u, v)
            if rhs is not None:
                out.add(w[:i] + rhs + w[i + 2:])
            if backward:
                for lhs in _backward(rel, u, v, al):
                    out.add(w[:i] + lhs + w[i + 2:])
    out.discard(w)
    return out


def word_value(w: Sequence[Letter], identity: Permutation) -> Permutation:
    """Product of letter values, Y(a, b) contributing [a, b]."""
    acc = identity
    for x in w:
        acc = acc * (x.g if isinstance(x, X) else _comm(x.a, x.b))
    return acc


def is_reduced(w: Sequence[Letter]) -> bool:
    """All X letters before all Y letters."""
    seen_y = False
    for x in w:
        if isinstance(x, Y):
            seen_y = True
        elif seen_y:
            return False
    return True


@dataclass
class OracleReport:
    count: int
    class_sizes: list[int]        # words per class
    reduced_sizes: list[int]      # reduced words per class
    representatives: list[tuple]  # least reduced word per class, as (branch, handles)
    types: list[tuple[int, ...]]

    @property
    def orbit_count(self) -> int:
        return self.count


@dataclass(frozen=True)
class _Class:
    size: int
    boundary: Permutation
    type_vector: tuple[int, ...]
    full_group: bool
    reduced: int
    rep: tuple    # (branch, handles) of the least reduced word


@lru_cache(maxsize=8)
def _classes(E: EquippedGroup, n: int, p: int, relations: tuple[str, ...], bound: int):
    words = word_space(E, n, p, bound)
    al = _Alphabet(E)
    index = {w: i for i, w in enumerate(words)}
    parent = list(range(len(words)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # forward rewrites suffice: the equivalence they generate is symmetric anyway
    for i, w in enumerate(words):
        for k in range(len(w) - 1):
            u, v = w[k], w[k + 1]
            for rel in relations:
                rhs = _forward(rel, u, v)
                if rhs is None:
                    continue
                j = index[w[:k] + rhs + w[k + 2:]]
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)

    members: dict[int, list[int]] = {}
    for i in range(len(words)):
        members.setdefault(find(i), []).append(i)

    o_rank = {g: i for i, g in enumerate(al.O)}
    g_rank = {g: i for i, g in enumerate(al.G)}

    def key(w):
        return ([o_rank[x.g] for x in w if isinstance(x, X)],
                [r for x in w if isinstance(x, Y) for r in (g_rank[x.a], g_rank[x.b])])

    out = []
    for idx in members.values():
        w0 = words[idx[0]]
        tv = [0] * al.m
        for x in w0:
            if isinstance(x, X):
                tv[al.class_of[x.g]] += 1
        gens = [x.g for x in w0 if isinstance(x, X)]
        gens += [z for x in w0 if isinstance(x, Y) for z in (x.a, x.b)]
        full = len(closure(gens, degree=E.group.degree)) == len(al.G)
        reduced = [words[i] for i in idx if is_reduced(words[i])]
        best = min(reduced, key=key)
        rep = (tuple(x.g for x in best if isinstance(x, X)),
               tuple((x.a, x.b) for x in best if isinstance(x, Y)))
        out.append((key(best), _Class(len(idx), word_value(w0, E.group.identity), tuple(tv),
                                      full, len(reduced), rep)))
    out.sort(key=lambda kc: kc[0])
    return tuple(c for _, c in out)


def class_count(E: EquippedGroup, n: int, p: int, boundary: Permutation | None = None,
                require_full_group: bool = False, type_vector: Sequence[int] | None = None,
                relations: Sequence[str] = RELATIONS, bound: int = DEFAULT_BOUND) -> OracleReport:
    """Classes of the word space under the rewrite relations, filtered by constraints.

    Boundary, type and generated subgroup are constant on classes, so each
    constraint is evaluated once per class.
    """
    keep = [c for c in _classes(E, n, p, tuple(relations), bound)
            if (boundary is None or c.boundary == boundary)
            and (type_vector is None or c.type_vector == tuple(type_vector))
            and (not require_full_group or c.full_group)]
    return OracleReport(len(keep), [c.size for c in keep], [c.reduced for c in keep],
                        [c.rep for c in keep], [c.type_vector for c in keep])
