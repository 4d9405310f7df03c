"""C-group presentations, the finite central quotient Q1 and the invariants built on it.

The C-group of (G, O) has one generator per letter of O and the relators
``x3^-1 x1 x3 x2^-1`` whenever ``g3^-1 g1 g3 = g2`` in G.  Adding one power
relator ``x_r^p`` per class (r the first element of the class, p its order)
kills a central subgroup that meets the commutant trivially, so the result Q1
is finite and |[Q1, Q1]| / |[G, G]| is the ambiguity index.

Q1 is found by Todd-Coxeter enumeration over the trivial subgroup (HLT with
lookahead), and the finished table is renumbered in breadth-first order so it
does not depend on the enumeration history.  Elements of Q1 are coset
indices: coset c is the element reached from coset 0 along any word.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .equipped import EquippedGroup
from .perm import Permutation, commutator_subgroup, conjugate
from .tuples import CoveringTuple

DEFAULT_COSET_BOUND = 10**7
# coset table entries (cosets x 2 x generators); keeps the table well inside memory
MAX_TABLE_CELLS = 5 * 10**7

Letter = tuple[int, int]    # (generator index, +1 or -1)


class PresentationError(ValueError):
    pass


class CosetEnumerationError(RuntimeError):
    def __init__(self, msg: str, defined: int = 0, live: int = 0, position: int = 0):
        super().__init__(msg)
        self.defined = defined
        self.live = live
        self.position = position


@dataclass(frozen=True)
class Presentation:
    symbols: tuple[str, ...]
    relators: tuple[tuple[Letter, ...], ...]

    def __post_init__(self):
        n = len(self.symbols)
        for r in self.relators:
            for g, e in r:
                if not (0 <= g < n) or e not in (1, -1):
                    raise PresentationError(f"relator {r} uses an undeclared symbol")

    @property
    def n_generators(self) -> int:
        return len(self.symbols)

    def format_word(self, w: Sequence[Letter]) -> str:
        if not w:
            return "1"
        return " ".join(self.symbols[g] + ("^-1" if e < 0 else "") for g, e in w)

    def __str__(self):
        rels = ", ".join(self.format_word(r) for r in self.relators)
        return f"< {', '.join(self.symbols)} | {rels} >"

    def with_relators(self, extra: Sequence[Sequence[Letter]]) -> "Presentation":
        return Presentation(self.symbols, self.relators + tuple(tuple(r) for r in extra))


def c_group_presentation(E: EquippedGroup) -> Presentation:
    if not E.generates:
        raise PresentationError("O does not generate G")
    idx = E.o_index
    rels = []
    for g1 in E.O:
        for g3 in E.O:
            g2 = conjugate(g1, g3)
            rels.append(((idx[g3], -1), (idx[g1], 1), (idx[g3], 1), (idx[g2], -1)))
    return Presentation(tuple(f"x{i + 1}" for i in range(len(E.O))), tuple(rels))


def _reduce(word: Sequence[Letter]) -> list[int]:
    """Freely and cyclically reduce; letters become table columns 2g / 2g+1."""
    out: list[int] = []
    for g, e in word:
        col = 2 * g + (0 if e > 0 else 1)
        if out and out[-1] == col ^ 1:
            out.pop()
        else:
            out.append(col)
    while len(out) > 1 and out[0] == out[-1] ^ 1:
        out = out[1:-1]
    return out


class _CosetTable:
    """Coset table over the trivial subgroup, Holt-style HLT with coincidences."""

    def __init__(self, ngens: int, bound: int):
        self.ncols = 2 * ngens
        self.bound = min(bound, max(1, MAX_TABLE_CELLS // self.ncols))
        self.table = [[-1] * self.ncols]
        self.parent = [0]
        self.live = 1

    def define(self, c: int, x: int):
        if len(self.table) >= self.bound:
            raise CosetEnumerationError(
                f"coset enumeration exceeded {self.bound} cosets ({self.ncols} columns)",
                defined=len(self.table), live=self.live)
        new = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(new)
        self.live += 1
        self.table[c][x] = new
        self.table[new][x ^ 1] = c

    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def _merge(self, k: int, l: int, queue: list):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if l < k:
            k, l = l, k
        self.parent[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        T = self.table
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = T[e][x]
                if f < 0:
                    continue
                T[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if T[e1][x] >= 0:
                    self._merge(f1, T[e1][x], queue)
                elif T[f1][x ^ 1] >= 0:
                    self._merge(e1, T[f1][x ^ 1], queue)
                else:
                    T[e1][x] = f1
                    T[f1][x ^ 1] = e1

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    def scan(self, c: int, w: list[int], fill: bool):
        T = self.table
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and T[f][w[i]] >= 0:
                f = T[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and T[b][w[j] ^ 1] >= 0:
                b = T[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                T[f][w[i]] = b
                T[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self, rels: list[list[int]]):
        for c in range(len(self.table)):
            for w in rels:
                if not self.is_live(c):
                    break
                self.scan(c, w, fill=False)

    def compact(self, pointer: int) -> int:
        """Drop dead rows; returns the new index of ``pointer``'s position."""
        live = [c for c in range(len(self.table)) if self.is_live(c)]
        new = {c: i for i, c in enumerate(live)}
        self.table = [[new[x] if x >= 0 else -1 for x in self.table[c]] for c in live]
        self.parent = list(range(len(live)))
        self.live = len(live)
        return sum(1 for c in live if c < pointer)

    def standardized(self) -> np.ndarray:
        """Live part of a complete table, renumbered breadth-first from coset 0."""
        order = {0: 0}
        queue = [0]
        for c in queue:
            for x in range(self.ncols):
                d = self.table[c][x]
                if d < 0:
                    raise CosetEnumerationError("coset table is incomplete")
                if d not in order:
                    order[d] = len(queue)
                    queue.append(d)
        out = np.empty((len(queue), self.ncols), dtype=np.int64)
        for c in queue:
            out[order[c]] = [order[d] for d in self.table[c]]
        return out


def enumerate_cosets(ngens: int, relators: Sequence[Sequence[Letter]],
                     bound: int = DEFAULT_COSET_BOUND) -> np.ndarray:
    """Complete coset table of the trivial subgroup, columns 2g (x_g) and 2g+1 (x_g^-1)."""
    rels = []
    for r in relators:
        w = _reduce(r)
        if w and w not in rels:
            rels.append(w)
    rels.sort(key=len)
    ct = _CosetTable(ngens, bound)
    limit = max(1024, min(bound, 1 << 16))
    c = 0
    while c < len(ct.table):
        if len(ct.table) > limit:
            ct.lookahead(rels)
            c = ct.compact(c)
            if len(ct.table) > limit // 2:
                limit *= 2
            continue
        if ct.is_live(c):
            for w in rels:
                ct.scan(c, w, fill=True)
                if not ct.is_live(c):
                    break
            if ct.is_live(c):
                for x in range(ct.ncols):
                    if ct.table[c][x] < 0:
                        ct.define(c, x)
        c += 1
    ct.compact(0)
    return ct.standardized()


@dataclass(frozen=True, eq=False)
class FiniteQuotient:
    equipment: EquippedGroup
    presentation: Presentation
    power_relators: tuple[tuple[Letter, ...], ...]
    table: np.ndarray
    words: tuple[tuple[int, ...], ...] = field(repr=False)   # spanning-tree column words

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def generator_images(self, i: int) -> np.ndarray:
        """Permutation of the cosets induced by generator i."""
        return self.table[:, 2 * i]

    def walk(self, c: int, cols: Sequence[int]) -> int:
        T = self.table
        for x in cols:
            c = int(T[c, x])
        return c

    def mul(self, x: int, y: int) -> int:
        return self.walk(x, self.words[y])

    def inverse(self, x: int) -> int:
        return self.walk(0, [c ^ 1 for c in reversed(self.words[x])])

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    def subgroup(self, gens: Sequence[int]) -> set[int]:
        seen = {0}
        queue = [0]
        for c in queue:
            for h in gens:
                d = self.mul(c, h)
                if d not in seen:
                    seen.add(d)
                    queue.append(d)
        return seen

    def commutator_subgroup(self) -> set[int]:
        gens = [self.walk(0, [2 * i]) for i in range(self.presentation.n_generators)]
        invs = [self.inverse(g) for g in gens]
        cgens = []
        for i, a in enumerate(gens):
            for j, b in enumerate(gens[:i]):
                x = self.mul(self.mul(a, b), self.mul(invs[i], invs[j]))
                if x:
                    cgens.append(x)
        H = self.subgroup(cgens)
        # normal closure: add conjugates by the generators until stable
        changed = True
        while changed:
            changed = False
            for h in list(cgens):
                for a, ai in zip(gens, invs):
                    y = self.mul(self.mul(ai, h), a)
                    if y not in H:
                        cgens.append(y)
                        H = self.subgroup(cgens)
                        changed = True
        return H

    def abelianization_order(self) -> int:
        return self.order // len(self.commutator_subgroup())

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "generators": {
                self.presentation.symbols[i]: {
                    "element": str(self.equipment.O[i]),
                    "cosets": self.generator_images(i).tolist(),
                }
                for i in range(self.presentation.n_generators)
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _spanning_words(table: np.ndarray) -> tuple[tuple[int, ...], ...]:
    words: list = [None] * table.shape[0]
    words[0] = ()
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(table.shape[1]):
            d = int(table[c, x])
            if words[d] is None:
                words[d] = words[c] + (x,)
                queue.append(d)
    return tuple(words)


def power_relators(E: EquippedGroup, all_classes_members: bool = False):
    idx = E.o_index
    rels = []
    for cls in E.classes:
        for r in (cls if all_classes_members else cls[:1]):
            rels.append(((idx[r], 1),) * r.order())
    return tuple(rels)


def finite_quotient(E: EquippedGroup, bound: int = DEFAULT_COSET_BOUND,
                    all_powers: bool = False) -> FiniteQuotient:
    return _finite_quotient(E, bound, all_powers)


@lru_cache(maxsize=32)
def _finite_quotient(E, bound, all_powers):
    if not E.generates:
        raise PresentationError("O does not generate G")
    # Q1 maps onto G, so it has at least |G| cosets; refuse before building
    # |O|^2 relators when that cannot fit
    need = E.group.order
    cap = min(bound, MAX_TABLE_CELLS // (2 * len(E.O)))
    if need > cap:
        raise CosetEnumerationError(
            f"Q1 has at least |G| = {need} elements, over the limit of {cap} cosets "
            f"for {len(E.O)} generators")
    P = c_group_presentation(E)
    powers = power_relators(E, all_powers)
    table = enumerate_cosets(P.n_generators, P.relators + powers, bound)
    return FiniteQuotient(E, P, powers, table, _spanning_words(table))


def ambiguity_index(E: EquippedGroup, bound: int = DEFAULT_COSET_BOUND) -> int:
    Q = finite_quotient(E, bound)
    q = len(Q.commutator_subgroup())
    g = commutator_subgroup(E.group).order
    if q % g:
        raise ArithmeticError(f"|[Q1,Q1]| = {q} is not divisible by |[G,G]| = {g}")
    return q // g


@lru_cache(maxsize=32)
def _lift_table(E: EquippedGroup) -> dict[Permutation, tuple[int, ...]]:
    """Shortest O-words by breadth-first search, ties broken by letter order."""
    words = {E.group.identity: ()}
    queue = deque([E.group.identity])
    while queue:
        g = queue.popleft()
        for i, x in enumerate(E.O):
            h = g * x
            if h not in words:
                words[h] = words[g] + (i,)
                queue.append(h)
    return words


def lift_word(E: EquippedGroup, g: Permutation) -> list[Permutation]:
    if g not in E.group:
        raise PresentationError(f"{g} is not in G")
    if not E.generates:
        raise PresentationError("O does not generate G")
    return [E.O[i] for i in _lift_table(E)[g]]


@dataclass(frozen=True)
class LiftingInvariant:
    quotient: FiniteQuotient = field(compare=False, hash=False, repr=False)
    value: int

    def __mul__(self, other: "LiftingInvariant") -> "LiftingInvariant":
        return LiftingInvariant(self.quotient, self.quotient.mul(self.value, other.value))

    @property
    def permutation(self) -> np.ndarray:
        """Action of the element on the cosets (right multiplication)."""
        Q = self.quotient
        return np.array([Q.mul(c, self.value) for c in range(Q.order)], dtype=np.int64)

    def is_identity(self) -> bool:
        return self.value == 0


def lifting_invariant(E: EquippedGroup, t: CoveringTuple, Q: FiniteQuotient | None = None,
                      lift: Callable[[Permutation], Sequence[Permutation]] | None = None
                      ) -> LiftingInvariant:
    """Image in Q1 of the lifted product of t.

    Branch letters lift to their own generators; handle entries go through
    ``lift`` (shortest words by default).  Any other choice of lifts changes
    a and b by central elements, which cancel in the commutator.
    """
    if Q is None:
        Q = finite_quotient(E)
    idx = E.o_index
    cols = [2 * idx[g] for g in t.branch]
    for a, b in t.handles:
        wa = [2 * idx[x] for x in (lift(a) if lift else lift_word(E, a))]
        wb = [2 * idx[x] for x in (lift(b) if lift else lift_word(E, b))]
        cols += wa + wb + [x ^ 1 for x in reversed(wa)] + [x ^ 1 for x in reversed(wb)]
    return LiftingInvariant(Q, Q.walk(0, cols))
