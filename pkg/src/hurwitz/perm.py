"""Permutations and finite permutation groups.

Points are acted on from the right and products compose left to right,
so ``x^(g*h) == (x^g)^h``.  Conjugation is ``g^h = h^-1 * g * h``.
Points are 1-based in cycle notation and 0-based in ``images``.
"""
from __future__ import annotations

import re
from collections import deque
from typing import Iterable, Sequence

DEFAULT_ORDER_BOUND = 10**6


class PermError(ValueError):
    pass


class GroupTooLarge(PermError):
    """Raised when a closure would exceed the configured element bound."""


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise PermError(f"not a bijection of 0..{len(images) - 1}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 1-based cycles, e.g. ``[(1, 2), (3, 4, 5)]``."""
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            cyc = [int(x) for x in cyc]
            for x in cyc:
                if not 1 <= x <= degree:
                    raise PermError(f"point {x} outside 1..{degree}")
                if x in seen:
                    raise PermError(f"point {x} repeated in cycles")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b - 1
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def apply(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, 1-based, each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(x + 1 for x in cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted cycle lengths including fixed points."""
        seen = [False] * self.degree
        lengths = []
        for start in range(self.degree):
            if seen[start]:
                continue
            n = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                n += 1
            lengths.append(n)
        return tuple(sorted(lengths, reverse=True))

    def order(self) -> int:
        from math import lcm

        return lcm(*self.cycle_type()) if self.degree else 1

    def sign(self) -> int:
        return -1 if sum(n - 1 for n in self.cycle_type()) % 2 else 1

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "e"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, degree: int) -> Permutation:
    """Parse disjoint-cycle notation such as ``(1 2)(3 4 5)`` or ``(1,2)``; ``e`` is the identity."""
    s = text.strip()
    if s in ("e", "()", "1", ""):
        if s == "":
            raise PermError("empty permutation literal")
        return Permutation.identity(degree)
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(s):
        if s[pos:m.start()].strip():
            raise PermError(f"malformed cycle notation: {text!r}")
        body = m.group(1).replace(",", " ").split()
        try:
            cycles.append([int(x) for x in body])
        except ValueError:
            raise PermError(f"malformed cycle notation: {text!r}") from None
        pos = m.end()
    if s[pos:].strip() or not cycles:
        raise PermError(f"malformed cycle notation: {text!r}")
    return Permutation.from_cycles(cycles, degree)


def _check_degrees(*perms: Permutation) -> int:
    d = perms[0].degree
    for p in perms[1:]:
        if p.degree != d:
            raise PermError(f"degree mismatch: {d} vs {p.degree}")
    return d


def compose(g: Permutation, h: Permutation) -> Permutation:
    """Left-to-right product ``g*h``: apply g first, then h."""
    _check_degrees(g, h)
    hi = h.images
    return Permutation([hi[i] for i in g.images])


def conjugate(g: Permutation, h: Permutation) -> Permutation:
    """``g^h = h^-1 g h``."""
    _check_degrees(g, h)
    # x^(h^-1 g h): relabel the cycles of g through h
    out = [0] * g.degree
    for i, j in enumerate(g.images):
        out[h.images[i]] = h.images[j]
    return Permutation(out)


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """``[a, b] = a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


class PermGroup:
    """A finite permutation group with its element set materialized."""

    def __init__(self, generators: Sequence[Permutation], elements: Iterable[Permutation]):
        self.generators = tuple(generators)
        self.elements = tuple(sorted(elements))
        self._index = {g: i for i, g in enumerate(self.elements)}
        self.degree = self.elements[0].degree

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g: Permutation) -> bool:
        return g in self._index

    def __iter__(self):
        return iter(self.elements)

    def index(self, g: Permutation) -> int:
        return self._index[g]

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def __eq__(self, other):
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.elements == other.elements

    def __hash__(self):
        return hash(self.elements)

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order})"

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)


def closure(gens: Sequence[Permutation], bound: int = DEFAULT_ORDER_BOUND,
            degree: int | None = None) -> PermGroup:
    """Smallest group containing ``gens``."""
    gens = list(gens)
    if not gens:
        if degree is None:
            raise PermError("closure of an empty generator list needs a degree")
        gens = [Permutation.identity(degree)]
    d = _check_degrees(*gens)
    e = Permutation.identity(d)
    seen = {e}
    queue = deque([e])
    gen_images = [g.images for g in gens]
    while queue:
        x = queue.popleft()
        xi = x.images
        for gi in gen_images:
            y = Permutation([gi[i] for i in xi])
            if y not in seen:
                seen.add(y)
                if len(seen) > bound:
                    raise GroupTooLarge(f"group order exceeds bound {bound}")
                queue.append(y)
    return PermGroup(gens, seen)


def symmetric_group(d: int, bound: int = DEFAULT_ORDER_BOUND) -> PermGroup:
    if d == 1:
        return closure([Permutation.identity(1)])
    gens = [Permutation.from_cycles([range(1, d + 1)], d), Permutation.from_cycles([(1, 2)], d)]
    return closure(gens, bound)


def _require_member(G: PermGroup, g: Permutation):
    if g not in G:
        raise PermError(f"{g} is not an element of the group")


def conjugacy_class(G: PermGroup, g: Permutation) -> frozenset[Permutation]:
    _require_member(G, g)
    seen = {g}
    queue = deque([g])
    while queue:
        x = queue.popleft()
        for h in G.generators:
            y = conjugate(x, h)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def orbit(G: PermGroup, point: int) -> set[int]:
    """Orbit of a 1-based point."""
    seen = {point}
    queue = deque([point])
    while queue:
        x = queue.popleft()
        for g in G.generators:
            y = g.apply(x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def is_transitive(G: PermGroup) -> bool:
    return len(orbit(G, 1)) == G.degree


def centralizer(G: PermGroup, S: Iterable[Permutation]) -> PermGroup:
    S = list(S)
    elems = [g for g in G.elements if all(g * s == s * g for s in S)]
    return PermGroup(elems, elems)


def center(G: PermGroup) -> PermGroup:
    return centralizer(G, G.generators)


def normal_closure(G: PermGroup, gens: Iterable[Permutation]) -> PermGroup:
    """Smallest normal subgroup of G containing ``gens``."""
    gens = set(gens)
    gens.add(G.identity)
    while True:
        H = closure(sorted(gens))
        new = {conjugate(x, g) for x in H.generators for g in G.generators} - set(H.elements)
        if not new:
            return H
        gens |= new


def commutator_subgroup(G: PermGroup) -> PermGroup:
    gens = G.generators
    return normal_closure(G, [commutator(a, b) for a in gens for b in gens])


def is_subgroup(H: PermGroup, G: PermGroup) -> bool:
    return all(h in G for h in H.generators)


def generated_subgroup(elements: Iterable[Permutation], degree: int | None = None,
                       bound: int = DEFAULT_ORDER_BOUND) -> PermGroup:
    """Closure of ``elements``, keeping only generators that enlarge the group.

    Cheaper than ``closure`` when many of the given elements are redundant.
    """
    gens: list[Permutation] = []
    current: set[Permutation] | None = None
    for g in elements:
        if g.is_identity() or (current is not None and g in current):
            continue
        gens.append(g)
        current = set(closure(gens, bound).elements)
    if not gens:
        if degree is None:
            raise PermError("need a degree for the trivial group")
        return closure([], degree=degree)
    return PermGroup(gens, current)
