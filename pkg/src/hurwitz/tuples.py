"""Reduced-form covering tuples and the braid moves acting on them.

A covering tuple ``(g1, ..., gn; (a1, b1), ..., (ap, bp))`` stands for the
reduced word ``x_g1 ... x_gn y_{a1,b1} ... y_{ap,bp}``.  Moves that touch a
handle act on the last branch letter after transporting it past the handles
in front of the target: passing ``y_{a,b}`` conjugates a letter by
``[a, b] = a b a^-1 b^-1``, so the letter reaches handle j as ``g^{u_{j-1}}``
with ``u_j = [a1,b1]...[aj,bj]``.
"""
from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

from .equipped import EquippedGroup
from .perm import Permutation, PermError, PermGroup, commutator, conjugate, generated_subgroup, parse_perm


class TupleError(ValueError):
    pass


class NotReducible(RuntimeError):
    """Handle trivialization gave up within its node budget (not a proof of impossibility)."""


Handle = tuple[Permutation, Permutation]


@dataclass(frozen=True)
class CoveringTuple:
    equipment: EquippedGroup
    branch: tuple[Permutation, ...]
    handles: tuple[Handle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "branch", tuple(self.branch))
        object.__setattr__(self, "handles", tuple((a, b) for a, b in self.handles))

    def __eq__(self, other):
        if not isinstance(other, CoveringTuple):
            return NotImplemented
        return (self.equipment is other.equipment and self.branch == other.branch
                and self.handles == other.handles)

    def __hash__(self):
        return hash((self.branch, self.handles))

    @property
    def n(self) -> int:
        return len(self.branch)

    @property
    def genus(self) -> int:
        return len(self.handles)

    def key(self) -> tuple:
        """Lexicographic sort key matching the integer state encoding."""
        E = self.equipment
        idx = E.o_index
        return (tuple(idx[g] for g in self.branch),
                tuple(E.group.index(x) for h in self.handles for x in h))

    def __str__(self):
        return format_tuple(self)

    def __repr__(self):
        return f"CoveringTuple({format_tuple(self)})"


def make_tuple(E: EquippedGroup, branch: Sequence[Permutation], handles: Sequence[Handle] = (),
               check: bool = True) -> CoveringTuple:
    if check:
        for g in branch:
            if g not in E:
                raise TupleError(f"branch letter {g} is not in O")
        for a, b in handles:
            if a not in E.group or b not in E.group:
                raise TupleError(f"handle ({a}, {b}) is not in G")
    return CoveringTuple(E, tuple(branch), tuple(handles))


# -- invariants ---------------------------------------------------------------

def _identity(E: EquippedGroup) -> Permutation:
    return Permutation.identity(E.degree)


def _transport(t: CoveringTuple, j: int) -> Permutation:
    """u_j = [a1,b1]...[aj,bj] (j handles, 0 gives the identity)."""
    u = _identity(t.equipment)
    for a, b in t.handles[:j]:
        u = u * commutator(a, b)
    return u


def boundary(t: CoveringTuple) -> Permutation:
    out = _identity(t.equipment)
    for g in t.branch:
        out = out * g
    return out * _transport(t, t.genus)


def tuple_type(t: CoveringTuple) -> tuple[int, ...]:
    counts = [0] * t.equipment.m
    for g in t.branch:
        counts[t.equipment.class_index(g)] += 1
    return tuple(counts)


def genus(t: CoveringTuple) -> int:
    return t.genus


def generated_subgroup_of(t: CoveringTuple) -> PermGroup:
    elems = list(t.branch) + [x for h in t.handles for x in h]
    return generated_subgroup(elems, degree=t.equipment.degree, bound=t.equipment.group.order)


# -- moves ----------------------------------------------------------------------

class Move(NamedTuple):
    kind: str   # "H", "lambda", "mu", "zeta"
    index: int  # 1-based: letter position for H, handle number otherwise
    dir: int    # +1 or -1

    def inverse(self) -> "Move":
        return Move(self.kind, self.index, -self.dir)

    def __str__(self):
        return f"{self.kind}{self.index}{'+' if self.dir > 0 else '-'}"


def _check_dir(dir: int):
    if dir not in (1, -1):
        raise TupleError(f"direction must be +1 or -1, got {dir}")


def h_move(t: CoveringTuple, i: int, dir: int = 1) -> CoveringTuple:
    """Braid move on branch letters i, i+1 (1-based)."""
    _check_dir(dir)
    if not 1 <= i < t.n:
        raise TupleError(f"H-move index {i} out of range for n={t.n}")
    br = list(t.branch)
    g1, g2 = br[i - 1], br[i]
    if dir == 1:
        br[i - 1], br[i] = g2, conjugate(g1, g2)
    else:
        br[i - 1], br[i] = g1 * g2 * g1.inverse(), g1
    return CoveringTuple(t.equipment, tuple(br), t.handles)


def _handle_args(t: CoveringTuple, j: int, dir: int, name: str):
    _check_dir(dir)
    if t.n == 0:
        raise TupleError(f"{name}-move needs a branch letter")
    if not 1 <= j <= t.genus:
        raise TupleError(f"handle index {j} out of range for genus {t.genus}")


def _with(t: CoveringTuple, last: Permutation, j: int, a: Permutation, b: Permutation) -> CoveringTuple:
    handles = list(t.handles)
    handles[j - 1] = (a, b)
    return CoveringTuple(t.equipment, t.branch[:-1] + (last,), tuple(handles))


def lambda_move(t: CoveringTuple, j: int, dir: int = 1) -> CoveringTuple:
    """x_h y_{a,b} = x_{h^c1} y_{ha,b} with c1 = a b^-1 a^-1 h^-1, applied at handle j."""
    _handle_args(t, j, dir, "lambda")
    u = _transport(t, j - 1)
    a, b = t.handles[j - 1]
    if dir == 1:
        h = conjugate(t.branch[-1], u)
        c1 = a * b.inverse() * a.inverse() * h.inverse()
        h2, a2 = conjugate(h, c1), h * a
    else:
        h2 = conjugate(t.branch[-1], u)
        # invert via a' = h a and h' [a', b] = h [a, b]
        a2 = b.inverse() * commutator(a, b).inverse() * h2.inverse() * a * b
        h2 = a * a2.inverse()
    return _with(t, u * h2 * u.inverse(), j, a2, b)


def mu_move(t: CoveringTuple, j: int, dir: int = 1) -> CoveringTuple:
    """y_{a,b} x_h = y_{a,h^-1 b} x_{h^c2} with c2 = b a^-1 b^-1 h, applied at handle j."""
    _handle_args(t, j, dir, "mu")
    u0 = _transport(t, j - 1)
    a, b = t.handles[j - 1]
    u = u0 * commutator(a, b)
    if dir == 1:
        h = conjugate(t.branch[-1], u)
        c2 = b * a.inverse() * b.inverse() * h
        b2 = h.inverse() * b
        h2 = conjugate(h, c2)
    else:
        h2 = conjugate(t.branch[-1], u)
        # invert via b = h b' and [a, b] h = [a, b'] h'
        b2 = a.inverse() * commutator(a, b) * h2 * b * a
        h2 = b2 * b.inverse()
    u2 = u0 * commutator(a, b2)
    return _with(t, u2 * h2 * u2.inverse(), j, a, b2)


def zeta_move(t: CoveringTuple, j: int, dir: int = 1) -> CoveringTuple:
    """x_h y_{a,b} = x_k y_{a^k,b^k} with k = h^[a,b], applied at handle j."""
    _handle_args(t, j, dir, "zeta")
    u = _transport(t, j - 1)
    a, b = t.handles[j - 1]
    k = conjugate(t.branch[-1], u)
    if dir == 1:
        k2 = conjugate(k, commutator(a, b))
        a2, b2 = conjugate(a, k2), conjugate(b, k2)
    else:
        kinv = k.inverse()
        a2, b2 = conjugate(a, kinv), conjugate(b, kinv)
        c = commutator(a2, b2)
        k2 = c * k * c.inverse()
    return _with(t, u * k2 * u.inverse(), j, a2, b2)


_MOVES = {"H": h_move, "lambda": lambda_move, "mu": mu_move, "zeta": zeta_move}


def apply_move(t: CoveringTuple, move: Move) -> CoveringTuple:
    return _MOVES[move.kind](t, move.index, move.dir)


def apply_word(t: CoveringTuple, word: Sequence[Move]) -> CoveringTuple:
    for mv in word:
        t = apply_move(t, mv)
    return t


def available_moves(t: CoveringTuple, zeta: bool = False, both_dirs: bool = True) -> list[Move]:
    dirs = (1, -1) if both_dirs else (1,)
    moves = [Move("H", i, d) for i in range(1, t.n) for d in dirs]
    if t.n:
        kinds = ("lambda", "mu", "zeta") if zeta else ("lambda", "mu")
        moves += [Move(k, j, d) for j in range(1, t.genus + 1) for k in kinds for d in dirs]
    return moves


def neighbors(t: CoveringTuple, zeta: bool = False) -> Iterator[tuple[Move, CoveringTuple]]:
    for mv in available_moves(t, zeta):
        yield mv, apply_move(t, mv)


# -- semigroup structure ----------------------------------------------------------

def conjugate_tuple(t: CoveringTuple, h: Permutation) -> CoveringTuple:
    """Simultaneous conjugation of every entry by h (x -> h^-1 x h)."""
    if h not in t.equipment.group:
        raise TupleError(f"{h} is not in G")
    return CoveringTuple(t.equipment, tuple(conjugate(g, h) for g in t.branch),
                         tuple((conjugate(a, h), conjugate(b, h)) for a, b in t.handles))


def product(t1: CoveringTuple, t2: CoveringTuple) -> CoveringTuple:
    """Concatenate and move the branch letters of t2 in front of t1's handles."""
    if t1.equipment is not t2.equipment:
        raise TupleError("tuples belong to different equipments")
    U = _transport(t1, t1.genus)
    Ui = U.inverse()
    branch = t1.branch + tuple(U * g * Ui for g in t2.branch)
    return CoveringTuple(t1.equipment, branch, t1.handles + t2.handles)


def empty_tuple(E: EquippedGroup, genus: int = 0) -> CoveringTuple:
    e = _identity(E)
    return CoveringTuple(E, (), ((e, e),) * genus)


# -- handle trivialization ----------------------------------------------------------

class NormalForm(NamedTuple):
    tuple: CoveringTuple
    moves: tuple[Move, ...]


@lru_cache(maxsize=32)
def word_lengths(E: EquippedGroup) -> dict[Permutation, int]:
    """Length of a shortest word in O for every element of <O>."""
    e = _identity(E)
    dist = {e: 0}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in E.O:
            y = x * g
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _handles_trivial(t: CoveringTuple) -> bool:
    return all(a.is_identity() and b.is_identity() for a, b in t.handles)


def normalize_handles(t: CoveringTuple, budget: int = 10**6, zeta: bool = False) -> NormalForm:
    """Find a move-equivalent tuple whose handles are all (e, e).

    Best-first search ordered by the total word length of the handle entries;
    ties are expanded in insertion order, so plateaus of H-moves are explored
    breadth first.  ``budget`` bounds the number of expanded nodes.
    """
    if _handles_trivial(t):
        return NormalForm(t, ())
    if t.n == 0:
        raise NotReducible("no moves exist without branch letters")
    dist = word_lengths(t.equipment)
    big = len(dist) + 1

    def score(s: CoveringTuple) -> int:
        return sum(dist.get(a, big) + dist.get(b, big) for a, b in s.handles)

    counter = itertools.count()
    parent: dict[CoveringTuple, tuple[CoveringTuple, Move] | None] = {t: None}
    heap = [(score(t), next(counter), t)]
    expanded = 0
    while heap:
        _, _, s = heapq.heappop(heap)
        expanded += 1
        if expanded > budget:
            break
        for mv, nb in neighbors(s, zeta):
            if nb in parent:
                continue
            parent[nb] = (s, mv)
            if _handles_trivial(nb):
                word = []
                cur = nb
                while parent[cur] is not None:
                    prev, m = parent[cur]
                    word.append(m)
                    cur = prev
                return NormalForm(nb, tuple(reversed(word)))
            heapq.heappush(heap, (score(nb), next(counter), nb))
    raise NotReducible(f"handles not trivialized within {budget} nodes")


# -- text form ------------------------------------------------------------------

def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise TupleError(f"unbalanced parentheses in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise TupleError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


def parse_tuple(E: EquippedGroup, text: str) -> CoveringTuple:
    """Parse ``[(1 2),(1 3) | (1 2 3),(1 3); (2 3),e]``."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise TupleError(f"tuple literal must be bracketed: {text!r}")
    s = s[1:-1]
    parts = _split_top(s, "|")
    if len(parts) > 2:
        raise TupleError(f"more than one '|' in {text!r}")
    try:
        branch = [parse_perm(x, E.degree) for x in _split_top(parts[0], ",") if x.strip()]
        handles = []
        if len(parts) == 2 and parts[1].strip():
            for pair in _split_top(parts[1], ";"):
                ab = [x for x in _split_top(pair, ",")]
                if len(ab) != 2:
                    raise TupleError(f"handle must be 'a,b': {pair!r}")
                handles.append((parse_perm(ab[0], E.degree), parse_perm(ab[1], E.degree)))
    except PermError as exc:
        raise TupleError(str(exc)) from exc
    return make_tuple(E, branch, handles)


def format_tuple(t: CoveringTuple) -> str:
    br = ",".join(str(g) for g in t.branch)
    if not t.handles:
        return f"[{br}]"
    hs = "; ".join(f"{a},{b}" for a, b in t.handles)
    return f"[{br} | {hs}]"
