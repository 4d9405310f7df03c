"""Orbit decomposition of constrained tuple spaces under the move system.

States are covering tuples of a fixed type and genus, encoded as integers:
branch letters in base |O| followed by handle entries in base |G|, the first
letter most significant, so numeric order is the lexicographic order of
tuples.  The space is enumerated into a sorted array and orbits are found by
union-find over forward moves (every move permutes the finite space, so
forward edges already give the orbits).  Each orbit is represented by its
smallest state.
"""
from __future__ import annotations

import csv
import io
import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

import numpy as np

from . import _accel
from .equipped import EquippedGroup
from .perm import Permutation
from .tables import GroupTables, group_tables
from .tuples import (CoveringTuple, TupleError, boundary, generated_subgroup_of, neighbors,
                     tuple_type)

DEFAULT_WORK_BOUND = 2 * 10**9
DEFAULT_STATE_BOUND = 5 * 10**7


class QueryError(ValueError):
    pass


class BoundExceeded(RuntimeError):
    pass


class Inconclusive(RuntimeError):
    """Orbit comparison ran out of budget with matching invariants."""


@dataclass(frozen=True)
class OrbitQuery:
    equipment: EquippedGroup
    type_vector: tuple[int, ...]
    genus: int = 0
    boundary: Permutation | None = None     # None: any boundary
    require_full_group: bool = False
    zeta: bool = False
    conjugation_quotient: bool = False
    work_bound: int = DEFAULT_WORK_BOUND
    state_bound: int = DEFAULT_STATE_BOUND

    def __post_init__(self):
        object.__setattr__(self, "type_vector", tuple(int(x) for x in self.type_vector))
        self.validate()

    @property
    def n(self) -> int:
        return sum(self.type_vector)

    def validate(self):
        E = self.equipment
        if len(self.type_vector) != E.m:
            raise QueryError(f"type vector has length {len(self.type_vector)}, expected {E.m}")
        if any(x < 0 for x in self.type_vector):
            raise QueryError("type vector entries must be non-negative")
        if self.genus < 0:
            raise QueryError("genus must be non-negative")
        if self.boundary is not None and self.boundary not in E.group:
            raise QueryError(f"boundary {self.boundary} is not in G")
        if self.conjugation_quotient and self.boundary is not None:
            b = self.boundary
            if any(b * g != g * b for g in E.group.generators):
                raise QueryError("conjugation does not preserve a non-central boundary constraint")


@dataclass
class StateSpace:
    query: OrbitQuery
    tables: GroupTables
    radices: np.ndarray
    states: np.ndarray

    @property
    def size(self) -> int:
        return int(self.states.shape[0])

    def decode(self, code: int) -> CoveringTuple:
        E = self.query.equipment
        n = self.query.n
        dig = []
        for r in reversed(self.radices.tolist()):
            dig.append(code % r)
            code //= r
        dig.reverse()
        G = E.group.elements
        branch = tuple(E.O[i] for i in dig[:n])
        hs = dig[n:]
        handles = tuple((G[hs[2 * j]], G[hs[2 * j + 1]]) for j in range(self.query.genus))
        return CoveringTuple(E, branch, handles)

    def encode(self, t: CoveringTuple) -> int:
        branch, hand = t.key()
        code = 0
        for r, x in zip(self.radices.tolist(), branch + hand):
            code = code * r + x
        return code

    def index_of(self, t: CoveringTuple) -> int:
        code = self.encode(t)
        pos = int(np.searchsorted(self.states, code))
        if pos < self.size and self.states[pos] == code:
            return pos
        return -1


def _patterns(type_vector: Sequence[int]) -> np.ndarray:
    """All class sequences with the given class counts, in lexicographic order."""
    n = sum(type_vector)
    out = []
    counts = list(type_vector)
    cur = []

    def rec():
        if len(cur) == n:
            out.append(list(cur))
            return
        for c, k in enumerate(counts):
            if k:
                counts[c] -= 1
                cur.append(c)
                rec()
                cur.pop()
                counts[c] += 1

    rec()
    return np.array(out, dtype=np.int64).reshape(len(out), n)


def _handle_products(T: GroupTables, p: int) -> np.ndarray:
    """Product [a1,b1]...[ap,bp] for every handle combination, in code order."""
    N = T.order
    H = N ** (2 * p)
    codes = np.arange(H, dtype=np.int64)
    u = np.zeros(H, dtype=np.int64)
    digits = []
    for _ in range(2 * p):
        digits.append(codes % N)
        codes = codes // N
    digits.reverse()
    for j in range(p):
        u = T.mul(u, T.comm(digits[2 * j], digits[2 * j + 1]))
    return u


def build_space(q: OrbitQuery) -> StateSpace:
    E = q.equipment
    T = group_tables(E)
    n, p = q.n, q.genus
    R, N = T.n_letters, T.order
    radices = np.array([R] * n + [N] * (2 * p), dtype=np.int64)
    if float(R) ** n * float(N) ** (2 * p) >= 2.0**62:
        raise BoundExceeded("state codes would overflow 64-bit integers")
    pats = _patterns(q.type_vector)
    sizes = E.class_sizes
    target = -1 if q.boundary is None else E.group.index(q.boundary)
    det = target >= 0 and n >= 1
    work = 0
    for pat in pats:
        work += prod(sizes[c] for c in (pat[:-1] if det else pat))
    work *= N ** (2 * p)
    if work > q.work_bound:
        raise BoundExceeded(f"enumeration work {work} exceeds bound {q.work_bound}")
    H = N ** (2 * p)
    hU = _handle_products(T, p)
    members = np.full((E.m, max(sizes)), -1, dtype=np.int64)
    for c, size in enumerate(sizes):
        members[c, :size] = np.flatnonzero(T.oclass == c)
    msize = np.array(sizes, dtype=np.int64)
    k = _accel.kernels()
    states = k.enumerate_codes(T, n, pats, members, msize, target, hU)
    if states.shape[0] > q.state_bound:
        raise BoundExceeded(f"{states.shape[0]} states exceed bound {q.state_bound}")
    assert H >= 1
    return StateSpace(q, T, radices, states)


def move_table(q: OrbitQuery) -> np.ndarray:
    """Forward moves as rows (kind, 0-based index, dir)."""
    moves = [(0, i, 1) for i in range(q.n - 1)]
    if q.n:
        kinds = (1, 2, 3) if q.zeta else (1, 2)
        moves += [(kind, j, 1) for j in range(q.genus) for kind in kinds]
    if q.conjugation_quotient:
        G = q.equipment.group
        moves += [(4, G.index(g), 1) for g in G.generators]
    return np.array(moves, dtype=np.int64).reshape(len(moves), 3)


@dataclass
class OrbitReport:
    query: OrbitQuery
    orbit_count: int
    orbit_sizes: list[int]
    representatives: list[CoveringTuple]
    lifting_invariants: list[int] | None = None
    space: StateSpace | None = field(default=None, repr=False)
    roots: np.ndarray | None = field(default=None, repr=False)
    root_to_orbit: dict[int, int] | None = field(default=None, repr=False)

    @property
    def total(self) -> int:
        return sum(self.orbit_sizes)

    def orbit_of(self, t: CoveringTuple) -> int | None:
        """Index of the orbit containing t, or None if t is outside the space."""
        if self.space is None:
            raise RuntimeError("report was built without its state space")
        i = self.space.index_of(t)
        if i < 0:
            return None
        return self.root_to_orbit.get(int(self.roots[i]))

    def to_dict(self) -> dict:
        q = self.query
        out = {
            "type": list(q.type_vector),
            "genus": q.genus,
            "boundary": None if q.boundary is None else str(q.boundary),
            "require_full_group": q.require_full_group,
            "zeta": q.zeta,
            "conjugation_quotient": q.conjugation_quotient,
            "orbit_count": self.orbit_count,
            "orbit_sizes": list(self.orbit_sizes),
            "representatives": [str(t) for t in self.representatives],
        }
        if self.lifting_invariants is not None:
            out["lifting_invariants"] = list(self.lifting_invariants)
        return out


def enumerate_tuples(q: OrbitQuery) -> Iterable[CoveringTuple]:
    """Every tuple of the constrained space, in lexicographic order."""
    space = build_space(q)
    full = _full_group_filter(space) if q.require_full_group else None
    for code in space.states.tolist():
        t = space.decode(code)
        if full is None or full(t):
            yield t


def _full_group_filter(space: StateSpace):
    T = space.tables
    k = _accel.kernels()
    cache: dict[frozenset, bool] = {}

    def check(t: CoveringTuple) -> bool:
        E = t.equipment
        gens = frozenset([E.group.index(g) for g in t.branch]
                         + [E.group.index(x) for h in t.handles for x in h]) - {0}
        if gens not in cache:
            cache[gens] = k.closure_size(T, sorted(gens)) == T.order if gens else T.order == 1
        return cache[gens]

    return check


def orbit_decompose(q: OrbitQuery, with_invariants: bool = False, threads: int | None = None,
                    keep_space: bool = True) -> OrbitReport:
    space = build_space(q)
    k = _accel.kernels()
    _accel.set_threads(threads)
    moves = move_table(q)
    roots = k.orbit_roots(space.tables, q.n, q.genus, space.states, moves, space.radices)
    uniq, counts = np.unique(roots, return_counts=True)
    reps = [space.decode(int(space.states[r])) for r in uniq.tolist()]
    sizes = counts.tolist()
    keep = list(range(len(reps)))
    if q.require_full_group:
        full = _full_group_filter(space)
        keep = [i for i in keep if full(reps[i])]
    root_to_orbit = {int(uniq[i]): pos for pos, i in enumerate(keep)}
    report = OrbitReport(q, len(keep), [sizes[i] for i in keep], [reps[i] for i in keep],
                         space=space if keep_space else None,
                         roots=roots if keep_space else None,
                         root_to_orbit=root_to_orbit)
    if with_invariants:
        from .fpgroup import finite_quotient, lifting_invariant

        Q = finite_quotient(q.equipment)
        report.lifting_invariants = [lifting_invariant(q.equipment, t, Q).value
                                     for t in report.representatives]
    return report


def count_components(E: EquippedGroup, type_vector: Sequence[int], genus: int = 0,
                     zeta: bool = False, **kw) -> int:
    """Number of Hurwitz-space components: orbits with boundary e and G_t = G."""
    q = OrbitQuery(E, tuple(type_vector), genus, boundary=E.group.identity,
                   require_full_group=True, zeta=zeta, **kw)
    return orbit_decompose(q, keep_space=False).orbit_count


# -- pairwise comparison --------------------------------------------------------------

@dataclass(frozen=True)
class OrbitComparison:
    equal: bool
    reason: str   # "path", "invariant:<name>", "exhausted"
    explored: int


def compare_orbits(t1: CoveringTuple, t2: CoveringTuple, budget: int = 10**5,
                   zeta: bool = False, lifting=None) -> OrbitComparison:
    """Bidirectional search for a move path from t1 to t2.

    Differences in type, genus, boundary, generated subgroup or (if
    ``lifting`` is a callable) the lifting invariant certify inequality
    directly.  Otherwise the two frontiers grow alternately; if either side
    exhausts its orbit the answer is certified, and running past ``budget``
    visited states raises ``Inconclusive``.
    """
    if t1.equipment is not t2.equipment:
        raise TupleError("tuples belong to different equipments")
    if t1 == t2:
        return OrbitComparison(True, "path", 0)
    checks = [("type", tuple_type), ("genus", lambda t: t.genus), ("boundary", boundary)]
    for name, fn in checks:
        if fn(t1) != fn(t2):
            return OrbitComparison(False, f"invariant:{name}", 0)
    if generated_subgroup_of(t1) != generated_subgroup_of(t2):
        return OrbitComparison(False, "invariant:subgroup", 0)
    if lifting is not None and lifting(t1) != lifting(t2):
        return OrbitComparison(False, "invariant:lifting", 0)

    seen = [{t1}, {t2}]
    fronts = [deque([t1]), deque([t2])]
    side = 0
    while True:
        if not fronts[side]:
            return OrbitComparison(False, "exhausted", len(seen[0]) + len(seen[1]))
        nxt = deque()
        for s in fronts[side]:
            for _, nb in neighbors(s, zeta):
                if nb in seen[1 - side]:
                    return OrbitComparison(True, "path", len(seen[0]) + len(seen[1]))
                if nb not in seen[side]:
                    seen[side].add(nb)
                    nxt.append(nb)
            if len(seen[0]) + len(seen[1]) > budget:
                raise Inconclusive(f"no verdict within {budget} states")
        fronts[side] = nxt
        # grow the smaller frontier next
        side = 0 if len(fronts[0]) <= len(fronts[1]) else 1


def orbit_equal(t1: CoveringTuple, t2: CoveringTuple, budget: int = 10**5, zeta: bool = False,
                lifting=None) -> bool:
    return compare_orbits(t1, t2, budget, zeta, lifting).equal


# -- stabilization scans ------------------------------------------------------------

@dataclass
class ScanRow:
    type_vector: tuple[int, ...]
    genus: int
    components: int
    seconds: float
    states: int


@dataclass
class ScanTable:
    rows: list[ScanRow]
    truncated: bool = False
    error: str | None = None

    @property
    def counts(self) -> list[int]:
        return [r.components for r in self.rows]

    @property
    def onset(self) -> int | None:
        """Index of the first row from which the count no longer changes."""
        if not self.rows:
            return None
        last = self.rows[-1].components
        i = len(self.rows) - 1
        while i > 0 and self.rows[i - 1].components == last:
            i -= 1
        return i

    def stable_value(self) -> int | None:
        return self.rows[-1].components if self.rows else None

    def to_csv(self) -> str:
        buf = io.StringIO()
        if not self.rows:
            return ""
        m = len(self.rows[0].type_vector)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"tau_{i + 1}" for i in range(m)] + ["genus", "components", "wall_time"])
        for r in self.rows:
            w.writerow(list(r.type_vector) + [r.genus, r.components, f"{r.seconds:.3f}"])
        return buf.getvalue()


def stabilization_scan(E: EquippedGroup, tau_start: Sequence[int], tau_step: Sequence[int],
                       count: int, genus: int = 0, zeta: bool = False, **kw) -> ScanTable:
    rows = []
    for i in range(count):
        tau = tuple(s + i * d for s, d in zip(tau_start, tau_step))
        t0 = time.perf_counter()
        q = OrbitQuery(E, tau, genus, boundary=E.group.identity, require_full_group=True,
                       zeta=zeta, **kw)
        try:
            rep = orbit_decompose(q, keep_space=False)
        except BoundExceeded as exc:
            return ScanTable(rows, truncated=True, error=str(exc))
        rows.append(ScanRow(tau, genus, rep.orbit_count, time.perf_counter() - t0, rep.total))
    return ScanTable(rows)


def type_vectors(m: int, n: int) -> Iterable[tuple[int, ...]]:
    """All type vectors of length m summing to n."""
    for cut in itertools.combinations(range(n + m - 1), m - 1):
        prev = -1
        out = []
        for c in cut + (n + m - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)
