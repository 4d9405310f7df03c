"""Acceptance criteria as runnable checks, shared by ``hurwitz verify`` and the test suite."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .equipped import EquippedGroup, equipment_from_reps
from .fpgroup import ambiguity_index, finite_quotient, lifting_invariant
from .orbits import OrbitQuery, count_components, orbit_decompose, orbit_equal, stabilization_scan, type_vectors
from .perm import closure, commutator, parse_perm, symmetric_group
from .tuples import (CoveringTuple, NotReducible, apply_move, apply_word, available_moves, boundary,
                     conjugate_tuple, generated_subgroup_of, make_tuple, normalize_handles, product,
                     tuple_type)


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        return f"[{status}] criterion {self.cid}: {self.name} ({self.seconds:.1f}s) {self.detail}"

    def to_dict(self) -> dict:
        return {"criterion": self.cid, "name": self.name, "passed": self.passed,
                "skipped": self.skipped, "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class Options:
    seed: int = 0
    skip_oracle: bool = False
    threads: int | None = None
    extra: dict = field(default_factory=dict)


# -- shared fixtures ----------------------------------------------------------------

def _p(text: str, d: int):
    return parse_perm(text, d)


def s3_transpositions() -> EquippedGroup:
    return equipment_from_reps(symmetric_group(3), ["(1 2)"])


def s3_mixed() -> EquippedGroup:
    return equipment_from_reps(symmetric_group(3), ["(1 2)", "(1 2 3)"])


def cyclic3() -> EquippedGroup:
    return equipment_from_reps(closure([_p("(1 2 3)", 3)]), ["(1 2 3)"])


def klein_four() -> EquippedGroup:
    V = closure([_p("(1 2)(3 4)", 4), _p("(1 3)(2 4)", 4)])
    return equipment_from_reps(V, ["(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"])


def s4_transpositions() -> EquippedGroup:
    return equipment_from_reps(symmetric_group(4), ["(1 2)"])


def s4_mixed() -> EquippedGroup:
    return equipment_from_reps(symmetric_group(4), ["(1 2)", "(1 2 3)"])


def a4_three_cycles() -> EquippedGroup:
    """A4 with the class of (1 2 3): the smallest case found with ambiguity index 2."""
    G = closure([_p("(1 2 3)", 4), _p("(2 3 4)", 4)])
    return equipment_from_reps(G, ["(1 2 3)"])


def wajnryb() -> EquippedGroup:
    return equipment_from_reps(symmetric_group(8),
                               ["(1 2)(3 4 5)", "(1 2 3)(4 5 6 7)", "(1 2 3 4 5 6 7)"])


def random_tuple(E: EquippedGroup, n: int, p: int, rng: random.Random) -> CoveringTuple:
    G = sorted(E.group.elements)
    return make_tuple(E, [rng.choice(E.O) for _ in range(n)],
                      [(rng.choice(G), rng.choice(G)) for _ in range(p)])


def random_constrained(E: EquippedGroup, n: int, p: int, rng: random.Random,
                       boundary_e: bool = True, full: bool = True, tries: int = 10**5) -> CoveringTuple:
    """Random tuple with boundary e and/or G_t = G, by completing the last letter."""
    G = sorted(E.group.elements)
    e = E.group.identity
    for _ in range(tries):
        br = [rng.choice(E.O) for _ in range(n - 1 if boundary_e else n)]
        hs = [(rng.choice(G), rng.choice(G)) for _ in range(p)]
        if boundary_e:
            pre, U = e, e
            for g in br:
                pre = pre * g
            for a, b in hs:
                U = U * commutator(a, b)
            last = ~pre * ~U
            if last not in E:
                continue
            br.append(last)
        t = make_tuple(E, br, hs)
        if not full or generated_subgroup_of(t).order == E.group.order:
            return t
    raise RuntimeError("could not sample a constrained tuple")


def _timed(cid: int, name: str, fn: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported as content
        ok, detail = False, f"error: {type(exc).__name__}: {exc}"
    return CriterionResult(cid, name, ok, detail, time.perf_counter() - t0)


# -- criteria -----------------------------------------------------------------------

CLEBSCH_HURWITZ = [(3, 4), (3, 6), (4, 6), (4, 8), (5, 8)]


def criterion_1(opts: Options) -> CriterionResult:
    def run():
        notes = []
        ok = True
        for d, n in CLEBSCH_HURWITZ + [(3, 3), (3, 5), (4, 5), (5, 7)]:
            E = equipment_from_reps(symmetric_group(d), ["(1 2)"])
            t0 = time.perf_counter()
            c = count_components(E, (n,))
            dt = time.perf_counter() - t0
            want = 0 if n % 2 else 1
            good = c == want and dt < 60
            ok &= good
            notes.append(f"S{d},n={n}:{c}")
        return ok, " ".join(notes)
    return _timed(1, "Clebsch-Hurwitz connectivity", run)


def criterion_2(opts: Options) -> CriterionResult:
    def run():
        E = wajnryb()
        q = OrbitQuery(E, (1, 1, 1), 0, boundary=E.group.identity, require_full_group=True)
        t0 = time.perf_counter()
        rep = orbit_decompose(q, keep_space=False, threads=opts.threads)
        dt = time.perf_counter() - t0
        return rep.orbit_count >= 2 and dt < 600, \
            f"components={rep.orbit_count} tuples={rep.total} time={dt:.0f}s"
    return _timed(2, "Wajnryb example has at least two components", run)


SCANS = {
    "S3 transp": (s3_transpositions, (2,), (2,), 5),
    "S3 transp+3cycles": (s3_mixed, (2, 1), (2, 1), 3),
}


def criterion_3(opts: Options) -> CriterionResult:
    def run():
        notes = []
        ok = True
        for name, (mk, start, step, count) in SCANS.items():
            E = mk()
            a = ambiguity_index(E)
            stable = []
            for p in (0, 1):
                tab = stabilization_scan(E, start, step, count, genus=p)
                if tab.truncated:
                    return False, f"{name} p={p} truncated: {tab.error}"
                onset = tab.onset
                # need at least two rows at and beyond the onset to call it stable
                ok &= onset is not None and onset <= count - 2
                stable.append(tab.stable_value())
                notes.append(f"{name} p={p} counts={tab.counts} onset={tab.rows[onset].type_vector}")
            ok &= stable[0] == stable[1] == a
            notes.append(f"a={a}")
        return ok, "; ".join(notes)
    return _timed(3, "stabilized counts equal the ambiguity index at genus 0 and 1", run)


# name: (builder, type vectors of increasing size, expected index)
AMBIGUITY_CASES = {
    "Z3": (cyclic3, [(3,), (6,), (9,)], 1),
    "Klein four": (klein_four, [(2, 2, 2), (3, 3, 3), (4, 4, 4)], 1),
    "S3 transp": (s3_transpositions, [(4,), (6,), (8,)], 1),
    "S4 transp": (s4_transpositions, [(6,), (8,)], 1),
    # extra case beyond the required four: an index above 1
    "A4 3-cycles": (a4_three_cycles, [(6,), (9,)], 2),
}


def criterion_4(opts: Options) -> CriterionResult:
    def run():
        notes = []
        ok = True
        for name, (mk, types, expected) in AMBIGUITY_CASES.items():
            E = mk()
            a = ambiguity_index(E)
            counts = [count_components(E, tv) for tv in types]
            good = a == expected and len(set(counts)) == 1 and counts[-1] == a
            ok &= good
            notes.append(f"{name}: a={a} counts={counts}")
        return ok, "; ".join(notes)
    return _timed(4, "ambiguity index agrees with stabilized genus-0 counts", run)


def oracle_grid():
    """Instances of the oracle comparison: (equipment, n, p) with word space at most 1e6."""
    from .oracle import word_space_size

    for mk in (s3_transpositions, s3_mixed):
        E = mk()
        for p in (0, 1):
            for n in range(7):
                if word_space_size(E, n, p) <= 10**6:
                    yield E, n, p


def _constraint_sets(E: EquippedGroup):
    for b in (None, E.group.identity):
        for full in (False, True):
            yield b, full


def criterion_5(opts: Options) -> CriterionResult:
    if opts.skip_oracle:
        return CriterionResult(5, "oracle equivalence", True, "oracle disabled", 0.0, skipped=True)

    def run():
        from .oracle import class_count

        checked = bad = 0
        for E, n, p in oracle_grid():
            for tv in type_vectors(E.m, n):
                for b, full in _constraint_sets(E):
                    o = class_count(E, n, p, boundary=b, require_full_group=full, type_vector=tv)
                    r = orbit_decompose(OrbitQuery(E, tv, p, boundary=b, require_full_group=full))
                    reps = [(t.branch, t.handles) for t in r.representatives]
                    checked += 1
                    if (o.count, o.reduced_sizes, o.representatives) != \
                            (r.orbit_count, r.orbit_sizes, reps):
                        bad += 1
        return bad == 0, f"{checked} instances, {bad} mismatches"
    return _timed(5, "oracle class counts equal engine orbit counts", run)


def _move_instances(opts: Options):
    return [s3_transpositions(), s3_mixed(), s4_transpositions(), s4_mixed()]


def criterion_6(opts: Options, trials: int = 10**5) -> CriterionResult:
    def run():
        rng = random.Random(opts.seed)
        eqs = _move_instances(opts)
        quotients = {id(E): finite_quotient(E) for E in eqs}
        sub_cache: dict = {}

        def sub(t):
            key = frozenset(t.branch) | frozenset(x for h in t.handles for x in h)
            if key not in sub_cache:
                sub_cache[key] = generated_subgroup_of(t)
            return sub_cache[key]

        violations = 0
        done = 0
        while done < trials:
            E = rng.choice(eqs)
            t = random_tuple(E, rng.randint(2, 6), rng.randint(0, 2), rng)
            Q = quotients[id(E)]
            inv0 = (boundary(t), tuple_type(t), t.genus, lifting_invariant(E, t, Q).value)
            sub0 = sub(t)
            for _ in range(20):
                moves = available_moves(t, zeta=True)
                mv = rng.choice(moves)
                s = apply_move(t, mv)
                done += 1
                if apply_move(s, mv.inverse()) != t:
                    violations += 1
                inv1 = (boundary(s), tuple_type(s), s.genus, lifting_invariant(E, s, Q).value)
                if inv1 != inv0 or sub(s) != sub0:
                    violations += 1
                t = s
        return violations == 0, f"{done} moves, {violations} violations"
    return _timed(6, "moves preserve invariants and invert", run)


def criterion_7(opts: Options) -> CriterionResult:
    def run():
        checked = bad = 0
        for E, n, p in oracle_grid():
            for tv in type_vectors(E.m, n):
                for b, full in _constraint_sets(E):
                    r0 = orbit_decompose(OrbitQuery(E, tv, p, boundary=b, require_full_group=full))
                    r1 = orbit_decompose(OrbitQuery(E, tv, p, boundary=b, require_full_group=full,
                                                    zeta=True))
                    checked += 1
                    if r0.to_dict() | {"zeta": None} != r1.to_dict() | {"zeta": None}:
                        bad += 1
        return bad == 0, f"{checked} instances, {bad} differences"
    return _timed(7, "zeta-moves do not change orbit decompositions", run)


def criterion_8(opts: Options, instances: int = 100) -> CriterionResult:
    def run():
        rng = random.Random(opts.seed + 8)
        E = s3_transpositions()
        reports = {}
        ok_count = 0
        for i in range(instances):
            p = 1 + i % 2
            t = random_constrained(E, 8, p, rng)
            try:
                nf = normalize_handles(t, budget=10**6)
            except NotReducible:
                continue
            if p not in reports:
                reports[p] = orbit_decompose(OrbitQuery(E, (8,), p, boundary=E.group.identity,
                                                        require_full_group=True))
            rep = reports[p]
            same = apply_word(t, nf.moves) == nf.tuple and \
                rep.orbit_of(t) == rep.orbit_of(nf.tuple) is not None and \
                all(a.is_identity() and b.is_identity() for a, b in nf.tuple.handles)
            ok_count += same
        return ok_count == instances, f"{ok_count}/{instances} trivialized and orbit-equal"
    return _timed(8, "handle trivialization at tau=8 > n1*p1", run)


def _lhs_rhs_pairs(kind: str, rng: random.Random, E: EquippedGroup):
    if kind == "cl1":
        t1 = random_tuple(E, rng.randint(1, 3), 0, rng)
        t2 = random_tuple(E, rng.randint(1, 3), 0, rng)
        return product(t1, t2), product(t2, conjugate_tuple(t1, boundary(t2)))
    if kind == "simple4":
        t1 = random_constrained(E, rng.choice([2, 4]), 0, rng, boundary_e=True, full=False)
        t2 = random_tuple(E, rng.randint(1, 3), 0, rng)
        return product(t1, t2), product(t2, t1)
    if kind == "simpl":
        t = random_constrained(E, rng.choice([4, 5, 6]), 0, rng)
        h = rng.choice(sorted(E.group.elements))
        return t, conjugate_tuple(t, h)
    # fried: x_g1^2 s ~ x_g2^2 s for transpositions g1, g2 and G_s = S3
    T = [g for g in E.O if g.order() == 2]
    s = random_constrained(E, rng.randint(2, 4), 0, rng, boundary_e=False)
    g1, g2 = rng.choice(T), rng.choice(T)
    return product(make_tuple(E, [g1, g1]), s), product(make_tuple(E, [g2, g2]), s)


SEMIGROUP_LAWS = ("cl1", "simple4", "simpl", "fried")


def criterion_9(opts: Options, instances: int = 1000) -> CriterionResult:
    def run():
        rng = random.Random(opts.seed + 9)
        E = s3_mixed()
        notes = []
        ok = True
        for law in SEMIGROUP_LAWS:
            bad = 0
            for _ in range(instances):
                x, y = _lhs_rhs_pairs(law, rng, E)
                if not orbit_equal(x, y, budget=10**6):
                    bad += 1
            ok &= bad == 0
            notes.append(f"{law}:{bad}/{instances}")
        return ok, "violations " + " ".join(notes)
    return _timed(9, "semigroup-over-group laws hold on orbits", run)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


def run_all(opts: Options | None = None, only=None, echo: Callable[[str], None] | None = None
            ) -> list[CriterionResult]:
    opts = opts or Options()
    out = []
    for cid, fn in CRITERIA.items():
        if only and cid not in only:
            continue
        res = fn(opts)
        if echo:
            echo(res.line())
        out.append(res)
    return out
