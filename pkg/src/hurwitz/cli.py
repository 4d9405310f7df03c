"""Command-line front end.

    hurwitz --config exp.json [--task NAME] [--out DIR] [--threads N] [--seed N]

The config is one JSON object; see README.md for the schema.  Every task
writes ``result.json`` into the output directory (and prints it); ``scan``
also writes ``scan.csv`` and ``cgraph`` writes ``cgraph.dot``.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 internal
consistency failure.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass, field
from typing import Any

from . import _accel
from .equipped import EquipmentError, EquippedGroup, build_equipment, c_graph
from .perm import GroupTooLarge, PermError, PermGroup, closure, parse_perm, symmetric_group
from .tuples import NotReducible, TupleError, format_tuple, parse_tuple

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INTERNAL = 0, 2, 3, 4

TASKS = ("classes", "cgraph", "count", "scan", "ambiguity", "lift-invariant", "normalize",
         "oracle-check", "verify")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    group: dict
    classes: list[str]
    task: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(data) - {"group", "classes", "task", "params"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        task = data.get("task", "")
        group = data.get("group")
        if task != "verify" and group is None:
            raise ConfigError("config needs a 'group'")
        if isinstance(group, str):
            group = _parse_group_string(group)
        return cls(group or {}, list(data.get("classes", [])), task, dict(data.get("params", {})))

    def to_dict(self) -> dict:
        return asdict(self)

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _parse_group_string(text: str) -> dict:
    # "symmetric: 4"
    key, _, val = text.partition(":")
    if key.strip() != "symmetric":
        raise ConfigError(f"cannot parse group {text!r}")
    try:
        return {"symmetric": int(val)}
    except ValueError:
        raise ConfigError(f"cannot parse group {text!r}") from None


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return ExperimentConfig.from_dict(data)


def build_group(spec: dict) -> PermGroup:
    if "symmetric" in spec:
        d = int(spec["symmetric"])
        if d < 1:
            raise ConfigError("symmetric degree must be positive")
        return symmetric_group(d)
    if "generators" in spec:
        d = int(spec.get("degree", 0))
        if d < 1:
            raise ConfigError("explicit generators need a positive 'degree'")
        gens = [parse_perm(g, d) for g in spec["generators"]]
        return closure(gens, degree=d)
    raise ConfigError("group must give 'symmetric' or 'generators'")


def build_config_equipment(cfg: ExperimentConfig) -> EquippedGroup:
    G = build_group(cfg.group)
    if not cfg.classes:
        raise ConfigError("config needs at least one class representative")
    reps = [parse_perm(r, G.degree) for r in cfg.classes]
    return build_equipment(G, reps)


def _boundary(E: EquippedGroup, params: dict, default="e"):
    b = params.get("boundary", default)
    if b is None or b == "any":
        return None
    return parse_perm(b, E.degree)


def _query(E: EquippedGroup, params: dict, **defaults):
    from .orbits import DEFAULT_STATE_BOUND, DEFAULT_WORK_BOUND, OrbitQuery

    if "type" not in params:
        raise ConfigError("task needs params.type")
    return OrbitQuery(
        E, tuple(params["type"]), int(params.get("genus", 0)),
        boundary=_boundary(E, params, defaults.get("boundary", "e")),
        require_full_group=bool(params.get("require_full_group", defaults.get("full", True))),
        zeta=bool(params.get("zeta", False)),
        conjugation_quotient=bool(params.get("conjugation_quotient", False)),
        work_bound=int(params.get("work_bound", DEFAULT_WORK_BOUND)),
        state_bound=int(params.get("state_bound", DEFAULT_STATE_BOUND)))


# -- tasks --------------------------------------------------------------------------

def task_classes(cfg, E, out_dir):
    from .orbits import orbit_decompose

    q = _query(E, cfg.params, boundary="any", full=False)
    rep = orbit_decompose(q, with_invariants=bool(cfg.params.get("lifting_invariants", False)),
                          keep_space=False)
    result = {
        "equipment": [{"representative": str(c[0]), "size": len(c), "order": c[0].order()}
                      for c in E.classes],
        "report": rep.to_dict(),
    }
    return result, {}


def task_cgraph(cfg, E, out_dir):
    g = c_graph(E)
    return {"vertices": len(g.vertices), "edges": len(g.edges), "components": len(g.components())}, \
        {"cgraph.dot": g.to_dot()}


def task_count(cfg, E, out_dir):
    from .orbits import orbit_decompose

    q = _query(E, cfg.params)
    rep = orbit_decompose(q, keep_space=False)
    res: dict[str, Any] = {"components": rep.orbit_count}
    if cfg.params.get("details"):
        res["report"] = rep.to_dict()
    return res, {}


def task_scan(cfg, E, out_dir):
    from .orbits import stabilization_scan

    p = cfg.params
    for key in ("tau_start", "tau_step", "count"):
        if key not in p:
            raise ConfigError(f"scan needs params.{key}")
    tab = stabilization_scan(E, p["tau_start"], p["tau_step"], int(p["count"]),
                             genus=int(p.get("genus", 0)), zeta=bool(p.get("zeta", False)))
    onset = tab.onset
    res = {"types": [list(r.type_vector) for r in tab.rows], "counts": tab.counts,
           "onset": list(tab.rows[onset].type_vector) if onset is not None else None,
           "truncated": tab.truncated}
    if tab.truncated:
        res["error"] = tab.error
    return res, {"scan.csv": tab.to_csv()}


def task_ambiguity(cfg, E, out_dir):
    from .fpgroup import ambiguity_index, c_group_presentation, finite_quotient

    bound = int(cfg.params.get("coset_bound", 10**7))
    Q = finite_quotient(E, bound)
    a = ambiguity_index(E, bound)
    res = {"ambiguity_index": a, "quotient_order": Q.order,
           "quotient_commutator_order": len(Q.commutator_subgroup()),
           "presentation_generators": Q.presentation.n_generators,
           "presentation_relators": len(Q.presentation.relators)}
    files = {"quotient.json": Q.to_json() + "\n"}
    if cfg.params.get("presentation"):
        files["presentation.txt"] = str(c_group_presentation(E)) + "\n"
    return res, files


def _tuple_param(E, params, key="tuple"):
    if key not in params:
        raise ConfigError(f"task needs params.{key}")
    return parse_tuple(E, params[key])


def task_lift_invariant(cfg, E, out_dir):
    from .fpgroup import finite_quotient, lifting_invariant

    t = _tuple_param(E, cfg.params)
    Q = finite_quotient(E, int(cfg.params.get("coset_bound", 10**7)))
    inv = lifting_invariant(E, t, Q)
    return {"tuple": format_tuple(t), "value": inv.value, "identity": inv.is_identity(),
            "quotient_order": Q.order}, {}


def task_normalize(cfg, E, out_dir):
    from .tuples import normalize_handles

    t = _tuple_param(E, cfg.params)
    nf = normalize_handles(t, budget=int(cfg.params.get("budget", 10**6)),
                           zeta=bool(cfg.params.get("zeta", False)))
    return {"input": format_tuple(t), "tuple": format_tuple(nf.tuple),
            "moves": [str(m) for m in nf.moves]}, {}


def task_oracle_check(cfg, E, out_dir):
    from .oracle import class_count
    from .orbits import OrbitQuery, orbit_decompose, type_vectors

    p = cfg.params
    n, genus = int(p.get("n", 2)), int(p.get("genus", 0))
    bound = int(p.get("bound", 10**6))
    rows = []
    for tv in type_vectors(E.m, n):
        for b in (None, E.group.identity):
            for full in (False, True):
                o = class_count(E, n, genus, boundary=b, require_full_group=full, type_vector=tv,
                                bound=bound)
                r = orbit_decompose(OrbitQuery(E, tv, genus, boundary=b, require_full_group=full),
                                   keep_space=False)
                reps = [(t.branch, t.handles) for t in r.representatives]
                rows.append({"type": list(tv), "boundary": None if b is None else str(b),
                             "require_full_group": full, "oracle": o.count, "engine": r.orbit_count,
                             "agree": (o.count, o.reduced_sizes, o.representatives)
                             == (r.orbit_count, r.orbit_sizes, reps)})
    agree = all(r["agree"] for r in rows)
    res = {"n": n, "genus": genus, "agree": agree, "instances": rows}
    if not agree:
        raise InternalFailure("oracle and engine disagree", res)
    return res, {}


def task_verify(cfg, out_dir, seed, threads):
    from .acceptance import Options, run_all

    p = cfg.params
    opts = Options(seed=seed, skip_oracle=bool(p.get("skip_oracle", False)), threads=threads)
    only = set(p["criteria"]) if p.get("criteria") else None
    results = run_all(opts, only=only, echo=lambda line: print(line, file=sys.stderr))
    # timings vary between runs, so they stay out of the JSON
    res = {"all_passed": all(r.passed for r in results),
           "criteria": [{k: v for k, v in r.to_dict().items() if k != "seconds"} for r in results]}
    return res, {}


class InternalFailure(RuntimeError):
    def __init__(self, msg, payload=None):
        super().__init__(msg)
        self.payload = payload


_TASK_FUNCS = {
    "classes": task_classes, "cgraph": task_cgraph, "count": task_count, "scan": task_scan,
    "ambiguity": task_ambiguity, "lift-invariant": task_lift_invariant, "normalize": task_normalize,
    "oracle-check": task_oracle_check,
}


def _budget_errors():
    from .fpgroup import CosetEnumerationError
    from .oracle import OracleBoundExceeded
    from .orbits import BoundExceeded, Inconclusive

    return (BoundExceeded, Inconclusive, CosetEnumerationError, OracleBoundExceeded, NotReducible,
            GroupTooLarge)


def _invalid_errors():
    from .fpgroup import PresentationError
    from .orbits import QueryError

    return (ConfigError, PermError, EquipmentError, TupleError, QueryError, PresentationError)


def _write(out_dir: str, name: str, text: str):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w") as fh:
        fh.write(text)


def run(cfg: ExperimentConfig, out_dir: str = ".", seed: int = 0, threads: int | None = None) -> int:
    if cfg.task not in TASKS:
        print(f"error: unknown task {cfg.task!r}; expected one of {', '.join(TASKS)}", file=sys.stderr)
        return EXIT_INVALID
    random.seed(seed)
    _accel.set_threads(threads)
    try:
        if cfg.task == "verify":
            result, files = task_verify(cfg, out_dir, seed, threads)
        else:
            E = build_config_equipment(cfg)
            result, files = _TASK_FUNCS[cfg.task](cfg, E, out_dir)
    except _invalid_errors() as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GroupTooLarge as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except _budget_errors() as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalFailure as exc:
        if exc.payload is not None:
            _write(out_dir, "result.json", json.dumps(exc.payload, sort_keys=True, indent=2) + "\n")
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ArithmeticError, AssertionError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    _write(out_dir, "result.json", text)
    for name, content in files.items():
        _write(out_dir, name, content)
    sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="hurwitz", description="Covering-tuple orbits and C-group invariants.")
    ap.add_argument("--config", help="JSON experiment config")
    ap.add_argument("--task", choices=TASKS, help="override the config's task")
    ap.add_argument("--threads", type=int, default=None, help="worker threads for the orbit kernels")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    args = ap.parse_args(argv)
    try:
        if args.config:
            with open(args.config) as fh:
                cfg = parse_config(fh.read())
        elif args.task == "verify":
            cfg = ExperimentConfig({}, [], "verify")
        else:
            raise ConfigError("--config is required for this task")
        if args.task:
            cfg.task = args.task
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(cfg, args.out, args.seed, args.threads)


if __name__ == "__main__":
    sys.exit(main())
