"""Command-line runner: one verification task per call, or a suite of them.

Every run prints a JSON report (``schema: 1``). Exit codes: 0 pass,
1 fail, 2 usage or runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


@dataclass
class Params:
    n: int = 3
    degree: int = 4
    order: int = 8
    q: str = "1/3"
    terms: int = 12
    k: int = 1
    kp: int = 1

    @property
    def q_probe(self) -> Fraction:
        return Fraction(self.q)


@dataclass
class TaskReport:
    task: str
    params: Dict[str, object]
    status: str
    counterexample: Optional[object] = None
    elapsed_ms: int = 0
    summary: Dict[str, object] = field(default_factory=dict)
    details: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> Dict[str, object]:
        return {"schema": SCHEMA, **asdict(self)}


Outcome = Tuple[bool, Optional[object], Dict[str, object]]


def _merge(*reports) -> Outcome:
    """Combine module reports: all must pass; the first counterexample wins."""
    details, cex = {}, None
    for r in reports:
        details[r.name] = {"passed": r.passed, **{k: v for k, v in r.details.items()}}
        if not r.passed and cex is None:
            cex = {"check": r.name, "at": r.counterexample}
    return all(r.passed for r in reports), cex, details


def _ybe(p: Params) -> Outcome:
    from . import rmat
    return _merge(rmat.check_ybe(p.n))


def _unitarity(p: Params) -> Outcome:
    from . import rmat
    return _merge(rmat.check_unitarity(p.n), rmat.limits_R(p.n)[2])


def _rll(p: Params) -> Outcome:
    from . import rll
    return _merge(rll.check_rll(p.n), rll.check_rll(p.n, mixed=True))


def _gauss(p: Params) -> Outcome:
    from . import rll
    return _merge(rll.check_gauss(p.n, +1), rll.check_gauss(p.n, -1))


def _drinfeld(p: Params) -> Outcome:
    from . import rll
    return _merge(rll.check_drinfeld(p.n))


def _reflection(p: Params) -> Outcome:
    from . import rll
    return _merge(rll.check_reflection(p.n))


def _spinor(p: Params) -> Outcome:
    from . import fermion
    return _merge(fermion.check_clifford_relations(p.n, p.degree),
                  fermion.check_affine_gl_relations(p.n, p.degree))


def _casimir(p: Params) -> Outcome:
    from . import fermion
    return _merge(fermion.check_casimir_series(p.n, p.degree))


def _boson(p: Params) -> Outcome:
    from . import boson
    return _merge(boson.check_boson_clifford(p.n, p.degree), boson.check_jtp(p.order))


def _correspondence(p: Params) -> Outcome:
    from . import boson
    return _merge(boson.check_correspondence(p.n, p.degree))


def _structure(p: Params) -> Outcome:
    from . import qeval
    f, F, rep = qeval.structure_functions(p.n, p.order)
    ok, cex, det = _merge(rep)
    det[rep.name]["F_bar"] = rep.details["F_bar"].dump()
    det[rep.name]["f"] = f.dump()
    det[rep.name]["F"] = F.dump()
    return ok, cex, det


def _exchange(p: Params) -> Outcome:
    from . import qeval
    reps = [qeval.check_exchange(p.n, p.k, p.kp, j, p.order, p.q_probe, p.terms) for j in range(p.n)]
    ok, cex, det = _merge(*reps)
    res, mono = qeval.exchange_convergence(p.n, p.k, p.kp, 0, p.q_probe)
    det["convergence_8_12_16"] = {"residuals": [float(x) for x in res], "monotone": mono}
    worst = max(pt["residual"] / pt["bound"] for r in reps for pt in r.details["points"])
    det["summary"] = {"tolerance": "2 sum|x| p^terms over first omitted factors",
                      "worst_residual_over_bound": worst,
                      "worst_residual_over_p_terms": max(pt["residual_over_p_terms"]
                                                         for r in reps for pt in r.details["points"])}
    return ok and mono, cex or (None if mono else {"check": "convergence"}), det


def _residue(p: Params) -> Outcome:
    from . import qeval
    return _merge(*[qeval.residue_check(p.n, p.k, p.order, j) for j in range(p.n)])


def _characters(p: Params) -> Outcome:
    from . import boson
    return _merge(boson.check_characters(p.n, p.degree))


TASKS: Dict[str, Callable[[Params], Outcome]] = {
    "verify-ybe": _ybe,
    "verify-unitarity": _unitarity,
    "verify-rll": _rll,
    "verify-gauss": _gauss,
    "verify-drinfeld": _drinfeld,
    "verify-reflection": _reflection,
    "verify-spinor": _spinor,
    "verify-casimir": _casimir,
    "verify-boson": _boson,
    "verify-correspondence": _correspondence,
    "verify-structure": _structure,
    "verify-exchange": _exchange,
    "verify-residue": _residue,
    "characters": _characters,
}

# desk-scale parameters of the default suite (task, overrides)
DEFAULT_SUITE: List[Tuple[str, Dict[str, object]]] = [
    ("verify-ybe", {}),
    ("verify-unitarity", {}),
    ("verify-rll", {}),
    ("verify-gauss", {}),
    ("verify-drinfeld", {}),
    ("verify-reflection", {}),
    ("verify-spinor", {}),
    ("verify-casimir", {"degree": 2}),
    ("verify-boson", {"degree": 3}),
    ("verify-correspondence", {}),
    ("verify-structure", {"order": 12}),
    ("verify-exchange", {}),
    ("verify-exchange", {"kp": 2}),
    ("verify-residue", {"order": 10}),
    ("characters", {}),
]


def run(task: str, params: Optional[Params] = None, dump: bool = False) -> TaskReport:
    if task not in TASKS:
        raise KeyError(f"unknown task {task!r}")
    params = params or Params()
    start = time.perf_counter()
    try:
        ok, cex, det = TASKS[task](params)
        status = "pass" if ok else "fail"
        if not ok and cex is None:
            cex = {"check": task}
    except Exception as exc:  # a crashing check is reported, not raised
        status, cex, det = "error", {"error": f"{type(exc).__name__}: {exc}"}, {}
    elapsed = int((time.perf_counter() - start) * 1000)
    summary = det.pop("summary", {})
    return TaskReport(task, asdict(params), status, _jsonable(cex), elapsed,
                      _jsonable(summary), _jsonable(det) if dump else {})


def _jsonable(x):
    return json.loads(json.dumps(x, default=str, sort_keys=True))


def _run_entry(entry) -> Dict[str, object]:
    task, overrides, dump = entry
    return run(task, Params(**overrides), dump).to_json()


def suite(config: Optional[List[Tuple[str, Dict[str, object]]]] = None, dump: bool = False,
          workers: Optional[int] = None) -> Dict[str, object]:
    """Run tasks concurrently (at most AFQKIT_THREADS workers) and aggregate."""
    entries = DEFAULT_SUITE if config is None else config
    for task, overrides in entries:
        if task not in TASKS:
            raise KeyError(f"unknown task {task!r}")
        Params(**overrides)
    if workers is None:
        workers = int(os.environ.get("AFQKIT_THREADS", os.cpu_count() or 1))
    workers = max(1, min(workers, len(entries) or 1))
    jobs = [(t, dict(o), dump) for t, o in entries]
    if workers == 1 or len(jobs) <= 1:
        reports = [_run_entry(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_entry, jobs))
    statuses = {r["status"] for r in reports}
    status = "error" if "error" in statuses else "fail" if "fail" in statuses else "pass"
    return {"schema": SCHEMA, "status": status, "reports": reports}


def load_config(path: str) -> List[Tuple[str, Dict[str, object]]]:
    """JSON: {"tasks": [{"task": name, "params": {...}}, ...]}."""
    with open(path) as fh:
        data = json.load(fh)
    return [(t["task"], dict(t.get("params", {}))) for t in data.get("tasks", [])]


def _exit_code(status: str) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(status, EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="afqkit", description=__doc__.splitlines()[0])
    ap.add_argument("task", help="one of: " + ", ".join(TASKS) + ", or 'suite'")
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--degree", type=int, default=4)
    ap.add_argument("--order", type=int, default=8)
    ap.add_argument("--q", default="1/3")
    ap.add_argument("--terms", type=int, default=12)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--kp", type=int, default=1)
    ap.add_argument("--config", help="suite configuration (JSON)")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--dump", action="store_true", help="include full check details")
    return ap


def _emit(doc, out: Optional[str]):
    text = json.dumps(doc, indent=1, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_ERROR
    try:
        if args.task == "suite":
            doc = suite(load_config(args.config) if args.config else None, args.dump)
            _emit(doc, args.out)
            return _exit_code(doc["status"])
        if args.task not in TASKS:
            ap.print_usage(sys.stderr)
            print(f"afqkit: unknown task {args.task!r}", file=sys.stderr)
            return EXIT_ERROR
        q = Fraction(args.q)
        if not 0 < q < 1 or args.n < 2 or args.terms < 1 or args.order < 0 or args.degree < 0:
            raise ValueError("parameters out of range")
    except (ValueError, KeyError, OSError, ZeroDivisionError) as exc:
        print(f"afqkit: {exc}", file=sys.stderr)
        return EXIT_ERROR
    params = Params(args.n, args.degree, args.order, args.q, args.terms, args.k, args.kp)
    rep = run(args.task, params, args.dump)
    _emit(rep.to_json(), args.out)
    return _exit_code(rep.status)
