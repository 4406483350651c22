"""Batch experiments: instance generation, single solves, manifest sweeps.

Every run produces a :class:`RunRecord`. Records go to CSV files that carry
a one-line ``#`` version comment before the column header. A bench CSV is
keyed by ``(instance_id, algorithm, w)``; re-running a manifest skips keys
already present, so a finished bench is left byte-for-byte unchanged.
"""
from __future__ import annotations

import csv
import glob
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .domain import Instance, load_instance, make_instance, parse_map, save_instance
from .momstar import solve_momstar
from .namoa import solve_namoa
from .oracle import OracleOverflow, enumerate_pareto
from .policy import compute_policies
from .results import (
    INFEASIBLE, ORACLE_OVERFLOW, SOLVED, Budget, SearchStats, Solution, SolutionSet, format_w,
    parse_w, validate_solution_set,
)

ALGORITHMS = ("momstar", "namoa", "oracle")
CSV_VERSION = "# momapf-runs v1"
SUMMARY_VERSION = "# momapf-summary v1 (means and max over succeeded runs only)"
SUCCESS = (SOLVED, INFEASIBLE)
ERROR = "error"  # the harness could not run the job at all (unreadable instance, crash)


@dataclass
class RunRecord:
    instance_id: str
    algorithm: str
    w: str
    N: int | str
    M: int | str
    status: str
    n_solutions: int
    n_expanded: int
    n_generated: int
    policy_time_ms: float
    search_time_ms: float
    total_time_ms: float
    seed: int | str

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.instance_id, self.algorithm, self.w)


COLUMNS = [f.name for f in fields(RunRecord)]


# ------------------------------------------------------------------ gen

def cmd_gen(map_path, N: int, M: int, count: int, seed: int, out_dir) -> list[Path]:
    """Write ``count`` instances on one map; file names and contents depend only on the inputs."""
    grid = parse_map(Path(map_path).read_text())
    if N > len(grid.cells):
        raise ValueError(f"{N} agents do not fit on {len(grid.cells)} passable cells")
    if count < 0:
        raise ValueError("count must be non-negative")
    stem = Path(map_path).stem
    seeds = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint32) if count else []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for k, s in enumerate(seeds):
        iid = f"{stem}_N{N}_M{M}_{k:03d}"
        inst = make_instance(grid, N, M, int(s), instance_id=iid, map_ref=str(map_path))
        path = out / f"{iid}.json"
        save_instance(inst, path)
        written.append(path)
    return written


# ---------------------------------------------------------------- solve

def run_solver(instance: Instance, algorithm: str, w="1", time_limit: float | None = None,
               expand_limit: int | None = None, label_cap: int = 200_000
               ) -> tuple[SolutionSet, RunRecord]:
    """Solve once and summarize. The oracle ignores ``w`` and both budgets."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
    wf = parse_w(w) if algorithm != "oracle" else parse_w(1)
    t0 = time.perf_counter()
    if algorithm == "oracle":
        stats = SearchStats()
        try:
            front = enumerate_pareto(instance, label_cap=label_cap, stats=stats)
            status = SOLVED
        except OracleOverflow:
            front, status = None, ORACLE_OVERFLOW
        stats.search_time = time.perf_counter() - t0
        sols = [Solution(c, p) for c, p in front.items()] if front is not None else []
        sset = SolutionSet(sols, status, stats, algorithm="oracle", w=wf)
    else:
        budget = Budget(time_limit=time_limit, expand_limit=expand_limit)
        policies, ptime = compute_policies(instance)
        solve = solve_momstar if algorithm == "momstar" else solve_namoa
        sset = solve(instance, policies, w=wf, budget=budget)
        sset.stats.policy_time = ptime
    total = time.perf_counter() - t0
    status = sset.status
    if status == SOLVED and not sset.solutions:
        status = INFEASIBLE
    st = sset.stats
    rec = RunRecord(
        instance_id=instance.instance_id, algorithm=algorithm, w=format_w(wf),
        N=instance.N, M=instance.M, status=status, n_solutions=len(sset),
        n_expanded=st.expansions, n_generated=st.generated,
        policy_time_ms=_ms(st.policy_time), search_time_ms=_ms(st.search_time),
        total_time_ms=_ms(total), seed="" if instance.seed is None else instance.seed,
    )
    return sset, rec


def _ms(seconds: float) -> float:
    return round(max(seconds, 0.0) * 1000.0, 3)


def solution_to_dict(sset: SolutionSet, rec: RunRecord) -> dict:
    sols = sorted(sset.solutions, key=lambda s: tuple(s.cost))
    return {
        "instance_id": rec.instance_id,
        "algorithm": rec.algorithm,
        "w": rec.w,
        "status": rec.status,
        "solutions": [{"cost": list(s.cost), "paths": [list(p) for p in s.paths]} for s in sols],
        "stats": {
            "expansions": sset.stats.expansions,
            "generated": sset.stats.generated,
            "conflicts_found": sset.stats.conflicts_found,
            "policy_time_ms": rec.policy_time_ms,
            "search_time_ms": rec.search_time_ms,
            "total_time_ms": rec.total_time_ms,
        },
    }


def load_solution_file(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def check_solution_file(instance: Instance, doc: dict) -> list[str]:
    """Re-validate a solution file against its instance; empty list means sound."""
    if doc.get("instance_id") != instance.instance_id:
        return [f"instance_id {doc.get('instance_id')!r} != {instance.instance_id!r}"]
    sols = [Solution(tuple(s["cost"]), tuple(tuple(p) for p in s["paths"]))
            for s in doc.get("solutions", [])]
    errs = validate_solution_set(instance, sols)
    costs = [s.cost for s in sols]
    if costs != sorted(costs):
        errs.append("solutions are not in lexicographic cost order")
    return errs


def cmd_solve(instance_path, algorithm: str, w="1", time_limit: float | None = None,
              expand_limit: int | None = None, out_path=None, log_path=None) -> RunRecord:
    instance = load_instance(instance_path)
    sset, rec = run_solver(instance, algorithm, w, time_limit, expand_limit)
    doc = solution_to_dict(sset, rec)
    if out_path is not None:
        with open(out_path, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    if log_path is not None:
        append_records(log_path, [rec])
    return rec


# ---------------------------------------------------------------- CSV IO

def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3f}"
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    buf.write(CSV_VERSION + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(COLUMNS)
    for r in records:
        wr.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def append_records(path, records) -> None:
    path = Path(path)
    new = not path.exists() or path.stat().st_size == 0
    with open(path, "a", newline="") as fh:
        if new:
            fh.write(CSV_VERSION + "\n")
        wr = csv.writer(fh, lineterminator="\n")
        if new:
            wr.writerow(COLUMNS)
        for r in records:
            wr.writerow([_fmt(getattr(r, c)) for c in COLUMNS])


def read_records(path) -> list[RunRecord]:
    path = Path(path)
    if not path.exists():
        return []
    lines = [ln for ln in path.read_text().splitlines() if ln and not ln.startswith("#")]
    out = []
    for row in csv.DictReader(lines):
        out.append(_record_from_row(row))
    return out


def _record_from_row(row: dict) -> RunRecord:
    def num(x, kind):
        try:
            return kind(x)
        except (TypeError, ValueError):
            return x
    return RunRecord(
        instance_id=row["instance_id"], algorithm=row["algorithm"], w=row["w"],
        N=num(row["N"], int), M=num(row["M"], int), status=row["status"],
        n_solutions=int(row["n_solutions"]), n_expanded=int(row["n_expanded"]),
        n_generated=int(row["n_generated"]), policy_time_ms=float(row["policy_time_ms"]),
        search_time_ms=float(row["search_time_ms"]), total_time_ms=float(row["total_time_ms"]),
        seed=num(row["seed"], int),
    )


# ------------------------------------------------------------ aggregates

SUMMARY_COLUMNS = ["algorithm", "N", "M", "w", "runs", "succeeded", "success_rate",
                   "mean_pareto_size_succeeded", "max_pareto_size_succeeded",
                   "mean_expansions_succeeded"]


def aggregate(records) -> list[dict]:
    """One row per (algorithm, N, M, w) cell; sizes and expansions over succeeded runs only."""
    cells: dict[tuple, list[RunRecord]] = {}
    for r in records:
        cells.setdefault((r.algorithm, str(r.N), str(r.M), r.w), []).append(r)
    rows = []
    for key in sorted(cells, key=lambda k: (k[0], _sortable(k[1]), _sortable(k[2]), parse_w_safe(k[3]))):
        rs = cells[key]
        ok = [r for r in rs if r.status in SUCCESS]
        rows.append({
            "algorithm": key[0], "N": key[1], "M": key[2], "w": key[3],
            "runs": len(rs), "succeeded": len(ok),
            "success_rate": len(ok) / len(rs),
            "mean_pareto_size_succeeded": float(np.mean([r.n_solutions for r in ok])) if ok else None,
            "max_pareto_size_succeeded": max(r.n_solutions for r in ok) if ok else None,
            "mean_expansions_succeeded": float(np.mean([r.n_expanded for r in ok])) if ok else None,
        })
    return rows


def _sortable(x: str):
    return (0, int(x), "") if x.lstrip("-").isdigit() else (1, 0, x)


def parse_w_safe(w: str):
    try:
        return (0, parse_w(w))
    except (ValueError, ZeroDivisionError):
        return (1, w)


def summary_to_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(SUMMARY_VERSION + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(SUMMARY_COLUMNS)
    for row in rows:
        wr.writerow(["" if row[c] is None else (f"{row[c]:.6f}" if isinstance(row[c], float) else row[c])
                     for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def summary_path(out_csv) -> Path:
    p = Path(out_csv)
    return p.with_name(p.stem + ".summary.csv")


# ----------------------------------------------------------------- bench

@dataclass(frozen=True)
class Job:
    instance_path: str
    algorithm: str
    w: str
    time_limit: float | None
    expand_limit: int | None


def load_manifest(path) -> list[Job]:
    """Expand a JSON manifest into jobs, in manifest order.

    Shape: ``{"instances": [paths or globs], "configs": [{"algorithm", "w",
    "time_limit", "expand_limit"}]}``; every instance is run under every
    config. Relative paths resolve against the manifest's directory.
    """
    path = Path(path)
    doc = json.loads(path.read_text() or "{}")
    if not isinstance(doc, dict):
        raise ValueError("manifest must be a JSON object")
    base = path.parent
    instances = []
    for pat in doc.get("instances", []):
        full = pat if os.path.isabs(pat) else str(base / pat)
        hits = sorted(glob.glob(full)) if glob.has_magic(full) else [full]
        instances.extend(hits)
    jobs = []
    for inst in instances:
        for cfg in doc.get("configs", []):
            alg = cfg.get("algorithm")
            if alg not in ALGORITHMS:
                raise ValueError(f"manifest config has unknown algorithm {alg!r}")
            w = format_w(parse_w(cfg.get("w", "1"))) if alg != "oracle" else "1.0"
            jobs.append(Job(inst, alg, w, cfg.get("time_limit"), cfg.get("expand_limit")))
    return jobs


def run_job(job: Job) -> RunRecord:
    """Never raises: a job that cannot run becomes an ``error`` row."""
    try:
        instance = load_instance(job.instance_path)
    except Exception:
        return _error_record(_job_key(job)[0], job)
    try:
        _, rec = run_solver(instance, job.algorithm, job.w, job.time_limit, job.expand_limit)
        return rec
    except Exception:
        return _error_record(instance.instance_id, job, instance)


def _error_record(iid: str, job: Job, instance: Instance | None = None) -> RunRecord:
    return RunRecord(iid, job.algorithm, job.w,
                     instance.N if instance else "", instance.M if instance else "",
                     ERROR, 0, 0, 0, 0.0, 0.0, 0.0,
                     "" if instance is None or instance.seed is None else instance.seed)


def _job_key(job: Job) -> tuple[str, str, str]:
    # instance ids are read lazily; unreadable files fall back to the stem like run_job does
    try:
        with open(job.instance_path) as fh:
            iid = json.load(fh).get("instance_id")
    except (OSError, ValueError, AttributeError):
        iid = None
    return (str(iid) if iid is not None else Path(job.instance_path).stem, job.algorithm, job.w)


def cmd_bench(manifest_path, out_csv, workers: int = 1) -> list[RunRecord]:
    """Run every pending job, then rewrite the CSV and its summary in manifest order."""
    jobs = load_manifest(manifest_path)
    out_csv = Path(out_csv)
    done = {r.key: r for r in read_records(out_csv)}
    keys = [_job_key(j) for j in jobs]
    pending, seen = [], set(done)
    for j, k in zip(jobs, keys):
        if k not in seen:
            seen.add(k)
            pending.append(j)

    if not out_csv.exists():
        out_csv.write_text(records_to_csv([]))
    # rows are appended as they finish so an interrupted bench can resume
    if workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rec in pool.map(run_job, pending):
                append_records(out_csv, [rec])
                done[rec.key] = rec
    else:
        for job in pending:
            rec = run_job(job)
            append_records(out_csv, [rec])
            done[rec.key] = rec

    ordered, emitted = [], set()
    for k in keys:
        if k in done and k not in emitted:
            emitted.add(k)
            ordered.append(done[k])
    # rows from earlier runs that the manifest no longer lists are kept at the end
    ordered.extend(r for k, r in done.items() if k not in emitted)
    out_csv.write_text(records_to_csv(ordered))
    summary_path(out_csv).write_text(summary_to_csv(aggregate(ordered)))
    return ordered
