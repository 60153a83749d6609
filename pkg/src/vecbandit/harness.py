"""Instance I/O, instance generators, replicated experiments, CSV emission,
and scaling-law fitting.

Instances are JSON documents {"family": "gaussian"|"bernoulli", "means":
[[row per dimension]]}; d and K are inferred.  Experiment outputs are CSV
files with fixed schemas (REGRET_HEADER / BAI_HEADER).  Replications run
in a thread pool capped by the VECBANDIT_THREADS environment variable;
per-replication seeds derive from the base seed, so parallel and serial
execution emit identical rows (runtime_ms aside, which is wall-clock).
Arm numbers in CSV output are 1-based.
"""

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._kernels import derive_seed
from .bai import BaiConfig, gamified_bai_run, track_and_stop_run
from .env import Environment
from .model import BanditModel, Family
from .regret import cg_adaptive_run, cg_run, cp_run, default_N, regret_of

REGRET_HEADER = ["run_id", "algo", "T", "seed", "regret", "runtime_ms", "clamped_N"]
BAI_HEADER = ["run_id", "algo", "delta", "seed", "tau", "answer", "correct", "truncated"]

REGRET_ALGOS = ("cp", "cg", "cg-adaptive")
BAI_ALGOS = ("tas", "game")


class InstanceFormatError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    model: BanditModel
    algo: str
    horizons: tuple = ()
    deltas: tuple = ()
    replications: int = 1
    base_seed: int = 0
    out_dir: str | None = None
    N_override: int | None = None
    oracle_cadence: int = 10
    max_rounds: int = 10**6
    forced_rounds: int | None = None

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("need at least one replication")
        hs = tuple(int(t) for t in self.horizons)
        if any(b <= a for a, b in zip(hs, hs[1:])):
            raise ValueError("horizons must be strictly increasing")
        self.horizons = hs
        self.deltas = tuple(float(x) for x in self.deltas)
        if self.algo in REGRET_ALGOS and not self.horizons:
            raise ValueError("regret algorithms need horizons")
        if self.algo in BAI_ALGOS and not self.deltas:
            raise ValueError("BAI algorithms need deltas")
        if self.algo not in REGRET_ALGOS + BAI_ALGOS:
            raise ValueError(f"unknown algorithm tag {self.algo!r}")


def parse_instance(text: str) -> BanditModel:
    """Parse and validate a JSON instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"malformed JSON: {e}") from e
    if not isinstance(doc, dict) or "family" not in doc or "means" not in doc:
        raise InstanceFormatError("instance needs 'family' and 'means'")
    try:
        family = Family(doc["family"])
    except ValueError as e:
        raise InstanceFormatError(f"unknown family {doc['family']!r}") from e
    means = doc["means"]
    if not isinstance(means, list) or not means or not all(
        isinstance(r, list) for r in means
    ):
        raise InstanceFormatError("means must be a nonempty list of rows")
    width = len(means[0])
    if width < 1 or any(len(r) != width for r in means):
        raise InstanceFormatError("means rows must be nonempty and equal length")
    arr = np.asarray(means, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
        raise InstanceFormatError("means must be finite and in [0, 1]")
    return BanditModel(family=family, means=arr)


def serialize_instance(model: BanditModel) -> str:
    """Canonical JSON for a model; inverse of parse_instance."""
    doc = {"family": model.family.value, "means": model.means.tolist()}
    return json.dumps(doc, sort_keys=True)


def load_instance(path: str) -> BanditModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def gen_table1() -> BanditModel:
    """The 3-arm, 2-dimensional introductory instance (Bernoulli losses)."""
    return BanditModel(
        family=Family.BERNOULLI, means=[[1.0, 0.0, 0.5], [0.0, 1.0, 0.5]]
    )


def gen_lb_instance(epsilon: float, alt: bool = False) -> BanditModel:
    """The 4-arm Gaussian family behind the T^(2/3) regret lower bound.

    Arms: (1/4, 3/4), (3/4, 1/4), ((3-eps)/8, (3+eps)/8),
    ((3+eps)/8, (3-eps)/8).  With alt=True arm 1 becomes ((1-eps)/4, 3/4),
    which breaks the arm-3/arm-4 symmetry and gives a unique best arm --
    use this variant for best-arm identification.  The regret analysis
    needs eps < 1/6; the generator accepts (0, 1) to cover BAI settings.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    first = (1.0 - epsilon) / 4.0 if alt else 1.0 / 4.0
    means = [
        [first, 3.0 / 4.0, (3.0 - epsilon) / 8.0, (3.0 + epsilon) / 8.0],
        [3.0 / 4.0, 1.0 / 4.0, (3.0 + epsilon) / 8.0, (3.0 - epsilon) / 8.0],
    ]
    return BanditModel(family=Family.GAUSSIAN, means=means)


def _worker_count() -> int:
    cap = os.environ.get("VECBANDIT_THREADS", "")
    workers = os.cpu_count() or 1
    if cap.strip():
        workers = max(1, min(workers, int(cap)))
    return workers


def _regret_job(cfg, T, rep):
    seed = derive_seed(cfg.base_seed, rep + 1000003 * cfg.horizons.index(T))
    K = cfg.model.K
    if cfg.N_override is not None:
        N, clamped = cfg.N_override, False
    elif cfg.algo == "cg-adaptive":
        N, clamped = 0, False
    else:
        N, clamped = default_N(cfg.algo, T, K)
    env = Environment(model=cfg.model, rng_seed=seed)
    t0 = time.perf_counter()
    if cfg.algo == "cp":
        traj = cp_run(env, T, N)
    elif cfg.algo == "cg":
        traj, _ = cg_run(env, T, N)
    else:
        traj = cg_adaptive_run(env, T)
    regret = regret_of(traj, cfg.model)
    ms = (time.perf_counter() - t0) * 1000.0
    return {
        "algo": cfg.algo,
        "T": T,
        "seed": seed,
        "regret": regret,
        "runtime_ms": round(ms, 3),
        "clamped_N": int(clamped),
    }


def _bai_job(cfg, delta, rep):
    seed = derive_seed(cfg.base_seed, rep + 1000003 * cfg.deltas.index(delta))
    bcfg = BaiConfig(
        delta=delta,
        sampler="dtracking" if cfg.algo == "tas" else "game",
        max_rounds=cfg.max_rounds,
        oracle_cadence=cfg.oracle_cadence,
        forced_rounds=cfg.forced_rounds,
    )
    env = Environment(model=cfg.model, rng_seed=seed)
    if cfg.algo == "tas":
        out = track_and_stop_run(env, bcfg)
    else:
        out = gamified_bai_run(env, bcfg)
    return {
        "algo": cfg.algo,
        "delta": delta,
        "seed": seed,
        "tau": out.tau,
        "answer": out.answer + 1,  # 1-based in output
        "correct": int(out.correct),
        "truncated": int(out.truncated),
    }


def run_experiment(cfg: ExperimentConfig):
    """Run all (grid point, replication) jobs; returns ordered row dicts."""
    if cfg.algo in REGRET_ALGOS:
        jobs = [(T, rep) for T in cfg.horizons for rep in range(cfg.replications)]
        worker = _regret_job
    else:
        jobs = [(x, rep) for x in cfg.deltas for rep in range(cfg.replications)]
        worker = _bai_job

    workers = min(_worker_count(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: worker(cfg, *j), jobs))
    else:
        rows = [worker(cfg, *j) for j in jobs]
    for i, row in enumerate(rows):
        row["run_id"] = i
    return rows


def write_rows(rows, header, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=header)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row[k] for k in header})


def read_regret_csv(path):
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != REGRET_HEADER:
            raise InstanceFormatError(
                f"unexpected CSV header {reader.fieldnames} (want {REGRET_HEADER})"
            )
        return [
            {
                "run_id": int(r["run_id"]),
                "algo": r["algo"],
                "T": int(r["T"]),
                "seed": int(r["seed"]),
                "regret": float(r["regret"]),
                "runtime_ms": float(r["runtime_ms"]),
                "clamped_N": int(r["clamped_N"]),
            }
            for r in reader
        ]


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r2: float
    excluded: int = 0


def fit_slope(points) -> SlopeFit:
    """Least-squares line through (log T, log mean_regret).

    Nonpositive regret points cannot be log-transformed; they are excluded
    and counted in the result.
    """
    pts = [(float(T), float(r)) for T, r in points]
    kept = [(T, r) for T, r in pts if r > 0.0]
    excluded = len(pts) - len(kept)
    if len(kept) < 3:
        raise ValueError("need at least 3 positive points to fit a slope")
    x = np.log([T for T, _ in kept])
    y = np.log([r for _, r in kept])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return SlopeFit(float(slope), float(intercept), r2, excluded)


def mean_regret_by_T(rows):
    """Aggregate regret rows into per-(algo, T) means."""
    groups = {}
    for r in rows:
        groups.setdefault((r["algo"], r["T"]), []).append(r["regret"])
    return {
        key: (float(np.mean(v)), float(np.std(v) / math.sqrt(len(v))))
        for key, v in sorted(groups.items())
    }
