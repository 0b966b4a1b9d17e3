"""Seeded Monte Carlo experiments on genericity and density of generating tuples.

Every trial draws from its own generator, derived from the master seed and
the trial index, so reports do not depend on execution order.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import OracleMismatch, PreconditionViolated, RepairFailed
from .gentest import FiberedTuple, FiniteFiberAlgebra, generates_direct_sum
from .matalg import (
    DEFAULT_SEED,
    MatrixTuple,
    OrbitType,
    gue,
    is_generating,
    orbit_type,
    random_unitary,
)
from .strata import enumerate_orbit_types, sample_model_tuple, stratum_dim, tangent_rank_dim

log = logging.getLogger(__name__)

REPAIR_ATTEMPTS = 32
EPSILON_SCHEDULE = (1e-1, 1e-2, 1e-3)


@dataclass(frozen=True)
class ExperimentConfig:
    d: int = 2
    n: int = 1
    trials: int = 1000
    seed: int = DEFAULT_SEED
    epsilon: float = 1e-3
    noise: str = "GUE"

    def __post_init__(self):
        if self.trials < 1:
            raise PreconditionViolated("trials must be >= 1")
        if self.noise != "GUE":
            raise PreconditionViolated(f"unsupported noise model {self.noise!r}")
        if self.epsilon < 0:
            raise PreconditionViolated("epsilon must be >= 0")


@dataclass
class ExperimentReport:
    experiment: str
    config: ExperimentConfig
    success_count: int
    trials: int
    tallies: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    per_trial: list = field(default_factory=list, repr=False)

    @property
    def empirical_rate(self) -> float:
        return self.success_count / self.trials

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": asdict(self.config),
            "success_count": self.success_count,
            "trials": self.trials,
            "empirical_rate": self.empirical_rate,
            "tallies": dict(sorted(self.tallies.items())),
            "extra": self.extra,
        }


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def gue_tuple(d: int, n_plus_1: int, rng: np.random.Generator) -> MatrixTuple:
    return MatrixTuple(gue(d, rng, n_plus_1))


def _unit_direction(shapes: Sequence[tuple[int, int]], rng) -> list[np.ndarray]:
    parts = [gue(d, rng, k) for k, d in shapes]
    norm = np.sqrt(sum(np.linalg.norm(p) ** 2 for p in parts))
    return [p / norm for p in parts]


def _repair(parts: list[np.ndarray], accept: Callable[[list[np.ndarray]], bool],
            epsilon: float, rng: np.random.Generator, attempts: int = REPAIR_ATTEMPTS):
    """Random probing: try GUE directions with radii epsilon/2, epsilon/4, ..."""
    if accept(parts):
        return parts, 0.0, 0
    if epsilon <= 0:
        raise PreconditionViolated("epsilon must be > 0 for repair")
    shapes = [(p.shape[0], p.shape[1]) for p in parts]
    radius = epsilon
    for k in range(1, attempts + 1):
        radius /= 2
        step = _unit_direction(shapes, rng)
        cand = [p + radius * s for p, s in zip(parts, step)]
        dist = float(np.sqrt(sum(np.linalg.norm(c - p) ** 2 for c, p in zip(cand, parts))))
        if dist <= epsilon and accept(cand):
            return cand, dist, k
    raise RepairFailed(f"no generating tuple found within {epsilon} after {attempts} attempts")


@dataclass
class RepairResult:
    tuple: MatrixTuple
    distance: float
    attempts: int


def perturbation_repair(t: MatrixTuple, cfg: ExperimentConfig,
                        rng: np.random.Generator | None = None) -> RepairResult:
    """Find a generating tuple within ``cfg.epsilon`` (Frobenius) of ``t``."""
    rng = trial_rng(cfg.seed, 0) if rng is None else rng
    parts, dist, k = _repair([t.entries], lambda p: is_generating(MatrixTuple(p[0])),
                             cfg.epsilon, rng)
    return RepairResult(MatrixTuple(parts[0]), dist, k)


def genericity_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Fraction of GUE (n+1)-tuples in M_d that generate M_d."""
    if cfg.n < 1 and cfg.d > 1:
        raise PreconditionViolated("need n >= 1 for d >= 2")
    hits = 0
    rows = []
    for i in range(cfg.trials):
        ok = is_generating(gue_tuple(cfg.d, cfg.n + 1, trial_rng(cfg.seed, i)))
        hits += ok
        rows.append({"trial": i, "generates": ok})
    if hits != cfg.trials:
        log.warning("genericity: %d of %d GUE tuples failed to generate (d=%d, n=%d)",
                    cfg.trials - hits, cfg.trials, cfg.d, cfg.n)
    return ExperimentReport("genericity", cfg, hits, cfg.trials, per_trial=rows)


PLANT_KINDS = ("zero", "scalar", "block")


def planted_tuple(kind: str, d: int, n: int, rng: np.random.Generator) -> MatrixTuple:
    """A non-generating tuple: zero, scalar, or a conjugated model of a random
    non-trivial orbit type."""
    if kind == "zero":
        return MatrixTuple(np.zeros((n + 1, d, d), dtype=complex))
    if kind == "scalar":
        return MatrixTuple(rng.standard_normal(n + 1)[:, None, None] * np.eye(d, dtype=complex))
    if kind == "block":
        types = [ot for ot in enumerate_orbit_types(d) if not ot.is_trivial()]
        ot = types[rng.integers(len(types))]
        return sample_model_tuple(ot, d, n, rng).conjugate_by(random_unitary(d, rng))
    raise ValueError(f"unknown planting {kind!r}")


def repair_experiment(cfg: ExperimentConfig, sizes: Sequence[int] | None = None) -> ExperimentReport:
    """Plant non-generating tuples and repair each within ``cfg.epsilon``.

    Trial i uses size ``sizes[i % len(sizes)]`` and cycles through the planting kinds.
    """
    sizes = [cfg.d] if sizes is None else list(sizes)
    hits = 0
    tallies: Counter = Counter()
    rows = []
    max_dist = 0.0
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, i)
        d = sizes[i % len(sizes)]
        kind = PLANT_KINDS[(i // len(sizes)) % len(PLANT_KINDS)]
        t = planted_tuple(kind, d, cfg.n, rng)
        planted_ok = not is_generating(t)
        try:
            res = perturbation_repair(t, cfg, rng)
            ok = planted_ok and res.distance <= cfg.epsilon and is_generating(res.tuple)
            dist = res.distance
        except RepairFailed:
            ok, dist = False, float("nan")
        hits += ok
        tallies[f"{kind}/d={d}"] += ok
        max_dist = max(max_dist, dist) if ok else max_dist
        rows.append({"trial": i, "d": d, "kind": kind, "repaired": ok, "distance": dist})
    return ExperimentReport("repair", cfg, hits, cfg.trials, dict(tallies),
                            {"max_distance": max_dist, "sizes": sizes}, rows)


def frontier_probe(ot: OrbitType, cfg: ExperimentConfig) -> ExperimentReport:
    """Perturb random points of a non-generic stratum and record where they land."""
    if ot.size != cfg.d:
        raise PreconditionViolated(f"orbit type {ot} does not have size {cfg.d}")
    if ot.is_trivial():
        raise PreconditionViolated("frontier_probe needs a non-trivial orbit type")
    hits = 0
    tallies: Counter = Counter()
    rows = []
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, i)
        b = sample_model_tuple(ot, cfg.d, cfg.n, rng).conjugate_by(random_unitary(cfg.d, rng))
        if cfg.epsilon > 0:
            (noise,) = _unit_direction([(cfg.n + 1, cfg.d)], rng)
            b = MatrixTuple(b.entries + cfg.epsilon * noise)
        landed = orbit_type(b, seed=rng)
        hits += landed.is_trivial()
        tallies[str(landed)] += 1
        rows.append({"trial": i, "landed": str(landed)})
    return ExperimentReport("frontier", cfg, hits, cfg.trials, dict(tallies),
                            {"orbit_type": str(ot)}, rows)


def _planted_fibered(alg: FiniteFiberAlgebra, n: int, rng, kind: str) -> list[np.ndarray]:
    parts = [gue(f, rng, n + 1) for f in alg.fibers]
    if kind == "scalar":
        parts = [rng.standard_normal(n + 1)[:, None, None] * np.eye(f, dtype=complex)
                 for f in alg.fibers]
    elif kind == "duplicate":
        # copy a conjugate of the first fiber onto every later fiber of the same size
        for x, f in enumerate(alg.fibers):
            first = alg.fibers.index(f)
            if first != x:
                u = random_unitary(f, rng)
                parts[x] = u @ parts[first] @ u.conj().T
    elif kind == "zero":
        parts = [np.zeros((n + 1, f, f), dtype=complex) for f in alg.fibers]
    return parts


FIBERED_KINDS = ("duplicate", "scalar", "zero", "random")


def finite_dim_gr_experiment(alg: FiniteFiberAlgebra, cfg: ExperimentConfig,
                             schedule: Sequence[float] = EPSILON_SCHEDULE) -> ExperimentReport:
    """Repair random (often planted non-generating) pairs over a direct sum at each radius."""
    if cfg.n != 1:
        raise PreconditionViolated("finite_dim_gr_experiment works with pairs (n = 1)")

    def accept(parts):
        ft = FiberedTuple(tuple(MatrixTuple(p) for p in parts))
        return generates_direct_sum(alg, ft).generates

    per_eps = {str(e): 0 for e in schedule}
    hits = 0
    rows = []
    for i in range(cfg.trials):
        rng = trial_rng(cfg.seed, i)
        kind = FIBERED_KINDS[i % len(FIBERED_KINDS)]
        parts = _planted_fibered(alg, cfg.n, rng, kind)
        all_ok = True
        for eps in schedule:
            try:
                _repair(parts, accept, eps, rng)
                per_eps[str(eps)] += 1
            except RepairFailed:
                all_ok = False
        hits += all_ok
        rows.append({"trial": i, "kind": kind, "repairable": all_ok})
    return ExperimentReport("finite_dim_gr", cfg, hits, cfg.trials, per_eps,
                            {"fibers": list(alg.fibers), "schedule": list(schedule)}, rows)


def stratum_dim_survey(d: int, n: int, cfg: ExperimentConfig | None = None,
                       samples: int = 5, strict: bool = True) -> list[dict]:
    """Closed-form versus tangent-rank stratum dimensions for every orbit type."""
    if d > 4 or n > 3:
        raise PreconditionViolated("survey is limited to d <= 4, n <= 3")
    seed = DEFAULT_SEED if cfg is None else cfg.seed
    rows = []
    for k, ot in enumerate(enumerate_orbit_types(d)):
        info = stratum_dim(ot, d, n)
        numeric = tangent_rank_dim(ot, d, n, samples, trial_rng(seed, k))
        rows.append({"orbit_type": str(ot), "dim_formula": info.dim_stratum,
                     "dim_tangent_rank": numeric, "match": numeric == info.dim_stratum})
    if strict and not all(r["match"] for r in rows):
        raise OracleMismatch(f"stratum dimension mismatch for d={d}, n={n}: {rows}")
    return rows


FIBER_KINDS = ("generic", "generic", "scalar", "reducible", "copy", "zero")


def random_fibered_instance(rng: np.random.Generator, max_fibers: int = 4, max_size: int = 3,
                            lengths: Sequence[int] = (2, 3)) -> tuple[FiniteFiberAlgebra, FiberedTuple]:
    """Random direct-sum instance mixing generic, degenerate and duplicated fibers."""
    k = int(rng.integers(1, max_fibers + 1))
    sizes = [int(s) for s in rng.integers(1, max_size + 1, size=k)]
    n_plus_1 = int(rng.choice(lengths))
    parts: list[np.ndarray] = []
    for x, f in enumerate(sizes):
        kind = FIBER_KINDS[rng.integers(len(FIBER_KINDS))]
        earlier = [y for y in range(x) if sizes[y] == f]
        if kind == "copy" and earlier:
            src = parts[earlier[rng.integers(len(earlier))]]
            u = random_unitary(f, rng)
            parts.append(u @ src @ u.conj().T)
        elif kind == "scalar":
            parts.append(rng.standard_normal(n_plus_1)[:, None, None] * np.eye(f, dtype=complex))
        elif kind == "zero":
            parts.append(np.zeros((n_plus_1, f, f), dtype=complex))
        elif kind == "reducible" and f > 1:
            types = [ot for ot in enumerate_orbit_types(f) if not ot.is_trivial()]
            ot = types[rng.integers(len(types))]
            t = sample_model_tuple(ot, f, n_plus_1 - 1, rng)
            parts.append(t.conjugate_by(random_unitary(f, rng)).entries)
        else:
            parts.append(gue(f, rng, n_plus_1))
    alg = FiniteFiberAlgebra(tuple(sizes))
    return alg, FiberedTuple(tuple(MatrixTuple(p) for p in parts))


def oracle_agreement_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Compare the intertwiner-based direct-sum test with brute-force saturation."""
    from .gentest import brute_force_generates

    agree = 0
    tallies: Counter = Counter()
    rows = []
    for i in range(cfg.trials):
        alg, t = random_fibered_instance(trial_rng(cfg.seed, i))
        fast = generates_direct_sum(alg, t).generates
        slow = brute_force_generates(alg, t)
        agree += fast == slow
        tallies["generating" if slow else "non_generating"] += 1
        rows.append({"trial": i, "fibers": " ".join(map(str, alg.fibers)),
                     "n_plus_1": t.n_plus_1, "tester": fast, "oracle": slow})
    return ExperimentReport("oracle_agreement", cfg, agree, cfg.trials, dict(tallies),
                            {"disagreements": cfg.trials - agree}, rows)
