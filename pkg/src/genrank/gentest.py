"""Generation of finite direct sums of matrix algebras by self-adjoint tuples.

A tuple over A = M_{d_1} + ... + M_{d_k} generates A exactly when it
generates every summand and no two summands of equal size carry unitarily
conjugate tuples. ``brute_force_generates`` decides the same question by
span saturation in the block-diagonal embedding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .errors import PreconditionViolated, ShapeMismatch, TooLarge
from .matalg import (
    TOL_RANK,
    MatrixTuple,
    generated_algebra,
    is_generating,
    null_space,
    validate_tuple,
)

ORACLE_MAX_SIZE = 24
UNITARY_TOL = 1e-8


@dataclass(frozen=True)
class FiniteFiberAlgebra:
    """Direct sum of full matrix algebras M_{d_x}, one per point of a finite base."""

    fibers: tuple[int, ...]

    def __post_init__(self):
        fibers = tuple(int(f) for f in self.fibers)
        if not fibers:
            raise ShapeMismatch("need at least one fiber")
        if any(f < 1 for f in fibers):
            raise ShapeMismatch(f"fiber sizes must be >= 1: {fibers}")
        object.__setattr__(self, "fibers", fibers)

    @property
    def dim(self) -> int:
        return sum(f * f for f in self.fibers)


@dataclass(frozen=True)
class FiberedTuple:
    tuples: tuple[MatrixTuple, ...]

    def __post_init__(self):
        tuples = tuple(validate_tuple(t) for t in self.tuples)
        if not tuples:
            raise ShapeMismatch("need at least one fiber")
        if len({t.n_plus_1 for t in tuples}) != 1:
            raise ShapeMismatch("all fibers must carry tuples of the same length")
        object.__setattr__(self, "tuples", tuples)

    @property
    def n_plus_1(self) -> int:
        return self.tuples[0].n_plus_1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(t.d for t in self.tuples)

    def restrict(self, idx: Sequence[int]) -> "FiberedTuple":
        return FiberedTuple(tuple(self.tuples[i] for i in idx))

    def block_diagonal(self) -> MatrixTuple:
        return MatrixTuple(np.array([block_diag(*[t.entries[i] for t in self.tuples])
                                     for i in range(self.n_plus_1)]))


@dataclass
class GenerationReport:
    generates: bool
    fiber_ok: list[bool]
    conflict_pairs: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "generates": self.generates,
            "fiber_ok": list(self.fiber_ok),
            "conflict_pairs": [list(p) for p in self.conflict_pairs],
        }


def _check_shapes(alg: FiniteFiberAlgebra, t: FiberedTuple):
    if alg.fibers != t.sizes:
        raise ShapeMismatch(f"fiber sizes {alg.fibers} do not match tuple sizes {t.sizes}")


def fiberwise_generates(t: FiberedTuple, unital: bool = False) -> list[bool]:
    return [is_generating(tx, unital=unital) for tx in t.tuples]


def intertwiners(tx: MatrixTuple, ty: MatrixTuple, tol: float = TOL_RANK) -> np.ndarray:
    """Basis (shape (k, d, d)) of {T : T tx_i = ty_i T for all i}."""
    d = tx.d
    eye = np.eye(d)
    # row-major vec: vec(T a) = (1 kron a^T) vec(T), vec(b T) = (b kron 1) vec(T)
    m = np.vstack([np.kron(eye, a.T) - np.kron(b, eye) for a, b in zip(tx.entries, ty.entries)])
    scale = max(np.linalg.norm(tx.entries), np.linalg.norm(ty.entries))
    return null_space(m, tol, scale).reshape(-1, d, d)


def fibers_conjugate(tx: MatrixTuple, ty: MatrixTuple, check: bool = True) -> bool:
    """Whether u tx_i u* = ty_i for a single unitary u; both tuples must be irreducible."""
    tx, ty = validate_tuple(tx), validate_tuple(ty)
    if tx.d != ty.d or tx.n_plus_1 != ty.n_plus_1:
        return False
    if check and not (is_generating(tx) and is_generating(ty)):
        raise PreconditionViolated("fibers_conjugate needs generating (irreducible) fibers")
    ts = intertwiners(tx, ty)
    if ts.shape[0] != 1:
        return False
    t = ts[0]
    gram = t.conj().T @ t
    scale = np.trace(gram).real / tx.d
    dev = np.linalg.norm(gram - scale * np.eye(tx.d))
    return bool(scale > 0 and dev <= UNITARY_TOL * np.linalg.norm(t) ** 2)


def generates_direct_sum(alg: FiniteFiberAlgebra, t: FiberedTuple,
                         unital: bool = False) -> GenerationReport:
    """Generation of the direct sum via fiber generation plus pairwise non-conjugacy."""
    _check_shapes(alg, t)
    ok = fiberwise_generates(t, unital)
    conflicts = []
    for x, y in combinations(range(len(t.tuples)), 2):
        if alg.fibers[x] != alg.fibers[y] or not (ok[x] and ok[y]):
            continue
        if fibers_conjugate(t.tuples[x], t.tuples[y], check=False):
            conflicts.append((x, y))
    return GenerationReport(all(ok) and not conflicts, ok, sorted(conflicts))


def brute_force_generates(alg: FiniteFiberAlgebra, t: FiberedTuple, unital: bool = False) -> bool:
    """Span-saturate the block-diagonal embedding and compare with sum of d_x^2."""
    _check_shapes(alg, t)
    total = sum(alg.fibers)
    if total > ORACLE_MAX_SIZE:
        raise TooLarge(f"total size {total} exceeds oracle bound {ORACLE_MAX_SIZE}")
    return generated_algebra(t.block_diagonal(), unital=unital).dim == alg.dim


def fibered_from_json(doc: dict) -> tuple[FiniteFiberAlgebra, FiberedTuple]:
    """Parse ``{"fibers": [2, 3], "tuple": [[m, ...], [m, ...]]}`` with [re, im] entries."""
    from .io import tuple_from_json

    try:
        fibers = doc["fibers"]
        per_fiber = doc["tuple"]
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f'expected keys "fibers" and "tuple": {exc}') from None
    if len(fibers) != len(per_fiber):
        raise ShapeMismatch(f"{len(fibers)} fibers but {len(per_fiber)} tuples")
    alg = FiniteFiberAlgebra(tuple(fibers))
    t = FiberedTuple(tuple(tuple_from_json(m) for m in per_fiber))
    _check_shapes(alg, t)
    return alg, t
