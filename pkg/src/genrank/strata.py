"""Orbit types of PU_d acting on hermitian tuples and the dimensions of their strata.

Closed-form dimensions live next to two numerical oracles: the Lie algebra
of the normalizer of a model algebra, and the generic rank of the tangent
map at random points of a stratum.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .errors import PreconditionViolated, SamplingFailure, SizeMismatch
from .matalg import (
    TOL_RANK,
    MatrixTuple,
    OrbitType,
    StarAlgebra,
    canonical_model,
    generated_algebra,
    hermitian_basis,
    matrix_rank,
)

SAMPLE_RETRIES = 64


@dataclass(frozen=True)
class StratumInfo:
    orbit_type: OrbitType
    d: int
    n: int
    dim_F: int
    dim_N: int
    dim_K: int
    dim_stratum: int
    is_trivial_type: bool

    def to_dict(self) -> dict:
        out = asdict(self)
        out["orbit_type"] = str(self.orbit_type)
        return out


@lru_cache(maxsize=None)
def _orbit_types(d: int) -> tuple[OrbitType, ...]:
    # all (block size, multiplicity) shapes that fit, largest first
    shapes = sorted(((a, m) for a in range(1, d + 1) for m in range(1, d // a + 1)),
                    reverse=True)
    found = []

    def extend(prefix, start, remaining):
        if remaining == 0:
            found.append(OrbitType(tuple(prefix)))
            return
        for i in range(start, len(shapes)):
            a, m = shapes[i]
            if a * m <= remaining:
                prefix.append(shapes[i])
                extend(prefix, i, remaining - a * m)
                prefix.pop()

    extend([], 0, d)
    return tuple(sorted(found))


def enumerate_orbit_types(d: int) -> list[OrbitType]:
    """All orbit types [d, m] with sum d_j m_j = d, sorted lexicographically."""
    if d < 1:
        raise PreconditionViolated("d must be >= 1")
    return list(_orbit_types(d))


def _check(ot: OrbitType, d: int):
    if ot.size != d:
        raise SizeMismatch(f"orbit type {ot} has size {ot.size}, expected {d}")


def stratum_dim(ot: OrbitType, d: int, n: int) -> StratumInfo:
    """Closed-form dimension data of the stratum of tuples with orbit type ``ot``.

    The identity component of the normalizer of B is U(B)U(B'), which meets
    in the unitaries of the center; modulo scalars that gives
    dim N = sum d_j^2 + sum m_j^2 - L - 1.
    """
    _check(ot, d)
    if n < 0:
        raise PreconditionViolated("n must be >= 0")
    dim_f = (n + 1) * ot.sum_d2
    dim_n = ot.sum_d2 + ot.sum_m2 - ot.num_blocks - 1
    dim_k = ot.sum_m2 - 1
    dim_s = dim_f + (d * d - 1) - dim_n
    return StratumInfo(ot, d, n, dim_f, dim_n, dim_k, dim_s, ot.is_trivial())


def _require_d_n(d: int, n: int):
    if d < 2:
        raise PreconditionViolated(f"d must be >= 2, got {d}")
    if n < 1:
        raise PreconditionViolated(f"n must be >= 1, got {n}")


def max_nontrivial_stratum_dim(d: int, n: int) -> tuple[int, OrbitType]:
    """Largest stratum dimension over non-generating orbit types, with the first maximizer."""
    _require_d_n(d, n)
    best = None
    for ot in enumerate_orbit_types(d):
        if ot.is_trivial():
            continue
        dim = stratum_dim(ot, d, n).dim_stratum
        if best is None or dim > best[0]:
            best = (dim, ot)
    return best


def maximizers(d: int, n: int) -> list[OrbitType]:
    """Every non-trivial orbit type attaining the maximal stratum dimension."""
    top, _ = max_nontrivial_stratum_dim(d, n)
    return [ot for ot in enumerate_orbit_types(d)
            if not ot.is_trivial() and stratum_dim(ot, d, n).dim_stratum == top]


def density_threshold(d: int, n: int) -> int:
    """2n(d-1): fiberwise generators are dense over bases of dimension strictly below this."""
    _require_d_n(d, n)
    return 2 * n * (d - 1)


def su_basis(d: int) -> np.ndarray:
    """A real basis of the traceless skew-hermitian d x d matrices (d^2 - 1 elements)."""
    out = []
    for r in range(d):
        for s in range(r + 1, d):
            x = np.zeros((d, d), dtype=complex)
            x[r, s], x[s, r] = 1, -1
            out.append(x)
            y = np.zeros((d, d), dtype=complex)
            y[r, s] = y[s, r] = 1j
            out.append(y)
    for r in range(d - 1):
        x = np.zeros((d, d), dtype=complex)
        x[r, r], x[r + 1, r + 1] = 1j, -1j
        out.append(x)
    return np.array(out).reshape(-1, d, d)


def _realify(rows: np.ndarray) -> np.ndarray:
    flat = rows.reshape(rows.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def normalizer_dim_numeric(ot: OrbitType, d: int, tol: float = 1e-8) -> int:
    """Dimension of {x in su(d) : [x, B] contained in B} for B the canonical model of ``ot``."""
    _check(ot, d)
    if d == 1:
        return 0
    model = canonical_model(ot, d)
    xs = su_basis(d)
    proj_perp = np.eye(d * d) - model.projector()
    # column per x: stacked projections of [x, b_k] onto the complement of B
    cols = []
    for x in xs:
        comms = x[None] @ model.basis - model.basis @ x[None]
        cols.append((comms.reshape(model.dim, -1) @ proj_perp.T).reshape(-1))
    m = _realify(np.array(cols)).T
    return len(xs) - matrix_rank(m, tol)


def sample_model_tuple(ot: OrbitType, d: int, n: int, rng: np.random.Generator,
                       retries: int = SAMPLE_RETRIES,
                       model: StarAlgebra | None = None) -> MatrixTuple:
    """Random tuple of self-adjoint elements of the model algebra whose unital
    generated algebra is the whole model (a point of F)."""
    _check(ot, d)
    model = canonical_model(ot, d) if model is None else model
    herm = hermitian_basis(model)
    for _ in range(retries):
        coef = rng.standard_normal((n + 1, len(herm)))
        t = MatrixTuple(np.einsum("ik,kab->iab", coef, herm))
        t = MatrixTuple((t.entries + np.swapaxes(t.entries.conj(), 1, 2)) / 2)
        if generated_algebra(t, unital=True).dim == model.dim:
            return t
    raise SamplingFailure(f"could not sample a tuple generating the model of {ot} (n={n})")


def tangent_rank_dim(ot: OrbitType, d: int, n: int, samples: int = 5,
                     seed: int | np.random.Generator | None = 0,
                     tol: float = TOL_RANK) -> int:
    """Generic rank of the tangent space of the stratum, sampled at random points of F.

    Spans orbit directions ([x, b_0], ..., [x, b_n]) for x in su(d) together
    with all directions inside (B_sa)^(n+1).
    """
    _check(ot, d)
    if samples < 1:
        raise PreconditionViolated("samples must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    model = canonical_model(ot, d)
    herm = hermitian_basis(model)
    xs = su_basis(d)
    best = 0
    for _ in range(samples):
        b = sample_model_tuple(ot, d, n, rng, model=model).entries
        vecs = []
        for x in xs:
            vecs.append(x[None] @ b - b @ x[None])
        for i in range(n + 1):
            for h in herm:
                v = np.zeros_like(b)
                v[i] = h
                vecs.append(v)
        best = max(best, matrix_rank(_realify(np.array(vecs)), tol))
    return best
