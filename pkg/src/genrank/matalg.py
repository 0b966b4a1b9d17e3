"""Finite-dimensional *-algebras of complex matrices.

Everything here works with dense numpy arrays at small sizes (d <= 32, in
practice d <= 8). Subspaces of M_d are stored as orthonormal bases with
respect to the trace inner product <x, y> = tr(x* y), which is the ordinary
Euclidean inner product on the flattened matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateCenter, NotHermitian, PreconditionViolated, SizeMismatch

TOL_HERM = 1e-12
TOL_RANK = 1e-9
GAP_TOL = 1e-6
MAX_RETRIES = 16
MAX_SIZE = 32
DEFAULT_SEED = 20240229


@dataclass(frozen=True, eq=False)
class MatrixTuple:
    """An (n+1)-tuple of hermitian d x d matrices, stored as an array of shape (n+1, d, d)."""

    entries: np.ndarray

    @property
    def d(self) -> int:
        return self.entries.shape[1]

    @property
    def n_plus_1(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[0] - 1

    def __len__(self):
        return self.entries.shape[0]

    def __iter__(self):
        return iter(self.entries)

    def conjugate_by(self, u: np.ndarray) -> "MatrixTuple":
        """Return the tuple u a_i u* (u is assumed unitary)."""
        return MatrixTuple(u @ self.entries @ u.conj().T)

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))


def validate_tuple(raw: Sequence, tol_herm: float = TOL_HERM) -> MatrixTuple:
    """Check a list of square matrices and return it as a hermitian MatrixTuple.

    Entries within ``tol_herm`` of being hermitian are replaced by their
    hermitian part (a + a*)/2.
    """
    if isinstance(raw, MatrixTuple):
        return raw
    mats = [np.asarray(a, dtype=complex) for a in raw]
    if not mats:
        raise SizeMismatch("a matrix tuple needs at least one entry")
    d = mats[0].shape[0] if mats[0].ndim == 2 else -1
    for i, a in enumerate(mats):
        if a.ndim != 2 or a.shape != (d, d):
            raise SizeMismatch(f"entry {i} has shape {a.shape}, expected ({d}, {d})")
    if d < 1 or d > MAX_SIZE:
        raise SizeMismatch(f"matrix size {d} outside supported range 1..{MAX_SIZE}")
    out = np.empty((len(mats), d, d), dtype=complex)
    for i, a in enumerate(mats):
        dev = np.linalg.norm(a - a.conj().T)
        if dev > tol_herm * max(1.0, np.linalg.norm(a)):
            raise NotHermitian(f"entry {i} deviates from hermitian by {dev:.3e}")
        out[i] = (a + a.conj().T) / 2
    return MatrixTuple(out)


@dataclass(frozen=True, eq=False)
class StarAlgebra:
    """A *-subalgebra of M_d given by an orthonormal basis, shape (dim, d, d)."""

    d: int
    basis: np.ndarray
    contains_unit: bool

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        """Orthogonal projection onto the span, as a (d^2, d^2) matrix on flattened matrices."""
        q = self.basis.reshape(self.dim, -1)
        return q.T @ q.conj()

    def contains(self, x: np.ndarray, tol: float = 1e-8) -> bool:
        v = np.asarray(x, dtype=complex).reshape(-1)
        q = self.basis.reshape(self.dim, -1)
        r = v - q.T @ (q.conj() @ v)
        return np.linalg.norm(r) <= tol * max(1.0, np.linalg.norm(v))


@total_ordering
@dataclass(frozen=True)
class OrbitType:
    """Isomorphism-with-multiplicity class of a unital subalgebra of M_d.

    ``pairs`` holds (block size, multiplicity) and is kept sorted descending,
    which makes the representation canonical.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(((int(a), int(m)) for a, m in self.pairs), reverse=True))
        if not pairs:
            raise ValueError("an orbit type needs at least one block")
        if any(a < 1 or m < 1 for a, m in pairs):
            raise ValueError(f"block sizes and multiplicities must be >= 1: {pairs}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def parse(cls, text: str) -> "OrbitType":
        """Parse strings such as ``"[(2,1),(1,1)]"`` or ``"2x1,1x1"``."""
        import re

        nums = [int(s) for s in re.findall(r"\d+", text)]
        if not nums or len(nums) % 2:
            raise ValueError(f"cannot parse orbit type {text!r}")
        return cls(tuple(zip(nums[::2], nums[1::2])))

    @classmethod
    def trivial(cls, d: int) -> "OrbitType":
        return cls(((d, 1),))

    @property
    def size(self) -> int:
        return sum(a * m for a, m in self.pairs)

    @property
    def num_blocks(self) -> int:
        return len(self.pairs)

    @property
    def sum_d2(self) -> int:
        return sum(a * a for a, _ in self.pairs)

    @property
    def sum_m2(self) -> int:
        return sum(m * m for _, m in self.pairs)

    def is_trivial(self) -> bool:
        return len(self.pairs) == 1 and self.pairs[0][1] == 1

    def __lt__(self, other):
        return self.pairs < other.pairs

    def __str__(self):
        return "[" + ",".join(f"({a},{m})" for a, m in self.pairs) + "]"

    def to_list(self) -> list[list[int]]:
        return [[a, m] for a, m in self.pairs]


# ---------------------------------------------------------------- subspaces


def _extend_orthonormal(basis: list[np.ndarray], candidates: Iterable[np.ndarray],
                        tol: float = TOL_RANK, limit: int | None = None) -> int:
    """Extend the orthonormal ``basis`` (flat vectors, in place) by the span of ``candidates``.

    Candidates are normalized and orthogonalized twice against the basis
    (classical Gram-Schmidt with a re-orthogonalization pass). New
    directions are the right singular vectors of the residual block whose
    singular values exceed ``tol``; since every candidate has unit norm this
    is a threshold relative to the candidates. Returns the number added.
    """
    c = np.array(list(candidates), dtype=complex)
    if c.size == 0:
        return 0
    norms = np.linalg.norm(c, axis=1)
    c = c[norms > 0] / norms[norms > 0, None]
    if c.shape[0] == 0:
        return 0
    q = np.array(basis) if basis else None
    if q is not None:
        for _ in range(2):
            c = c - (c @ q.conj().T) @ q
        c = c[np.linalg.norm(c, axis=1) > tol]
        if c.shape[0] == 0:
            return 0
    if c.shape[0] > c.shape[1]:
        c = np.linalg.qr(c, mode="r")  # same singular values and right vectors
    _, s, vh = np.linalg.svd(c, full_matrices=False)
    new = vh[s > tol]
    if limit is not None:
        new = new[: max(0, limit - len(basis))]
    if q is not None and new.shape[0]:
        new = new - (new @ q.conj().T) @ q
        new, _ = np.linalg.qr(new.T)
        new = new.T
    basis.extend(new)
    return new.shape[0]


def null_space(m: np.ndarray, tol: float = TOL_RANK, scale: float = 0.0) -> np.ndarray:
    """Orthonormal basis (rows) of the kernel of ``m``.

    Singular values at most ``tol * max(s_max, scale)`` count as zero;
    ``scale`` keeps a numerically vanishing map from being read as full rank.
    """
    ncols = m.shape[1]
    if m.size == 0:
        return np.eye(ncols, dtype=m.dtype)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    ref = max(s[0] if s.size else 0.0, scale)
    if ref == 0.0:
        return np.eye(ncols, dtype=m.dtype)
    rank = int(np.sum(s > tol * ref))
    return vh[rank:].conj()


def matrix_rank(m: np.ndarray, tol: float = TOL_RANK, scale: float = 0.0) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    ref = max(s[0], scale)
    if ref == 0.0:
        return 0
    return int(np.sum(s > tol * ref))


def hermitian_basis(alg: StarAlgebra, tol: float = TOL_RANK) -> np.ndarray:
    """Real orthonormal basis of the self-adjoint part of ``alg``, shape (dim, d, d)."""
    d = alg.d
    herm = []
    for q in alg.basis:
        herm.append((q + q.conj().T) / 2)
        herm.append((q - q.conj().T) / 2j)
    if not herm:
        return np.zeros((0, d, d), dtype=complex)
    h = np.array(herm).reshape(len(herm), -1)
    real = np.concatenate([h.real, h.imag], axis=1)
    u, s, vh = np.linalg.svd(real, full_matrices=False)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    rows = vh[:rank]
    n2 = d * d
    return (rows[:, :n2] + 1j * rows[:, n2:]).reshape(rank, d, d)


# ---------------------------------------------------------------- algebras


def generated_algebra(t: MatrixTuple | Sequence, unital: bool = True,
                      tol: float = TOL_RANK) -> StarAlgebra:
    """Smallest *-subalgebra of M_d containing the entries of ``t`` (and 1 if ``unital``).

    Span saturation: start from the entries, adjoin all pairwise products of
    the current basis, re-orthonormalize, and stop at a dimension fixpoint.
    """
    t = validate_tuple(t)
    d = t.d
    basis: list[np.ndarray] = []
    seeds = [a.reshape(-1) for a in t.entries]
    if unital:
        seeds.insert(0, np.eye(d, dtype=complex).reshape(-1))
    _extend_orthonormal(basis, seeds, tol)
    fresh = 0  # products among basis[:fresh] are already in the span
    for _ in range(d * d + 1):
        if not basis or len(basis) == d * d:
            break
        q = np.array(basis).reshape(-1, d, d)
        new = q[fresh:]
        prods = np.concatenate([
            np.einsum("iab,jbc->ijac", q, new).reshape(-1, d * d),
            np.einsum("iab,jbc->ijac", new, q[:fresh]).reshape(-1, d * d),
        ])
        fresh = len(basis)
        if _extend_orthonormal(basis, prods, tol, d * d) == 0:
            break
    if basis:
        arr = np.array(basis).reshape(-1, d, d)
    else:
        arr = np.zeros((0, d, d), dtype=complex)
    has_unit = unital or (len(basis) > 0 and StarAlgebra(d, arr, False).contains(np.eye(d)))
    return StarAlgebra(d, arr, bool(has_unit))


def _commutator_map(gens: np.ndarray) -> np.ndarray:
    """Matrix of c -> (g c - c g)_g on row-major flattened c."""
    d = gens.shape[-1]
    eye = np.eye(d)
    blocks = [np.kron(g, eye) - np.kron(eye, g.T) for g in gens]
    if not blocks:
        return np.zeros((0, d * d), dtype=complex)
    return np.vstack(blocks)


def commutant_of(mats: np.ndarray | Sequence, d: int | None = None,
                 tol: float = TOL_RANK) -> StarAlgebra:
    """Commutant of an arbitrary set of d x d matrices."""
    gens = np.asarray(mats, dtype=complex)
    if d is None:
        d = gens.shape[-1]
    gens = gens.reshape(-1, d, d)
    scale = max((np.linalg.norm(g) for g in gens), default=0.0)
    ns = null_space(_commutator_map(gens), tol, scale)
    return StarAlgebra(d, ns.reshape(-1, d, d), True)


def commutant(alg: StarAlgebra, tol: float = TOL_RANK) -> StarAlgebra:
    """{c in M_d : cb = bc for all b in alg}."""
    return commutant_of(alg.basis, alg.d, tol)


def center(alg: StarAlgebra, tol: float = TOL_RANK) -> StarAlgebra:
    """alg intersected with its commutant, as a subspace of alg."""
    d = alg.d
    if alg.dim == 0:
        return alg
    # coefficient vectors x with sum_i x_i [b_i, b_k] = 0 for every k
    cols = []
    for b in alg.basis:
        cols.append(np.concatenate([(b @ g - g @ b).reshape(-1) for g in alg.basis]))
    coeffs = null_space(np.array(cols).T, tol, scale=1.0)
    z = np.einsum("ki,iab->kab", coeffs, alg.basis)
    return StarAlgebra(d, z, alg.contains_unit)


def is_generating(t: MatrixTuple | Sequence, unital: bool = False,
                  tol: float = TOL_RANK) -> bool:
    """Whether the entries of ``t`` generate all of M_d as a C*-algebra.

    Decided twice: by the dimension of the span-saturated algebra and by the
    commutant of the entries being the scalars (plus, for non-unital
    generation, the tuple being nonzero). The two answers must agree.
    """
    from .errors import OracleMismatch

    t = validate_tuple(t)
    d = t.d
    by_span = generated_algebra(t, unital, tol).dim == d * d
    by_commutant = commutant_of(t.entries, d, tol).dim == 1
    if not unital:
        by_commutant = by_commutant and bool(np.any(t.entries != 0))
    if by_span != by_commutant:
        raise OracleMismatch(
            f"span saturation says {by_span}, commutant says {by_commutant} (d={d})")
    return by_span


def canonical_model(ot: OrbitType, d: int) -> StarAlgebra:
    """Block-diagonal model algebra: m_1 equal blocks of size d_1, then m_2 of size d_2, ..."""
    if ot.size != d:
        raise SizeMismatch(f"orbit type {ot} has size {ot.size}, expected {d}")
    basis = []
    offset = 0
    for a, m in ot.pairs:
        scale = 1.0 / math.sqrt(m)
        for r in range(a):
            for s in range(a):
                x = np.zeros((d, d), dtype=complex)
                for k in range(m):
                    o = offset + k * a
                    x[o + r, o + s] = scale
                basis.append(x)
        offset += a * m
    return StarAlgebra(d, np.array(basis), True)


def orbit_type(t: MatrixTuple | Sequence, seed: int | np.random.Generator | None = None,
               tol: float = TOL_RANK, gap_tol: float = GAP_TOL,
               max_retries: int = MAX_RETRIES) -> OrbitType:
    """Classify C*_1(t) up to unitary conjugacy.

    The minimal central projections of C*_1(t) are read off from the
    spectral decomposition of a random self-adjoint central element.
    """
    t = validate_tuple(t)
    d = t.d
    alg = generated_algebra(t, True, tol)
    if alg.dim == d * d:
        return OrbitType.trivial(d)
    zb = center(alg, tol)
    nblocks = zb.dim
    herm = []
    for z in zb.basis:
        herm.append((z + z.conj().T) / 2)
        herm.append((z - z.conj().T) / 2j)
    herm = np.array(herm)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(
        DEFAULT_SEED if seed is None else seed)

    for _ in range(max_retries):
        coef = rng.standard_normal(len(herm))
        h = np.einsum("k,kab->ab", coef, herm)
        h = (h + h.conj().T) / 2
        w, v = np.linalg.eigh(h)
        if nblocks == 1:
            groups = [np.arange(d)]
        else:
            diam = w[-1] - w[0]
            if diam <= 0:
                continue
            gaps = np.diff(w)
            cut = np.sort(np.argsort(gaps)[::-1][: nblocks - 1])
            inner = np.delete(gaps, cut)
            if gaps[cut].min() < gap_tol * diam:
                continue
            if inner.size and inner.max() >= gap_tol * diam:
                continue
            groups = np.split(np.arange(d), cut + 1)
        pairs = []
        for g in groups:
            vj = v[:, g]
            p = vj @ vj.conj().T
            compressed = (alg.basis @ p).reshape(alg.dim, -1)
            dj = math.isqrt(matrix_rank(compressed, 1e-8))
            rank_p = len(g)
            if dj * dj == 0 or rank_p % dj:
                break
            pairs.append((dj, rank_p // dj))
        else:
            ot = OrbitType(tuple(pairs))
            if ot.size == d and ot.sum_d2 == alg.dim:
                return ot
    raise DegenerateCenter(
        f"no central element with eigenvalue gaps above {gap_tol} after {max_retries} tries")


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def gue(d: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """GUE sample(s): standard complex normal off-diagonal, N(0,1) diagonal."""
    shape = (d, d) if size is None else (size, d, d)
    g = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    return (g + np.swapaxes(g.conj(), -1, -2)) / math.sqrt(2)


def ensure_size(d: int):
    if d < 1 or d > MAX_SIZE:
        raise PreconditionViolated(f"matrix size {d} outside 1..{MAX_SIZE}")
