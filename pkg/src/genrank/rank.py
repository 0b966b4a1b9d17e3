"""Integer calculator for generator rank, real rank and generator counts.

Inputs are dimension profiles of subhomogeneous algebras: for each
representation dimension d the local dimension of the part X_d of the
primitive ideal space carrying d-dimensional irreducible representations.
Infinite dimensions are represented by ``math.inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Union

from .errors import EmptyProfile, MissingSquareDimension, PreconditionViolated

INF = math.inf
Dim = Union[int, float]  # float only for math.inf


def _ceil_div(num: Dim, den: int) -> Dim:
    if num == INF:
        return INF
    return -(-int(num) // den)


def _check_dim(value, what: str) -> Dim:
    if value == INF:
        return INF
    if isinstance(value, bool) or int(value) != value or value < 0:
        raise PreconditionViolated(f"{what} must be a nonnegative integer or infinity, got {value!r}")
    return int(value)


def gr_homogeneous(d: int, locdim_X: Dim, locdim_XX: Optional[Dim] = None) -> Dim:
    """Generator rank of a d-homogeneous algebra with spectrum X.

    For d = 1 this is locdim(X x X); for d >= 2 it is ceil((locdim X + 1) / (2d - 2)).
    """
    if d < 1:
        raise PreconditionViolated(f"d must be >= 1, got {d}")
    locdim_X = _check_dim(locdim_X, "locdim_X")
    if d == 1:
        if locdim_XX is None:
            raise MissingSquareDimension("d = 1 needs locdim(X x X)")
        return _check_dim(locdim_XX, "locdim_XX")
    return _ceil_div(locdim_X + 1, 2 * d - 2)


@dataclass(frozen=True)
class DimensionProfile:
    """Per-dimension local dimensions; a missing key means X_d is empty."""

    entries: Mapping[int, Dim]
    locdim_X1_square: Optional[Dim] = None
    square_defaulted: bool = False

    def __post_init__(self):
        entries = {}
        for d, v in self.entries.items():
            d = int(d)
            if d < 1:
                raise PreconditionViolated(f"representation dimension must be >= 1, got {d}")
            if v is None:
                continue
            entries[d] = _check_dim(v, f"locdim(X_{d})")
        if not entries:
            raise EmptyProfile("profile has no nonempty X_d")
        object.__setattr__(self, "entries", dict(sorted(entries.items())))
        sq = self.locdim_X1_square
        if 1 in entries:
            if sq is None:
                raise MissingSquareDimension("X_1 is nonempty but locdim(X_1 x X_1) is missing")
            sq = _check_dim(sq, "locdim(X_1 x X_1)")
            l1 = entries[1]
            if not (l1 <= sq <= 2 * l1):
                raise PreconditionViolated(
                    f"locdim(X_1 x X_1) = {sq} must lie between {l1} and {2 * l1}")
            object.__setattr__(self, "locdim_X1_square", sq)
        else:
            object.__setattr__(self, "locdim_X1_square", None)

    @classmethod
    def basic(cls, entries: Mapping[int, Dim]) -> "DimensionProfile":
        """Profile whose X_1 (if present) is assumed of basic type: dim(X x X) = 2 dim X."""
        sq = None
        defaulted = False
        if entries.get(1) is not None:
            sq = 2 * entries[1] if entries[1] != INF else INF
            defaulted = True
        return cls(entries, sq, defaulted)

    @property
    def max_d(self) -> int:
        return max(self.entries)

    def restrict(self, keep) -> "DimensionProfile":
        """Sub-profile on the representation dimensions for which ``keep(d)`` holds."""
        ent = {d: v for d, v in self.entries.items() if keep(d)}
        sq = self.locdim_X1_square if 1 in ent else None
        return DimensionProfile(ent, sq, self.square_defaulted and 1 in ent)

    def to_dict(self) -> dict:
        dims = {}
        for d, v in self.entries.items():
            item = {"locdim": _json_dim(v)}
            if d == 1:
                item["square"] = _json_dim(self.locdim_X1_square)
            dims[str(d)] = item
        return {"dims": dims}


def _json_dim(v: Dim):
    return "inf" if v == INF else v


@dataclass(frozen=True)
class RankResult:
    gr: Dim
    per_d_contributions: dict = field(default_factory=dict)
    dominating_d: int = 0
    square_defaulted: bool = False

    def to_dict(self) -> dict:
        return {
            "gr": _json_dim(self.gr),
            "per_d_contributions": {str(d): _json_dim(v)
                                    for d, v in self.per_d_contributions.items()},
            "dominating_d": self.dominating_d,
            "square_defaulted": self.square_defaulted,
        }


def gr_subhomogeneous(p: DimensionProfile) -> RankResult:
    """Generator rank of a subhomogeneous algebra from its dimension profile.

    gr = max(locdim(X_1 x X_1), sup over d >= 2 of ceil((locdim X_d + 1) / (2d - 2))),
    and it coincides with gr_0 for these algebras.
    """
    if not p.entries:
        raise EmptyProfile("profile has no nonempty X_d")
    contrib = {}
    for d, loc in p.entries.items():
        contrib[d] = gr_homogeneous(d, loc, p.locdim_X1_square if d == 1 else None)
    gr = max(contrib.values())
    dominating = min(d for d, v in contrib.items() if v == gr)
    return RankResult(gr, contrib, dominating, p.square_defaulted)


def merge_profiles(p: DimensionProfile, q: DimensionProfile) -> DimensionProfile:
    """Profile of the direct sum: locdim of a disjoint union is the maximum."""
    ent = dict(p.entries)
    for d, v in q.entries.items():
        ent[d] = max(ent.get(d, v), v)
    sq = None
    if 1 in ent:
        sq = max(x for x in (p.locdim_X1_square, q.locdim_X1_square) if x is not None)
    return DimensionProfile(ent, sq, p.square_defaulted or q.square_defaulted)


def gr_direct_sum(a: RankResult, b: RankResult) -> Dim:
    return max(a.gr, b.gr)


def cube_bundle_table(m: int, d: int) -> tuple[int, int, int]:
    """(gen, rr, gr) of C([0,1]^m, M_d): minimal number of self-adjoint
    generators, real rank and generator rank."""
    if m < 1 or d < 2:
        raise PreconditionViolated(f"need m >= 1 and d >= 2, got m={m}, d={d}")
    gen = math.ceil(Fraction(m - 1, d * d) + 1)
    rr = math.ceil(Fraction(m, 2 * d - 1))
    gr = math.ceil(Fraction(m + 1, 2 * d - 2))
    return gen, rr, gr


def extension_bounds(gr_I: Dim, gr_Q: Dim) -> tuple[Dim, Dim]:
    """Bounds on gr(A) for an extension of A/I by the ideal I: max <= gr(A) <= sum + 1."""
    gr_I = _check_dim(gr_I, "gr_I")
    gr_Q = _check_dim(gr_Q, "gr_Q")
    return max(gr_I, gr_Q), gr_I + gr_Q + 1


def gr_from_gr0_rr(gr0: Dim, rr: Dim, check: bool = True) -> Dim:
    """gr = max(rr, gr_0); with ``check`` also enforce gr <= gr_0 + 1."""
    gr0 = _check_dim(gr0, "gr0")
    rr = _check_dim(rr, "rr")
    gr = max(rr, gr0)
    if check and gr > gr0 + 1:
        raise PreconditionViolated(f"rr={rr} exceeds gr_0 + 1 = {gr0 + 1}")
    return gr


def profile_from_json(doc: Mapping) -> DimensionProfile:
    """Parse ``{"dims": {"1": {"locdim": 1, "square": 2}, "2": {"locdim": 3}}}``.

    A locdim of null or ``"empty": true`` marks an empty X_d; ``"inf"`` is
    infinite. A missing square for d = 1 falls back to the basic type.
    """
    dims = doc.get("dims")
    if not isinstance(dims, Mapping):
        raise PreconditionViolated('profile JSON needs a "dims" object')
    entries = {}
    square = None
    for key, item in dims.items():
        if not isinstance(item, Mapping):
            item = {"locdim": item}
        if item.get("empty"):
            continue
        entries[int(key)] = _parse_dim(item.get("locdim"))
        if int(key) == 1 and item.get("square") is not None:
            square = _parse_dim(item["square"])
    if entries.get(1) is not None and square is None:
        return DimensionProfile.basic(entries)
    return DimensionProfile(entries, square)


def _parse_dim(v):
    if v is None:
        return None
    if isinstance(v, str):
        if v.lower() in ("inf", "infinity"):
            return INF
        return int(v)
    return v
