"""Completely separating matrices: row-count bounds, generation, verification.

An h x n binary matrix is (u, w)-completely separating when every pair of
disjoint column sets I, J with |I| = u and |J| = w has a "singular" row
that is all-ones on I and all-zeros on J.  Random Bernoulli matrices reach
this property with the row counts returned by the bound functions below;
`is_completely_separating` is the exhaustive checker, feasible only at
desk scale (the pair count grows as C(n, u) * C(n-u, w)).

All logarithms in the bounds are natural: the derivations rest on
1 - x <= exp(-x), so any other base would not match the guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, Decimal, localcontext
from itertools import combinations
from typing import NamedTuple

from .bitmat import BitMatrix

__all__ = [
    "SeparatingParams",
    "SeparationCheck",
    "rows_needed_deterministic",
    "rows_needed_randomized",
    "deterministic_row_bound",
    "randomized_row_bound",
    "gen_random",
    "is_completely_separating",
    "is_pruned_separating",
    "separating_pair_count",
]

# Digits carried while evaluating the row bounds.  Generous enough that the
# float results are the correctly rounded values of the exact expressions.
_PREC = 50


def _check_deterministic_args(u: int, w: int, n: int) -> None:
    if u < 1 or w < 1:
        raise ValueError(f"need u >= 1 and w >= 1, got u={u}, w={w}")
    if u + w >= n:
        raise ValueError(f"need u + w < n, got u+w={u + w}, n={n}")


def _check_randomized_args(u: int, d: int, epsilon: float) -> None:
    if u < 1 or u >= d:
        raise ValueError(f"need 1 <= u < d, got u={u}, d={d}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"need 0 < epsilon < 1, got {epsilon}")


def _deterministic_bound_decimal(u: int, w: int, n: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = _PREC
        s = u + w
        coeff = Decimal((s**s)) / Decimal(u**u * w**w)
        ln_en_s = (Decimal(n) / Decimal(s)).ln() + 1  # ln(e*n/(u+w))
        ln_es_u = (Decimal(s) / Decimal(u)).ln() + 1  # ln(e*(u+w)/u)
        return coeff * (s * ln_en_s + u * ln_es_u) + 1


def _randomized_bound_decimal(u: int, d: int, epsilon: float) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = _PREC
        coeff = (Decimal(d) / Decimal(u)) ** u * (Decimal(d) / Decimal(d - u)) ** (d - u)
        ln_ed_u = (Decimal(d) / Decimal(u)).ln() + 1  # ln(e*d/u)
        ln_inv_eps = -Decimal(epsilon).ln()
        return coeff * (u * ln_ed_u + ln_inv_eps)


def deterministic_row_bound(u: int, w: int, n: int) -> float:
    """Real-valued row bound for a guaranteed (u, w)-separating matrix.

    Equals ((u+w)^(u+w) / (u^u w^w)) * ((u+w) ln(e n/(u+w)) + u ln(e(u+w)/u)) + 1,
    evaluated in extended precision and rounded once to float.
    """
    _check_deterministic_args(u, w, n)
    return float(_deterministic_bound_decimal(u, w, n))


def rows_needed_deterministic(u: int, w: int, n: int) -> int:
    """Ceiling of :func:`deterministic_row_bound`."""
    _check_deterministic_args(u, w, n)
    bound = _deterministic_bound_decimal(u, w, n)
    return int(bound.to_integral_value(rounding=ROUND_CEILING))


def randomized_row_bound(u: int, d: int, epsilon: float) -> float:
    """Real-valued row bound for the per-instance (1 - epsilon) guarantee.

    Equals (d/u)^u (d/(d-u))^(d-u) (u ln(e d/u) + ln(1/epsilon)).
    """
    _check_randomized_args(u, d, epsilon)
    return float(_randomized_bound_decimal(u, d, epsilon))


def rows_needed_randomized(u: int, d: int, epsilon: float) -> int:
    """Ceiling of :func:`randomized_row_bound`."""
    _check_randomized_args(u, d, epsilon)
    bound = _randomized_bound_decimal(u, d, epsilon)
    return int(bound.to_integral_value(rounding=ROUND_CEILING))


@dataclass(frozen=True)
class SeparatingParams:
    """Parameters of a (u, w)-separating construction over n items.

    epsilon = 0 marks the deterministic regime (row count from the
    existence bound); epsilon in (0, 1) marks the per-instance regime.
    """

    u: int
    w: int
    n: int
    h: int
    p: float
    epsilon: float = 0.0

    def __post_init__(self):
        if self.u < 1 or self.w < 1:
            raise ValueError("u and w must be >= 1")
        if self.h < 1:
            raise ValueError("h must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must be in [0, 1]")

    @classmethod
    def deterministic(cls, u: int, w: int, n: int) -> "SeparatingParams":
        h = rows_needed_deterministic(u, w, n)
        return cls(u=u, w=w, n=n, h=h, p=u / (u + w), epsilon=0.0)

    @classmethod
    def randomized(cls, u: int, d: int, n: int, epsilon: float) -> "SeparatingParams":
        h = rows_needed_randomized(u, d, epsilon)
        return cls(u=u, w=d - u, n=n, h=h, p=u / d, epsilon=epsilon)


def gen_random(h: int, n: int, p: float, seed) -> BitMatrix:
    """h x n matrix of independent Bernoulli(p) entries, deterministic in seed."""
    if h < 1 or n < 1:
        raise ValueError(f"shape must be positive, got {h}x{n}")
    return BitMatrix.random(h, n, p, seed)


class SeparationCheck(NamedTuple):
    """Verdict of a separating-matrix check; witness is a violating (I, J)."""

    ok: bool
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None

    def __bool__(self) -> bool:
        return self.ok


def separating_pair_count(n: int, u: int, w: int) -> int:
    """Number of (I, J) pairs the exhaustive check enumerates."""
    return math.comb(n, u) * math.comb(n - u, w)


def is_completely_separating(g: BitMatrix, u: int, w: int) -> SeparationCheck:
    """Exhaustively test the (u, w)-completely separating property.

    Returns one violating pair (1-based column sets) on failure.  Cost is
    `separating_pair_count(n, u, w)` pair checks, each O(u + w) word ops
    on the packed columns.
    """
    if u < 1 or w < 1:
        raise ValueError(f"need u >= 1 and w >= 1, got u={u}, w={w}")
    if u + w > g.cols:
        raise ValueError(f"need u + w <= cols, got u+w={u + w}, cols={g.cols}")
    cols = g.col_words
    n = g.cols
    for i_set in combinations(range(n), u):
        ones = -1
        for j in i_set:
            ones &= cols[j]
        if not ones:
            rest = [c for c in range(n) if c not in i_set][:w]
            return SeparationCheck(False, (tuple(j + 1 for j in i_set), tuple(c + 1 for c in rest)))
        remaining = [c for c in range(n) if c not in i_set]
        for j_set in combinations(remaining, w):
            zeros = 0
            for j in j_set:
                zeros |= cols[j]
            if ones & ~zeros == 0:
                return SeparationCheck(
                    False, (tuple(j + 1 for j in i_set), tuple(c + 1 for c in j_set))
                )
    return SeparationCheck(True, None)


def is_pruned_separating(g: BitMatrix, subset, u: int) -> bool:
    """Whether the column restriction of g to `subset` is (u, |S|-u)-separating.

    For |S| = u the requirement degenerates to: some row is all-ones on S.
    """
    items = tuple(subset)
    idx = sorted(set(items))
    if len(idx) != len(items):
        raise ValueError("subset contains duplicate columns")
    for j in idx:
        if not 1 <= j <= g.cols:
            raise IndexError(f"column {j} out of range [1, {g.cols}]")
    s = len(idx)
    if not u <= s <= g.cols:
        raise ValueError(f"need u <= |S| <= cols, got u={u}, |S|={s}")
    if s == u:
        ones = -1
        for j in idx:
            ones &= g.col_words[j - 1]
        return ones != 0
    pruned = BitMatrix.from_array(g.to_array()[:, [j - 1 for j in idx]])
    return bool(is_completely_separating(pruned, u, s - u))
