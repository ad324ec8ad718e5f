"""Disjunct matrices: construction, verification, and cover decoding.

A matrix is r-disjunct when no union of up to r columns contains any other
column; such a matrix lets the cover decoder recover any defective set of
size <= r exactly from the classical boolean test outcome.

The explicit construction concatenates a Reed-Solomon code of length q and
message length kc over a prime field F_q with the positional unit code:
column j is the indicator, over q*q rows (one per code position/symbol
pair), of the codeword for message j-1.  Distinct codewords agree in at
most kc-1 positions, so the matrix is r-disjunct whenever r*(kc-1) < q;
parameters are chosen as the smallest prime q (then smallest kc) with
q^kc >= n and floor((q-1)/(kc-1)) >= d+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .bitmat import BitMatrix, BitVector

__all__ = [
    "ConstructionError",
    "DisjunctParams",
    "RsParams",
    "rs_parameters",
    "gen_rs_concatenated",
    "gen_random_disjunct",
    "DisjunctCheck",
    "is_disjunct",
    "cover_decode",
    "disjunct_subset_count",
    "RS_CONSTRUCTION",
    "RANDOM_CONSTRUCTION",
    "MAX_FIELD_SIZE",
]

RS_CONSTRUCTION = "reed-solomon-concatenation"
RANDOM_CONSTRUCTION = "random-bernoulli"

# Largest prime field searched for the explicit construction.
MAX_FIELD_SIZE = 8192


class ConstructionError(ValueError):
    """No feasible construction parameters within the configured caps."""


def _primes(limit: int):
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return (i for i in range(2, limit + 1) if sieve[i])


class RsParams(NamedTuple):
    """Chosen field size, message length, and row count (q * q)."""

    q: int
    message_len: int
    rows: int


def _check_shape(d: int, n: int) -> None:
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    if d + 1 >= n:
        raise ValueError(f"need d + 1 < n, got d={d}, n={n}")


def rs_parameters(d: int, n: int, max_field: int = MAX_FIELD_SIZE) -> RsParams:
    """Smallest feasible (q, kc) for a (d+1)-disjunct matrix with n columns."""
    _check_shape(d, n)
    for q in _primes(max_field):
        kc = 1
        span = q
        while span < n:
            kc += 1
            span *= q
        if kc == 1 or (q - 1) // (kc - 1) >= d + 1:
            return RsParams(q, kc, q * q)
    raise ConstructionError(
        f"no prime field up to {max_field} supports d={d}, n={n}"
    )


def gen_rs_concatenated(d: int, n: int, max_field: int = MAX_FIELD_SIZE) -> BitMatrix:
    """Explicit (d+1)-disjunct matrix with q^2 rows and n columns.

    Column j encodes the polynomial whose coefficients are the base-q
    digits of j-1 (so the kept columns are the first n messages in
    lexicographic order, most significant digit first).  Every column has
    exactly q ones, one per code position.
    """
    q, kc, rows = rs_parameters(d, n, max_field)
    words = [0] * rows
    for j in range(n):
        coeffs = []
        v = j
        for _ in range(kc):
            coeffs.append(v % q)
            v //= q
        bit = 1 << j
        for x in range(q):
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * x + c) % q
            words[x * q + acc] |= bit
    return BitMatrix(rows, n, words)


def gen_random_disjunct(d: int, n: int, seed) -> BitMatrix:
    """Bernoulli fallback generator; (d+1)-disjunct with high probability.

    Uses density 1/(d+2) and ceil(3*(d+2)^2*ln n) rows, the standard
    probabilistic sizing for (d+1)-disjunctness.
    """
    _check_shape(d, n)
    k = math.ceil(3 * (d + 2) ** 2 * math.log(n))
    return BitMatrix.random(k, n, 1.0 / (d + 2), seed)


@dataclass(frozen=True)
class DisjunctParams:
    """Target disjunctness d+1, shape, and construction choice."""

    d: int
    n: int
    k: int
    construction: str

    def __post_init__(self):
        if self.k < 1 or self.n < 2 or self.d + 1 >= self.n:
            raise ValueError(
                f"need k >= 1, n >= 2, d + 1 < n; got k={self.k}, n={self.n}, d={self.d}"
            )
        if self.construction not in (RS_CONSTRUCTION, RANDOM_CONSTRUCTION):
            raise ValueError(f"unknown construction {self.construction!r}")

    @classmethod
    def reed_solomon(cls, d: int, n: int, max_field: int = MAX_FIELD_SIZE) -> "DisjunctParams":
        return cls(d=d, n=n, k=rs_parameters(d, n, max_field).rows, construction=RS_CONSTRUCTION)

    @classmethod
    def random_bernoulli(cls, d: int, n: int) -> "DisjunctParams":
        _check_shape(d, n)
        k = math.ceil(3 * (d + 2) ** 2 * math.log(n))
        return cls(d=d, n=n, k=k, construction=RANDOM_CONSTRUCTION)


class DisjunctCheck(NamedTuple):
    """Verdict of a disjunctness check; witness is (covered column, covering set)."""

    ok: bool
    witness: tuple[int, tuple[int, ...]] | None

    def __bool__(self) -> bool:
        return self.ok


def disjunct_subset_count(n: int, r: int) -> int:
    """Number of column subsets the exhaustive check enumerates."""
    return math.comb(n, r)


def is_disjunct(m: BitMatrix, r: int) -> DisjunctCheck:
    """Exhaustively test r-disjunctness.

    Enumerates subsets of size exactly r; a column covered by a smaller
    set is also covered by any size-r superset, so the verdict equals the
    all-sizes-up-to-r definition.  Returns a violating (column, subset)
    pair, 1-based, on failure.
    """
    if not 1 <= r < m.cols:
        raise ValueError(f"need 1 <= r < cols, got r={r}, cols={m.cols}")
    cols = m.col_words
    n = m.cols
    for subset in combinations(range(n), r):
        union = 0
        for j in subset:
            union |= cols[j]
        notunion = ~union
        for j in range(n):
            if j in subset:
                continue
            if cols[j] & notunion == 0:
                return DisjunctCheck(False, (j + 1, tuple(c + 1 for c in subset)))
    return DisjunctCheck(True, None)


def cover_decode(m: BitMatrix, outcome: BitVector) -> tuple[int, ...]:
    """Columns whose support lies inside the outcome's support, 1-based sorted.

    When m is (d+1)-disjunct and the outcome is the union of at most d+1
    columns, the result is exactly the index set of those columns.
    """
    if outcome.length != m.rows:
        raise ValueError(
            f"outcome length {outcome.length} != row count {m.rows}"
        )
    absent = ~outcome.word
    return tuple(j + 1 for j, cw in enumerate(m.col_words) if cw & absent == 0)
