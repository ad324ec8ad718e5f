"""Threshold group-testing schemes: assembly, encoding, conversion, decoding.

A scheme bundles an h x n candidate-pool matrix G (rows select "indicating
subsets" of items) with a k x n (d+1)-disjunct matrix M.  The stacked
measurement matrix interleaves, per pool row, the row itself, M restricted
to the pool, and the complement of M restricted to the pool; a test is
positive when it contains at least u defective items.

Decoding walks the pool rows: rows whose gate bit fired convert their
threshold outcomes into a classical boolean outcome (three per-coordinate
rules), cover-decode it against M, and contribute their candidate set only
if it has size exactly u and reproduces the converted outcome.  The final
answer is the union over accepted rows; the validation step makes false
positives impossible whenever M is (d+1)-disjunct, for any G.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .bitmat import (
    BitMatrix,
    BitVector,
    FormatError,
    content_lines,
    matrix_from_lines,
    complement,
    format_matrix,
    union_columns,
)
from .disjunct import cover_decode, gen_rs_concatenated
from .separating import gen_random, rows_needed_deterministic, rows_needed_randomized

__all__ = [
    "MODE_DETERMINISTIC",
    "MODE_RANDOMIZED",
    "MeasurementScheme",
    "DefectiveSet",
    "RowOutcome",
    "OutcomeVector",
    "build_scheme",
    "stack_matrix",
    "threshold_encode",
    "classical_encode",
    "convert_outcomes",
    "simulate_instance",
    "decode",
    "save_scheme",
    "load_scheme",
    "format_scheme",
    "parse_scheme",
]

MODE_DETERMINISTIC = "deterministic"
MODE_RANDOMIZED = "randomized"


@dataclass(frozen=True)
class DefectiveSet:
    """Sorted set of 1-based item indices."""

    items: tuple[int, ...]

    def __post_init__(self):
        items = tuple(sorted(set(self.items)))
        if any(not isinstance(i, int) or i < 1 for i in items):
            raise ValueError("items must be positive integers")
        object.__setattr__(self, "items", items)

    @classmethod
    def of(cls, items: Iterable[int]) -> "DefectiveSet":
        return cls(tuple(items))

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, item) -> bool:
        return item in self.items


@dataclass(frozen=True)
class MeasurementScheme:
    """Measurement design for up to d defectives at threshold u among n items.

    pool_matrix is the h x n candidate-pool matrix; code_matrix the k x n
    disjunct matrix.  The implied stacked design has (2k + 1) * h tests.
    epsilon is the allowed per-instance failure probability in randomized
    mode and 0 in deterministic mode.
    """

    n: int
    d: int
    u: int
    mode: str
    epsilon: float
    seed: int
    pool_matrix: BitMatrix
    code_matrix: BitMatrix

    def __post_init__(self):
        if not 2 <= self.u <= self.d < self.n:
            raise ValueError(
                f"need 2 <= u <= d < n, got u={self.u}, d={self.d}, n={self.n}"
            )
        if self.mode not in (MODE_DETERMINISTIC, MODE_RANDOMIZED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == MODE_RANDOMIZED and not 0.0 < self.epsilon < 1.0:
            raise ValueError("randomized mode needs epsilon in (0, 1)")
        if self.mode == MODE_DETERMINISTIC and self.epsilon != 0.0:
            raise ValueError("deterministic mode needs epsilon = 0")
        if self.pool_matrix.cols != self.n or self.code_matrix.cols != self.n:
            raise ValueError("pool and code matrices must have n columns")

    @property
    def h(self) -> int:
        return self.pool_matrix.rows

    @property
    def k(self) -> int:
        return self.code_matrix.rows

    @property
    def num_tests(self) -> int:
        return (2 * self.k + 1) * self.h


def build_scheme(
    n: int,
    d: int,
    u: int,
    mode: str = MODE_DETERMINISTIC,
    seed: int = 0,
    epsilon: float | None = None,
) -> MeasurementScheme:
    """Assemble a scheme for the given parameters.

    u == d collapses the pool matrix to a single all-ones row (the
    exactly-u regime needs no pool splitting).  Otherwise the pool matrix
    is Bernoulli(u/d) with the row count from the deterministic existence
    bound (w = d - u) or the randomized per-instance bound at epsilon.
    """
    if not 2 <= u <= d < n:
        raise ValueError(f"need 2 <= u <= d < n, got u={u}, d={d}, n={n}")
    if mode == MODE_DETERMINISTIC:
        if epsilon not in (None, 0, 0.0):
            raise ValueError("deterministic mode takes no epsilon")
        epsilon = 0.0
    elif mode == MODE_RANDOMIZED:
        if epsilon is None or not 0.0 < epsilon < 1.0:
            raise ValueError("randomized mode needs epsilon in (0, 1)")
    else:
        raise ValueError(f"unknown mode {mode!r}")

    if u == d:
        pool = BitMatrix.ones(1, n)
    else:
        if mode == MODE_DETERMINISTIC:
            h = rows_needed_deterministic(u, d - u, n)
        else:
            h = rows_needed_randomized(u, d, epsilon)
        pool = gen_random(h, n, u / d, seed)
    code = gen_rs_concatenated(d, n)
    return MeasurementScheme(
        n=n, d=d, u=u, mode=mode, epsilon=epsilon, seed=seed,
        pool_matrix=pool, code_matrix=code,
    )


def stack_matrix(scheme: MeasurementScheme) -> BitMatrix:
    """Explicit (2k+1)h x n test matrix.

    Block i holds the pool row, then the code matrix and its complement
    with the columns outside the pool zeroed.
    """
    m_rows = scheme.code_matrix.row_words
    full = (1 << scheme.n) - 1
    words = []
    for gw in scheme.pool_matrix.row_words:
        words.append(gw)
        words.extend(mw & gw for mw in m_rows)
        words.extend((mw ^ full) & gw for mw in m_rows)
    return BitMatrix(scheme.num_tests, scheme.n, words)


def threshold_encode(tests: BitMatrix, x: BitVector, u: int) -> BitVector:
    """Outcome of every test row: 1 iff it contains at least u marked items.

    The comparison is on the integer intersection count, not a boolean OR.
    """
    if x.length != tests.cols:
        raise ValueError(f"item vector length {x.length} != columns {tests.cols}")
    if u < 1:
        raise ValueError(f"threshold must be >= 1, got {u}")
    word = 0
    xw = x.word
    for i, rw in enumerate(tests.row_words):
        if (rw & xw).bit_count() >= u:
            word |= 1 << i
    return BitVector(tests.rows, word)


def classical_encode(m: BitMatrix, x: BitVector) -> BitVector:
    """Boolean outcome: 1 iff the test contains any marked item.

    Equals the union of the columns selected by x, and threshold encoding
    at u = 1.
    """
    if x.length != m.cols:
        raise ValueError(f"item vector length {x.length} != columns {m.cols}")
    word = 0
    xw = x.word
    for i, rw in enumerate(m.row_words):
        if rw & xw:
            word |= 1 << i
    return BitVector(m.rows, word)


def convert_outcomes(direct: BitVector, comp: BitVector) -> BitVector:
    """Turn paired threshold outcomes into the classical boolean outcome.

    Per coordinate, with y from the code rows and yb from the complement
    rows: y = 1 -> 1; y = 0, yb = 1 -> 0; y = 0, yb = 0 -> 1.  When the
    pool holds exactly u defectives this reproduces the boolean encoding
    coordinate for coordinate.
    """
    if direct.length != comp.length:
        raise ValueError(
            f"block lengths differ: {direct.length} != {comp.length}"
        )
    full = (1 << direct.length) - 1
    word = direct.word | (full ^ (direct.word | comp.word))
    return BitVector(direct.length, word)


class RowOutcome(NamedTuple):
    """Per-pool-row outcomes: gate bit, code block, complement block."""

    gate: int
    direct: BitVector
    comp: BitVector


@dataclass(frozen=True)
class OutcomeVector:
    """Test outcomes in block layout: per pool row, [gate; k code; k comp]."""

    k: int
    rows: tuple[RowOutcome, ...]

    def __post_init__(self):
        if self.k < 1 or not self.rows:
            raise ValueError("need k >= 1 and at least one row block")
        for row in self.rows:
            if row.gate not in (0, 1):
                raise ValueError("gate bits must be 0 or 1")
            if row.direct.length != self.k or row.comp.length != self.k:
                raise ValueError("block lengths must equal k")

    @property
    def h(self) -> int:
        return len(self.rows)

    @property
    def length(self) -> int:
        return (2 * self.k + 1) * self.h

    def flat(self) -> BitVector:
        """Concatenation [gate_1, direct_1, comp_1, ..., gate_h, direct_h, comp_h]."""
        word = 0
        off = 0
        k = self.k
        for row in self.rows:
            word |= row.gate << off
            word |= row.direct.word << (off + 1)
            word |= row.comp.word << (off + 1 + k)
            off += 2 * k + 1
        return BitVector(self.length, word)

    @classmethod
    def from_flat(cls, bits: BitVector, h: int, k: int) -> "OutcomeVector":
        if bits.length != (2 * k + 1) * h:
            raise ValueError(
                f"flat length {bits.length} != (2k+1)h = {(2 * k + 1) * h}"
            )
        mask = (1 << k) - 1
        rows = []
        word = bits.word
        for _ in range(h):
            gate = word & 1
            direct = BitVector(k, (word >> 1) & mask)
            comp = BitVector(k, (word >> (1 + k)) & mask)
            rows.append(RowOutcome(gate, direct, comp))
            word >>= 2 * k + 1
        return cls(k=k, rows=tuple(rows))


def _as_index_array(scheme: MeasurementScheme, defectives) -> np.ndarray:
    items = tuple(defectives)
    idx = sorted(set(items))
    if len(idx) != len(items):
        raise ValueError("defective set contains duplicates")
    for i in idx:
        if not 1 <= i <= scheme.n:
            raise IndexError(f"item {i} out of range [1, {scheme.n}]")
    if len(idx) > scheme.d:
        raise ValueError(f"at most d={scheme.d} defectives allowed, got {len(idx)}")
    return np.asarray(idx, dtype=np.int64) - 1


def simulate_instance(scheme: MeasurementScheme, defectives) -> OutcomeVector:
    """Outcomes for a known defective set, in block layout.

    Extensionally equal to threshold-encoding the stacked matrix against
    the indicator vector and reshaping; computed per block so only the
    defective columns are touched.  Fewer than u defectives yield the
    all-zero outcome.
    """
    idx = _as_index_array(scheme, defectives)
    u = scheme.u
    k = scheme.k
    pool = scheme.pool_matrix.to_array()
    code = scheme.code_matrix.to_array()
    if idx.size == 0:
        per_row = np.zeros(scheme.h, dtype=np.int64)
        counts = np.zeros((scheme.h, k), dtype=np.int64)
    else:
        pool_s = pool[:, idx].astype(np.int64)
        code_s = code[:, idx].astype(np.int64)
        per_row = pool_s.sum(axis=1)
        counts = pool_s @ code_s.T
    gates = per_row >= u
    direct = counts >= u
    comp = (per_row[:, None] - counts) >= u
    rows = []
    for i in range(scheme.h):
        rows.append(
            RowOutcome(
                int(gates[i]),
                BitVector(k, _pack_bits(direct[i])),
                BitVector(k, _pack_bits(comp[i])),
            )
        )
    return OutcomeVector(k=k, rows=tuple(rows))


def _pack_bits(bits: np.ndarray) -> int:
    return int.from_bytes(
        np.packbits(bits.astype(np.uint8), bitorder="little").tobytes(), "little"
    )


def decode(scheme: MeasurementScheme, outcome: OutcomeVector) -> DefectiveSet:
    """Recover the defective set from a block-layout outcome vector.

    Per pool row with a fired gate: convert the paired blocks to the
    classical outcome, cover-decode it, and accept the candidates only if
    there are exactly u of them and their column union reproduces the
    converted outcome.  Accepted rows are unioned; rows are independent,
    so the result does not depend on processing order.
    """
    if outcome.k != scheme.k or outcome.h != scheme.h:
        raise ValueError(
            f"outcome blocks {outcome.h}x{outcome.k} do not match scheme "
            f"{scheme.h}x{scheme.k}"
        )
    code = scheme.code_matrix
    u = scheme.u
    found: set[int] = set()
    for row in outcome.rows:
        if not row.gate:
            continue
        classical = convert_outcomes(row.direct, row.comp)
        candidates = cover_decode(code, classical)
        if len(candidates) == u and union_columns(code, candidates) == classical:
            found.update(candidates)
    return DefectiveSet.of(found)


# ---------------------------------------------------------------------------
# Scheme serialization: one text file with a key-value header followed by the
# two matrices in the shared text format, each introduced by a marker line.
# ---------------------------------------------------------------------------

_HEADER_KEYS = ("n", "d", "u", "mode", "epsilon", "seed", "h", "k")


def format_scheme(scheme: MeasurementScheme) -> str:
    parts = [
        f"n {scheme.n}",
        f"d {scheme.d}",
        f"u {scheme.u}",
        f"mode {scheme.mode}",
        f"epsilon {scheme.epsilon!r}",
        f"seed {scheme.seed}",
        f"h {scheme.h}",
        f"k {scheme.k}",
        "pool",
        format_matrix(scheme.pool_matrix).rstrip("\n"),
        "code",
        format_matrix(scheme.code_matrix).rstrip("\n"),
    ]
    return "\n".join(parts) + "\n"


def parse_scheme(text: str) -> MeasurementScheme:
    content = content_lines(iter(text.splitlines()))
    header: dict[str, str] = {}
    for line in content:
        if line == "pool":
            break
        key, _, value = line.partition(" ")
        if not value:
            raise FormatError(f"malformed header line {line!r}")
        header[key] = value
    else:
        raise FormatError("missing 'pool' matrix section")
    missing = [key for key in _HEADER_KEYS if key not in header]
    if missing:
        raise FormatError(f"scheme header missing keys: {', '.join(missing)}")
    try:
        n = int(header["n"])
        d = int(header["d"])
        u = int(header["u"])
        epsilon = float(header["epsilon"])
        seed = int(header["seed"])
        h = int(header["h"])
        k = int(header["k"])
    except ValueError:
        raise FormatError("non-numeric value in scheme header") from None
    pool = matrix_from_lines(content)
    try:
        marker = next(content)
    except StopIteration:
        raise FormatError("missing 'code' matrix section") from None
    if marker != "code":
        raise FormatError(f"expected 'code' section, got {marker!r}")
    code = matrix_from_lines(content)
    if pool.rows != h or pool.cols != n or code.rows != k or code.cols != n:
        raise FormatError("matrix shapes do not match the scheme header")
    return MeasurementScheme(
        n=n, d=d, u=u, mode=header["mode"], epsilon=epsilon, seed=seed,
        pool_matrix=pool, code_matrix=code,
    )


def save_scheme(scheme: MeasurementScheme, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_scheme(scheme))


def load_scheme(path) -> MeasurementScheme:
    with open(path) as fh:
        return parse_scheme(fh.read())
