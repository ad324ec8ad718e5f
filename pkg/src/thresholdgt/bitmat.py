"""Dense binary matrices and vectors, bit-packed one Python int per row.

The packing is little-endian: the entry in column j (1-based) of a row is
bit j-1 of that row's integer, which makes row-wise AND/OR/popcount cheap
(`int.bit_count`).  All public indices are 1-based; packing is an internal
detail and every observable operation is entry-level.

Instances are immutable after construction and safe to share across
threads; the lazily built column packing and uint8 array views are caches
of the same bits.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "BitVector",
    "BitMatrix",
    "FormatError",
    "complement",
    "mask_columns",
    "union_columns",
    "format_matrix",
    "parse_matrix",
    "read_matrix",
    "write_matrix",
    "format_vector",
    "parse_vector",
    "read_vector",
    "write_vector",
]


class FormatError(ValueError):
    """Raised when text in the matrix/vector file format cannot be parsed."""


def _unpack_words(words: Sequence[int], nbits: int) -> np.ndarray:
    """Expand packed row ints into a (len(words), nbits) uint8 array."""
    nbytes = (nbits + 7) // 8
    buf = b"".join(w.to_bytes(nbytes, "little") for w in words)
    flat = np.frombuffer(buf, dtype=np.uint8).reshape(len(words), nbytes)
    return np.unpackbits(flat, axis=1, bitorder="little")[:, :nbits]


def _pack_row(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


class BitVector:
    """Immutable binary vector of positive length.

    `word` holds the packed bits; entry i (1-based) is bit i-1.
    """

    __slots__ = ("length", "word")

    def __init__(self, length: int, word: int = 0):
        if length < 1:
            raise ValueError(f"vector length must be >= 1, got {length}")
        if word < 0 or word >> length:
            raise ValueError("packed word has bits outside the vector length")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "word", word)

    def __setattr__(self, name, value):
        raise AttributeError("BitVector is immutable")

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "BitVector":
        return cls(length, (1 << length) - 1)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        word = 0
        n = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"entries must be 0 or 1, got {b!r}")
            word |= b << n
            n += 1
        return cls(n, word)

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"expected a nonempty string of 0/1, got {text!r}")
        return cls(len(text), int(text[::-1], 2))

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVector":
        """Indicator vector of a set of 1-based positions."""
        word = 0
        for i in indices:
            if not 1 <= i <= length:
                raise IndexError(f"index {i} out of range [1, {length}]")
            word |= 1 << (i - 1)
        return cls(length, word)

    def get(self, i: int) -> int:
        """Entry at 1-based position i."""
        if not 1 <= i <= self.length:
            raise IndexError(f"index {i} out of range [1, {self.length}]")
        return (self.word >> (i - 1)) & 1

    def count(self) -> int:
        """Number of ones."""
        return self.word.bit_count()

    def support(self) -> tuple[int, ...]:
        """Sorted 1-based positions of the ones."""
        return tuple(i + 1 for i in range(self.length) if (self.word >> i) & 1)

    def to_array(self) -> np.ndarray:
        return _unpack_words([self.word], self.length)[0]

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and self.word == other.word

    def __hash__(self) -> int:
        return hash((self.length, self.word))

    def __str__(self) -> str:
        return "".join(str((self.word >> i) & 1) for i in range(self.length))

    def __repr__(self) -> str:
        return f"BitVector.from_string({str(self)!r})"


class BitMatrix:
    """Immutable dense binary matrix, rows packed as in :class:`BitVector`."""

    __slots__ = ("rows", "cols", "row_words", "_col_words", "_array")

    def __init__(self, rows: int, cols: int, row_words: Sequence[int]):
        if rows < 1 or cols < 1:
            raise ValueError(f"matrix shape must be positive, got {rows}x{cols}")
        words = tuple(row_words)
        if len(words) != rows:
            raise ValueError(f"expected {rows} row words, got {len(words)}")
        for w in words:
            if w < 0 or w >> cols:
                raise ValueError("packed row has bits outside the column range")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "row_words", words)
        object.__setattr__(self, "_col_words", None)
        object.__setattr__(self, "_array", None)

    def __setattr__(self, name, value):
        raise AttributeError("BitMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, [0] * rows)

    @classmethod
    def ones(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, [(1 << cols) - 1] * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "BitMatrix":
        vecs = [BitVector.from_bits(r) for r in rows]
        if not vecs:
            raise ValueError("matrix needs at least one row")
        cols = vecs[0].length
        if any(v.length != cols for v in vecs):
            raise ValueError("rows have unequal lengths")
        return cls(len(vecs), cols, [v.word for v in vecs])

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> "BitMatrix":
        vecs = [BitVector.from_string(line) for line in lines]
        if not vecs:
            raise ValueError("matrix needs at least one row")
        cols = vecs[0].length
        if any(v.length != cols for v in vecs):
            raise ValueError("rows have unequal lengths")
        return cls(len(vecs), cols, [v.word for v in vecs])

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitMatrix":
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-D array")
        if a.dtype != np.uint8:
            if not np.isin(a, (0, 1)).all():
                raise ValueError("entries must be 0 or 1")
            a = a.astype(np.uint8)
        packed = np.packbits(a, axis=1, bitorder="little")
        words = [int.from_bytes(row.tobytes(), "little") for row in packed]
        return cls(a.shape[0], a.shape[1], words)

    @classmethod
    def random(cls, rows: int, cols: int, p: float, seed) -> "BitMatrix":
        """Bernoulli(p) matrix from a seeded PCG64 stream.

        Identical (seed, rows, cols, p) give an identical matrix; the
        generator is pinned to numpy's PCG64 so results are portable.
        """
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {p}")
        rng = np.random.Generator(np.random.PCG64(seed))
        return cls.from_array(rng.random((rows, cols)) < p)

    def get(self, i: int, j: int) -> int:
        """Entry at 1-based (row i, column j)."""
        if not 1 <= i <= self.rows:
            raise IndexError(f"row {i} out of range [1, {self.rows}]")
        if not 1 <= j <= self.cols:
            raise IndexError(f"column {j} out of range [1, {self.cols}]")
        return (self.row_words[i - 1] >> (j - 1)) & 1

    def row(self, i: int) -> BitVector:
        if not 1 <= i <= self.rows:
            raise IndexError(f"row {i} out of range [1, {self.rows}]")
        return BitVector(self.cols, self.row_words[i - 1])

    def column(self, j: int) -> BitVector:
        if not 1 <= j <= self.cols:
            raise IndexError(f"column {j} out of range [1, {self.cols}]")
        return BitVector(self.rows, self.col_words[j - 1])

    @property
    def col_words(self) -> tuple[int, ...]:
        """Column packing (bit i-1 of word j-1 is entry (i, j)), built lazily."""
        if self._col_words is None:
            arr = self.to_array()
            packed = np.packbits(arr.T, axis=1, bitorder="little")
            words = tuple(int.from_bytes(r.tobytes(), "little") for r in packed)
            object.__setattr__(self, "_col_words", words)
        return self._col_words

    def to_array(self) -> np.ndarray:
        """uint8 view of the entries, cached; treat as read-only."""
        if self._array is None:
            arr = _unpack_words(self.row_words, self.cols)
            arr.flags.writeable = False
            object.__setattr__(self, "_array", arr)
        return self._array

    def row_strings(self) -> list[str]:
        return [str(self.row(i)) for i in range(1, self.rows + 1)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.row_words == other.row_words
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.row_words))

    def __repr__(self) -> str:
        return f"<BitMatrix {self.rows}x{self.cols}>"


def complement(m: BitMatrix) -> BitMatrix:
    """Entry-wise flip: result[i, j] = 1 - m[i, j]."""
    full = (1 << m.cols) - 1
    return BitMatrix(m.rows, m.cols, [w ^ full for w in m.row_words])


def mask_columns(m: BitMatrix, g: BitVector) -> BitMatrix:
    """Zero out every column j with g[j] = 0 (right-multiply by diag(g))."""
    if g.length != m.cols:
        raise ValueError(f"mask length {g.length} != column count {m.cols}")
    return BitMatrix(m.rows, m.cols, [w & g.word for w in m.row_words])


def union_columns(m: BitMatrix, indices: Iterable[int]) -> BitVector:
    """Coordinate-wise OR of the selected columns (empty set gives zeros)."""
    sel = 0
    for j in indices:
        if not 1 <= j <= m.cols:
            raise IndexError(f"column {j} out of range [1, {m.cols}]")
        sel |= 1 << (j - 1)
    word = 0
    for i, rw in enumerate(m.row_words):
        if rw & sel:
            word |= 1 << i
    return BitVector(m.rows, word)


# ---------------------------------------------------------------------------
# Text format, used repo-wide:
#   matrix: "rows cols" header line, then `rows` lines of 0/1 characters;
#   vector: "len" header line, then one line of 0/1 characters.
# Lines starting with '#' are comments and are skipped on read.
# ---------------------------------------------------------------------------


def content_lines(lines: Iterator[str]) -> Iterator[str]:
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line


def matrix_from_lines(content: Iterator[str]) -> BitMatrix:
    try:
        header = next(content)
    except StopIteration:
        raise FormatError("missing matrix header line") from None
    parts = header.split()
    if len(parts) != 2:
        raise FormatError(f"matrix header must be 'rows cols', got {header!r}")
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"non-integer matrix header {header!r}") from None
    if rows < 1 or cols < 1:
        raise FormatError(f"matrix shape must be positive, got {rows}x{cols}")
    words = []
    for r in range(rows):
        try:
            line = next(content)
        except StopIteration:
            raise FormatError(f"expected {rows} matrix rows, found {r}") from None
        if len(line) != cols or set(line) - {"0", "1"}:
            raise FormatError(f"row {r + 1} must be {cols} characters of 0/1")
        words.append(int(line[::-1], 2))
    return BitMatrix(rows, cols, words)


def vector_from_lines(content: Iterator[str]) -> BitVector:
    try:
        header = next(content)
    except StopIteration:
        raise FormatError("missing vector header line") from None
    try:
        length = int(header)
    except ValueError:
        raise FormatError(f"vector header must be the length, got {header!r}") from None
    if length < 1:
        raise FormatError(f"vector length must be positive, got {length}")
    try:
        line = next(content)
    except StopIteration:
        raise FormatError("missing vector data line") from None
    if len(line) != length or set(line) - {"0", "1"}:
        raise FormatError(f"vector line must be {length} characters of 0/1")
    return BitVector.from_string(line)


def format_matrix(m: BitMatrix, comment: str | None = None) -> str:
    lines = []
    if comment is not None:
        lines.append(f"# {comment}")
    lines.append(f"{m.rows} {m.cols}")
    lines.extend(m.row_strings())
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> BitMatrix:
    return matrix_from_lines(content_lines(iter(text.splitlines())))


def write_matrix(m: BitMatrix, path, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(m, comment))


def read_matrix(path) -> BitMatrix:
    with open(path) as fh:
        return matrix_from_lines(content_lines(iter(fh)))


def format_vector(v: BitVector, comment: str | None = None) -> str:
    lines = []
    if comment is not None:
        lines.append(f"# {comment}")
    lines.extend([str(v.length), str(v)])
    return "\n".join(lines) + "\n"


def parse_vector(text: str) -> BitVector:
    return vector_from_lines(content_lines(iter(text.splitlines())))


def write_vector(v: BitVector, path, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_vector(v, comment))


def read_vector(path) -> BitVector:
    with open(path) as fh:
        return vector_from_lines(content_lines(iter(fh)))
