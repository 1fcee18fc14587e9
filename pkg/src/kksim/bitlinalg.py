"""Exact dense linear algebra over GF(2) with bit-packed rows.

Each matrix row is stored as a single Python integer: bit ``c`` of the
integer is the entry in column ``c`` (column 0 is the lowest bit, and the
leftmost position when the row is rendered as text).  Row operations are
whole-row XORs, which keeps reduction, rank and inversion cheap enough to
sit in the inner loop of a Monte Carlo simulator.

All values are immutable after construction and safe to share between
concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class SingularError(ValueError):
    """Raised when a square GF(2) matrix has no inverse."""


@dataclass(frozen=True)
class BitMatrix:
    """Rectangular matrix over GF(2), one int per row (bit c = column c)."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.rows) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.rows)}")
        mask = (1 << self.ncols) - 1
        for r in self.rows:
            if r < 0 or r & ~mask:
                raise ValueError("row has bits outside the declared width")

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], ncols: int | None = None) -> "BitMatrix":
        """Build from nested 0/1 entries, e.g. ``[[1, 0], [0, 1]]``."""
        packed = []
        width = ncols
        for row in rows:
            bits = list(row)
            if width is None:
                width = len(bits)
            elif len(bits) != width:
                raise ValueError("ragged rows")
            packed.append(pack_bits(bits))
        return cls(len(packed), width or 0, tuple(packed))

    @classmethod
    def from_row_ints(cls, rows: Sequence[int], ncols: int) -> "BitMatrix":
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> int:
        return self.rows[i]

    def to_lists(self) -> list[list[int]]:
        return [unpack_bits(r, self.ncols) for r in self.rows]

    def to_text(self) -> str:
        """Render as lines of '0'/'1' characters, column 0 first."""
        return "\n".join(
            "".join(str((r >> c) & 1) for c in range(self.ncols)) for r in self.rows
        )

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        return cls.from_rows([[int(ch) for ch in ln] for ln in lines])

    def __str__(self) -> str:
        return self.to_text()


def pack_bits(bits: Sequence[int]) -> int:
    """Pack a 0/1 sequence into a row int, first entry in bit 0."""
    value = 0
    for c, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"entry {b!r} is not a GF(2) value")
        value |= b << c
    return value


def unpack_bits(value: int, width: int) -> list[int]:
    """Inverse of :func:`pack_bits`."""
    return [(value >> c) & 1 for c in range(width)]


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_2^n in canonical form.

    ``basis`` is the unique reduced-row-echelon basis with zero rows
    removed, so two equal subspaces compare (and hash) identically.  The
    zero subspace is represented with a 0-row basis.
    """

    ambient_dim: int
    basis: BitMatrix

    def __post_init__(self) -> None:
        if self.basis.ncols != self.ambient_dim:
            raise ValueError("basis width does not match the ambient dimension")
        reduced, rnk = rref(self.basis)
        if rnk != self.basis.nrows or reduced != self.basis:
            raise ValueError("basis must be a zero-row-free RREF matrix")

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def contains(self, vector: int) -> bool:
        """Membership test for a packed row vector."""
        v = vector
        for row in self.basis.rows:
            pivot = row & -row
            if v & pivot:
                v ^= row
        return v == 0


def rref(m: BitMatrix) -> tuple[BitMatrix, int]:
    """Reduced row echelon form over GF(2) plus the rank.

    Row space is preserved and the result is idempotent: pivot columns
    increase strictly and each pivot is the only 1 in its column.
    """
    rows = list(m.rows)
    r = 0
    for c in range(m.ncols):
        bit = 1 << c
        pivot = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        r += 1
        if r == len(rows):
            break
    return BitMatrix(m.nrows, m.ncols, tuple(rows)), r


def rank(m: BitMatrix) -> int:
    """GF(2) rank; never exceeds min(nrows, ncols)."""
    return rref(m)[1]


def invert(a: BitMatrix) -> BitMatrix:
    """Inverse of a square GF(2) matrix.

    Raises:
        SingularError: if ``rank(a) < a.nrows`` (a lost dimension).
    """
    if a.nrows != a.ncols:
        raise ValueError("only square matrices can be inverted")
    n = a.nrows
    augmented = BitMatrix(n, 2 * n, tuple(a.rows[i] | (1 << (n + i)) for i in range(n)))
    reduced, rnk = rref(augmented)
    if rnk < n or any(reduced.rows[i] & ((1 << n) - 1) != (1 << i) for i in range(n)):
        raise SingularError(f"matrix of rank < {n} has no inverse")
    return BitMatrix(n, n, tuple(row >> n for row in reduced.rows))


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """GF(2) matrix product (XOR accumulation)."""
    if a.ncols != b.nrows:
        raise ValueError(f"shape mismatch: ({a.nrows}x{a.ncols}) @ ({b.nrows}x{b.ncols})")
    out = []
    for arow in a.rows:
        acc = 0
        sel = arow
        while sel:
            j = (sel & -sel).bit_length() - 1
            acc ^= b.rows[j]
            sel &= sel - 1
        out.append(acc)
    return BitMatrix(a.nrows, b.ncols, tuple(out))


def stack(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Vertical concatenation."""
    if a.ncols != b.ncols:
        raise ValueError("column counts differ")
    return BitMatrix(a.nrows + b.nrows, a.ncols, a.rows + b.rows)


def row_space(m: BitMatrix) -> Subspace:
    """The row space of ``m`` as a canonical :class:`Subspace`."""
    reduced, rnk = rref(m)
    return Subspace(m.ncols, BitMatrix(rnk, m.ncols, reduced.rows[:rnk]))


def subspace_distance(u: Subspace, v: Subspace) -> int:
    """dim(U+V) - dim(U∩V), the metric of constant-dimension codes.

    Computed as 2*rank([U; V]) - dim U - dim V; symmetric and satisfies
    the triangle inequality.
    """
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("subspaces live in different ambient spaces")
    return 2 * rank(stack(u.basis, v.basis)) - u.dim - v.dim


# --- batched rank kernel -------------------------------------------------
#
# rank_many mirrors rank() for a stack of small matrices given as arrays of
# packed row masks.  It exists for the two bulk consumers (ML decoding over
# a whole codebook, exhaustive singularity enumeration); the scalar rank()
# above stays the reference implementation.

_LEAD = np.zeros(1 << 16, dtype=np.uint8)
for _b in range(16):
    _LEAD[(1 << _b): (2 << _b)] = _b


def rank_many(row_masks: np.ndarray, ncols: int) -> np.ndarray:
    """GF(2) ranks of a batch of matrices.

    Args:
        row_masks: integer array of shape (batch, nrows); each entry packs
            one row (bit c = column c).  Zero rows are permitted, so callers
            may pad matrices of unequal height.
        ncols: column count, at most 16.

    Returns:
        int16 array of shape (batch,) with the rank of every matrix.
    """
    if ncols > 16:
        raise ValueError("rank_many supports at most 16 columns")
    work = np.ascontiguousarray(row_masks, dtype=np.uint16)
    batch, nrows = work.shape
    basis = np.zeros((batch, ncols), dtype=np.uint16)
    ranks = np.zeros(batch, dtype=np.int16)
    for j in range(nrows):
        v = work[:, j].copy()
        for h in range(ncols - 1, -1, -1):
            slot = basis[:, h]
            hit = (((v >> h) & 1) != 0) & (slot != 0)
            v[hit] ^= slot[hit]
        nz = np.flatnonzero(v)
        if nz.size:
            basis[nz, _LEAD[v[nz]]] = v[nz]
            ranks[nz] += 1
    return ranks
