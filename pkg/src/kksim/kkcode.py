"""Construction and decoding of a (16, 256, 16, 8) constant-dimension code.

Codewords are 8-dimensional subspaces of F_2^16 written in lifted form
[I_8 | X]: the left block is the identity, the right block is the 8x8
expansion of ``message * g_j`` over GF(2^8) for evaluation points g_j.
With a single message symbol this yields 256 codewords whose pairwise
subspace distance is exactly 16, so any received subspace at distance
at most 7 from a codeword decodes unambiguously.

Decoding is exhaustive minimum-distance search over the whole codebook.
`MlDecoder` vectorises that search with numpy; `subspace_distance` from
:mod:`kksim.bitlinalg` remains the plain reference metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources

import numpy as np

from .bitlinalg import (
    BitMatrix,
    Subspace,
    rank,
    rank_many,
    row_space,
    rref,
    subspace_distance,
)
from .gf2m import FieldElement, FieldParams, default_field, expand_bits, eval_linearized


class AmbiguousError(Exception):
    """Two or more codewords tie for the minimum subspace distance."""


@dataclass(frozen=True)
class CodeParams:
    """Parameters of the lifted code.

    ``eval_points`` must be GF(2)-linearly independent, one per codeword
    row; the codebook then contains ``card = 2^m`` equidistant words.
    """

    n_ambient: int
    k_dim: int
    card: int
    d_min: int
    field: FieldParams
    eval_points: tuple[FieldElement, ...]

    def __post_init__(self) -> None:
        if self.n_ambient != self.k_dim + self.field.m:
            raise ValueError("ambient length must be k_dim + field degree")
        if self.card != 1 << self.field.m:
            raise ValueError("cardinality must be 2^m")
        if self.d_min != 2 * self.k_dim:
            raise ValueError("minimum distance of the lifted code is 2*k_dim")
        if len(self.eval_points) != self.k_dim:
            raise ValueError("need exactly k_dim evaluation points")
        if any(g.params != self.field for g in self.eval_points):
            raise ValueError("evaluation points from a different field")
        expansions = BitMatrix.from_rows(
            [expand_bits(g) for g in self.eval_points], self.field.m
        )
        if rank(expansions) != self.k_dim:
            raise ValueError("evaluation points are GF(2)-linearly dependent")


def standard_params(field: FieldParams | None = None) -> CodeParams:
    """Default parameters: evaluation points x^0 .. x^7 over 0x11D."""
    field = field or default_field()
    return CodeParams(
        n_ambient=2 * field.m,
        k_dim=field.m,
        card=1 << field.m,
        d_min=2 * field.m,
        field=field,
        eval_points=field.alpha_powers(field.m),
    )


def params_containing(matrix: BitMatrix, field: FieldParams | None = None) -> CodeParams:
    """Parameters whose codebook contains ``matrix`` (as message 1).

    ``matrix`` must be a lifted codeword [I | X] with an invertible right
    block; its X rows become the evaluation points, so ``encode(1)``
    reproduces the matrix bit for bit.
    """
    field = field or default_field()
    k = matrix.nrows
    if matrix.ncols != k + field.m:
        raise ValueError("matrix width does not match k_dim + field degree")
    kmask = (1 << k) - 1
    if any(matrix.row(j) & kmask != 1 << j for j in range(k)):
        raise ValueError("left block is not the identity")
    points = tuple(field.element(matrix.row(j) >> k) for j in range(k))
    return CodeParams(
        n_ambient=matrix.ncols,
        k_dim=k,
        card=1 << field.m,
        d_min=2 * k,
        field=field,
        eval_points=points,
    )


@dataclass(frozen=True)
class Codeword:
    """One codeword: the message symbol, its [I | X] matrix, its subspace."""

    message: FieldElement
    matrix: BitMatrix
    subspace: Subspace


@dataclass(frozen=True)
class Codebook:
    """All ``card`` codewords, indexed by message value."""

    params: CodeParams
    words: tuple[Codeword, ...]

    @cached_property
    def decoder(self) -> "MlDecoder":
        return MlDecoder(self)

    def __hash__(self) -> int:
        return hash((self.params.field, self.params.eval_points))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Codebook) and self.params == other.params


def encode(message: FieldElement | int, params: CodeParams) -> Codeword:
    """Lifted codeword for one message symbol.

    Row j is e_j | expand(message * g_j); column ``k_dim + c`` carries the
    x^c coefficient, so packing the expansion reproduces the element value.
    """
    if isinstance(message, int):
        message = params.field.element(message)
    elif message.params != params.field:
        raise ValueError("message from a different field")
    k = params.k_dim
    rows = []
    for j, g in enumerate(params.eval_points):
        symbol = eval_linearized(message, g)
        rows.append((1 << j) | (symbol.value << k))
    matrix = BitMatrix(k, params.n_ambient, tuple(rows))
    return Codeword(message, matrix, row_space(matrix))


@lru_cache(maxsize=8)
def generate_codebook(params: CodeParams) -> Codebook:
    """Encode every message.

    Construction guarantees equidistance: the right blocks differ by the
    full-rank expansion of (a XOR b), which the cheap structural check
    below confirms; the exhaustive pairwise check lives in the test suite.
    """
    words = tuple(encode(m, params) for m in range(params.card))
    for word in words[1:]:
        right = BitMatrix(
            params.k_dim,
            params.field.m,
            tuple(r >> params.k_dim for r in word.matrix.rows),
        )
        if rank(right) != params.k_dim:
            raise ValueError(
                f"right block of message {word.message.value:#x} is rank-deficient"
            )
    return Codebook(params, words)


def extract_packets(word: Codeword) -> tuple[int, ...]:
    """The codeword rows as packed vectors; row i is destination i's packet."""
    return word.matrix.rows


def load_reference_codeword() -> BitMatrix:
    """The sample codeword bundled with the package (text fixture)."""
    text = resources.files("kksim.data").joinpath("reference_codeword.txt").read_text()
    return BitMatrix.from_text(text)


class MlDecoder:
    """Exhaustive minimum-subspace-distance decoder over one codebook.

    For a lifted codeword C = [I | X] and a received basis row u = (L | R),
    eliminating L against the identity block leaves the residual
    R XOR (L . X), so

        distance(U, C) = k_dim - dim(U) + 2 * rank({R_j XOR L_j . X}).

    The residual ranks for all codewords are computed in one numpy batch;
    ties are reported instead of resolved.
    """

    _CHUNK = 1024

    def __init__(self, book: Codebook) -> None:
        params = book.params
        if params.field.m > 16 or params.k_dim > 16:
            raise ValueError("decoder tables support blocks up to 16 bits")
        self.book = book
        self._k = params.k_dim
        self._m = params.field.m
        self._n = params.n_ambient
        # Right blocks of every codeword, shape (card, k_dim).
        self._xb = np.array(
            [[w.matrix.row(j) >> self._k for j in range(self._k)] for w in book.words],
            dtype=np.uint16,
        )

    def decode(self, received: Subspace) -> tuple[Codeword, int]:
        """Nearest codeword and its distance; raises on ties."""
        result = self.decode_many([received])[0]
        if result is None:
            raise AmbiguousError("no unique nearest codeword")
        return result

    def decode_many(
        self, received: list[Subspace]
    ) -> list[tuple[Codeword, int] | None]:
        """Batch variant of :meth:`decode`; ties come back as ``None``."""
        out: list[tuple[Codeword, int] | None] = []
        for start in range(0, len(received), self._CHUNK):
            out.extend(self._decode_chunk(received[start: start + self._CHUNK]))
        return out

    def _decode_chunk(
        self, received: list[Subspace]
    ) -> list[tuple[Codeword, int] | None]:
        if not received:
            return []
        for s in received:
            if s.ambient_dim != self._n:
                raise ValueError(f"received subspace not in F_2^{self._n}")
        batch = len(received)
        card = self.book.params.card
        dims = np.array([s.dim for s in received], dtype=np.int16)
        rmax = max(1, int(dims.max()))
        kmask = (1 << self._k) - 1
        left = np.zeros((batch, rmax), dtype=np.uint16)
        resid = np.zeros((batch, rmax), dtype=np.uint16)
        for b, s in enumerate(received):
            for j, row in enumerate(s.basis.rows):
                left[b, j] = row & kmask
                resid[b, j] = row >> self._k
        # Residual tensor W[b, c, j] = R_j XOR (L_j . X_c), built bit by bit.
        w = np.broadcast_to(resid[:, None, :], (batch, card, rmax)).copy()
        for i in range(self._k):
            sel = ((left >> i) & 1).astype(bool)
            w ^= np.where(sel[:, None, :], self._xb[None, :, i, None], np.uint16(0))
        ranks = rank_many(w.reshape(batch * card, rmax), self._m)
        dists = (self._k - dims)[:, None] + 2 * ranks.reshape(batch, card).astype(np.int16)
        best = dists.min(axis=1)
        tie_counts = (dists == best[:, None]).sum(axis=1)
        winners = dists.argmin(axis=1)
        out: list[tuple[Codeword, int] | None] = []
        for b in range(batch):
            if tie_counts[b] > 1:
                out.append(None)
            else:
                out.append((self.book.words[winners[b]], int(best[b])))
        return out


def decode_ml(received: Subspace, book: Codebook) -> tuple[Codeword, int]:
    """Exhaustive ML decoding; unique minimiser required.

    Raises:
        AmbiguousError: when two or more codewords tie (the harness counts
            this as a decoding failure).
    """
    return book.decoder.decode(received)


@dataclass(frozen=True)
class FixtureReport:
    """Structural verdicts for a candidate codeword matrix.

    Membership fields are informational: they relate the matrix to one
    generated codebook without requiring it to be a member.
    """

    in_rref: bool
    left_block_is_identity: bool
    full_rank: bool
    right_block_full_rank: bool
    subspace_dim: int
    expected_dim: int
    nearest_message: int
    nearest_distance: int
    words_within_unique_radius: int
    is_member: bool

    @property
    def structural_ok(self) -> bool:
        return (
            self.in_rref
            and self.left_block_is_identity
            and self.full_rank
            and self.right_block_full_rank
            and self.subspace_dim == self.expected_dim
        )

    def lines(self) -> list[str]:
        yes = {True: "ok", False: "FAIL"}
        return [
            f"rref form: {yes[self.in_rref]}",
            f"pivots span the left identity block: {yes[self.left_block_is_identity]}",
            f"full rank: {yes[self.full_rank]}",
            f"right block full rank: {yes[self.right_block_full_rank]}",
            f"row-space dimension: {self.subspace_dim} (expected {self.expected_dim})",
            f"nearest generated codeword: message {self.nearest_message:#04x}"
            f" at distance {self.nearest_distance}",
            f"codewords within unique-decoding radius: {self.words_within_unique_radius}",
            f"member of the generated codebook: {'yes' if self.is_member else 'no'}",
        ]


def verify_fixture(fix: BitMatrix, params: CodeParams) -> FixtureReport:
    """Check a candidate matrix structurally and report codebook proximity."""
    k, n = params.k_dim, params.n_ambient
    if fix.nrows != k or fix.ncols != n:
        raise ValueError(f"expected a {k}x{n} matrix")
    reduced, rnk = rref(fix)
    kmask = (1 << k) - 1
    left_ok = all(fix.row(j) & kmask == 1 << j for j in range(k))
    right = BitMatrix(k, params.field.m, tuple(r >> k for r in fix.rows))
    space = row_space(fix)
    book = generate_codebook(params)
    dists = [subspace_distance(space, w.subspace) for w in book.words]
    nearest = min(range(len(dists)), key=dists.__getitem__)
    radius = params.d_min // 2 - 1
    return FixtureReport(
        in_rref=reduced == fix,
        left_block_is_identity=left_ok,
        full_rank=rnk == k,
        right_block_full_rank=rank(right) == k,
        subspace_dim=space.dim,
        expected_dim=k,
        nearest_message=nearest,
        nearest_distance=dists[nearest],
        words_within_unique_radius=sum(1 for d in dists if d <= radius),
        is_member=dists[nearest] == 0,
    )
