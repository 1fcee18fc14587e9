"""The interference-plus-errors channel.

One trial sends an m x n GF(2) matrix through two stages: superposition
by an interference matrix A (unit diagonal, off-diagonal entries i.i.d.
Bernoulli(p)), then t bit flips at distinct uniformly chosen cells of the
m x n output.  Both stages draw from a per-trial counter-derived stream,
so any parallel schedule reproduces the same channel realisations.

Draw protocol (fixed for reproducibility): first one uniform per
off-diagonal cell in row-major order over (i, j) with j != i, then the
partial Fisher-Yates draws for the flip positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bitlinalg import BitMatrix, matmul

# Domain tags keeping simulator streams and oracle streams disjoint even
# under a shared master seed.
SIM_STREAM_TAG = 1
ORACLE_STREAM_TAG = 2


@dataclass(frozen=True)
class ChannelParams:
    """Channel configuration for one sweep point."""

    p: float
    t_errors: int = 0
    m_channels: int = 8
    n_len: int = 16

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"interference probability {self.p} outside [0, 1]")
        if self.m_channels < 1:
            raise ValueError("need at least one channel")
        if not 0 <= self.t_errors <= self.m_channels * self.n_len:
            raise ValueError(
                f"flip count {self.t_errors} outside [0, {self.m_channels * self.n_len}]"
            )


@dataclass(frozen=True)
class InterferenceMatrix:
    """Square GF(2) matrix with a forced unit diagonal."""

    a: BitMatrix

    def __post_init__(self) -> None:
        if self.a.nrows != self.a.ncols:
            raise ValueError("interference matrix must be square")
        if any(not (self.a.row(i) >> i) & 1 for i in range(self.a.nrows)):
            raise ValueError("diagonal entries must all be 1")


@dataclass(frozen=True)
class ErrorPattern:
    """Distinct (row, col) cells of the received matrix to flip."""

    positions: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if len(set(self.positions)) != len(self.positions):
            raise ValueError("flip positions must be distinct")


@dataclass(frozen=True)
class TrialRng:
    """Deterministic per-trial random stream.

    The stream is a PCG64 generator seeded by SeedSequence over
    ``(master_seed, *stream_key)``; equal keys give identical draw
    sequences on every platform.  ``stream_key`` conventionally holds
    ``(domain_tag, sweep_index, trial_index)``.
    """

    master_seed: int
    stream_key: tuple[int, ...] = ()

    @cached_property
    def stream(self) -> np.random.Generator:
        seq = np.random.SeedSequence((self.master_seed,) + self.stream_key)
        return np.random.default_rng(seq)

    @classmethod
    def for_trial(cls, master_seed: int, sweep_index: int, trial_index: int) -> "TrialRng":
        return cls(master_seed, (SIM_STREAM_TAG, sweep_index, trial_index))


def sample_interference(params: ChannelParams, rng: TrialRng) -> InterferenceMatrix:
    """Unit diagonal; each off-diagonal entry is 1 with probability p."""
    m = params.m_channels
    draws = rng.stream.random(m * (m - 1))
    rows = []
    k = 0
    for i in range(m):
        row = 1 << i
        for j in range(m):
            if j == i:
                continue
            if draws[k] < params.p:
                row |= 1 << j
            k += 1
        rows.append(row)
    return InterferenceMatrix(BitMatrix(m, m, tuple(rows)))


def sample_errors(params: ChannelParams, rng: TrialRng) -> ErrorPattern:
    """t distinct cells, uniform over the m x n grid (partial shuffle)."""
    t = params.t_errors
    mn = params.m_channels * params.n_len
    if t == 0:
        return ErrorPattern(())
    idx = list(range(mn))
    gen = rng.stream
    for k in range(t):
        j = int(gen.integers(k, mn))
        idx[k], idx[j] = idx[j], idx[k]
    return ErrorPattern(tuple(divmod(idx[k], params.n_len) for k in range(t)))


def transmit(sent: BitMatrix, a: InterferenceMatrix, e: ErrorPattern) -> BitMatrix:
    """Apply superposition then bit flips; pure function of its inputs."""
    if a.a.ncols != sent.nrows:
        raise ValueError("interference matrix width must match the packet count")
    rows = list(matmul(a.a, sent).rows)
    for r, c in e.positions:
        if not (0 <= r < sent.nrows and 0 <= c < sent.ncols):
            raise ValueError(f"flip position {(r, c)} outside the matrix")
        rows[r] ^= 1 << c
    return BitMatrix(sent.nrows, sent.ncols, tuple(rows))
