"""Independent ground truth for the Monte Carlo estimates.

Closed forms and exhaustive enumeration computed here never touch the
simulator's sampling path: Monte Carlo estimates in this module draw from
a stream domain-separated from the simulator's (different derivation
tag), so agreement between the two is evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bitlinalg import rank_many
from .channel import ORACLE_STREAM_TAG, TrialRng

ALWAYS_CORRECT = "always_correct"
NO_GUARANTEE = "no_guarantee"

_ENUM_LIMIT = 5  # 2^(m(m-1)) patterns; m=5 is already 2^20


@dataclass(frozen=True)
class OracleResult:
    value: float
    method: str  # closed_form | enumeration | monte_carlo_independent
    detail: str
    stderr: float | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError("oracle value must be a probability")


def routing_failure_exact(p: float, m: int) -> tuple[float, float]:
    """Error-free routing failure: (per destination, whole system).

    A destination succeeds iff its m-1 interference coefficients are all
    zero (the packet rows are linearly independent, so interference never
    cancels); the system succeeds iff all m(m-1) coefficients are zero.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p outside [0, 1]")
    per_destination = 1.0 - (1.0 - p) ** (m - 1)
    system = 1.0 - (1.0 - p) ** (m * (m - 1))
    return per_destination, system


@lru_cache(maxsize=None)
def _singular_counts_by_weight(m: int) -> tuple[int, ...]:
    """Number of singular unit-diagonal matrices per off-diagonal weight.

    Enumerates all 2^(m(m-1)) off-diagonal patterns in one vectorised
    sweep; entry w counts the singular matrices with exactly w ones.
    """
    cells = [(i, j) for i in range(m) for j in range(m) if j != i]
    n_cells = len(cells)
    patterns = np.arange(1 << n_cells, dtype=np.uint32)
    rows = np.zeros((patterns.size, m), dtype=np.uint16)
    for i in range(m):
        rows[:, i] = 1 << i
    weights = np.zeros(patterns.size, dtype=np.uint8)
    for k, (i, j) in enumerate(cells):
        bit = ((patterns >> k) & 1).astype(np.uint16)
        rows[:, i] |= bit << j
        weights += bit.astype(np.uint8)
    singular = rank_many(rows, m) < m
    counts = np.bincount(weights[singular], minlength=n_cells + 1)
    return tuple(int(c) for c in counts)


def singular_probability(
    p: float,
    m: int,
    method: str = "auto",
    trials: int = 200_000,
    master_seed: int = 0,
) -> OracleResult:
    """Probability that a unit-diagonal Bernoulli(p) matrix is singular.

    Enumeration is exact and available for m <= 5; Monte Carlo serves any
    m and reports its standard error.  ``auto`` picks enumeration when it
    fits.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p outside [0, 1]")
    if method == "auto":
        method = "enumeration" if m <= _ENUM_LIMIT else "monte_carlo"
    if method == "enumeration":
        if m > _ENUM_LIMIT:
            raise ValueError(f"enumeration supports m <= {_ENUM_LIMIT}")
        counts = _singular_counts_by_weight(m)
        n_cells = m * (m - 1)
        value = sum(
            c * p**w * (1.0 - p) ** (n_cells - w)
            for w, c in enumerate(counts)
            if c
        )
        return OracleResult(
            value=float(value),
            method="enumeration",
            detail=f"weighted count over 2^{n_cells} off-diagonal patterns",
        )
    if method == "monte_carlo":
        return _singular_monte_carlo(p, m, trials, master_seed)
    raise ValueError(f"unknown method {method!r}")


def _singular_monte_carlo(
    p: float, m: int, trials: int, master_seed: int
) -> OracleResult:
    if m > 16:
        raise ValueError("monte carlo oracle supports m <= 16")
    gen = TrialRng(master_seed, (ORACLE_STREAM_TAG, m)).stream
    cells = [(i, j) for i in range(m) for j in range(m) if j != i]
    singular = 0
    chunk = 50_000
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        draws = gen.random((size, len(cells)))
        rows = np.zeros((size, m), dtype=np.uint16)
        for i in range(m):
            rows[:, i] = 1 << i
        for k, (i, j) in enumerate(cells):
            rows[:, i] |= (draws[:, k] < p).astype(np.uint16) << j
        singular += int(np.count_nonzero(rank_many(rows, m) < m))
        done += size
    value = singular / trials
    stderr = math.sqrt(value * (1.0 - value) / trials)
    return OracleResult(
        value=value,
        method="monte_carlo_independent",
        detail=f"{trials} draws on the oracle stream (tag {ORACLE_STREAM_TAG})",
        stderr=stderr,
    )


def subspace_failure_bound(corrupted_rows: int) -> str:
    """Guarantee region for subspace decoding under row-confined flips.

    With an invertible interference matrix, flips confined to r rows keep
    the received space within distance 2r of the transmitted codeword, so
    decoding is guaranteed only while 2r stays below half the minimum
    distance: r <= 3 for a distance-16 code.
    """
    if corrupted_rows < 0:
        raise ValueError("row count must be non-negative")
    return ALWAYS_CORRECT if 2 * corrupted_rows < 8 else NO_GUARANTEE
