"""Experiment orchestration: sweeps, trial pairing, aggregation, CSV.

Every trial draws one (interference matrix, error pattern) pair from its
own counter-derived stream and applies it identically to every requested
scheme, so the three curves are paired comparisons over the same channel
realisations.  Aggregation sums failure counts, which makes the reported
rates independent of worker count and scheduling; identical specs yield
byte-identical CSV files.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from io import StringIO
from typing import Iterable

from .bitlinalg import BitMatrix, row_space
from .channel import (
    ChannelParams,
    ErrorPattern,
    InterferenceMatrix,
    TrialRng,
    sample_errors,
    sample_interference,
    transmit,
)
from .kkcode import (
    Codebook,
    Codeword,
    generate_codebook,
    load_reference_codeword,
    params_containing,
)
from .receivers import (
    SCHEMES,
    TrialOutcome,
    rlnc_receive,
    routing_receive,
    subspace_receive,
)

DEFAULT_SEED = 12345
DEFAULT_TRIALS = 1000

CSV_HEADER = (
    "scheme,sweep_var,sweep_value,trials,system_failures,failure_rate_system,"
    "failure_rate_per_destination,stderr_system,master_seed"
)


@dataclass(frozen=True)
class ExperimentSpec:
    """A full sweep definition; hashable and cheap to ship to workers."""

    schemes: tuple[str, ...] = SCHEMES
    sweep_var: str = "p"
    sweep_values: tuple[float | int, ...] = (0.0,)
    p: float = 0.2  # fixed interference level while sweeping the flip count
    t_errors: int = 0  # fixed flip count while sweeping p
    m_channels: int = 8
    n_len: int = 16
    trials: int = DEFAULT_TRIALS
    master_seed: int = DEFAULT_SEED
    message: int | None = None  # None = the bundled reference codeword
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown:
            raise ValueError(f"unknown schemes: {sorted(unknown)}")
        if self.sweep_var not in ("p", "errors"):
            raise ValueError("sweep variable must be 'p' or 'errors'")
        if not self.sweep_values:
            raise ValueError("sweep needs at least one value")
        if len(set(self.sweep_values)) != len(self.sweep_values):
            raise ValueError("sweep values must be distinct")
        if self.n_len != 16:
            raise ValueError("packet length is fixed at 16 by the code")
        if not 1 <= self.m_channels <= 8:
            raise ValueError("channel count must be between 1 and 8")
        if "subspace" in self.schemes and self.m_channels != 8:
            raise ValueError("the subspace scheme needs all 8 codeword rows (m=8)")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.message is not None and not 0 <= self.message < 256:
            raise ValueError("message must be in [0, 255]")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p outside [0, 1]")
        limit = self.m_channels * self.n_len
        for v in self.sweep_values:
            if self.sweep_var == "p" and not 0.0 <= v <= 1.0:
                raise ValueError(f"sweep value {v} outside [0, 1]")
            if self.sweep_var == "errors" and not 0 <= int(v) <= limit:
                raise ValueError(f"flip count {v} outside [0, {limit}]")
        if self.sweep_var == "errors" and not 0 <= self.t_errors <= limit:
            raise ValueError("fixed flip count out of range")

    def channel_params_at(self, sweep_value: float | int) -> ChannelParams:
        if self.sweep_var == "p":
            return ChannelParams(
                p=float(sweep_value),
                t_errors=self.t_errors,
                m_channels=self.m_channels,
                n_len=self.n_len,
            )
        return ChannelParams(
            p=self.p,
            t_errors=int(sweep_value),
            m_channels=self.m_channels,
            n_len=self.n_len,
        )

    def ordered_schemes(self) -> tuple[str, ...]:
        return tuple(s for s in SCHEMES if s in self.schemes)


@dataclass(frozen=True)
class ResultRow:
    """One aggregated cell: a scheme at one sweep value."""

    scheme: str
    sweep_var: str
    sweep_value: float | int
    trials: int
    system_failures: int
    failure_rate_system: float
    failure_rate_per_destination: float
    stderr_system: float
    master_seed: int


def fig4_preset(**overrides) -> ExperimentSpec:
    """Error-free sweep of the interference probability, 0 to 1 in 0.05 steps."""
    spec = ExperimentSpec(
        schemes=SCHEMES,
        sweep_var="p",
        sweep_values=tuple(round(0.05 * i, 2) for i in range(21)),
        t_errors=0,
    )
    return replace(spec, **overrides) if overrides else spec


def fig5_preset(**overrides) -> ExperimentSpec:
    """Flip-count sweep, 0 to 100 in steps of 5, at fixed p = 0.2."""
    spec = ExperimentSpec(
        schemes=SCHEMES,
        sweep_var="errors",
        sweep_values=tuple(range(0, 101, 5)),
        p=0.2,
    )
    return replace(spec, **overrides) if overrides else spec


PRESETS = {"fig4": fig4_preset, "fig5": fig5_preset}


@lru_cache(maxsize=8)
def _source(message: int | None, m_channels: int) -> tuple[Codebook, Codeword, BitMatrix]:
    """Codebook, truth codeword and source matrix for a spec.

    The codebook is generated with evaluation points taken from the
    bundled reference codeword, which is therefore a member (message 1)
    and the default payload.  With fewer than 8 channels the source is the
    first m rows of the codeword; the rows stay linearly independent.
    """
    book = generate_codebook(params_containing(load_reference_codeword()))
    word = book.words[1 if message is None else message]
    if m_channels == word.matrix.nrows:
        matrix = word.matrix
    else:
        matrix = BitMatrix(
            m_channels, word.matrix.ncols, word.matrix.rows[:m_channels]
        )
    return book, word, matrix


def experiment_source(spec: ExperimentSpec) -> tuple[Codebook, Codeword, BitMatrix]:
    return _source(spec.message, spec.m_channels)


def draw_channel(
    spec: ExperimentSpec, sweep_value: float | int, trial_index: int
) -> tuple[InterferenceMatrix, ErrorPattern]:
    """The (A, E) pair of one trial; shared by every scheme in that trial."""
    sweep_index = spec.sweep_values.index(sweep_value)
    cp = spec.channel_params_at(sweep_value)
    return _draw(spec, cp, sweep_index, trial_index)


def _draw(
    spec: ExperimentSpec, cp: ChannelParams, sweep_index: int, trial_index: int
) -> tuple[InterferenceMatrix, ErrorPattern]:
    rng = TrialRng.for_trial(spec.master_seed, sweep_index, trial_index)
    a = sample_interference(cp, rng)
    e = sample_errors(cp, rng)
    return a, e


def run_trial(
    spec: ExperimentSpec, sweep_value: float | int, trial_index: int
) -> dict[str, TrialOutcome]:
    """One paired trial through every requested scheme."""
    book, word, matrix = experiment_source(spec)
    a, e = draw_channel(spec, sweep_value, trial_index)
    received = transmit(matrix, a, e)
    outcomes: dict[str, TrialOutcome] = {}
    for scheme in spec.ordered_schemes():
        if scheme == "routing":
            outcomes[scheme] = routing_receive(received, matrix)
        elif scheme == "rlnc":
            outcomes[scheme] = rlnc_receive(received, a, matrix)
        else:
            outcomes[scheme] = subspace_receive(received, book, word)
    return outcomes


def _run_chunk(
    spec: ExperimentSpec, sweep_index: int, start: int, stop: int
) -> dict[str, tuple[int, int]]:
    """Failure counts (system, destination) per scheme over a trial range.

    Subspace decoding for the whole range runs as one vectorised batch;
    outcomes are identical to per-trial decoding because each trial's
    subspace is decoded independently of the others.
    """
    value = spec.sweep_values[sweep_index]
    cp = spec.channel_params_at(value)
    book, word, matrix = experiment_source(spec)
    m = spec.m_channels
    schemes = spec.ordered_schemes()
    sys_fails = {s: 0 for s in schemes}
    dest_fails = {s: 0 for s in schemes}
    pending = []
    for t in range(start, stop):
        a, e = _draw(spec, cp, sweep_index, t)
        received = transmit(matrix, a, e)
        if "routing" in sys_fails:
            out = routing_receive(received, matrix)
            sys_fails["routing"] += not out.system_success
            dest_fails["routing"] += m - sum(out.per_destination_success)
        if "rlnc" in sys_fails:
            out = rlnc_receive(received, a, matrix)
            sys_fails["rlnc"] += not out.system_success
            dest_fails["rlnc"] += m - sum(out.per_destination_success)
        if "subspace" in sys_fails:
            pending.append(row_space(received))
    if pending:
        for result in book.decoder.decode_many(pending):
            ok = result is not None and result[0].subspace == word.subspace
            sys_fails["subspace"] += not ok
            dest_fails["subspace"] += 0 if ok else m
    return {s: (sys_fails[s], dest_fails[s]) for s in schemes}


def _chunk_task(args: tuple[ExperimentSpec, int, int, int]):
    spec, sweep_index, start, stop = args
    return sweep_index, _run_chunk(spec, sweep_index, start, stop)


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """All (scheme, sweep value) cells, ordered by scheme then sweep value."""
    tasks = []
    for sweep_index in range(len(spec.sweep_values)):
        bounds = _chunk_bounds(spec.trials, spec.workers)
        for start, stop in bounds:
            tasks.append((spec, sweep_index, start, stop))
    totals: dict[tuple[int, str], list[int]] = {}
    if spec.workers == 1:
        partials = map(_chunk_task, tasks)
    else:
        executor = ProcessPoolExecutor(max_workers=spec.workers)
        try:
            partials = list(executor.map(_chunk_task, tasks))
        finally:
            executor.shutdown()
    for sweep_index, counts in partials:
        for scheme, (sf, df) in counts.items():
            acc = totals.setdefault((sweep_index, scheme), [0, 0])
            acc[0] += sf
            acc[1] += df
    rows = []
    denom_dest = spec.trials * spec.m_channels
    for scheme in spec.ordered_schemes():
        for sweep_index, value in enumerate(spec.sweep_values):
            sf, df = totals[(sweep_index, scheme)]
            rate = sf / spec.trials
            rows.append(
                ResultRow(
                    scheme=scheme,
                    sweep_var=spec.sweep_var,
                    sweep_value=value,
                    trials=spec.trials,
                    system_failures=sf,
                    failure_rate_system=rate,
                    failure_rate_per_destination=df / denom_dest,
                    stderr_system=math.sqrt(rate * (1.0 - rate) / spec.trials),
                    master_seed=spec.master_seed,
                )
            )
    return rows


def _chunk_bounds(trials: int, workers: int) -> list[tuple[int, int]]:
    if workers == 1:
        return [(0, trials)]
    size = math.ceil(trials / workers)
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def format_sweep_value(value: float | int) -> str:
    return str(value) if isinstance(value, int) else f"{value:g}"


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    """Render result rows in the fixed column order, LF line endings."""
    buf = StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        buf.write(
            f"{r.scheme},{r.sweep_var},{format_sweep_value(r.sweep_value)},"
            f"{r.trials},{r.system_failures},{r.failure_rate_system:.6f},"
            f"{r.failure_rate_per_destination:.6f},{r.stderr_system:.6f},"
            f"{r.master_seed}\n"
        )
    return buf.getvalue()


def emit_csv(rows: Iterable[ResultRow], path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(rows_to_csv(rows))
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def read_csv(path) -> list[ResultRow]:
    """Parse a results file back into rows (round-trip of emit_csv)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = []
        for rec in reader:
            raw = rec["sweep_value"]
            value: float | int = int(raw) if rec["sweep_var"] == "errors" else float(raw)
            rows.append(
                ResultRow(
                    scheme=rec["scheme"],
                    sweep_var=rec["sweep_var"],
                    sweep_value=value,
                    trials=int(rec["trials"]),
                    system_failures=int(rec["system_failures"]),
                    failure_rate_system=float(rec["failure_rate_system"]),
                    failure_rate_per_destination=float(
                        rec["failure_rate_per_destination"]
                    ),
                    stderr_system=float(rec["stderr_system"]),
                    master_seed=int(rec["master_seed"]),
                )
            )
    return rows
