"""The three reception schemes and per-trial success scoring.

Routing nodes are isolated and take their channel output at face value.
Cooperative RLNC nodes share their outputs and jointly invert the realised
interference matrix, which this harness hands them outright (coherent,
genie-aided decoding: the most favourable reading of cooperation, since
packets carry no coefficient headers).  Subspace reception fuses the
outputs into a row space and runs exhaustive minimum-distance decoding;
its verdict is shared, so all destinations succeed or fail together.

Receivers never see the ground truth except through the scoring performed
here; there is no decision feedback.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitlinalg import BitMatrix, SingularError, invert, matmul, row_space
from .channel import InterferenceMatrix
from .kkcode import AmbiguousError, Codebook, Codeword

SCHEMES = ("routing", "rlnc", "subspace")


@dataclass(frozen=True)
class TrialOutcome:
    """Per-destination success flags for one scheme in one trial."""

    scheme: str
    per_destination_success: tuple[bool, ...]
    system_success: bool

    def __post_init__(self) -> None:
        if self.system_success != all(self.per_destination_success):
            raise ValueError("system flag must be the AND of the destination flags")

    @classmethod
    def from_flags(cls, scheme: str, flags: tuple[bool, ...]) -> "TrialOutcome":
        return cls(scheme, flags, all(flags))


def routing_receive(received: BitMatrix, truth: BitMatrix) -> TrialOutcome:
    """Non-cooperative reception: destination i keeps row i unmodified."""
    if received.nrows != truth.nrows or received.ncols != truth.ncols:
        raise ValueError("received and truth shapes differ")
    flags = tuple(received.row(i) == truth.row(i) for i in range(truth.nrows))
    return TrialOutcome.from_flags("routing", flags)


def rlnc_receive(
    received: BitMatrix, a: InterferenceMatrix, truth: BitMatrix
) -> TrialOutcome:
    """Joint inversion of the interference matrix; singular A fails everyone.

    No error detection is attempted: destination i succeeds exactly when
    row i of inv(A) @ received matches the truth row.
    """
    try:
        recovered = matmul(invert(a.a), received)
    except SingularError:
        return TrialOutcome.from_flags("rlnc", (False,) * truth.nrows)
    flags = tuple(recovered.row(i) == truth.row(i) for i in range(truth.nrows))
    return TrialOutcome.from_flags("rlnc", flags)


def subspace_receive(
    received: BitMatrix, book: Codebook, truth_word: Codeword
) -> TrialOutcome:
    """Fused subspace decoding; one shared verdict for every destination.

    Decoder ambiguity counts as failure.  On success the destinations read
    their packets straight off the decoded codeword's rows.
    """
    m = received.nrows
    try:
        decoded, _ = book.decoder.decode(row_space(received))
    except AmbiguousError:
        return TrialOutcome.from_flags("subspace", (False,) * m)
    ok = decoded.subspace == truth_word.subspace
    return TrialOutcome.from_flags("subspace", (ok,) * m)
