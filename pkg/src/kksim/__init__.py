"""GF(2) interference-channel simulator with subspace-code reception.

A library plus CLI that models an array of unit-capacity binary channels
with Bernoulli crosstalk and random bit flips, and compares three
receiver schemes: plain routing, cooperative RLNC inversion, and
minimum-distance decoding over a (16, 256, 16, 8) constant-dimension
code.  Experiments are deterministic per master seed and emit CSV plus
optional figures.
"""

from .bitlinalg import (
    BitMatrix,
    SingularError,
    Subspace,
    invert,
    matmul,
    rank,
    row_space,
    rref,
    stack,
    subspace_distance,
)
from .channel import (
    ChannelParams,
    ErrorPattern,
    InterferenceMatrix,
    TrialRng,
    sample_errors,
    sample_interference,
    transmit,
)
from .experiment import (
    ExperimentSpec,
    ResultRow,
    emit_csv,
    fig4_preset,
    fig5_preset,
    run_experiment,
    run_trial,
)
from .gf2m import FieldElement, FieldParams, eval_linearized, expand_bits
from .kkcode import (
    AmbiguousError,
    Codebook,
    CodeParams,
    Codeword,
    decode_ml,
    encode,
    extract_packets,
    generate_codebook,
    load_reference_codeword,
    params_containing,
    standard_params,
    verify_fixture,
)
from .oracles import (
    OracleResult,
    routing_failure_exact,
    singular_probability,
    subspace_failure_bound,
)
from .receivers import (
    SCHEMES,
    TrialOutcome,
    rlnc_receive,
    routing_receive,
    subspace_receive,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousError",
    "BitMatrix",
    "ChannelParams",
    "CodeParams",
    "Codebook",
    "Codeword",
    "ErrorPattern",
    "ExperimentSpec",
    "FieldElement",
    "FieldParams",
    "InterferenceMatrix",
    "OracleResult",
    "ResultRow",
    "SCHEMES",
    "SingularError",
    "Subspace",
    "TrialOutcome",
    "TrialRng",
    "decode_ml",
    "emit_csv",
    "encode",
    "eval_linearized",
    "expand_bits",
    "extract_packets",
    "fig4_preset",
    "fig5_preset",
    "generate_codebook",
    "invert",
    "load_reference_codeword",
    "matmul",
    "params_containing",
    "rank",
    "rlnc_receive",
    "routing_failure_exact",
    "routing_receive",
    "row_space",
    "rref",
    "run_experiment",
    "run_trial",
    "sample_errors",
    "sample_interference",
    "singular_probability",
    "stack",
    "standard_params",
    "subspace_distance",
    "subspace_failure_bound",
    "subspace_receive",
    "transmit",
    "verify_fixture",
]
