"""Exact single-qubit simulation of a black-box embedding-separation audit.

A limited verifier checks a prover's claim about how far apart two feature
groups land in Hilbert space, using only single-qubit measurements in three
mutually unbiased bases, linear-inversion tomography, and a Bures-angle
threshold rule.  The package bundles the verifier, honest and adversarial
provers, a trainable toy embedding, and seeded experiment harnesses.
"""

from .data import Distribution, OracleConfig, blob_label, draw_labeled, oracle_draw
from .embedding import (
    TrainConfig,
    TrainResult,
    class_densities,
    cost,
    cost_gradient,
    embed,
    embed_states,
    ensemble_density,
    init_params,
    train,
    true_angle,
)
from .provers import (
    ClusterGuessProver,
    ConstantStateProver,
    DepolarizingProver,
    HonestProver,
    Prover,
    RandomAssignProver,
    Strategy,
    SyntheticAngleProver,
    SyntheticProverConfig,
    adversarial_prover,
    depolarize_wrap,
    honest_prover,
    synthetic_angle_prover,
)
from .qubits import (
    Basis,
    ProbTriple,
    bloch_to_density,
    born_probability,
    bures_angle,
    density_of,
    density_to_bloch,
    exact_probs,
    fidelity,
    haar_random_state,
    hs_distance,
    pure_state,
    reconstruct_density,
    sample_outcome,
    trace_distance,
    validate_density,
)
from .rng import child_rng, child_seed, derive_seed
from .transcript import (
    TranscriptError,
    read_transcript,
    replay_transcript,
    write_transcript,
)
from .verifier import (
    Flag,
    MeasurementRecord,
    MultiGroupResult,
    ProtocolConfig,
    Transcript,
    Verdict,
    allocate_bases,
    decide,
    estimate_probs,
    interleave_sends,
    multi_group_verify,
    reconstruct_from_records,
    run_protocol,
    suggested_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "ClusterGuessProver",
    "ConstantStateProver",
    "DepolarizingProver",
    "Distribution",
    "Flag",
    "HonestProver",
    "MeasurementRecord",
    "MultiGroupResult",
    "OracleConfig",
    "ProbTriple",
    "ProtocolConfig",
    "Prover",
    "RandomAssignProver",
    "Strategy",
    "SyntheticAngleProver",
    "SyntheticProverConfig",
    "TrainConfig",
    "TrainResult",
    "Transcript",
    "TranscriptError",
    "Verdict",
    "adversarial_prover",
    "allocate_bases",
    "blob_label",
    "bloch_to_density",
    "born_probability",
    "bures_angle",
    "child_rng",
    "child_seed",
    "class_densities",
    "cost",
    "cost_gradient",
    "decide",
    "density_of",
    "density_to_bloch",
    "depolarize_wrap",
    "derive_seed",
    "draw_labeled",
    "embed",
    "embed_states",
    "ensemble_density",
    "estimate_probs",
    "exact_probs",
    "fidelity",
    "haar_random_state",
    "honest_prover",
    "hs_distance",
    "init_params",
    "interleave_sends",
    "multi_group_verify",
    "oracle_draw",
    "pure_state",
    "read_transcript",
    "reconstruct_density",
    "reconstruct_from_records",
    "replay_transcript",
    "run_protocol",
    "sample_outcome",
    "suggested_gamma",
    "synthetic_angle_prover",
    "trace_distance",
    "train",
    "true_angle",
    "validate_density",
    "write_transcript",
]
