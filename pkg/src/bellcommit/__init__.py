"""Exact simulation of a Bell-pair commitment scheme and its binding attack.

The library demonstrates, by dense state-vector simulation and seeded Monte
Carlo experiment, that the committer of this scheme can postpone her choice
and steer the commitment to any value at reveal time using only local Pauli
operations, passing verification with probability 1, while the receiving
side's view stays independent of the committed value.
"""

__version__ = "0.1.0"

from .attack import (
    CHEAT_START_LABEL,
    CheatPlan,
    alice_commit_cheating,
    alice_reveal_cheat,
    pauli_for_flip,
)
from .harness import (
    HIDING_THRESHOLD,
    AcceptanceMatrix,
    CheckResult,
    ConfigError,
    DetectionStats,
    ExperimentConfig,
    HidingReport,
    OutputFormat,
    Strategy,
    TrialOutcome,
    acceptance_matrix,
    hiding_report,
    run_control_experiment,
    run_experiment,
    run_trial,
    selftest,
)
from .protocol import (
    COMMIT_VALUES,
    MAX_ANCILLAS,
    BCPolicy,
    BCRecord,
    CommitmentSession,
    CommitValue,
    PairRegister,
    Phase,
    ProtocolError,
    RevealMessage,
    VerificationReport,
    alice_commit,
    alice_reveal_honest,
    bc_apply_operations,
    commit_label,
    transcript,
    value_of_label,
    verify,
)
from .qcore import (
    ATOL_ACCUM,
    ATOL_EXACT,
    BELL_LABELS,
    BellLabel,
    DensityMatrix,
    PauliOp,
    StateVector,
    Unitary,
    apply_pauli,
    apply_unitary,
    basis_state,
    bell_measure,
    bell_probabilities,
    fidelity,
    inner_product,
    make_bell,
    random_state,
    random_unitary,
    reduced_density,
    tensor,
    trace_distance,
)

__all__ = [
    "ATOL_ACCUM",
    "ATOL_EXACT",
    "BCPolicy",
    "BCRecord",
    "BELL_LABELS",
    "BellLabel",
    "CHEAT_START_LABEL",
    "COMMIT_VALUES",
    "CheatPlan",
    "CheckResult",
    "CommitValue",
    "CommitmentSession",
    "ConfigError",
    "DensityMatrix",
    "DetectionStats",
    "ExperimentConfig",
    "HIDING_THRESHOLD",
    "AcceptanceMatrix",
    "HidingReport",
    "MAX_ANCILLAS",
    "OutputFormat",
    "PairRegister",
    "PauliOp",
    "Phase",
    "ProtocolError",
    "RevealMessage",
    "StateVector",
    "Strategy",
    "TrialOutcome",
    "Unitary",
    "VerificationReport",
    "acceptance_matrix",
    "alice_commit",
    "alice_commit_cheating",
    "alice_reveal_cheat",
    "alice_reveal_honest",
    "apply_pauli",
    "apply_unitary",
    "basis_state",
    "bc_apply_operations",
    "bell_measure",
    "bell_probabilities",
    "commit_label",
    "fidelity",
    "hiding_report",
    "inner_product",
    "make_bell",
    "pauli_for_flip",
    "random_state",
    "random_unitary",
    "reduced_density",
    "run_control_experiment",
    "run_experiment",
    "run_trial",
    "selftest",
    "tensor",
    "trace_distance",
    "transcript",
    "value_of_label",
    "verify",
    "__version__",
]
