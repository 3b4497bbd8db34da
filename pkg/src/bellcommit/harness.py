"""Monte Carlo experiment harness.

Randomness is fully determined by ``(master_seed, trial_index)``: each trial
owns a generator seeded with ``SeedSequence((master_seed, trial_index))``,
and protocol steps consume it in pair order with fixed draw counts. Trials
never share generator state, so aggregate results are identical however
trials are scheduled (serial or thread pool) and reports are
byte-reproducible.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .attack import alice_commit_cheating, alice_reveal_cheat, pauli_for_flip
from .protocol import (
    COMMIT_VALUES,
    MAX_ANCILLAS,
    BCPolicy,
    CommitValue,
    RevealMessage,
    alice_commit,
    alice_reveal_honest,
    bc_apply_operations,
    commit_label,
    transcript,
    verify,
)
from .qcore import (
    BELL_LABELS,
    BellLabel,
    PauliOp,
    apply_pauli,
    apply_unitary,
    bell_probabilities,
    fidelity,
    inner_product,
    make_bell,
    random_state,
    random_unitary,
    reduced_density,
    trace_distance,
)

# Two states of the receiving side's view are "identical" below this.
HIDING_THRESHOLD = 1e-12


class Strategy(Enum):
    HONEST = "honest"
    CHEAT = "cheat"


class OutputFormat(Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a fixed scenario replayed over independent trials."""

    strategy: Strategy
    commit_value: CommitValue = CommitValue.BIT0
    reveal_value: CommitValue = CommitValue.BIT0
    n_pairs: int = 8
    trials: int = 1000
    bc_policy: BCPolicy = BCPolicy.NONE
    m_ancillas: int = 0
    master_seed: int = 0
    tolerance: float = 1e-9
    output: OutputFormat = OutputFormat.TEXT

    def validate(self) -> None:
        """Raise :class:`ConfigError` on any inconsistent combination."""
        if self.n_pairs < 1:
            raise ConfigError("n_pairs must be at least 1")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not 0 <= self.m_ancillas <= MAX_ANCILLAS:
            raise ConfigError(f"ancillas must be between 0 and {MAX_ANCILLAS}")
        if self.strategy is Strategy.HONEST and self.commit_value is not self.reveal_value:
            raise ConfigError("an honest committer can only reveal the committed value")
        if self.strategy is Strategy.CHEAT and self.commit_value is not CommitValue.BIT0:
            raise ConfigError("the cheating preparation is fixed to bit0")
        if self.bc_policy is BCPolicy.RANDOM_ENTANGLED and self.m_ancillas < 1:
            raise ConfigError("the random-entangled policy requires at least one ancilla")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in an unsigned 64-bit integer")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")


@dataclass(frozen=True)
class TrialOutcome:
    trial_index: int
    accept: bool
    min_outcome_probability: float
    transcript: dict | None = None


@dataclass(frozen=True)
class DetectionStats:
    """Aggregate over the trials of one experiment."""

    trials: int
    accepts: int
    acceptance_rate: float
    min_outcome_probability: float
    per_trial_outcomes: tuple[TrialOutcome, ...] | None = None


def _trial_generator(master_seed: int, trial_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((master_seed, trial_index))))


def _execute_trial(
    config: ExperimentConfig,
    trial_index: int,
    announce=None,
    keep_transcript: bool = False,
) -> TrialOutcome:
    rng = _trial_generator(config.master_seed, trial_index)
    if config.strategy is Strategy.CHEAT:
        session = alice_commit_cheating(config.n_pairs, config.m_ancillas)
    else:
        session = alice_commit(config.commit_value, config.n_pairs, config.m_ancillas)
    bc_apply_operations(session, config.bc_policy, rng)
    if config.strategy is Strategy.CHEAT:
        reveal = alice_reveal_cheat(session, config.reveal_value)
    else:
        reveal = alice_reveal_honest(session)
    if announce is not None and announce != reveal.announced:
        reveal = RevealMessage(announced=announce)
    report = verify(session, reveal, rng)
    return TrialOutcome(
        trial_index,
        report.accept,
        min(report.announced_probabilities),
        transcript(session, reveal, report) if keep_transcript else None,
    )


def run_trial(config: ExperimentConfig, trial_index: int) -> bool:
    """One end-to-end protocol run; bit-reproducible given (config, trial_index)."""
    config.validate()
    return _execute_trial(config, trial_index).accept


def _run_many(
    config: ExperimentConfig,
    workers: int,
    keep_trials: bool,
    announce=None,
) -> DetectionStats:
    def one(index: int) -> TrialOutcome:
        return _execute_trial(config, index, announce=announce, keep_transcript=keep_trials)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, range(config.trials)))
    else:
        outcomes = [one(index) for index in range(config.trials)]
    accepts = sum(1 for outcome in outcomes if outcome.accept)
    return DetectionStats(
        trials=len(outcomes),
        accepts=accepts,
        acceptance_rate=accepts / len(outcomes),
        min_outcome_probability=min(o.min_outcome_probability for o in outcomes),
        per_trial_outcomes=tuple(outcomes) if keep_trials else None,
    )


def run_experiment(
    config: ExperimentConfig, workers: int = 1, keep_trials: bool = False
) -> DetectionStats:
    """Aggregate ``config.trials`` independent trials.

    ``workers > 1`` runs trials on a thread pool; the statistics are
    identical to the serial run because every trial derives its own
    substream and aggregation is order-insensitive.
    """
    config.validate()
    return _run_many(config, workers, keep_trials)


def run_control_experiment(
    config: ExperimentConfig,
    commit_value: CommitValue,
    announce_value: CommitValue,
    workers: int = 1,
    keep_trials: bool = False,
) -> DetectionStats:
    """Honest preparation of ``commit_value`` with a mismatched announcement.

    No flip is applied, so the verifier's unanimity test rejects every trial;
    this is the control showing acceptance is not vacuous.
    """
    if commit_value is announce_value:
        raise ConfigError("a control run requires a mismatched announcement")
    base = replace(
        config,
        strategy=Strategy.HONEST,
        commit_value=commit_value,
        reveal_value=commit_value,
    )
    base.validate()
    return _run_many(base, workers, keep_trials, announce=commit_label(announce_value))


@dataclass(frozen=True)
class AcceptanceMatrix:
    """Cheat row plus the honest/control grid, all at the same base settings."""

    values: tuple[CommitValue, ...]
    cheat: dict[CommitValue, DetectionStats]
    grid: dict[tuple[CommitValue, CommitValue], DetectionStats]

    def cheat_rates(self) -> list[float]:
        return [self.cheat[value].acceptance_rate for value in self.values]

    def grid_rates(self) -> list[list[float]]:
        return [
            [self.grid[(commit, announce)].acceptance_rate for announce in self.values]
            for commit in self.values
        ]

    def passed(self, tolerance: float = 1e-9) -> bool:
        """Every cell matches the exact prediction.

        Cheat row and grid diagonal must accept every trial with per-pair
        outcome probabilities within ``tolerance`` of 1; off-diagonal control
        cells must reject every trial.
        """
        for stats in self.cheat.values():
            if stats.acceptance_rate != 1.0 or stats.min_outcome_probability < 1 - tolerance:
                return False
        for commit in self.values:
            for announce in self.values:
                stats = self.grid[(commit, announce)]
                if commit is announce:
                    if stats.acceptance_rate != 1.0:
                        return False
                    if stats.min_outcome_probability < 1 - tolerance:
                        return False
                elif stats.acceptance_rate != 0.0:
                    return False
        return True


def acceptance_matrix(base: ExperimentConfig, workers: int = 1) -> AcceptanceMatrix:
    """Acceptance rates for every (strategy, commit, reveal) cell.

    The cheat row prepares the fixed label and steers to each column's value.
    The grid's diagonal is the honest run for each value; off-diagonal cells
    are controls (honest state, mismatched announcement, no flip).
    """
    base.validate()
    cheat: dict[CommitValue, DetectionStats] = {}
    for value in COMMIT_VALUES:
        cfg = replace(
            base,
            strategy=Strategy.CHEAT,
            commit_value=CommitValue.BIT0,
            reveal_value=value,
        )
        cheat[value] = run_experiment(cfg, workers=workers)
    grid: dict[tuple[CommitValue, CommitValue], DetectionStats] = {}
    for commit in COMMIT_VALUES:
        for announce in COMMIT_VALUES:
            if commit is announce:
                cfg = replace(
                    base,
                    strategy=Strategy.HONEST,
                    commit_value=commit,
                    reveal_value=commit,
                )
                grid[(commit, announce)] = run_experiment(cfg, workers=workers)
            else:
                grid[(commit, announce)] = run_control_experiment(
                    base, commit, announce, workers=workers
                )
    return AcceptanceMatrix(COMMIT_VALUES, cheat, grid)


@dataclass(frozen=True)
class HidingReport:
    """Pairwise distinguishability of the receiving side's view.

    ``distances[a][b]`` is the maximum over pair indices of the trace
    distance between the receiving side's reduced states after committing
    ``values[a]`` versus ``values[b]`` (same seed, hence identical
    receiver-side operations).
    """

    values: tuple[CommitValue, ...]
    distances: tuple[tuple[float, ...], ...]
    threshold: float = HIDING_THRESHOLD

    @property
    def max_distance(self) -> float:
        return max(max(row) for row in self.distances)

    @property
    def passed(self) -> bool:
        return self.max_distance <= self.threshold


def hiding_report(base: ExperimentConfig) -> HidingReport:
    """Trace-distance table of the receiving side's post-commit states.

    All four commit values are prepared with the same seed so the recorded
    receiver-side operations coincide; any distance above the threshold
    would mean the commitment leaks before the reveal.
    """
    base.validate()
    reduced = {}
    for value in COMMIT_VALUES:
        session = alice_commit(value, base.n_pairs, base.m_ancillas)
        bc_apply_operations(session, base.bc_policy, _trial_generator(base.master_seed, 0))
        reduced[value] = [reduced_density(pair.state, pair.c_side) for pair in session.pairs]
    rows = []
    for a in COMMIT_VALUES:
        row = tuple(
            max(trace_distance(x, y) for x, y in zip(reduced[a], reduced[b]))
            for b in COMMIT_VALUES
        )
        rows.append(row)
    return HidingReport(COMMIT_VALUES, tuple(rows))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def selftest(master_seed: int = 0, tolerance: float = 1e-9) -> list[CheckResult]:
    """Fast invariant suite covering state algebra, protocol, and attack."""
    checks: list[CheckResult] = []

    def record(name: str, passed, detail: str = "") -> None:
        checks.append(CheckResult(name, bool(passed), detail))

    rng = _trial_generator(master_seed, 0)

    # Bell basis is orthonormal.
    worst = 0.0
    for i, a in enumerate(BELL_LABELS):
        for j, b in enumerate(BELL_LABELS):
            ip = inner_product(make_bell(a), make_bell(b))
            worst = max(worst, abs(ip - (1.0 if i == j else 0.0)))
    record("bell-orthonormality", worst <= 1e-12, f"max deviation {worst:.3e}")

    # Pauli flips permute labels as advertised (Z flips u_i, X flips u_j).
    worst = 0.0
    for src in BELL_LABELS:
        for flip in PauliOp:
            dst = BellLabel(src.u_i ^ flip.z_component, src.u_j ^ flip.x_component)
            got = apply_pauli(make_bell(src), flip, 0)
            worst = max(worst, 1.0 - fidelity(got, make_bell(dst)))
    record("pauli-label-flips", worst <= 1e-12, f"max fidelity defect {worst:.3e}")

    # The committer's flip commutes with receiver-side unitaries.
    worst = 0.0
    for _ in range(20):
        state = random_state(3, rng)
        op = random_unitary(2, rng).on(1, 2)
        flip = PauliOp.ZX
        a = apply_unitary(apply_pauli(state, flip, 0), op)
        b = apply_pauli(apply_unitary(state, op), flip, 0)
        worst = max(worst, float(np.abs(a.amplitudes - b.amplitudes).max()))
    record("flip-commutation", worst <= 1e-12, f"max amplitude delta {worst:.3e}")

    # Measuring a prepared Bell state returns its label with certainty.
    worst = 1.0
    for index, label in enumerate(BELL_LABELS):
        probs = bell_probabilities(make_bell(label), (0, 1))
        worst = min(worst, float(probs[index]))
    record("measurement-certainty", worst >= 1 - tolerance, f"min outcome probability {worst!r}")

    # Honest runs accept, for every value and policy.
    ok = True
    for value in COMMIT_VALUES:
        for policy, m in ((BCPolicy.NONE, 0), (BCPolicy.RANDOM_LOCAL, 0), (BCPolicy.RANDOM_ENTANGLED, 1)):
            cfg = ExperimentConfig(
                strategy=Strategy.HONEST,
                commit_value=value,
                reveal_value=value,
                n_pairs=2,
                trials=20,
                bc_policy=policy,
                m_ancillas=m,
                master_seed=master_seed,
                tolerance=tolerance,
            )
            ok = ok and run_experiment(cfg).acceptance_rate == 1.0
    record("honest-completeness", ok)

    # Cheat runs accept for every target, under the entangling policy too.
    ok = True
    for value in COMMIT_VALUES:
        cfg = ExperimentConfig(
            strategy=Strategy.CHEAT,
            commit_value=CommitValue.BIT0,
            reveal_value=value,
            n_pairs=2,
            trials=20,
            bc_policy=BCPolicy.RANDOM_ENTANGLED,
            m_ancillas=1,
            master_seed=master_seed,
            tolerance=tolerance,
        )
        ok = ok and run_experiment(cfg).acceptance_rate == 1.0
    record("cheat-undetectability", ok)

    # Mismatched announcements without the flip are rejected.
    base = ExperimentConfig(
        strategy=Strategy.HONEST,
        n_pairs=2,
        trials=20,
        master_seed=master_seed,
        tolerance=tolerance,
    )
    stats = run_control_experiment(base, CommitValue.BIT0, CommitValue.MINUS)
    record("control-rejection", stats.acceptance_rate == 0.0)

    # The closed-form flip chooser reaches every label from every label.
    worst = 0.0
    for src in BELL_LABELS:
        for dst in BELL_LABELS:
            flip = pauli_for_flip(src, dst)
            got = apply_pauli(make_bell(src), flip, 0)
            worst = max(worst, 1.0 - fidelity(got, make_bell(dst)))
    record("flip-chooser", worst <= 1e-12, f"max fidelity defect {worst:.3e}")

    # The receiving side's view is independent of the committed value.
    report = hiding_report(replace(base, bc_policy=BCPolicy.RANDOM_LOCAL))
    record("hiding", report.passed, f"max trace distance {report.max_distance:.3e}")

    return checks
