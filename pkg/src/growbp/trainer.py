"""Online backpropagation and the constructive hidden-unit growth loop.

Training is online: weights are adjusted immediately after every pattern.
For one pattern with target d and output y, the output-layer delta is
e * y * (1 - y) with e = d - y, and the hidden-layer delta backpropagates
through the pre-update output weights, so a single step equals one
gradient-descent step of size eta on the half-sum-of-squared-errors of
that pattern.

A phase trains the current topology for a bounded number of epochs,
tracking the network snapshot with the lowest validation error and ending
early when that error stops improving (hold-out early stopping).  The
growth loop starts from a single hidden unit, checks the acceptance test
after each phase, and otherwise adds one freshly initialized hidden unit
and trains again, up to a hard cap.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dataset import stack_examples
from .errors import ArityMismatchError, ConfigError, EmptySetError
from .metrics import (
    efficiency,
    overall_efficiency,
    rule_for_outputs,
)
from .network import add_hidden_unit, forward, forward_outputs, init_network

STOP_ACCEPTED = "accepted"
STOP_H_MAX = "h_max_reached"


@dataclass
class TrainConfig:
    """Hyperparameters and acceptance thresholds for a constructive run.

    ``xi_target`` and ``eff_target`` gate acceptance at the end of each
    phase: the run stops growing once validation error is at most
    ``xi_target`` and the efficiency on ``stopping_set`` reaches
    ``eff_target`` percent.  Defaults make acceptance effectively
    unreachable, so an unconfigured run explores every h up to ``h_max``
    and reports the best network found.
    """

    eta: float = 0.7
    epochs_per_phase: int = 500
    patience: int = 50
    xi_target: float = 0.0
    eff_target: float = 100.0
    h_max: int = 8
    init_range: float = 1.0
    seed: int = 0
    stopping_set: str = "validation"
    shuffle: bool = False
    grow_zero_output: bool = False

    def __post_init__(self):
        if not self.eta > 0:
            raise ConfigError(f"eta must be > 0, got {self.eta}")
        if self.h_max < 1:
            raise ConfigError(f"h_max must be >= 1, got {self.h_max}")
        if self.epochs_per_phase < 1:
            raise ConfigError(
                f"epochs_per_phase must be >= 1, got {self.epochs_per_phase}"
            )
        if self.patience < 1:
            raise ConfigError(f"patience must be >= 1, got {self.patience}")
        if self.xi_target < 0:
            raise ConfigError(f"xi_target must be >= 0, got {self.xi_target}")
        if self.stopping_set not in ("validation", "test"):
            raise ConfigError(
                f"stopping_set must be 'validation' or 'test', "
                f"got {self.stopping_set!r}"
            )


@dataclass(frozen=True)
class PhaseRecord:
    """One growth-table row: counts, efficiencies and errors at some h."""

    h: int
    epochs_cumulative: int
    train_classified: int
    train_eff: float
    train_mse: float
    valid_classified: int
    valid_eff: float
    valid_mse: float
    test_classified: int
    test_eff: float
    overall_eff: float


@dataclass(frozen=True)
class GrowthHistory:
    """Per-phase records of a constructive run plus why it stopped."""

    phases: tuple
    stop_reason: str

    def selected_index(self):
        """Index of the phase whose snapshot the run returned.

        The accepting phase when the run was accepted; otherwise the
        phase with the highest overall efficiency (earliest on ties,
        favoring the smaller network).
        """
        if self.stop_reason == STOP_ACCEPTED:
            return len(self.phases) - 1
        best = 0
        for i, rec in enumerate(self.phases):
            if rec.overall_eff > self.phases[best].overall_eff:
                best = i
        return best


def pattern_error(targets, outputs):
    """Per-output errors d - y and the half-sum-of-squares xi for one pattern."""
    t = np.asarray(targets, dtype=np.float64)
    y = np.asarray(outputs, dtype=np.float64)
    if t.shape != y.shape or t.ndim != 1:
        raise ArityMismatchError(
            f"targets {t.shape} and outputs {y.shape} must be equal-length vectors"
        )
    errors = t - y
    xi = 0.5 * float(errors @ errors)
    return errors, xi


def average_error(net, examples):
    """Mean of the per-pattern error xi over a pattern set."""
    if len(examples) == 0:
        raise EmptySetError("average error over an empty pattern set")
    X, T = stack_examples(examples)
    Y = forward_outputs(net, X)
    E = T - Y
    return float((0.5 * (E * E).sum(axis=1)).mean())


def backprop_step(net, example, eta):
    """Apply one online gradient step for one pattern, in place.

    Output-layer weights are updated first; the hidden-layer deltas use
    the original (pre-update) output weights, so the whole step equals
    -eta times the gradient of this pattern's xi.  Returns the network.
    """
    x = example.inputs
    d = example.targets
    if len(d) != net.n_outputs:
        raise ArityMismatchError(
            f"expected {net.n_outputs} targets, got {len(d)}"
        )
    act = forward(net, x)
    y = act.output
    hidden = act.hidden
    delta_o = (d - y) * y * (1.0 - y)
    back = net.output_weights[:, :-1].T @ delta_o
    delta_h = back * hidden * (1.0 - hidden)
    ow = net.output_weights
    hw = net.hidden_weights
    ow[:, :-1] += eta * np.outer(delta_o, hidden)
    ow[:, -1] += eta * delta_o
    hw[:, :-1] += eta * np.outer(delta_h, x)
    hw[:, -1] += eta * delta_h
    return net


def train_epoch(net, train, eta, order):
    """One pass of online updates over the training set in the given order."""
    if len(train) == 0:
        raise EmptySetError("cannot train on an empty set")
    order = np.asarray(order)
    if order.shape != (len(train),) or not np.array_equal(
        np.sort(order), np.arange(len(train))
    ):
        raise ValueError("order must be a permutation of the train indices")
    for i in order:
        backprop_step(net, train[i], eta)
    return net


def _phase_record(net, data, epochs_cumulative):
    rule = rule_for_outputs(data.header.n_outputs)
    rep_train = efficiency(net, data.train, rule)
    rep_valid = efficiency(net, data.valid, rule)
    rep_test = efficiency(net, data.test, rule)
    return PhaseRecord(
        h=net.h,
        epochs_cumulative=epochs_cumulative,
        train_classified=rep_train.classified,
        train_eff=rep_train.percent,
        train_mse=average_error(net, data.train),
        valid_classified=rep_valid.classified,
        valid_eff=rep_valid.percent,
        valid_mse=average_error(net, data.valid),
        test_classified=rep_test.classified,
        test_eff=rep_test.percent,
        overall_eff=overall_efficiency((rep_train, rep_valid, rep_test)),
    )


def train_phase(net, data, cfg, rng=None, epochs_before=0):
    """Train one topology with hold-out early stopping.

    Runs up to ``cfg.epochs_per_phase`` epochs, evaluating validation
    error after each.  Keeps the snapshot with the lowest validation
    error seen and ends the phase once ``cfg.patience`` consecutive
    epochs pass without improvement.  The input network is not mutated.

    Returns ``(best_net, epochs_used, record)`` where ``record`` is
    computed from the returned snapshot and carries
    ``epochs_before + epochs_used`` as its cumulative epoch count.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    work = net.copy()
    n_train = len(data.train)
    identity = np.arange(n_train)
    best_net = None
    best_err = math.inf
    bad = 0
    epochs_used = 0
    for _ in range(cfg.epochs_per_phase):
        order = rng.permutation(n_train) if cfg.shuffle else identity
        train_epoch(work, data.train, cfg.eta, order)
        epochs_used += 1
        err = average_error(work, data.valid)
        if err < best_err:
            best_err = err
            best_net = work.copy()
            bad = 0
        else:
            bad += 1
            if bad >= cfg.patience:
                break
    record = _phase_record(best_net, data, epochs_before + epochs_used)
    return best_net, epochs_used, record


def _acceptable(record, cfg):
    eff = (
        record.valid_eff
        if cfg.stopping_set == "validation"
        else record.test_eff
    )
    return record.valid_mse <= cfg.xi_target and eff >= cfg.eff_target


def constructive_train(data, cfg):
    """Grow a network one hidden unit at a time until acceptance.

    Starts at h=1 with random weights, alternates a training phase with
    the acceptance test (validation error at most ``xi_target`` AND
    efficiency on the stopping set at least ``eff_target``), and grows by
    one unit on failure.  Stops with ``stop_reason="accepted"`` on
    success, or with ``stop_reason="h_max_reached"`` after the phase at
    ``h_max``, in which case the snapshot with the highest overall
    efficiency is returned.

    Returns ``(network, history)``.
    """
    if len(data.train) == 0 or len(data.valid) == 0 or len(data.test) == 0:
        raise EmptySetError("all three partitions must be nonempty")
    rng = np.random.default_rng(cfg.seed)
    net = init_network(
        data.header.n_inputs, data.header.n_outputs, cfg.init_range, rng
    )
    records = []
    snapshots = []
    epochs_total = 0
    while True:
        best_net, used, record = train_phase(
            net, data, cfg, rng=rng, epochs_before=epochs_total
        )
        epochs_total += used
        records.append(record)
        snapshots.append(best_net)
        if _acceptable(record, cfg):
            history = GrowthHistory(tuple(records), STOP_ACCEPTED)
            return best_net, history
        if best_net.h >= cfg.h_max:
            history = GrowthHistory(tuple(records), STOP_H_MAX)
            return snapshots[history.selected_index()], history
        net = add_hidden_unit(
            best_net, cfg.init_range, rng, zero_output=cfg.grow_zero_output
        )
