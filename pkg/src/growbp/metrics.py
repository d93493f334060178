"""Classification decision rules and efficiency arithmetic.

Efficiency is the percentage of patterns in a partition whose predicted
class equals the target class.  Overall efficiency pools the correct
counts over all three partitions; it is NOT the mean of the three
per-partition percentages.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dataset import stack_examples
from .errors import ArityMismatchError, EmptySetError
from .network import forward_outputs


class DecisionRule(Enum):
    """How output activations map to a class index."""

    ARGMAX = "argmax"        # one-hot targets, n_outputs >= 2
    THRESHOLD = "threshold"  # single output, cutoff 0.5


def rule_for_outputs(n_outputs):
    """Pick the decision rule implied by the output layer arity."""
    return DecisionRule.THRESHOLD if n_outputs == 1 else DecisionRule.ARGMAX


@dataclass(frozen=True)
class EfficiencyReport:
    """Correctly classified count over a partition."""

    classified: int
    total: int

    @property
    def percent(self):
        return 100.0 * self.classified / self.total


def classify(outputs, rule):
    """Map an output vector to a class index.

    Argmax breaks ties toward the lowest index; the threshold rule returns
    class 1 when the single output is >= 0.5.
    """
    outputs = np.asarray(outputs, dtype=np.float64)
    if rule is DecisionRule.THRESHOLD:
        if outputs.shape != (1,):
            raise ArityMismatchError(
                f"threshold rule needs exactly 1 output, got {outputs.shape}"
            )
        return int(outputs[0] >= 0.5)
    if outputs.ndim != 1 or outputs.shape[0] < 2:
        raise ArityMismatchError(
            f"argmax rule needs >= 2 outputs, got {outputs.shape}"
        )
    return int(np.argmax(outputs))


def target_class(targets, rule):
    """Class index encoded by a 0/1 target vector."""
    return classify(targets, rule)


def efficiency(net, examples, rule):
    """Count patterns whose predicted class equals the target class."""
    if len(examples) == 0:
        raise EmptySetError("efficiency over an empty pattern set")
    X, T = stack_examples(examples)
    Y = forward_outputs(net, X)
    if rule is DecisionRule.THRESHOLD:
        predicted = (Y[:, 0] >= 0.5).astype(int)
        actual = (T[:, 0] >= 0.5).astype(int)
    else:
        predicted = np.argmax(Y, axis=1)
        actual = np.argmax(T, axis=1)
    classified = int(np.count_nonzero(predicted == actual))
    return EfficiencyReport(classified=classified, total=len(examples))


def overall_efficiency(reports):
    """Pooled percent correct across the train/valid/test reports."""
    classified = sum(r.classified for r in reports)
    total = sum(r.total for r in reports)
    return 100.0 * classified / total
