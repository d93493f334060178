"""Loading, validation and partitioning of benchmark classification data.

The native container is a Proben1-style ``.dt`` text file: a short
``key=value`` header declaring attribute counts and the sizes of the three
partitions, followed by one example per line (inputs first, then targets,
whitespace separated).  Partitioning is positional: the first
``training_examples`` rows form the training set, the next
``validation_examples`` rows the validation set, and the remaining rows the
test set.  Files ship pre-normalized; values are taken as-is.

A secondary path ingests a raw CSV (header row, last k columns are 0/1
targets) plus a JSON manifest with the split counts, min-max scaling the
feature columns with statistics computed on the training partition only.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CountMismatchError,
    EmptyTrainingError,
    MalformedValueError,
    MissingKeyError,
    NonFiniteError,
    RowArityError,
)

HEADER_KEYS = (
    "bool_in",
    "real_in",
    "bool_out",
    "real_out",
    "training_examples",
    "validation_examples",
    "test_examples",
)


@dataclass(frozen=True)
class Example:
    """One pattern: a feature vector and its 0/1-encoded target vector."""

    inputs: np.ndarray
    targets: np.ndarray


@dataclass(frozen=True)
class DatasetHeader:
    """Attribute counts and partition sizes declared by a dataset file."""

    n_inputs: int
    n_outputs: int
    n_classes: int
    n_train: int
    n_valid: int
    n_test: int

    def __post_init__(self):
        for name in ("n_inputs", "n_outputs", "n_classes",
                     "n_train", "n_valid", "n_test"):
            if getattr(self, name) <= 0:
                raise MalformedValueError(f"{name} must be strictly positive")
        if self.n_outputs != 1 and self.n_outputs != self.n_classes:
            raise MalformedValueError(
                f"n_outputs={self.n_outputs} must be 1 or equal "
                f"n_classes={self.n_classes}"
            )

    @property
    def total(self):
        return self.n_train + self.n_valid + self.n_test


@dataclass(frozen=True)
class SplitDataset:
    """Train/validation/test partitions plus the header that sized them."""

    header: DatasetHeader
    train: tuple
    valid: tuple
    test: tuple

    def __post_init__(self):
        declared = (self.header.n_train, self.header.n_valid,
                    self.header.n_test)
        actual = (len(self.train), len(self.valid), len(self.test))
        if declared != actual:
            raise CountMismatchError(
                f"partition sizes {actual} do not match header {declared}"
            )


def parse_header(text_lines):
    """Parse ``key=value`` header lines into a DatasetHeader.

    Required keys: bool_in, real_in, bool_out, real_out,
    training_examples, validation_examples, test_examples.  Unknown keys
    are ignored; values must be non-negative integers.
    """
    values = {}
    for line in text_lines:
        line = line.strip()
        if not line or "=" not in line:
            continue
        key, _, raw = line.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in HEADER_KEYS:
            continue
        if not raw.isdigit():
            raise MalformedValueError(
                f"header value for {key!r} is not a non-negative integer: "
                f"{raw!r}"
            )
        values[key] = int(raw)
    for key in HEADER_KEYS:
        if key not in values:
            raise MissingKeyError(key)
    n_outputs = values["bool_out"] + values["real_out"]
    n_classes = n_outputs if n_outputs >= 2 else 2
    return DatasetHeader(
        n_inputs=values["bool_in"] + values["real_in"],
        n_outputs=n_outputs,
        n_classes=n_classes,
        n_train=values["training_examples"],
        n_valid=values["validation_examples"],
        n_test=values["test_examples"],
    )


def _parse_row(line, line_no, n_inputs, n_outputs):
    tokens = line.split()
    expected = n_inputs + n_outputs
    if len(tokens) != expected:
        raise RowArityError(line_no, expected, len(tokens))
    try:
        nums = [float(t) for t in tokens]
    except ValueError:
        raise MalformedValueError(
            f"line {line_no}: non-numeric value"
        ) from None
    if not all(math.isfinite(v) for v in nums):
        raise NonFiniteError(line_no)
    targets = nums[n_inputs:]
    if any(t != 0.0 and t != 1.0 for t in targets):
        raise MalformedValueError(
            f"line {line_no}: target components must be exactly 0 or 1"
        )
    return Example(
        inputs=np.array(nums[:n_inputs], dtype=np.float64),
        targets=np.array(targets, dtype=np.float64),
    )


def parse_dataset(text):
    """Parse the full text of a ``.dt`` file into a SplitDataset."""
    lines = text.splitlines()
    header_lines = []
    body = []
    in_header = True
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if in_header and "=" in stripped:
            header_lines.append(stripped)
            continue
        in_header = False
        body.append((line_no, stripped))
    header = parse_header(header_lines)
    if len(body) != header.total:
        raise CountMismatchError(
            f"expected {header.total} data rows, found {len(body)}"
        )
    examples = [
        _parse_row(line, line_no, header.n_inputs, header.n_outputs)
        for line_no, line in body
    ]
    a, b = header.n_train, header.n_train + header.n_valid
    return SplitDataset(
        header=header,
        train=tuple(examples[:a]),
        valid=tuple(examples[a:b]),
        test=tuple(examples[b:]),
    )


def load_dataset(path):
    """Read a Proben1-style ``.dt`` file from disk."""
    with open(path, "r", encoding="ascii") as fh:
        return parse_dataset(fh.read())


def format_dataset(ds):
    """Serialize a SplitDataset back to ``.dt`` text.

    Floats are written with repr precision, so re-parsing the output
    reproduces every value bit-for-bit.
    """
    header = ds.header
    lines = [
        "bool_in=0",
        f"real_in={header.n_inputs}",
        f"bool_out={header.n_outputs}",
        "real_out=0",
        f"training_examples={header.n_train}",
        f"validation_examples={header.n_valid}",
        f"test_examples={header.n_test}",
    ]
    for part in (ds.train, ds.valid, ds.test):
        for ex in part:
            values = [repr(float(v)) for v in ex.inputs]
            values += [repr(float(v)) for v in ex.targets]
            lines.append(" ".join(values))
    return "\n".join(lines) + "\n"


def save_dataset(ds, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_dataset(ds))


def normalize_raw(features, stats_source):
    """Min-max scale feature columns using training-partition statistics.

    Each column is mapped by (x - min) / (max - min) with min and max
    computed over ``stats_source`` (the training rows) only, so validation
    and test values may fall outside [0, 1]; they are not clamped.
    Constant columns map to 0.
    """
    stats = np.asarray(stats_source, dtype=np.float64)
    if stats.size == 0:
        raise EmptyTrainingError("training partition is empty")
    features = np.asarray(features, dtype=np.float64)
    lo = stats.min(axis=0)
    span = stats.max(axis=0) - lo
    safe = np.where(span == 0.0, 1.0, span)
    scaled = (features - lo) / safe
    return np.where(span == 0.0, 0.0, scaled)


def load_raw_csv(path, manifest_path=None):
    """Ingest a raw CSV plus its split manifest into a SplitDataset.

    The CSV has a header row of column names; the last ``target_columns``
    columns hold 0/1 targets.  The manifest (default ``<path>.manifest.json``)
    declares training_examples, validation_examples, test_examples and
    target_columns.  Features are min-max normalized with statistics from
    the training rows.
    """
    if manifest_path is None:
        manifest_path = str(path) + ".manifest.json"
    with open(manifest_path, "r", encoding="ascii") as fh:
        manifest = json.load(fh)
    for key in ("training_examples", "validation_examples",
                "test_examples", "target_columns"):
        if key not in manifest:
            raise MissingKeyError(key)

    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise CountMismatchError("CSV file has no rows")
    columns = [c.strip() for c in lines[0].split(",")]
    n_targets = int(manifest["target_columns"])
    n_inputs = len(columns) - n_targets
    if n_inputs < 1:
        raise MalformedValueError("CSV must have at least one feature column")

    header = DatasetHeader(
        n_inputs=n_inputs,
        n_outputs=n_targets,
        n_classes=n_targets if n_targets >= 2 else 2,
        n_train=int(manifest["training_examples"]),
        n_valid=int(manifest["validation_examples"]),
        n_test=int(manifest["test_examples"]),
    )
    body = lines[1:]
    if len(body) != header.total:
        raise CountMismatchError(
            f"expected {header.total} data rows, found {len(body)}"
        )

    rows = []
    for line_no, line in enumerate(body, start=2):
        tokens = [t.strip() for t in line.split(",")]
        if len(tokens) != len(columns):
            raise RowArityError(line_no, len(columns), len(tokens))
        try:
            nums = [float(t) for t in tokens]
        except ValueError:
            raise MalformedValueError(
                f"line {line_no}: non-numeric value"
            ) from None
        if not all(math.isfinite(v) for v in nums):
            raise NonFiniteError(line_no)
        rows.append(nums)
    matrix = np.array(rows, dtype=np.float64)
    raw_features = matrix[:, :n_inputs]
    targets = matrix[:, n_inputs:]
    bad = (targets != 0.0) & (targets != 1.0)
    if bad.any():
        line_no = int(np.argwhere(bad.any(axis=1))[0][0]) + 2
        raise MalformedValueError(
            f"line {line_no}: target components must be exactly 0 or 1"
        )

    features = normalize_raw(raw_features, raw_features[:header.n_train])
    examples = [
        Example(inputs=features[i].copy(), targets=targets[i].copy())
        for i in range(len(matrix))
    ]
    a, b = header.n_train, header.n_train + header.n_valid
    return SplitDataset(
        header=header,
        train=tuple(examples[:a]),
        valid=tuple(examples[a:b]),
        test=tuple(examples[b:]),
    )


def stack_examples(examples):
    """Stack a sequence of Examples into (inputs, targets) matrices."""
    X = np.stack([ex.inputs for ex in examples])
    T = np.stack([ex.targets for ex in examples])
    return X, T
