"""Command-line experiment runner.

``growbp train`` executes constructive training over a sweep of seeds and
writes growth tables plus a per-seed summary; ``growbp inspect`` validates
a dataset file; ``growbp render`` reformats stored results.  Every run
records its fully resolved configuration, and result files depend only on
the dataset bytes and that configuration, so reruns are byte-identical.
"""

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .dataset import load_dataset, load_raw_csv
from .errors import ConfigError, GrowbpError
from .metrics import rule_for_outputs
from .profiles import (
    BUNDLED,
    EXPECTED_HEADERS,
    PRESETS,
    bundled_dataset_path,
    match_profile,
)
from .trainer import (
    STOP_ACCEPTED,
    GrowthHistory,
    PhaseRecord,
    TrainConfig,
    constructive_train,
)

DATASET_KINDS = ("proben1", "raw-csv")
OUTPUT_FORMATS = ("csv", "markdown", "json-lines")

# TrainConfig fields the experiment layer exposes; seed comes from the sweep.
_TRAIN_FIELDS = (
    "eta", "epochs_per_phase", "patience", "xi_target", "eff_target",
    "h_max", "init_range", "stopping_set", "shuffle", "grow_zero_output",
)

_CSV_COLUMNS = (
    "h", "epochs", "train_classified", "train_eff", "train_mse",
    "valid_classified", "valid_eff", "valid_mse",
    "test_classified", "test_eff", "overall_eff", "best",
)

_INT_COLUMNS = {"h", "epochs", "train_classified", "valid_classified",
                "test_classified", "best"}


@dataclass
class ExperimentConfig:
    """Everything a run depends on besides the dataset bytes."""

    dataset_path: str
    dataset_kind: str = "proben1"
    eta: float = 0.7
    epochs_per_phase: int = 500
    patience: int = 50
    xi_target: float = 0.0
    eff_target: float = 100.0
    h_max: int = 8
    init_range: float = 1.0
    stopping_set: str = "validation"
    shuffle: bool = False
    grow_zero_output: bool = False
    sweep_seeds: tuple = tuple(range(10))
    output_path: str = "results"
    output_format: str = "csv"
    n_jobs: int = 0
    report_only: bool = False

    def __post_init__(self):
        if not self.dataset_path:
            raise ConfigError("a dataset path is required")
        if self.dataset_kind not in DATASET_KINDS:
            raise ConfigError(
                f"dataset_kind must be one of {DATASET_KINDS}, "
                f"got {self.dataset_kind!r}"
            )
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(
                f"output_format must be one of {OUTPUT_FORMATS}, "
                f"got {self.output_format!r}"
            )
        self.sweep_seeds = tuple(int(s) for s in self.sweep_seeds)
        if len(self.sweep_seeds) == 0:
            raise ConfigError("sweep_seeds must not be empty")
        if self.n_jobs < 0:
            raise ConfigError(f"n_jobs must be >= 0, got {self.n_jobs}")
        # Validate the training fields eagerly so a bad config fails
        # before any training starts.
        self.train_config(self.sweep_seeds[0])

    def train_config(self, seed):
        kwargs = {name: getattr(self, name) for name in _TRAIN_FIELDS}
        if self.report_only:
            # Sentinel targets nothing can reach: every run explores all
            # h up to h_max and reports the best network found.
            kwargs["xi_target"] = 0.0
            kwargs["eff_target"] = 101.0
        return TrainConfig(seed=seed, **kwargs)

    def jobs(self):
        if self.n_jobs:
            return min(self.n_jobs, len(self.sweep_seeds))
        return min(len(self.sweep_seeds), os.cpu_count() or 1)


def resolve_dataset_path(name_or_path):
    """Accept a real path or the bare name of a bundled benchmark."""
    p = Path(name_or_path)
    if not p.exists() and str(name_or_path) in BUNDLED:
        return bundled_dataset_path(str(name_or_path))
    return p


def load_any(cfg):
    path = resolve_dataset_path(cfg.dataset_path)
    if cfg.dataset_kind == "raw-csv":
        return load_raw_csv(path)
    return load_dataset(path)


def _fmt(value):
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _record_row(record, best):
    return [
        record.h, record.epochs_cumulative,
        record.train_classified, record.train_eff, record.train_mse,
        record.valid_classified, record.valid_eff, record.valid_mse,
        record.test_classified, record.test_eff, record.overall_eff,
        int(best),
    ]


def render_table(history, fmt):
    """Format a growth history as one row per phase.

    The selected phase (the accepting one, or the best found when growth
    hit the cap) is flagged in the ``best`` column in CSV, bolded in
    markdown, and marked ``"selected": true`` in JSON lines.  CSV cells
    keep full float precision and round-trip exactly; markdown rounds for
    display (two decimals for set efficiencies, five for the overall
    column).
    """
    selected = history.selected_index()
    if fmt == "csv":
        lines = [",".join(_CSV_COLUMNS)]
        for i, rec in enumerate(history.phases):
            lines.append(
                ",".join(_fmt(v) for v in _record_row(rec, i == selected))
            )
        lines.append(f"# stop_reason={history.stop_reason}")
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        header = ("| h | epochs | train corr. | train eff | train mse "
                  "| valid corr. | valid eff | valid mse "
                  "| test corr. | test eff | overall eff |")
        rule = "|" + "---|" * 11
        lines = [header, rule]
        for i, rec in enumerate(history.phases):
            cells = [
                str(rec.h), str(rec.epochs_cumulative),
                str(rec.train_classified), f"{rec.train_eff:.2f}",
                f"{rec.train_mse:.4f}",
                str(rec.valid_classified), f"{rec.valid_eff:.2f}",
                f"{rec.valid_mse:.4f}",
                str(rec.test_classified), f"{rec.test_eff:.2f}",
                f"{rec.overall_eff:.5f}",
            ]
            if i == selected:
                cells = [f"**{c}**" for c in cells]
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
        lines.append(f"stop reason: {history.stop_reason}")
        return "\n".join(lines) + "\n"
    if fmt == "json-lines":
        return "".join(
            _json_line(rec, i == selected, history.stop_reason)
            for i, rec in enumerate(history.phases)
        )
    raise ConfigError(f"unknown table format {fmt!r}")


def _json_line(record, selected, stop_reason, seed=None):
    obj = dataclasses.asdict(record)
    obj["selected"] = selected
    obj["stop_reason"] = stop_reason
    if seed is not None:
        obj["seed"] = seed
    return json.dumps(obj, sort_keys=True) + "\n"


def parse_table_csv(text):
    """Rebuild a GrowthHistory from :func:`render_table` CSV output."""
    records = []
    stop_reason = None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != ",".join(_CSV_COLUMNS):
        raise ConfigError("not a growth-table CSV")
    for ln in lines[1:]:
        if ln.startswith("#"):
            key, _, value = ln.lstrip("# ").partition("=")
            if key == "stop_reason":
                stop_reason = value
            continue
        cells = ln.split(",")
        values = {
            name: (int(cell) if name in _INT_COLUMNS else float(cell))
            for name, cell in zip(_CSV_COLUMNS, cells)
        }
        values.pop("best")
        values["epochs_cumulative"] = values.pop("epochs")
        records.append(PhaseRecord(**values))
    if stop_reason is None:
        raise ConfigError("growth-table CSV lacks a stop_reason line")
    return GrowthHistory(tuple(records), stop_reason)


def _run_seed(args):
    data, cfg, seed = args
    _, history = constructive_train(data, cfg.train_config(seed))
    return history


def _write(path, text):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def _summary_lines(results):
    lines = ["seed,stop_reason,h,epochs,test_eff,overall_eff,best"]
    best_seed = None
    best_eff = -1.0
    for seed, history in results:
        rec = history.phases[history.selected_index()]
        if rec.test_eff > best_eff:
            best_eff = rec.test_eff
            best_seed = seed
    for seed, history in results:
        rec = history.phases[history.selected_index()]
        lines.append(",".join([
            str(seed), history.stop_reason, str(rec.h),
            str(rec.epochs_cumulative),
            repr(rec.test_eff), repr(rec.overall_eff),
            str(int(seed == best_seed)),
        ]))
    return lines, best_seed


def _flush_results(cfg, outdir, results):
    if cfg.output_format == "json-lines":
        chunks = []
        for seed, history in results:
            selected = history.selected_index()
            chunks.extend(
                _json_line(rec, i == selected, history.stop_reason, seed)
                for i, rec in enumerate(history.phases)
            )
        _write(outdir / "histories.jsonl", "".join(chunks))
    else:
        suffix = "csv" if cfg.output_format == "csv" else "md"
        for seed, history in results:
            _write(outdir / f"seed_{seed}.{suffix}",
                   render_table(history, cfg.output_format))
    lines, best_seed = _summary_lines(results)
    _write(outdir / "summary.csv", "\n".join(lines) + "\n")
    return best_seed


def run_experiment(cfg, log=print):
    """Run the sweep, write result files, and return the exit status.

    Status 0 means at least one seed's run was accepted (always 0 under
    ``report_only``); status 1 means the sweep finished without any
    acceptance.  Results written per seed are flushed even if a later
    seed fails.
    """
    data = load_any(cfg)
    outdir = Path(cfg.output_path)
    outdir.mkdir(parents=True, exist_ok=True)
    resolved = dataclasses.asdict(cfg)
    resolved["dataset_path"] = str(resolve_dataset_path(cfg.dataset_path))
    resolved["sweep_seeds"] = list(cfg.sweep_seeds)
    _write(outdir / "config.json",
           json.dumps(resolved, sort_keys=True, indent=2) + "\n")

    results = []
    tasks = [(data, cfg, seed) for seed in cfg.sweep_seeds]
    try:
        if cfg.jobs() > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs()) as pool:
                for seed, history in zip(
                    cfg.sweep_seeds, pool.map(_run_seed, tasks)
                ):
                    results.append((seed, history))
        else:
            for task in tasks:
                results.append((task[2], _run_seed(task)))
    finally:
        best_seed = _flush_results(cfg, outdir, results) if results else None

    for seed, history in results:
        rec = history.phases[history.selected_index()]
        log(f"seed {seed}: {history.stop_reason} h={rec.h} "
            f"epochs={rec.epochs_cumulative} test_eff={rec.test_eff:.2f} "
            f"overall={rec.overall_eff:.5f}")
    for seed, history in results:
        if seed == best_seed:
            rec = history.phases[history.selected_index()]
            log(f"best of sweep: seed {seed} h={rec.h} "
                f"test_eff={rec.test_eff:.2f} "
                f"overall={rec.overall_eff:.5f}")
    log(f"results written to {outdir}")
    accepted = any(
        history.stop_reason == STOP_ACCEPTED for _, history in results
    )
    return 0 if (accepted or cfg.report_only) else 1


def parse_seeds(text):
    """Parse ``"3"``, ``"1,4,9"`` or the half-open range ``"0:10"``."""
    text = text.strip()
    if ":" in text:
        lo, _, hi = text.partition(":")
        seeds = tuple(range(int(lo), int(hi)))
    else:
        seeds = tuple(int(part) for part in text.split(",") if part.strip())
    if not seeds:
        raise ConfigError(f"no seeds in {text!r}")
    return seeds


def _load_config_file(path):
    try:
        entries = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"bad config file {path}: {exc}") from None
    if not isinstance(entries, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = set(entries) - known
    if unknown:
        raise ConfigError(
            f"unknown config keys: {', '.join(sorted(unknown))}"
        )
    return entries


def build_experiment_config(args):
    """Merge built-in defaults, dataset preset, config file and flags."""
    file_entries = _load_config_file(args.config) if args.config else {}
    dataset = getattr(args, "dataset", None) or file_entries.get(
        "dataset_path"
    )
    if not dataset:
        raise ConfigError("no dataset given (argument or config file)")
    merged = {"dataset_path": str(dataset)}
    profile = match_profile(dataset)
    if profile:
        merged.update(PRESETS[profile])
    merged.update(file_entries)
    merged["dataset_path"] = str(dataset)
    for name in list(vars(args)):
        if name in ("dataset", "config", "seed", "seeds", "func", "command"):
            continue
        merged[name] = getattr(args, name)
    if getattr(args, "seed", None) is not None:
        merged["sweep_seeds"] = (args.seed,)
    elif getattr(args, "seeds", None) is not None:
        merged["sweep_seeds"] = parse_seeds(args.seeds)
    return ExperimentConfig(**merged)


def cmd_train(args):
    cfg = build_experiment_config(args)
    return run_experiment(cfg)


def cmd_inspect(args):
    path = resolve_dataset_path(args.dataset)
    if args.dataset_kind == "raw-csv":
        data = load_raw_csv(path)
    else:
        data = load_dataset(path)
    h = data.header
    rule = rule_for_outputs(h.n_outputs).value
    print(f"dataset: {path}")
    print(f"inputs: {h.n_inputs}  outputs: {h.n_outputs} ({rule})  "
          f"classes: {h.n_classes}")
    print(f"split: train={h.n_train} valid={h.n_valid} test={h.n_test} "
          f"total={h.total}")
    expected_name = match_profile(path)
    if expected_name is None:
        return 0
    expected = EXPECTED_HEADERS[expected_name]
    if h == expected:
        print(f"header matches the {expected_name} benchmark")
        return 0
    print(f"header differs from the {expected_name} benchmark: "
          f"expected {expected}")
    return 1


def cmd_render(args):
    text = Path(args.results).read_text()
    if text.startswith(",".join(_CSV_COLUMNS)):
        histories = [(None, parse_table_csv(text))]
    else:
        histories = _histories_from_jsonl(text)
    out = []
    for seed, history in histories:
        if seed is not None:
            marker = "#" if args.format == "csv" else "##"
            out.append(f"{marker} seed {seed}")
        out.append(render_table(history, args.format).rstrip("\n"))
    print("\n".join(out))
    return 0


def _histories_from_jsonl(text):
    by_seed = {}
    for ln in text.splitlines():
        if not ln.strip():
            continue
        obj = json.loads(ln)
        seed = obj.pop("seed", None)
        by_seed.setdefault(seed, []).append(obj)
    histories = []
    for seed in sorted(by_seed, key=lambda s: (s is None, s)):
        phases = []
        stop_reason = None
        for obj in by_seed[seed]:
            stop_reason = obj.pop("stop_reason")
            obj.pop("selected")
            phases.append(PhaseRecord(**obj))
        histories.append((seed, GrowthHistory(tuple(phases), stop_reason)))
    return histories


def build_parser():
    parser = argparse.ArgumentParser(
        prog="growbp",
        description=("Constructive training of single-hidden-layer "
                     "networks with per-seed growth tables."),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser(
        "train", help="run constructive training over a sweep of seeds"
    )
    train.add_argument(
        "dataset", nargs="?",
        help=f"dataset file or one of the bundled names {'/'.join(BUNDLED)}",
    )
    train.add_argument("--config", help="JSON file with config defaults")
    seed_group = train.add_mutually_exclusive_group()
    seed_group.add_argument("--seed", type=int, help="run one seed only")
    seed_group.add_argument(
        "--seeds", help="comma list or half-open range, e.g. 0:10"
    )
    train.add_argument("--dataset-kind", dest="dataset_kind",
                       choices=DATASET_KINDS, default=argparse.SUPPRESS)
    train.add_argument("--eta", type=float, default=argparse.SUPPRESS)
    train.add_argument("--epochs-per-phase", dest="epochs_per_phase",
                       type=int, default=argparse.SUPPRESS)
    train.add_argument("--patience", type=int, default=argparse.SUPPRESS)
    train.add_argument("--xi-target", dest="xi_target", type=float,
                       default=argparse.SUPPRESS)
    train.add_argument("--eff-target", dest="eff_target", type=float,
                       default=argparse.SUPPRESS)
    train.add_argument("--h-max", dest="h_max", type=int,
                       default=argparse.SUPPRESS)
    train.add_argument("--init-range", dest="init_range", type=float,
                       default=argparse.SUPPRESS)
    train.add_argument("--stopping-set", dest="stopping_set",
                       choices=("validation", "test"),
                       default=argparse.SUPPRESS)
    train.add_argument("--shuffle", action=argparse.BooleanOptionalAction,
                       default=argparse.SUPPRESS)
    train.add_argument("--grow-zero-output", dest="grow_zero_output",
                       action=argparse.BooleanOptionalAction,
                       default=argparse.SUPPRESS)
    train.add_argument("--report-only", dest="report_only",
                       action=argparse.BooleanOptionalAction,
                       default=argparse.SUPPRESS,
                       help="ignore acceptance targets, explore all h")
    train.add_argument("--output", dest="output_path",
                       default=argparse.SUPPRESS,
                       help="directory for result files (default: results)")
    train.add_argument("--format", dest="output_format",
                       choices=OUTPUT_FORMATS, default=argparse.SUPPRESS)
    train.add_argument("--jobs", dest="n_jobs", type=int,
                       default=argparse.SUPPRESS,
                       help="parallel seed runs (0 = one per core)")
    train.set_defaults(func=cmd_train)

    inspect = sub.add_parser(
        "inspect", help="validate and summarize a dataset file"
    )
    inspect.add_argument("dataset")
    inspect.add_argument("--dataset-kind", dest="dataset_kind",
                         choices=DATASET_KINDS, default="proben1")
    inspect.set_defaults(func=cmd_inspect)

    render = sub.add_parser(
        "render", help="reformat a stored results file"
    )
    render.add_argument("results", help="growth-table CSV or histories.jsonl")
    render.add_argument("--format", choices=OUTPUT_FORMATS,
                        default="markdown")
    render.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GrowbpError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
