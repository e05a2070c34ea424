"""Command line pipeline: simulate -> estimate -> assemble/train -> evaluate.

Every command reads and writes inside a workspace directory (see
``workspace.py``). Options resolve as flag, then config file entry of
the same name, then built-in default. Exit codes: 0 success, 1 bad
usage or invalid input, 2 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import workspace as ws
from .assembly import AssemblyConfig, assemble_form
from .cohort import CohortSpec, generate_cohort, generate_training_set
from .estimation import (GsConfig, PriorConfig, estimate_abilities_map,
                         gauss_seidel_estimate, ResponseMatrix)
from .evaluation import LabeledPrediction, curve_sweep, kfold_split
from .fml import (build_rule_base, default_assessment_kb, infer_batch,
                  parse_fml, serialize_fml, FuzzySystem)
from .irt import (ItemParams, PerformanceLevel, icc_probability,
                  item_information, test_information, test_standard_error,
                  THETA_RANGE)
from .learning import (LearnConfig, PinningMethod, TrainingSet, gfml_train,
                       pfml_train)

LEVEL_LABELS = {level.label: level for level in PerformanceLevel}
TRAIN_METHODS = ("pfml1", "pfml2", "gfml")
CURVE_KINDS = ("icc", "item-info", "tif-tse", "fitness-history", "pr", "roc")


class UsageError(ValueError):
    """Bad flags or flag values; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


class _Options:
    """Flag / config file / default resolution with an effective echo."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config: dict[str, str] = {}
        if getattr(args, "config", None):
            path = Path(args.config)
            if not path.is_file():
                raise UsageError(f"config file not found: {path}")
            self.config = ws.parse_config_file(path)
        self.effective: dict = {}

    def get(self, key: str, default, cast: Callable = str):
        value = getattr(self.args, key.replace("-", "_"), None)
        if value is None and key in self.config:
            raw = self.config[key]
            try:
                value = _parse_bool(raw) if cast is bool else cast(raw)
            except ValueError:
                raise UsageError(f"config key {key}: cannot parse {raw!r}")
        if value is None:
            value = default
        self.effective[key] = value
        return value

    @property
    def seed(self) -> int:
        return self.get("seed", 0, int)

    def layout(self) -> ws.WorkspaceLayout:
        root = self.get("workspace", ".", str)
        return ws.WorkspaceLayout(Path(root)).ensure()


def _require(path: Path, producer: str) -> Path:
    if not Path(path).is_file():
        raise UsageError(f"missing {path}; run `fuzzyirt {producer}` first "
                         f"or pass the file explicitly")
    return Path(path)


# ---------------------------------------------------------------------------
# curve generation


def emit_curves(kind: str, *, item: ItemParams | None = None,
                items: Sequence[ItemParams] | None = None,
                history: Sequence[float] | None = None,
                preds: Sequence[LabeledPrediction] | None = None,
                theta_step: float = 0.01) -> tuple[list[str], list[tuple]]:
    """Rows for one plottable curve, as (header, rows).

    Undefined metric values come back as None so writers can leave the
    cell empty.
    """
    if kind in ("icc", "item-info", "tif-tse"):
        n = int(round((THETA_RANGE[1] - THETA_RANGE[0]) / theta_step))
        grid = np.linspace(THETA_RANGE[0], THETA_RANGE[1], n + 1)
    if kind == "icc":
        if item is None:
            raise ValueError("icc curve needs an item")
        rows = [(float(t), icc_probability(item, float(t))) for t in grid]
        return ["theta", "probability"], rows
    if kind == "item-info":
        if item is None:
            raise ValueError("item-info curve needs an item")
        rows = [(float(t), item_information(item, float(t))) for t in grid]
        return ["theta", "information"], rows
    if kind == "tif-tse":
        if not items:
            raise ValueError("tif-tse curve needs an item list")
        rows = []
        for t in grid:
            tif = test_information(items, float(t))
            tse = test_standard_error(items, float(t)) if tif > 0 else None
            rows.append((float(t), tif, tse))
        return ["theta", "tif", "tse"], rows
    if kind == "fitness-history":
        if history is None:
            raise ValueError("fitness-history curve needs a history")
        rows = [(gen, float(value)) for gen, value in enumerate(history)]
        return ["generation", "mse"], rows
    if kind in ("pr", "roc"):
        if preds is None:
            raise ValueError(f"{kind} curve needs labeled predictions")
        sweep = curve_sweep(preds)
        if kind == "pr":
            rows = [(p.threshold, p.precision, p.recall) for p in sweep.points]
            return ["threshold", "precision", "recall"], rows
        rows = [(p.threshold, p.fpr, p.tpr) for p in sweep.points]
        return ["threshold", "fpr", "tpr"], rows
    raise ValueError(f"unknown curve kind: {kind!r}")


# ---------------------------------------------------------------------------
# k-fold evaluation protocol


@dataclass(frozen=True)
class FoldOutcome:
    """Everything produced while scoring one fold."""

    fold: int
    train_ids: tuple[str, ...]
    test_ids: tuple[str, ...]
    items: tuple[ItemParams, ...]
    gs_sweeps: int
    final_fitness: float
    history: np.ndarray
    preds_train: dict[str, list[LabeledPrediction]]
    preds_test: dict[str, list[LabeledPrediction]]
    auc_train: dict[str, float | None]
    auc_test: dict[str, float | None]


def _observed_cells(matrix: ResponseMatrix) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = np.nonzero(matrix.data >= 0)
    return rows, cols


def _cell_predictions(matrix: ResponseMatrix, items: Sequence[ItemParams],
                      thetas: np.ndarray, before: FuzzySystem,
                      after: FuzzySystem) -> dict[str, list[LabeledPrediction]]:
    """Score every observed cell with both rule bases and the item model."""
    rows, cols = _observed_cells(matrix)
    a = np.array([it.a for it in items])
    b = np.array([it.b for it in items])
    c = np.array([it.c for it in items])
    theta = np.clip(np.asarray(thetas, dtype=float),
                    THETA_RANGE[0], THETA_RANGE[1])
    inputs = np.column_stack([a[cols], b[cols], c[cols], theta[rows]])
    actual = matrix.data[rows, cols].astype(int)
    out: dict[str, list[LabeledPrediction]] = {}
    for name, system in (("before", before), ("after", after)):
        values, _ = infer_batch(system, inputs)
        out[name] = [LabeledPrediction(float(np.clip(v, 0.0, 1.0)), int(u))
                     for v, u in zip(values, actual)]
    p = c[cols] + (1.0 - c[cols]) / (1.0 + np.exp(-1.7 * a[cols] * (theta[rows] - b[cols])))
    out["threepl"] = [LabeledPrediction(float(v), int(u))
                      for v, u in zip(p, actual)]
    return out


def _auc_of(preds: dict[str, list[LabeledPrediction]]) -> dict[str, float | None]:
    return {name: curve_sweep(values).auc for name, values in preds.items()}


def evaluate_kfold(matrix: ResponseMatrix, k: int = 5, rng_seed: int = 0,
                   method: str = "pfml2", train_rows: int = 500,
                   max_sweeps: int = 100, max_generations: int = 150,
                   fitness_target: float = 0.001,
                   prior: PriorConfig | None = None) -> list[FoldOutcome]:
    """Cross-validated before/after/item-model comparison.

    Per fold: alternating estimation on the training students, a sampled
    training set over the estimated parameters, membership tuning, MAP
    abilities for the held-out students, then every observed cell is
    scored by the untrained rule base, the trained rule base and the
    estimated item model against the recorded response.
    """
    if method not in TRAIN_METHODS:
        raise ValueError(f"unknown training method: {method!r}")
    prior = prior or PriorConfig()
    split = kfold_split(matrix.student_ids, k=k, rng_seed=rng_seed)
    before = build_rule_base(default_assessment_kb())
    outcomes = []
    for fold in range(k):
        train_ids = split.train_ids(fold)
        test_ids = split.test_ids(fold)
        train_matrix = matrix.select_students(train_ids)
        test_matrix = matrix.select_students(test_ids)
        gs = gauss_seidel_estimate(train_matrix, GsConfig(max_sweeps=max_sweeps),
                                   prior)
        data = _sampled_training_set(train_matrix, gs.items, gs.theta,
                                     train_rows, rng_seed + fold)
        cfg = LearnConfig(
            method=(PinningMethod.FREE_ENDPOINTS if method == "pfml1"
                    else PinningMethod.PINNED_ENDPOINTS),
            max_generations=max_generations,
            fitness_target=fitness_target,
            rng_seed=rng_seed + fold,
        )
        trainer = gfml_train if method == "gfml" else pfml_train
        result = trainer(data, cfg)
        test_thetas = estimate_abilities_map(test_matrix.data, gs.items, prior)
        preds_train = _cell_predictions(train_matrix, gs.items, gs.theta,
                                        before, result.system)
        preds_test = _cell_predictions(test_matrix, gs.items, test_thetas,
                                       before, result.system)
        outcomes.append(FoldOutcome(
            fold=fold,
            train_ids=tuple(train_ids),
            test_ids=tuple(test_ids),
            items=tuple(gs.items),
            gs_sweeps=gs.sweeps,
            final_fitness=float(result.metadata["final_fitness"]),
            history=result.history,
            preds_train=preds_train,
            preds_test=preds_test,
            auc_train=_auc_of(preds_train),
            auc_test=_auc_of(preds_test),
        ))
    return outcomes


def _sampled_training_set(matrix: ResponseMatrix, items: Sequence[ItemParams],
                          thetas: np.ndarray, n_rows: int,
                          rng_seed: int) -> TrainingSet:
    """Rows drawn from the observed cells of one fold's training split."""
    rng = np.random.default_rng(rng_seed)
    rows, cols = _observed_cells(matrix)
    pick = rng.integers(0, len(rows), size=n_rows)
    theta = np.clip(np.asarray(thetas, dtype=float),
                    THETA_RANGE[0], THETA_RANGE[1])
    a = np.array([items[j].a for j in cols[pick]])
    b = np.array([items[j].b for j in cols[pick]])
    c = np.array([items[j].c for j in cols[pick]])
    t = theta[rows[pick]]
    desired = c + (1.0 - c) / (1.0 + np.exp(-1.7 * a * (t - b)))
    return TrainingSet(np.column_stack([a, b, c, t]), desired)


def fold_summary(outcomes: Sequence[FoldOutcome], k: int,
                 method: str) -> dict:
    def mean_over(key: str, which: str) -> float | None:
        values = [getattr(o, which)[key] for o in outcomes
                  if getattr(o, which)[key] is not None]
        return float(np.mean(values)) if values else None

    names = ("before", "after", "threepl")
    return {
        "k": k,
        "method": method,
        "folds": [
            {
                "fold": o.fold,
                "n_train": len(o.train_ids),
                "n_test": len(o.test_ids),
                "gs_sweeps": o.gs_sweeps,
                "final_fitness": o.final_fitness,
                "auc_train": o.auc_train,
                "auc_test": o.auc_test,
            }
            for o in outcomes
        ],
        "mean_auc_train": {n: mean_over(n, "auc_train") for n in names},
        "mean_auc_test": {n: mean_over(n, "auc_test") for n in names},
    }


# ---------------------------------------------------------------------------
# command handlers


def cmd_simulate(opts: _Options) -> int:
    layout = opts.layout()
    spec = CohortSpec(
        n_students=opts.get("students", 732, int),
        n_items=opts.get("items", 51, int),
        items_per_form=opts.get("items-per-form", 28, int),
        common_items=opts.get("common-items", 5, int),
        rng_seed=opts.seed,
    )
    items, thetas, matrix = generate_cohort(spec)
    artifacts = [
        ws.write_responses(matrix, layout.responses / "synthetic.csv"),
        ws.write_items(items, matrix.item_ids, layout.params / "true_items.csv"),
        ws.write_abilities(thetas, matrix.student_ids,
                           layout.params / "true_abilities.csv"),
    ]
    for artifact in artifacts:
        ws.write_sidecar(artifact, "simulate", opts.effective, opts.seed)
    ws.write_run_record(layout, "simulate", opts.effective, opts.seed, artifacts)
    print(f"simulated {matrix.n_students} students x {matrix.n_items} items "
          f"-> {artifacts[0]}")
    return 0


def cmd_estimate_gs(opts: _Options) -> int:
    layout = opts.layout()
    default_in = layout.responses / "synthetic.csv"
    source = Path(opts.get("responses", str(default_in), str))
    matrix = ws.ingest_responses(_require(source, "simulate"))
    cfg = GsConfig(
        max_sweeps=opts.get("max-sweeps", 100, int),
        tolerance=opts.get("tolerance", 1e-3, float),
    )
    result = gauss_seidel_estimate(matrix, cfg, PriorConfig())
    artifacts = [
        ws.write_items(result.items, matrix.item_ids,
                       layout.params / "gs_items.csv"),
        ws.write_abilities(result.theta, matrix.student_ids,
                           layout.params / "gs_abilities.csv"),
    ]
    for artifact in artifacts:
        ws.write_sidecar(artifact, "estimate-gs", opts.effective, opts.seed)
    ws.write_run_record(layout, "estimate-gs", opts.effective, opts.seed,
                        artifacts)
    print(f"alternating estimation converged after {result.sweeps} sweeps "
          f"(last max change {result.max_change_history[-1]:.6f})")
    return 0


def cmd_estimate_bayes(opts: _Options) -> int:
    layout = opts.layout()
    source = Path(opts.get("responses", str(layout.responses / "synthetic.csv"), str))
    items_path = Path(opts.get("items", str(layout.params / "gs_items.csv"), str))
    matrix = ws.ingest_responses(_require(source, "simulate"))
    items, item_ids = ws.read_items(_require(items_path, "estimate-gs"))
    if list(item_ids) != list(matrix.item_ids):
        raise UsageError("item ids in the parameter file do not match the "
                         "response matrix")
    theta = estimate_abilities_map(matrix.data, items, PriorConfig())
    artifact = ws.write_abilities(theta, matrix.student_ids,
                                  layout.params / "bayes_abilities.csv")
    ws.write_sidecar(artifact, "estimate-bayes", opts.effective, opts.seed)
    ws.write_run_record(layout, "estimate-bayes", opts.effective, opts.seed,
                        [artifact])
    print(f"estimated {len(theta)} abilities -> {artifact}")
    return 0


def cmd_assemble(opts: _Options) -> int:
    layout = opts.layout()
    items_path = Path(opts.get("items", str(layout.params / "gs_items.csv"), str))
    items, item_ids = ws.read_items(_require(items_path, "estimate-gs"))
    label = opts.get("level", "Proficient", str)
    if label not in LEVEL_LABELS:
        raise UsageError(f"unknown level {label!r}; choose from "
                         f"{', '.join(LEVEL_LABELS)}")
    cfg = AssemblyConfig(
        form_size=opts.get("form-size", 10, int),
        target_level=LEVEL_LABELS[label],
        cohort_size=opts.get("cohort-size", 100, int),
        budget=opts.get("budget", 200, int),
        rng_seed=opts.seed,
    )
    if cfg.form_size > len(items):
        raise UsageError("form size exceeds the item bank")
    form, states = assemble_form(items, cfg)
    chosen = [(j, item_ids[j], items[j]) for j in form.item_indices]
    form_path = layout.forms / f"form_{label}.csv"
    ws.write_csv(form_path, ["bank_index", "item_id", "a", "b", "c"],
                 [(j, iid, repr(it.a), repr(it.b), repr(it.c))
                  for j, iid, it in chosen])
    curve_path = layout.forms / f"form_{label}_curves.csv"
    ws.write_csv(curve_path, ["theta", "tif", "tse"],
                 zip(form.theta_grid, form.tif_curve, form.tse_curve))
    artifacts = [form_path, curve_path]
    for artifact in artifacts:
        ws.write_sidecar(artifact, "assemble", opts.effective, opts.seed)
    ws.write_run_record(layout, "assemble", opts.effective, opts.seed, artifacts)
    print(f"assembled {len(chosen)}-item form for {label} "
          f"(objective {states[-1].best_objective:.6f}) -> {form_path}")
    return 0


def cmd_build_kb(opts: _Options) -> int:
    layout = opts.layout()
    kb = default_assessment_kb()
    path = layout.kb / "before_learning.xml"
    path.write_text(serialize_fml(kb))
    ws.write_sidecar(path, "build-kb", opts.effective, opts.seed)
    ws.write_run_record(layout, "build-kb", opts.effective, opts.seed, [path])
    print(f"wrote knowledge base ({sum(len(v.sets) for v in kb.variables)} "
          f"terms) -> {path}")
    return 0


def cmd_gen_rules(opts: _Options) -> int:
    layout = opts.layout()
    kb_path = Path(opts.get("kb", str(layout.kb / "before_learning.xml"), str))
    kb = parse_fml(_require(kb_path, "build-kb").read_text())
    system = build_rule_base(kb)
    path = layout.kb / "rule_base.xml"
    path.write_text(serialize_fml(system))
    ws.write_sidecar(path, "gen-rules", opts.effective, opts.seed)
    ws.write_run_record(layout, "gen-rules", opts.effective, opts.seed, [path])
    print(f"generated {len(system.rules)} rules -> {path}")
    return 0


def cmd_train(opts: _Options) -> int:
    layout = opts.layout()
    method = opts.get("method", "pfml2", str)
    if method not in TRAIN_METHODS:
        raise UsageError(f"unknown method {method!r}; choose from "
                         f"{', '.join(TRAIN_METHODS)}")
    items_path = Path(opts.get("items", str(layout.params / "gs_items.csv"), str))
    abil_path = Path(opts.get("abilities", str(layout.params / "gs_abilities.csv"), str))
    items, _ = ws.read_items(_require(items_path, "estimate-gs"))
    thetas, _ = ws.read_abilities(_require(abil_path, "estimate-gs"))
    mode = opts.get("training-mode", "sampled", str)
    data = generate_training_set(
        items=items,
        thetas=np.clip(np.asarray(thetas), THETA_RANGE[0], THETA_RANGE[1]),
        mode=mode,
        n_rows=opts.get("rows", 500, int),
        rng_seed=opts.seed,
    )
    cfg = LearnConfig(
        method=(PinningMethod.FREE_ENDPOINTS if method == "pfml1"
                else PinningMethod.PINNED_ENDPOINTS),
        max_generations=opts.get("generations", 1000, int),
        fitness_target=opts.get("target", 0.001, float),
        rng_seed=opts.seed,
    )
    trainer = gfml_train if method == "gfml" else pfml_train
    result = trainer(data, cfg)
    kb_path = layout.kb / f"after_learning_{method}.xml"
    kb_path.write_text(serialize_fml(result.system))
    header, rows = emit_curves("fitness-history", history=result.history)
    hist_path = ws.write_csv(layout.results / f"fitness_history_{method}.csv",
                             header, rows)
    artifacts = [kb_path, hist_path]
    meta = dict(opts.effective)
    meta.update({k: v for k, v in result.metadata.items()})
    for artifact in artifacts:
        ws.write_sidecar(artifact, "train", meta, opts.seed)
    ws.write_run_record(layout, "train", meta, opts.seed, artifacts)
    print(f"trained {method} for {result.metadata['generations']} generations "
          f"(mse {result.metadata['final_fitness']:.6f}) -> {kb_path}")
    return 0


def cmd_evaluate(opts: _Options) -> int:
    layout = opts.layout()
    source = Path(opts.get("responses", str(layout.responses / "synthetic.csv"), str))
    matrix = ws.ingest_responses(_require(source, "simulate"))
    method = opts.get("method", "pfml2", str)
    if method not in TRAIN_METHODS:
        raise UsageError(f"unknown method {method!r}; choose from "
                         f"{', '.join(TRAIN_METHODS)}")
    k = opts.get("kfold", 5, int)
    outcomes = evaluate_kfold(
        matrix, k=k, rng_seed=opts.seed, method=method,
        train_rows=opts.get("rows", 500, int),
        max_sweeps=opts.get("max-sweeps", 100, int),
        max_generations=opts.get("generations", 150, int),
        fitness_target=opts.get("target", 0.001, float),
    )
    artifacts = []
    for o in outcomes:
        for name, preds in o.preds_test.items():
            for kind in ("pr", "roc"):
                header, rows = emit_curves(kind, preds=preds)
                path = layout.results / f"fold{o.fold}_{name}_test_{kind}.csv"
                artifacts.append(ws.write_csv(path, header, rows))
        header, rows = emit_curves("fitness-history", history=o.history)
        artifacts.append(ws.write_csv(
            layout.results / f"fold{o.fold}_fitness.csv", header, rows))
    summary = fold_summary(outcomes, k, method)
    summary_path = layout.results / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    artifacts.append(summary_path)
    for artifact in artifacts:
        ws.write_sidecar(artifact, "evaluate", opts.effective, opts.seed)
    ws.write_run_record(layout, "evaluate", opts.effective, opts.seed, artifacts)
    mean = summary["mean_auc_test"]
    def show(v): return "n/a" if v is None else f"{v:.4f}"
    print(f"{k}-fold evaluation ({method}): test AUC before "
          f"{show(mean['before'])}, after {show(mean['after'])}, "
          f"item model {show(mean['threepl'])} -> {summary_path}")
    return 0


def _read_history_csv(path: Path) -> list[float]:
    import csv
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["generation", "mse"]:
        raise ValueError(f"{path}: expected header generation,mse")
    return [float(row[1]) for row in rows[1:] if row]


def _read_predictions_csv(path: Path) -> list[LabeledPrediction]:
    import csv
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["predicted", "actual"]:
        raise ValueError(f"{path}: expected header predicted,actual")
    out = []
    for number, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            out.append(LabeledPrediction(float(row[0]), int(row[1])))
        except ValueError as exc:
            raise ValueError(f"{path}, line {number}: {exc}") from None
    if not out:
        raise ValueError(f"{path}: no prediction rows")
    return out


def cmd_curves(opts: _Options) -> int:
    layout = opts.layout()
    kind = opts.get("kind", None, str)
    if kind not in CURVE_KINDS:
        raise UsageError(f"unknown curve kind {kind!r}; choose from "
                         f"{', '.join(CURVE_KINDS)}")
    spec: dict = {}
    if kind in ("icc", "item-info"):
        spec["item"] = ItemParams(
            opts.get("a", 1.0, float),
            opts.get("b", 0.0, float),
            opts.get("c", 0.0, float),
        )
    elif kind == "tif-tse":
        items_path = Path(opts.get("items", str(layout.params / "gs_items.csv"), str))
        spec["items"], _ = ws.read_items(_require(items_path, "estimate-gs"))
    elif kind == "fitness-history":
        hist_path = opts.get("history", None, str)
        if hist_path is None:
            raise UsageError("fitness-history needs --history FILE")
        spec["history"] = _read_history_csv(_require(Path(hist_path), "train"))
    else:
        preds_path = opts.get("predictions", None, str)
        if preds_path is None:
            raise UsageError(f"{kind} needs --predictions FILE "
                             f"(header predicted,actual)")
        if not Path(preds_path).is_file():
            raise UsageError(f"predictions file not found: {preds_path}")
        spec["preds"] = _read_predictions_csv(Path(preds_path))
    header, rows = emit_curves(kind, **spec)
    out = Path(opts.get("out", str(layout.results / f"{kind}.csv"), str))
    out.parent.mkdir(parents=True, exist_ok=True)
    ws.write_csv(out, header, rows)
    ws.write_sidecar(out, "curves", opts.effective, opts.seed)
    ws.write_run_record(layout, "curves", opts.effective, opts.seed, [out])
    print(f"wrote {len(rows)} {kind} rows -> {out}")
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> _Parser:
    parser = _Parser(prog="fuzzyirt",
                     description="Assessment pipeline: simulation, parameter "
                                 "estimation, form assembly, fuzzy scoring "
                                 "and its membership-function tuning.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", help="workspace directory (default .)")
    common.add_argument("--seed", type=int, help="random seed (default 0)")
    common.add_argument("--config", help="key = value config file")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("simulate", parents=[common],
                       help="draw a synthetic two-form cohort")
    p.add_argument("--students", type=int)
    p.add_argument("--items", type=int)
    p.add_argument("--items-per-form", type=int)
    p.add_argument("--common-items", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate-gs", parents=[common],
                       help="alternating item/ability estimation")
    p.add_argument("--responses")
    p.add_argument("--max-sweeps", type=int)
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_estimate_gs)

    p = sub.add_parser("estimate-bayes", parents=[common],
                       help="MAP abilities for known item parameters")
    p.add_argument("--responses")
    p.add_argument("--items")
    p.set_defaults(func=cmd_estimate_bayes)

    p = sub.add_parser("assemble", parents=[common],
                       help="evolve an importance vector into a form")
    p.add_argument("--items")
    p.add_argument("--level")
    p.add_argument("--form-size", type=int)
    p.add_argument("--cohort-size", type=int)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("build-kb", parents=[common],
                       help="write the stock knowledge base")
    p.set_defaults(func=cmd_build_kb)

    p = sub.add_parser("gen-rules", parents=[common],
                       help="derive the full rule base from a knowledge base")
    p.add_argument("--kb")
    p.set_defaults(func=cmd_gen_rules)

    p = sub.add_parser("train", parents=[common],
                       help="tune membership functions against item-model "
                            "probabilities")
    p.add_argument("--method", choices=TRAIN_METHODS)
    p.add_argument("--items")
    p.add_argument("--abilities")
    p.add_argument("--training-mode", choices=("grid", "sampled"))
    p.add_argument("--rows", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--target", type=float)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common],
                       help="k-fold before/after scoring comparison")
    p.add_argument("--responses")
    p.add_argument("--kfold", type=int)
    p.add_argument("--method", choices=TRAIN_METHODS)
    p.add_argument("--rows", type=int)
    p.add_argument("--max-sweeps", type=int)
    p.add_argument("--generations", type=int)
    p.add_argument("--target", type=float)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curves", parents=[common],
                       help="write plottable curve points as CSV")
    p.add_argument("--kind", choices=CURVE_KINDS)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--items")
    p.add_argument("--history")
    p.add_argument("--predictions")
    p.add_argument("--out")
    p.set_defaults(func=cmd_curves)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help()
            return 1
        opts = _Options(args)
        return args.func(opts)
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
