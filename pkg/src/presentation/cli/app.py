"""
MedFACT command line.

Commands: gen-synthetic, stats, train, evaluate, kfold, sweep-k,
cluster-report. Every command writes its artifacts and a manifest.json
under --out-dir. Configuration precedence: flags > --config file >
defaults (MEDFACT_* environment settings included).
"""

import json
from dataclasses import asdict
from pathlib import Path
from typing import Annotated, Any

import typer

from src.application.dtos.config import SchemaConfig, SyntheticSpec, TrainConfig, build_config, deep_merge
from src.application.services.hash_service import HashService
from src.application.services.metrics_service import MetricReport, evaluate_scores
from src.application.services.preprocessing_service import preprocess
from src.application.services.split_service import holdout_split
from src.application.services.synthetic_service import generate_synthetic
from src.application.use_cases.clustering.report import cluster_report
from src.application.use_cases.clustering.sweep import sweep_k
from src.application.use_cases.evaluation.evaluate import evaluate_model
from src.application.use_cases.evaluation.kfold import kfold_evaluate
from src.application.use_cases.training.trainer import train
from src.domain.entities.cohort import Cohort
from src.domain.enums import AblationMode
from src.domain.exceptions import ValidationException
from src.infrastructure.config.settings import get_settings
from src.infrastructure.persistence.checkpoint import CheckpointRepository
from src.infrastructure.persistence.psv_cohort import (
    PARTITION_SIDECAR,
    load_psv_cohort,
    partition_document,
    read_partition,
    schema_for,
    write_psv_cohort,
)
from src.infrastructure.storage.local_storage import LocalArtifactStore
from src.presentation.cli.rendering import (
    emit,
    groups_table,
    kfold_table,
    metric_report_text,
    metrics_table,
    statistics_table,
)
from src.presentation.cli.runtime import handle_errors, write_manifest
from src.shared.enums import ReportFormat
from src.shared.telemetry.logging import get_logger

logger = get_logger(__name__)

app = typer.Typer(name="medfact", help="Feature-grouped patient representation learning", no_args_is_help=True)

SCHEMA_FILE = "schema.json"

# Shared options
OutDir = Annotated[Path | None, typer.Option("--out-dir", help="Artifact directory")]
Format = Annotated[ReportFormat, typer.Option("--format", help="Report format on stdout")]
ConfigFile = Annotated[Path | None, typer.Option("--config", help="JSON config file")]
SchemaFile = Annotated[Path | None, typer.Option("--schema", help="Schema JSON (defaults to <data>/schema.json)")]
DataDir = Annotated[Path, typer.Argument(help="Directory of .psv patient files")]
Seed = Annotated[int | None, typer.Option("--seed", min=0)]
Epochs = Annotated[int | None, typer.Option("--epochs")]
BatchSize = Annotated[int | None, typer.Option("--batch-size")]
LearningRate = Annotated[float | None, typer.Option("--learning-rate")]
ClusterCount = Annotated[int | None, typer.Option("--k", help="Feature groups; round(sqrt(F)) when unset")]
ClusterFraction = Annotated[float | None, typer.Option("--cluster-fraction", help="Share of epochs that re-cluster")]
Ablation = Annotated[AblationMode | None, typer.Option("--ablation")]
Patience = Annotated[int | None, typer.Option("--patience")]
TrainFraction = Annotated[float | None, typer.Option("--train-fraction", help="Share of the training split used")]
HiddenSize = Annotated[int | None, typer.Option("--hidden-size")]
EmbedDim = Annotated[int | None, typer.Option("--embed-dim")]
Bandwidth = Annotated[str | None, typer.Option("--bandwidth", help="Kernel sigma, or 'median'")]
DegreeNormalize = Annotated[bool | None, typer.Option("--degree-normalize/--raw-adjacency")]
Bootstrap = Annotated[int, typer.Option("--bootstrap", min=0, help="Bootstrap resamples (0 = none)")]


def _out_dir(out_dir: Path | None) -> LocalArtifactStore:
    return LocalArtifactStore(out_dir or Path(get_settings().default_out_dir))


def _input_store(path: Path) -> tuple[LocalArtifactStore, str]:
    """A read-only view of the directory holding an input file"""
    return LocalArtifactStore(path.parent), path.name


def _read_json(path: Path, what: str) -> dict[str, Any]:
    store, ref = _input_store(path)
    try:
        data = store.read_json(ref)
    except json.JSONDecodeError as e:
        raise ValidationException(f"{what} {path} is not valid JSON: {e.msg}", field=what) from e
    if not isinstance(data, dict):
        raise ValidationException(f"{what} {path} must hold a JSON object", field=what)
    return data


def _schema_path(data_dir: Path, schema_path: Path | None) -> Path:
    return schema_path or data_dir / SCHEMA_FILE


def _schema(data_dir: Path, schema_path: Path | None) -> SchemaConfig:
    path = _schema_path(data_dir, schema_path)
    store, ref = _input_store(path)
    if not store.exists(ref):
        raise ValidationException(f"No schema given and {path} does not exist", field="schema")
    return build_config(SchemaConfig, _read_json(path, "schema"))


def _load_cohort(data_dir: Path, schema_path: Path | None) -> Cohort:
    return load_psv_cohort(data_dir, _schema(data_dir, schema_path))


def _drop_none(values: dict[str, Any]) -> dict[str, Any]:
    out = {}
    for key, value in values.items():
        if isinstance(value, dict):
            value = _drop_none(value)
            if not value:
                continue
        if value is not None:
            out[key] = value
    return out


def _bandwidth(value: str | None) -> float | str | None:
    if value is None or value == "median":
        return value
    try:
        return float(value)
    except ValueError as e:
        raise ValidationException(f"--bandwidth must be a number or 'median', got {value!r}", field="bandwidth") from e


def _train_config(config_path: Path | None, **flags: Any) -> TrainConfig:
    defaults = {"kernel": {"sample_cap": get_settings().correlation_sample_cap}}
    file_values = _read_json(config_path, "config") if config_path else {}
    overrides = _drop_none(
        {
            "epochs": flags["epochs"],
            "batch_size": flags["batch_size"],
            "learning_rate": flags["learning_rate"],
            "k": flags["k"],
            "cluster_epoch_fraction": flags["cluster_fraction"],
            "ablation": flags["ablation"].value if flags["ablation"] else None,
            "seed": flags["seed"],
            "patience": flags["patience"],
            "train_fraction": flags["train_fraction"],
            "kernel": {"bandwidth": _bandwidth(flags["bandwidth"])},
            "model": {
                "hidden_size": flags["hidden_size"],
                "embed_dim": flags["embed_dim"],
                "degree_normalize": flags["degree_normalize"],
            },
        }
    )
    return build_config(TrainConfig, deep_merge(defaults, file_values), overrides)


def _write_report(store: LocalArtifactStore, report: MetricReport, stem: str) -> dict[str, str]:
    return {
        f"{stem}.json": store.write_json(f"{stem}.json", report.to_dict()),
        f"{stem}.txt": store.write_text(f"{stem}.txt", metric_report_text(report)),
    }


@app.command("gen-synthetic")
@handle_errors
def gen_synthetic(
    out_dir: OutDir = None,
    config: ConfigFile = None,
    seed: Seed = None,
    patients: Annotated[int | None, typer.Option("--patients")] = None,
    n_dynamic: Annotated[int | None, typer.Option("--n-dynamic")] = None,
    n_static: Annotated[int | None, typer.Option("--n-static")] = None,
    k_true: Annotated[int | None, typer.Option("--k-true")] = None,
    t_min: Annotated[int | None, typer.Option("--t-min")] = None,
    t_max: Annotated[int | None, typer.Option("--t-max")] = None,
    noise_std: Annotated[float | None, typer.Option("--noise-std")] = None,
    fmt: Format = ReportFormat.TEXT,
) -> None:
    """Write a planted-structure cohort (.psv files) and its planted partition."""
    spec = build_config(
        SyntheticSpec,
        _read_json(config, "config") if config else {},
        {
            "seed": seed,
            "patients": patients,
            "n_dynamic": n_dynamic,
            "n_static": n_static,
            "k_true": k_true,
            "t_min": t_min,
            "t_max": t_max,
            "noise_std": noise_std,
        },
    )
    store = _out_dir(out_dir)
    cohort, partition = generate_synthetic(spec)

    checksums = write_psv_cohort(cohort, store, prefix="cohort")
    schema = schema_for(cohort)
    outputs = {
        "cohort": HashService().digest(checksums),
        f"cohort/{SCHEMA_FILE}": store.write_json(f"cohort/{SCHEMA_FILE}", schema.model_dump(mode="json")),
        PARTITION_SIDECAR: store.write_json(PARTITION_SIDECAR, partition_document(partition, cohort.dynamic_names)),
    }
    stats = cohort.statistics()
    stats_payload = asdict(stats)
    outputs["statistics.json"] = store.write_json("statistics.json", stats_payload)
    write_manifest(store, "gen-synthetic", spec, seed=spec.seed, outputs=outputs)
    emit(stats_payload, fmt, statistics_table(stats, title="Synthetic Cohort"))


@app.command("stats")
@handle_errors
def stats(data_dir: DataDir, schema: SchemaFile = None, fmt: Format = ReportFormat.TEXT) -> None:
    """Print the dataset-statistics table of a .psv cohort."""
    cohort = _load_cohort(data_dir, schema)
    summary = cohort.statistics()
    emit({**asdict(summary), "dropped_short": cohort.dropped_short}, fmt, statistics_table(summary))


@app.command("train")
@handle_errors
def train_command(
    data_dir: DataDir,
    schema: SchemaFile = None,
    out_dir: OutDir = None,
    config: ConfigFile = None,
    seed: Seed = None,
    epochs: Epochs = None,
    batch_size: BatchSize = None,
    learning_rate: LearningRate = None,
    k: ClusterCount = None,
    cluster_fraction: ClusterFraction = None,
    ablation: Ablation = None,
    patience: Patience = None,
    train_fraction: TrainFraction = None,
    hidden_size: HiddenSize = None,
    embed_dim: EmbedDim = None,
    bandwidth: Bandwidth = None,
    degree_normalize: DegreeNormalize = None,
    fmt: Format = ReportFormat.TEXT,
) -> None:
    """Train on an 8:1:1 split; write the checkpoint, history and test metrics."""
    train_config = _train_config(
        config,
        seed=seed,
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        k=k,
        cluster_fraction=cluster_fraction,
        ablation=ablation,
        patience=patience,
        train_fraction=train_fraction,
        hidden_size=hidden_size,
        embed_dim=embed_dim,
        bandwidth=bandwidth,
        degree_normalize=degree_normalize,
    )
    store = _out_dir(out_dir)
    cohort = _load_cohort(data_dir, schema)
    split = holdout_split(cohort.labels, train_config.seed)
    prepared = preprocess(cohort, split.train)
    model = train(prepared, split.train, split.validation, train_config)

    scores, _ = model.predict([prepared.records[i] for i in split.test])
    report = evaluate_scores(scores, prepared.labels[list(split.test)])
    split_ids = {
        part: [cohort.records[i].id for i in getattr(split, part)] for part in ("train", "validation", "test")
    }
    outputs = {
        "checkpoint.json": CheckpointRepository(store).save(model),
        "history.json": store.write_json(
            "history.json",
            {
                "k": model.assignment.k,
                "best_epoch": model.best_epoch,
                "recluster_events": model.recluster_events,
                "epochs": [r.to_dict() for r in model.history],
            },
        ),
        "split.json": store.write_json("split.json", split_ids),
        **_write_report(store, report, "test_report"),
    }
    write_manifest(
        store,
        "train",
        train_config,
        seed=train_config.seed,
        outputs=outputs,
        inputs={"data_dir": str(data_dir), "schema": str(_schema_path(data_dir, schema))},
    )
    emit(report.to_dict(), fmt, metrics_table(report, title=f"Test metrics (K={model.assignment.k})"))


@app.command("evaluate")
@handle_errors
def evaluate_command(
    checkpoint: Annotated[Path, typer.Argument(help="checkpoint.json written by train")],
    data_dir: DataDir,
    schema: SchemaFile = None,
    split_file: Annotated[Path | None, typer.Option("--split", help="split.json; scores its test ids only")] = None,
    bootstrap: Bootstrap = 0,
    seed: Annotated[int, typer.Option("--seed", min=0)] = 0,
    out_dir: OutDir = None,
    fmt: Format = ReportFormat.TEXT,
) -> None:
    """Score a checkpoint on a cohort (AUROC, AUPRC, Min(P+,Se))."""
    model = CheckpointRepository(LocalArtifactStore(checkpoint.parent)).load(checkpoint.name)
    cohort = _load_cohort(data_dir, schema)
    if split_file is not None:
        wanted = set(_read_json(split_file, "split")["test"])
        cohort = cohort.subset([i for i, r in enumerate(cohort.records) if r.id in wanted])

    result = evaluate_model(model, cohort, resamples=bootstrap, seed=seed)
    store = _out_dir(out_dir)
    outputs = _write_report(store, result.report, "report")
    write_manifest(
        store,
        "evaluate",
        {"bootstrap": bootstrap},
        seed=seed,
        outputs=outputs,
        inputs={
            "checkpoint": str(checkpoint),
            "data_dir": str(data_dir),
            "schema": str(_schema_path(data_dir, schema)),
            "split": str(split_file) if split_file else None,
        },
    )
    emit(result.report.to_dict(), fmt, metrics_table(result.report))


@app.command("kfold")
@handle_errors
def kfold_command(
    data_dir: DataDir,
    schema: SchemaFile = None,
    folds: Annotated[int, typer.Option("--folds", min=2)] = 5,
    bootstrap: Bootstrap = 0,
    out_dir: OutDir = None,
    config: ConfigFile = None,
    seed: Seed = None,
    epochs: Epochs = None,
    batch_size: BatchSize = None,
    learning_rate: LearningRate = None,
    k: ClusterCount = None,
    cluster_fraction: ClusterFraction = None,
    ablation: Ablation = None,
    patience: Patience = None,
    train_fraction: TrainFraction = None,
    hidden_size: HiddenSize = None,
    embed_dim: EmbedDim = None,
    bandwidth: Bandwidth = None,
    degree_normalize: DegreeNormalize = None,
    fmt: Format = ReportFormat.TEXT,
) -> None:
    """k-fold cross-validation; per-fold metrics and mean ± std."""
    train_config = _train_config(
        config,
        seed=seed,
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        k=k,
        cluster_fraction=cluster_fraction,
        ablation=ablation,
        patience=patience,
        train_fraction=train_fraction,
        hidden_size=hidden_size,
        embed_dim=embed_dim,
        bandwidth=bandwidth,
        degree_normalize=degree_normalize,
    )
    store = _out_dir(out_dir)
    cohort = _load_cohort(data_dir, schema)
    report = kfold_evaluate(cohort, train_config, k=folds, resamples=bootstrap)
    payload = report.to_dict()
    outputs = {"kfold.json": store.write_json("kfold.json", payload)}
    write_manifest(
        store,
        "kfold",
        train_config,
        seed=train_config.seed,
        outputs=outputs,
        inputs={
            "data_dir": str(data_dir),
            "schema": str(_schema_path(data_dir, schema)),
            "folds": folds,
            "bootstrap": bootstrap,
        },
    )
    emit(payload, fmt, kfold_table(report))


def _parse_ks(value: str) -> list[int]:
    try:
        ks = [int(part) for part in value.split(",") if part.strip()]
    except ValueError as e:
        raise ValidationException(f"--ks must be comma-separated integers, got {value!r}", field="ks") from e
    if not ks:
        raise ValidationException("--ks needs at least one K", field="ks")
    return ks


@app.command("sweep-k")
@handle_errors
def sweep_k_command(
    data_dir: DataDir,
    ks: Annotated[str, typer.Option("--ks", help="Comma-separated K values, e.g. 2,4,6")],
    retrain: Annotated[bool, typer.Option("--retrain/--fixed-embedding", help="Train one model per K")] = False,
    schema: SchemaFile = None,
    out_dir: OutDir = None,
    config: ConfigFile = None,
    seed: Seed = None,
    epochs: Epochs = None,
    batch_size: BatchSize = None,
    learning_rate: LearningRate = None,
    cluster_fraction: ClusterFraction = None,
    patience: Patience = None,
    hidden_size: HiddenSize = None,
    embed_dim: EmbedDim = None,
    bandwidth: Bandwidth = None,
    fmt: Format = ReportFormat.TEXT,
) -> None:
    """Cluster-evolution export: per-K groups, sankey flows and parents."""
    k_values = _parse_ks(ks)
    train_config = _train_config(
        config,
        seed=seed,
        epochs=epochs,
        batch_size=batch_size,
        learning_rate=learning_rate,
        k=None,
        cluster_fraction=cluster_fraction,
        ablation=None,
        patience=patience,
        train_fraction=None,
        hidden_size=hidden_size,
        embed_dim=embed_dim,
        bandwidth=bandwidth,
        degree_normalize=None,
    )
    store = _out_dir(out_dir)
    cohort = _load_cohort(data_dir, schema)
    export = sweep_k(cohort, k_values, train_config, retrain=retrain).to_dict()
    outputs = {"sweep.json": store.write_json("sweep.json", export)}
    write_manifest(
        store,
        "sweep-k",
        train_config,
        seed=train_config.seed,
        outputs=outputs,
        inputs={
            "data_dir": str(data_dir),
            "schema": str(_schema_path(data_dir, schema)),
            "ks": k_values,
            "retrain": retrain,
        },
    )
    tables = [groups_table(block["groups"], title=f"K={block['k']}") for block in export["blocks"]]
    emit(export, fmt, *tables)


@app.command("cluster-report")
@handle_errors
def cluster_report_command(
    checkpoint: Annotated[Path, typer.Argument(help="checkpoint.json written by train")],
    planted: Annotated[Path | None, typer.Option("--planted", help="planted_partition.json sidecar")] = None,
    out_dir: OutDir = None,
    fmt: Format = ReportFormat.TEXT,
) -> None:
    """K, feature groups by name and R of a trained model."""
    model = CheckpointRepository(LocalArtifactStore(checkpoint.parent)).load(checkpoint.name)
    planted_assignment = (
        read_partition(_read_json(planted, "planted partition"), model.dynamic_names) if planted else None
    )
    report = cluster_report(model, planted_assignment)
    store = _out_dir(out_dir)
    outputs = {"cluster_report.json": store.write_json("cluster_report.json", report)}
    write_manifest(
        store,
        "cluster-report",
        {},
        seed=model.config.seed,
        outputs=outputs,
        inputs={"checkpoint": str(checkpoint), "planted": str(planted) if planted else None},
    )
    title = f"Feature groups (K={report['k']})"
    if "planted_ari" in report:
        title += f", ARI vs planted {report['planted_ari']:.4f}"
    emit(report, fmt, groups_table(report["groups"], title=title))
