"""Rich tables and plain-text report files."""

import json
from typing import Any

from rich.console import Console
from rich.table import Table

from src.application.services.metrics_service import MetricReport
from src.application.use_cases.evaluation.kfold import KFoldReport
from src.domain.entities.cohort import CohortStatistics
from src.shared.enums import MetricName, ReportFormat

console = Console()

METRIC_LABELS = {
    MetricName.AUROC: "AUROC",
    MetricName.AUPRC: "AUPRC",
    MetricName.MIN_P_SE: "Min(P+,Se)",
}


def emit(payload: dict[str, Any], fmt: ReportFormat, *tables: Table) -> None:
    """Machine format prints JSON; text format prints the tables"""
    if fmt == ReportFormat.MACHINE:
        console.print_json(json.dumps(payload, sort_keys=True))
        return
    for table in tables:
        console.print(table)


def statistics_table(stats: CohortStatistics, title: str = "Dataset Statistics") -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Statistic")
    table.add_column("Value", justify="right")
    table.add_row("# patients", str(stats.patients))
    table.add_row("# visits", str(stats.visits))
    table.add_row("avg # visits per patient", f"{stats.avg_visits:.2f}")
    table.add_row("max # visits per patient", str(stats.max_visits))
    table.add_row("min # visits per patient", str(stats.min_visits))
    table.add_row("# dynamic features", str(stats.dynamic_features))
    table.add_row("# static features", str(stats.static_features))
    table.add_row("positive rate", f"{100.0 * stats.positive_rate:.2f}%")
    return table


def metrics_table(report: MetricReport, title: str = "Metrics") -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Metric")
    table.add_column("Value", justify="right")
    table.add_column("Std", justify="right")
    for metric, label in METRIC_LABELS.items():
        std = report.std.get(metric.value)
        table.add_row(label, f"{report.value(metric):.4f}", f"{std:.4f}" if std is not None else "-")
    return table


def kfold_table(report: KFoldReport) -> Table:
    table = Table(title="Cross-validation", show_header=True, header_style="bold magenta")
    table.add_column("Fold")
    for label in METRIC_LABELS.values():
        table.add_column(label, justify="right")
    for fold in report.folds:
        table.add_row(str(fold.fold), *(f"{fold.report.value(m):.4f}" for m in METRIC_LABELS))
    table.add_row(
        "mean ± std",
        *(f"{report.mean(m):.4f} ± {report.std(m):.4f}" for m in METRIC_LABELS),
    )
    return table


def groups_table(groups: list[list[str]], title: str) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    table.add_column("Group", justify="right")
    table.add_column("Features")
    for index, members in enumerate(groups):
        table.add_row(str(index), ", ".join(members))
    return table


def metric_report_text(report: MetricReport) -> str:
    """One tab-separated record per metric: name, value, std, resamples, skipped"""
    lines = ["name\tvalue\tstd\tresamples\tskipped"]
    for entry in report.to_dict()["metrics"]:
        std = "" if entry["std"] is None else repr(entry["std"])
        lines.append(f"{entry['name']}\t{entry['value']!r}\t{std}\t{entry['resamples']}\t{entry['skipped']}")
    return "\n".join(lines) + "\n"
