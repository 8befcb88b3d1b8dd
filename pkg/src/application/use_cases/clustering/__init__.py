from src.application.use_cases.clustering.report import adjusted_rand_index, cluster_report
from src.application.use_cases.clustering.sweep import SweepBlock, SweepExport, Transition, sweep_k, transition

__all__ = [
    "SweepBlock",
    "SweepExport",
    "Transition",
    "adjusted_rand_index",
    "cluster_report",
    "sweep_k",
    "transition",
]
