"""
Planted-structure synthetic cohorts.

Every patient gets one AR(1) latent series per planted group
(autocorrelation 0.8, unit innovations, stationary start). A dynamic
feature is its group's latent times a per-feature scale in [0.5, 1.5] plus
Gaussian noise. Labels depend on the per-group temporal means, so a model
that pools features by group has something to gain.
"""

import numpy as np

from src.application.dtos.config import SyntheticSpec
from src.domain.entities.cohort import Cohort, PatientRecord
from src.domain.value_objects.core import ClusterAssignment
from src.shared.numerics.matrix import sigmoid
from src.shared.numerics.rng import SeededRng
from src.shared.telemetry.logging import get_logger
from src.shared.telemetry.tracing import traced

logger = get_logger(__name__)

AR_COEFFICIENT = 0.8
SCALE_RANGE = (0.5, 1.5)
WEIGHT_RANGE = (1.0, 2.0)
TARGET_POSITIVE_RATE = 0.35
BISECTION_STEPS = 100

# stream keys under the cohort seed
_SCALES, _WEIGHTS, _PATIENT = 0, 1, 2


def planted_partition(n_dynamic: int, k_true: int) -> ClusterAssignment:
    """Contiguous near-equal groups: F=12, K=3 -> {0..3}, {4..7}, {8..11}"""
    chunks = np.array_split(np.arange(n_dynamic), k_true)
    return ClusterAssignment(tuple(tuple(int(i) for i in c) for c in chunks), n_dynamic)


def ar1_series(rng: SeededRng, length: int, phi: float = AR_COEFFICIENT) -> np.ndarray:
    innovations = rng.normal(0.0, 1.0, length)
    series = np.empty(length)
    series[0] = innovations[0] / np.sqrt(1.0 - phi * phi)
    for t in range(1, length):
        series[t] = phi * series[t - 1] + innovations[t]
    return series


def tune_intercept(logits: np.ndarray, target: float = TARGET_POSITIVE_RATE) -> float:
    """Bisect b so that mean(sigmoid(logits + b)) equals target"""
    low, high = -50.0, 50.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (low + high)
        if sigmoid(logits + mid).mean() < target:
            low = mid
        else:
            high = mid
    return 0.5 * (low + high)


def synthetic_feature_names(n_dynamic: int, n_static: int) -> tuple[tuple[str, ...], tuple[str, ...]]:
    return tuple(f"x{i:02d}" for i in range(n_dynamic)), tuple(f"s{i:02d}" for i in range(n_static))


@traced("medfact.generate_synthetic")
def generate_synthetic(spec: SyntheticSpec) -> tuple[Cohort, ClusterAssignment]:
    """
    Generate a cohort and the partition it was planted with.

    Each patient draws from its own child stream of the seed, so a patient's
    series do not depend on how many patients come before it.
    """
    rng = SeededRng(spec.seed)
    partition = planted_partition(spec.n_dynamic, spec.k_true)
    group_of = partition.labels()

    scales = rng.child(_SCALES).uniform(*SCALE_RANGE, spec.n_dynamic)
    weight_stream = rng.child(_WEIGHTS)
    magnitudes = weight_stream.uniform(*WEIGHT_RANGE, spec.k_true)
    signs = np.where(weight_stream.uniform(0.0, 1.0, spec.k_true) < 0.5, -1.0, 1.0)
    weights = magnitudes * signs

    dynamics, statics, draws, group_means = [], [], [], []
    for n in range(spec.patients):
        stream = rng.child(_PATIENT, n)
        length = stream.integers(spec.t_min, spec.t_max + 1)
        latent = np.stack([ar1_series(stream, length) for _ in range(spec.k_true)], axis=1)
        noise = stream.normal(0.0, 1.0, (length, spec.n_dynamic)) * spec.noise_std
        dynamics.append(latent[:, group_of] * scales[None, :] + noise)
        statics.append(stream.normal(0.0, 1.0, spec.n_static))
        draws.append(stream.uniform(0.0, 1.0, 1)[0])
        group_means.append(latent.mean(axis=0))

    logits = np.array(group_means) @ weights
    intercept = tune_intercept(logits)
    probabilities = sigmoid(logits + intercept)
    labels = (np.array(draws) < probabilities).astype(int)

    dynamic_names, static_names = synthetic_feature_names(spec.n_dynamic, spec.n_static)
    records = tuple(
        PatientRecord(id=f"p{n:06d}", dynamic=dynamics[n], static=statics[n], label=int(labels[n]))
        for n in range(spec.patients)
    )
    cohort = Cohort(records=records, dynamic_names=dynamic_names, static_names=static_names)
    logger.info(
        "Generated %d synthetic patients (F=%d, K_true=%d, positive rate %.3f)",
        spec.patients,
        spec.n_dynamic,
        spec.k_true,
        cohort.positive_fraction,
    )
    return cohort, partition
