"""Error metrics, correlation and Bland-Altman agreement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from ..exceptions import MetricError

# Multiplier of the SDE for 95% limits of agreement.
LOA_Z = 1.96


@dataclass(frozen=True)
class MetricSet:
    """MAE, ME and SDE of errors ref - est.

    Args:
        mae_mmhg: Mean absolute error.
        me_mmhg: Mean error.
        sde_mmhg: Standard deviation of the error (n - 1 denominator).
        n: Number of paired values.
    """

    mae_mmhg: float
    me_mmhg: float
    sde_mmhg: float
    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise MetricError(f"Metrics need at least 2 values, got {self.n}.")
        if self.sde_mmhg < 0 or self.mae_mmhg < 0:
            raise MetricError("MAE and SDE must be non-negative.")

    def to_dict(self) -> dict[str, float | int]:
        return {
            "mae_mmhg": self.mae_mmhg,
            "me_mmhg": self.me_mmhg,
            "sde_mmhg": self.sde_mmhg,
            "n": self.n,
        }


def _paired(refs: Sequence[float], ests: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    r = np.asarray(refs, dtype=np.float64)
    e = np.asarray(ests, dtype=np.float64)
    if r.shape != e.shape or r.ndim != 1:
        raise MetricError(
            f"References and estimates differ in length ({r.size} vs {e.size})."
        )
    if r.size < 2:
        raise MetricError(f"Metrics need at least 2 values, got {r.size}.")
    if not (np.all(np.isfinite(r)) and np.all(np.isfinite(e))):
        raise MetricError("References and estimates must be finite.")
    return r, e


def compute_metrics(refs: Sequence[float], ests: Sequence[float]) -> MetricSet:
    """MAE, ME and SDE of the errors ref_i - est_i.

    Raises:
        MetricError: On a length mismatch, fewer than 2 values or non-finite
            input.
    """
    r, e = _paired(refs, ests)
    errors = (r - e).tolist()
    n = len(errors)
    me = math.fsum(errors) / n
    mae = math.fsum(abs(x) for x in errors) / n
    sde = math.sqrt(math.fsum((x - me) ** 2 for x in errors) / (n - 1))
    # fsum rounding can leave mae a hair below |me|.
    return MetricSet(mae_mmhg=max(mae, abs(me)), me_mmhg=me, sde_mmhg=sde, n=n)


def pearson_r(refs: Sequence[float], ests: Sequence[float]) -> float | None:
    """Pearson correlation, or None when either side is constant."""
    r, e = _paired(refs, ests)
    if np.ptp(r) == 0 or np.ptp(e) == 0:
        return None
    return float(stats.pearsonr(r, e).statistic)


@dataclass(frozen=True)
class BlandAltman:
    """Agreement points (mean of ref and est, ref - est) and 95% limits."""

    means: tuple[float, ...]
    differences: tuple[float, ...]
    bias_mmhg: float
    lower_loa_mmhg: float
    upper_loa_mmhg: float


def bland_altman(refs: Sequence[float], ests: Sequence[float]) -> BlandAltman:
    r, e = _paired(refs, ests)
    metrics = compute_metrics(refs, ests)
    spread = LOA_Z * metrics.sde_mmhg
    return BlandAltman(
        means=tuple(((r + e) / 2.0).tolist()),
        differences=tuple((r - e).tolist()),
        bias_mmhg=metrics.me_mmhg,
        lower_loa_mmhg=metrics.me_mmhg - spread,
        upper_loa_mmhg=metrics.me_mmhg + spread,
    )


def average_metrics(sets: Sequence[MetricSet]) -> MetricSet:
    """Unweighted mean of per-fold metrics; n is the total count."""
    if not sets:
        raise MetricError("Cannot average an empty list of metric sets.")
    k = len(sets)
    return MetricSet(
        mae_mmhg=math.fsum(s.mae_mmhg for s in sets) / k,
        me_mmhg=math.fsum(s.me_mmhg for s in sets) / k,
        sde_mmhg=math.fsum(s.sde_mmhg for s in sets) / k,
        n=sum(s.n for s in sets),
    )
