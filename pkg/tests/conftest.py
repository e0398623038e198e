"""Shared fixtures: synthetic records and ready-made feature vectors."""

from __future__ import annotations

from typing import Callable

import numpy as np
import pytest

from cuffless.features.vectors import N_FEATURES, FeatureVector
from cuffless.ingest.synthetic import SyntheticConfig, synthesize_record
from cuffless.records import UserProfile, VisitDay

VectorFactory = Callable[..., FeatureVector]


def make_values(seed: int = 0, ptt_s: float = 0.2) -> tuple[float, ...]:
    """31 positive feature values with feature 1 set to `ptt_s`."""
    rng = np.random.default_rng(seed)
    values = rng.uniform(0.05, 2.0, N_FEATURES)
    values[0] = ptt_s
    return tuple(float(v) for v in values)


@pytest.fixture
def profile() -> UserProfile:
    return UserProfile(
        age_years=56,
        gender="female",
        height_cm=155.0,
        weight_kg=54.0,
        hypertension_history=False,
    )


@pytest.fixture
def make_vector() -> VectorFactory:
    """Build a feature vector with sensible defaults."""

    def factory(
        subject_id: str = "S001",
        visit_day: VisitDay | str = VisitDay.D,
        sbp: float = 120.0,
        dbp: float = 80.0,
        *,
        values: tuple[float, ...] | None = None,
        user: UserProfile | None = None,
        beat_count: int = 60,
    ) -> FeatureVector:
        return FeatureVector(
            values=values or make_values(),
            beat_count=beat_count,
            subject_id=subject_id,
            visit_day=VisitDay.parse(visit_day),
            ref_sbp_mmhg=sbp,
            ref_dbp_mmhg=dbp,
            user=user,
        )

    return factory


@pytest.fixture
def cohort_vectors() -> list[FeatureVector]:
    """30 subjects x 4 visits whose reference BP follows feature 1.

    SBP = 100 + 100 * f1 and DBP = 60 + 60 * f1, plus 1 mmHg noise, with a
    per-subject PTT level so calibration has something to anchor on.
    """
    rng = np.random.default_rng(7)
    vectors: list[FeatureVector] = []
    for index in range(30):
        subject_id = f"S{index:03d}"
        user = UserProfile(
            age_years=float(rng.integers(20, 81)),
            gender="female" if index % 2 else "male",
            height_cm=round(float(rng.uniform(150.0, 190.0)), 1),
            weight_kg=round(float(rng.uniform(50.0, 95.0)), 1),
            hypertension_history=bool(index % 5 == 0),
        )
        base_ptt = float(rng.uniform(0.17, 0.24))
        for visit in VisitDay:
            ptt = base_ptt + float(rng.normal(0.0, 0.01))
            values = make_values(seed=index * 10 + visit.ordinal, ptt_s=ptt)
            vectors.append(
                FeatureVector(
                    values=values,
                    beat_count=int(rng.integers(80, 150)),
                    subject_id=subject_id,
                    visit_day=visit,
                    ref_sbp_mmhg=round(100.0 + 100.0 * ptt + float(rng.normal(0, 1)), 1),
                    ref_dbp_mmhg=round(60.0 + 60.0 * ptt + float(rng.normal(0, 1)), 1),
                    user=user,
                )
            )
    return vectors


@pytest.fixture(scope="session")
def synthetic_pair():
    """A clean 30 s synthetic record and its ground truth."""
    return synthesize_record(SyntheticConfig(duration_s=30.0, heart_rate_bpm=72.0))
