"""Beat averaging."""

from __future__ import annotations

import math
from typing import Sequence

from ..exceptions import FeatureError
from .vectors import N_FEATURES, BeatFeatureVector, FeatureVector, RecordMeta


def aggregate_features(
    beats: Sequence[BeatFeatureVector], meta: RecordMeta
) -> FeatureVector:
    """Average beat features element-wise.

    Sums are exactly rounded, so the result does not depend on beat order.

    Raises:
        FeatureError: If `beats` is empty.
    """
    if not beats:
        raise FeatureError(f"Cannot aggregate zero beats for '{meta.subject_id}'.")
    count = len(beats)
    means = tuple(
        math.fsum(beat.values[i] for beat in beats) / count for i in range(N_FEATURES)
    )
    return FeatureVector(
        values=means,
        beat_count=count,
        subject_id=meta.subject_id,
        visit_day=meta.visit_day,
        ref_sbp_mmhg=meta.ref_sbp_mmhg,
        ref_dbp_mmhg=meta.ref_dbp_mmhg,
        user=meta.user,
    )
