"""Cross-validated experiments on a synthetic cohort with a known BP law."""

import importlib.util
import logging
import threading
import time
from types import SimpleNamespace

import pytest

from cuffless.estimation import EndpointConfig
from cuffless.evaluation import (
    DEFAULT_ALPHA_GRID,
    Estimator,
    ExperimentConfig,
    FoldPlan,
    OracleEstimator,
    ZeroEstimator,
    basal_by_subject,
    compute_free_estimates,
    make_estimator,
    run_experiment,
    score,
    sweep_alpha,
    sweep_context,
    sweep_training_size,
)
from cuffless.exceptions import (
    CalibrationError,
    EvaluationError,
    FoldPlanError,
    TrainingSizeError,
)
from cuffless.prompting import ContextLevel
from cuffless.records import VisitDay


class FailingEstimator(Estimator):
    name = "failing"

    def estimate(self, train, test, basal, seed):
        raise EvaluationError("model exploded")


class TestBasal:
    def test_mean_of_day_d(self, make_vector):
        vectors = [
            make_vector("S001", "D", 120.0, 80.0),
            make_vector("S001", "D", 124.0, 78.0),
            make_vector("S001", "D7", 150.0, 90.0),
            make_vector("S002", "D7", 130.0, 85.0),
        ]
        basal, missing = basal_by_subject(vectors)
        assert basal["S001"].base_sbp_mmhg == 122.0
        assert basal["S001"].n_day_d == 2
        assert missing == ("S002",)


class TestRunExperiment:
    def test_oracle_at_full_weight_is_exact(self, cohort_vectors):
        config = ExperimentConfig(alpha=1.0)
        report = run_experiment(cohort_vectors, OracleEstimator(), config)
        assert report.pooled_sbp.mae_mmhg == pytest.approx(0.0, abs=1e-9)
        assert report.pooled_dbp.sde_mmhg == pytest.approx(0.0, abs=1e-9)
        assert report.pooled_sbp.n == 90

    def test_zero_matches_oracle_at_alpha_zero(self, cohort_vectors):
        zero = run_experiment(
            cohort_vectors, ZeroEstimator(), ExperimentConfig(alpha=0.7)
        )
        oracle = run_experiment(
            cohort_vectors, OracleEstimator(), ExperimentConfig(alpha=0.0)
        )
        assert zero.pooled_sbp == oracle.pooled_sbp
        assert zero.pooled_dbp == oracle.pooled_dbp

    def test_calibration_visits_are_not_scored_by_default(self, cohort_vectors):
        report = run_experiment(cohort_vectors, ZeroEstimator())
        assert {r.visit_day for r in report.records} == {"D7", "D14", "D21"}
        config = ExperimentConfig(include_calibration_visits=True)
        included = run_experiment(cohort_vectors, ZeroEstimator(), config)
        assert included.pooled_sbp.n == 120

    def test_records_are_in_subject_and_visit_order(self, cohort_vectors):
        report = run_experiment(cohort_vectors, ZeroEstimator())
        keys = [r.key for r in report.records]
        assert keys == sorted(keys)

    def test_per_fold_and_averaged_metrics(self, cohort_vectors):
        report = run_experiment(cohort_vectors, ZeroEstimator(), ExperimentConfig(k=5))
        assert [m.fold for m in report.per_fold] == [0, 1, 2, 3, 4]
        assert sum(m.n_test for m in report.per_fold) == 90
        assert all(m.n_train == 96 for m in report.per_fold)
        assert report.averaged_sbp is not None
        assert report.averaged_sbp.n == 90

    def test_fold_with_one_record_has_no_metrics(self, make_vector):
        vectors = [
            make_vector(s, v, 120.0 + i, 80.0 + i / 2)
            for s in ("S001", "S002")
            for i, v in enumerate(VisitDay)
        ] + [make_vector("S003", "D"), make_vector("S003", "D7", 125.0, 82.0)]
        plan = FoldPlan(k=2, assignments={"S001": 0, "S002": 0, "S003": 1}, seed=0)
        report = run_experiment(vectors, ZeroEstimator(), plan=plan)
        assert report.per_fold[1].n_test == 1
        assert report.per_fold[1].sbp is None
        assert report.per_fold[0].sbp is not None
        assert report.pooled_sbp.n == 7

    def test_parallel_folds_give_the_same_report(self, cohort_vectors):
        serial = run_experiment(cohort_vectors, make_estimator("dtr"), ExperimentConfig())
        parallel = run_experiment(
            cohort_vectors, make_estimator("dtr"), ExperimentConfig(jobs=3)
        )
        assert parallel.pooled_sbp == serial.pooled_sbp
        assert parallel.records == serial.records

    def test_dtr_tracks_the_cohort_law(self, cohort_vectors):
        dtr = run_experiment(cohort_vectors, make_estimator("dtr"), ExperimentConfig())
        assert dtr.pooled_sbp.mae_mmhg < 5.0
        assert dtr.pearson_sbp is not None

    def test_subjects_without_day_d_are_excluded(self, cohort_vectors, caplog):
        vectors = [
            fv
            for fv in cohort_vectors
            if not (fv.subject_id == "S004" and fv.visit_day is VisitDay.D)
        ]
        with caplog.at_level(logging.WARNING, logger="cuffless.evaluation"):
            report = run_experiment(vectors, ZeroEstimator())
        assert report.excluded_subjects == ("S004",)
        assert report.excluded_records == 3
        assert "S004" not in {r.subject_id for r in report.records}
        assert "Excluded 3 records" in caplog.text

    def test_no_day_d_at_all(self, cohort_vectors):
        vectors = [fv for fv in cohort_vectors if fv.visit_day is not VisitDay.D]
        with pytest.raises(EvaluationError, match="No subject has a day-D visit"):
            run_experiment(vectors, ZeroEstimator())

    def test_failing_fold_becomes_faults(self, cohort_vectors):
        free = compute_free_estimates(cohort_vectors, FailingEstimator())
        assert len(free.faults) == 90
        assert free.faults[0].message.startswith("model exploded")
        with pytest.raises(EvaluationError, match="Only 0 records"):
            score(free)

    def test_record_level_split(self, cohort_vectors):
        report = run_experiment(
            cohort_vectors, ZeroEstimator(), ExperimentConfig(split_unit="record", k=4)
        )
        assert report.plan.unit == "record"
        assert len(report.plan.assignments) == 120
        assert report.pooled_sbp.n == 90

    def test_fingerprint_is_carried(self, cohort_vectors):
        report = run_experiment(cohort_vectors, ZeroEstimator(), fingerprint="abc123")
        assert report.fingerprint == "abc123"


class TestExperimentConfig:
    def test_alpha_range(self):
        with pytest.raises(CalibrationError):
            ExperimentConfig(alpha=1.5)

    def test_split_unit(self):
        with pytest.raises(FoldPlanError, match="Unknown split unit"):
            ExperimentConfig(split_unit="visit")

    def test_jobs(self):
        with pytest.raises(EvaluationError):
            ExperimentConfig(jobs=0)


class TestSweeps:
    def test_alpha_grid(self, cohort_vectors):
        results = sweep_alpha(cohort_vectors, OracleEstimator())
        assert [alpha for alpha, _ in results] == list(DEFAULT_ALPHA_GRID)
        maes = [report.pooled_sbp.mae_mmhg for _, report in results]
        assert maes[-1] == pytest.approx(0.0, abs=1e-9)
        assert maes == sorted(maes, reverse=True)

    def test_alpha_sweep_reuses_one_plan(self, cohort_vectors):
        results = sweep_alpha(cohort_vectors, make_estimator("dtr"), grid=(0.0, 0.5))
        assert results[0][1].plan == results[1][1].plan
        zero = run_experiment(cohort_vectors, ZeroEstimator())
        assert results[0][1].pooled_sbp == zero.pooled_sbp

    def test_training_size(self, cohort_vectors):
        results = sweep_training_size(cohort_vectors, "dtr", fractions=(0.5, 1.0))
        assert [fraction for fraction, _ in results] == [0.5, 1.0]
        half, full = (report for _, report in results)
        assert half.plan == full.plan
        assert all(m.n_train == 48 for m in half.per_fold)
        assert all(m.n_train == 96 for m in full.per_fold)
        assert half.pooled_sbp.n == full.pooled_sbp.n == 90

    def test_training_size_floor(self, cohort_vectors):
        with pytest.raises(TrainingSizeError, match="at least 20"):
            sweep_training_size(cohort_vectors, "dtr", fractions=(0.1,))

    def test_training_fraction_range(self, cohort_vectors):
        with pytest.raises(TrainingSizeError, match=r"\(0, 1\]"):
            sweep_training_size(cohort_vectors, "dtr", fractions=(0.0,))

    @pytest.mark.skipif(
        importlib.util.find_spec("tenacity") is None, reason="tenacity is not installed"
    )
    def test_context_levels(self, cohort_vectors):
        calls = []

        def create(**kwargs):
            calls.append(kwargs["messages"][1]["content"])
            text = "Predicted_MAP: 95 mmHg, Predicted_PP: 40 mmHg."
            message = SimpleNamespace(content=text)
            return SimpleNamespace(choices=[SimpleNamespace(message=message)])

        completions = SimpleNamespace(create=create)
        client = SimpleNamespace(chat=SimpleNamespace(completions=completions))
        endpoint = EndpointConfig(
            "http://localhost:8000/v1", "bp-llm", backoff_base_s=0.0
        )
        results = sweep_context(cohort_vectors, endpoint, client=client)
        assert [level for level, _ in results] == list(ContextLevel)
        assert all(report.pooled_sbp.n == 90 for _, report in results)
        assert len(calls) == 270


@pytest.mark.skipif(
    importlib.util.find_spec("tenacity") is None, reason="tenacity is not installed"
)
class TestEndpointConcurrency:
    def test_parallel_folds_share_the_request_limit(self, cohort_vectors):
        lock = threading.Lock()
        in_flight = 0
        peak = 0

        def create(**kwargs):
            nonlocal in_flight, peak
            with lock:
                in_flight += 1
                peak = max(peak, in_flight)
            time.sleep(0.005)
            with lock:
                in_flight -= 1
            text = "Predicted_MAP: 95 mmHg, Predicted_PP: 40 mmHg."
            message = SimpleNamespace(content=text)
            return SimpleNamespace(choices=[SimpleNamespace(message=message)])

        client = SimpleNamespace(
            chat=SimpleNamespace(completions=SimpleNamespace(create=create))
        )
        endpoint = EndpointConfig(
            "http://localhost:8000/v1", "bp-llm", max_concurrency=2, backoff_base_s=0.0
        )
        estimator = make_estimator("endpoint", endpoint=endpoint, client=client)
        report = run_experiment(
            cohort_vectors, estimator, ExperimentConfig(alpha=1.0, jobs=5)
        )
        assert report.pooled_sbp.n == 90
        assert 1 <= peak <= 2
