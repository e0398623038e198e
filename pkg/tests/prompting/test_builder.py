"""Tests for prompt rendering and instruction-tuning records."""

import json
from pathlib import Path

import pytest

from cuffless.exceptions import InvalidReadingError, ProfileMissingError, PromptError
from cuffless.features import APPENDIX_B_GROUPING, TABLE1_GROUPING, group_features
from cuffless.prompting import (
    INSTRUCTION,
    ContextLevel,
    PromptBuilderConfig,
    PromptRecord,
    build_prompt,
    build_tuning_record,
    build_tuning_records,
    render_response,
)
from cuffless.prompting.builder import render_profile_fields
from cuffless.prompting.templates import BP_KNOWLEDGE, QUESTION
from cuffless.records import UserProfile, VisitDay

FIXTURES = Path(__file__).parent.parent / "fixtures" / "prompts"


@pytest.fixture(scope="module")
def golden():
    return json.loads((FIXTURES / "tuning_example.json").read_text(encoding="utf-8"))


@pytest.fixture
def golden_vector(golden, make_vector):
    return make_vector(
        golden["subject_id"],
        golden["visit_day"],
        golden["ref_sbp_mmhg"],
        golden["ref_dbp_mmhg"],
        values=tuple(golden["features"]),
        user=UserProfile(**golden["profile"]),
    )


class TestContextLevel:
    @pytest.mark.parametrize(
        "name,level",
        [
            ("basic", ContextLevel.BASIC),
            ("knowledge", ContextLevel.BP_KNOWLEDGE),
            ("bp_knowledge", ContextLevel.BP_KNOWLEDGE),
            ("Knowledge-User", ContextLevel.BP_KNOWLEDGE_USER),
        ],
    )
    def test_parse_aliases(self, name, level):
        assert ContextLevel.parse(name) is level

    def test_unknown_level(self):
        with pytest.raises(PromptError, match="basic, knowledge, knowledge-user"):
            ContextLevel.parse("full")

    def test_only_the_user_level_needs_a_profile(self):
        assert [level.needs_profile for level in ContextLevel] == [False, False, True]


class TestGoldenExample:
    def test_groups(self, golden, golden_vector):
        grouped = group_features(golden_vector, APPENDIX_B_GROUPING)
        assert list(grouped.cardiac_output) == golden["groups"]["cardiac_output"]
        assert (
            list(grouped.peripheral_resistance) == golden["groups"]["peripheral_resistance"]
        )
        assert list(grouped.arterial_stiffness) == golden["groups"]["arterial_stiffness"]

    def test_prompt_is_byte_identical(self, golden, golden_vector):
        prompt = build_prompt(golden_vector, golden["context"], APPENDIX_B_GROUPING)
        assert prompt.instruction == golden["instruction"]
        assert prompt.input == golden["input"]
        assert prompt.response is None

    def test_tuning_triplet(self, golden, golden_vector):
        config = PromptBuilderConfig(level=golden["context"], grouping=golden["grouping"])
        (record,) = build_tuning_records([golden_vector], config)
        assert record.to_tuning_dict() == {
            "instruction": golden["instruction"],
            "input": golden["input"],
            "output": golden["output"],
        }


class TestBuildPrompt:
    def test_basic_level_lists_features_in_catalogue_order(self, make_vector):
        values = tuple(float(n) / 100 for n in range(1, 32))
        prompt = build_prompt(make_vector(values=values), "basic")
        listed = ", ".join(f"{n / 100:g}" for n in range(1, 32))
        assert prompt.input == f"The physiological features are [{listed}]. {QUESTION}"
        assert prompt.context_level is ContextLevel.BASIC

    def test_knowledge_level_has_no_profile(self, make_vector):
        prompt = build_prompt(make_vector(), ContextLevel.BP_KNOWLEDGE)
        assert prompt.input.startswith(BP_KNOWLEDGE)
        assert "user's profile" not in prompt.input
        assert prompt.input.endswith(QUESTION)

    def test_user_level_needs_a_profile(self, make_vector):
        with pytest.raises(ProfileMissingError, match="S001/D"):
            build_prompt(make_vector(), ContextLevel.BP_KNOWLEDGE_USER)

    def test_levels_nest(self, make_vector, profile):
        fv = make_vector(user=profile)
        knowledge = build_prompt(fv, "knowledge", TABLE1_GROUPING).input
        user = build_prompt(fv, "knowledge-user", TABLE1_GROUPING).input
        features_part = knowledge[len(BP_KNOWLEDGE) + 1 :]
        assert user.endswith(features_part)
        assert "history of hypertension: no." in user

    def test_rendering_is_deterministic(self, make_vector, profile):
        fv = make_vector(user=profile)
        assert build_prompt(fv) == build_prompt(fv)

    def test_config_accepts_preset_name(self):
        config = PromptBuilderConfig(level="basic", grouping="appendixB")
        assert config.grouping is APPENDIX_B_GROUPING
        assert config.level is ContextLevel.BASIC


class TestProfileFields:
    def test_rendering(self, profile):
        assert render_profile_fields(profile) == {
            "age": "56",
            "gender": "female",
            "height": "155.0",
            "weight": "54.0",
            "hypertension": "no",
        }

    def test_fractional_age_and_history(self):
        fields = render_profile_fields(UserProfile(41.5, "MALE", 180.25, 77.0, True))
        assert fields["age"] == "41.5"
        assert fields["gender"] == "male"
        assert fields["height"] == "180.3"
        assert fields["hypertension"] == "yes"


class TestTuningRecords:
    @pytest.mark.parametrize(
        "sbp,dbp,expected",
        [
            (110, 74, "Predicted_MAP: 86.0 mmHg, Predicted_PP: 36.0 mmHg."),
            (120, 80, "Predicted_MAP: 93.3 mmHg, Predicted_PP: 40.0 mmHg."),
        ],
    )
    def test_response(self, make_vector, sbp, dbp, expected):
        record = build_tuning_record(build_prompt(make_vector(), "basic"), sbp, dbp)
        assert record.response == expected

    def test_render_response(self):
        assert render_response(86.0, 36.0) == (
            "Predicted_MAP: 86.0 mmHg, Predicted_PP: 36.0 mmHg."
        )

    def test_invalid_reference(self, make_vector):
        prompt = build_prompt(make_vector(), "basic")
        with pytest.raises(InvalidReadingError, match="S001/D"):
            build_tuning_record(prompt, 80.0, 80.0)

    def test_sorted_by_subject_and_visit(self, make_vector):
        vectors = [
            make_vector("S002", "D"),
            make_vector("S001", "D21"),
            make_vector("S001", "D7"),
        ]
        records = build_tuning_records(vectors, PromptBuilderConfig(level="basic"))
        assert [r.label for r in records] == ["S001/D7", "S001/D21", "S002/D"]

    def test_prompt_without_response_cannot_be_exported(self, make_vector):
        prompt = build_prompt(make_vector(), "basic")
        with pytest.raises(PromptError, match="no response"):
            prompt.to_tuning_dict()

    def test_input_must_end_with_the_question(self):
        with pytest.raises(PromptError, match="MAP/PP question"):
            PromptRecord(INSTRUCTION, "Features.", ContextLevel.BASIC, "S001", VisitDay.D)
