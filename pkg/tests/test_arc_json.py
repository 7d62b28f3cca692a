"""Tests for ARC JSON encoding of task instances."""

import json

import pytest

from carc.errors import DecodeError
from carc.grid.arc_json import from_arc_json, to_arc_json
from carc.tasks.registry import build_registry_task, resolve_task


@pytest.fixture(scope="module")
def task():
    return build_registry_task("SCMdky5-xor-10x10")


def test_round_trip_registry_task(task):
    """Test a registry task survives encoding and decoding unchanged."""
    decoded = from_arc_json(to_arc_json(task))

    assert decoded == task


def test_round_trip_extra_task():
    """Test the annotated example tasks round-trip too."""
    task = resolve_task("f3cdc58f")

    assert from_arc_json(to_arc_json(task, indent=2)) == task


def test_official_keys_are_plain_arc(task):
    """Test train and test hold only input/output grids."""
    doc = json.loads(to_arc_json(task))

    assert set(doc) == {"train", "test", "causal"}
    assert set(doc["train"][0]) == {"input", "output"}
    assert len(doc["causal"]["counterfactuals"]) == 5


def test_plain_arc_document():
    """Test a document without the causal key decodes with the given id."""
    text = json.dumps(
        {
            "train": [{"input": [[1, 0]], "output": [[0, 1]]}],
            "test": [{"input": [[0, 1]], "output": [[1, 0]]}],
        }
    )

    task = from_arc_json(text, task_id="flip")

    assert task.id == "flip"
    assert task.scm is None
    assert task.counterfactuals == []
    assert task.train[0].output.to_list() == [[0, 1]]


def test_decode_error_names_path():
    """Test a bad cell reports its JSON path."""
    text = json.dumps(
        {
            "train": [{"input": [[1, 0]], "output": [[0, 11]]}],
            "test": [{"input": [[0, 1]], "output": [[1, 0]]}],
        }
    )

    with pytest.raises(DecodeError) as exc:
        from_arc_json(text)

    assert exc.value.path == "train[0].output"


def test_decode_error_missing_key():
    """Test a missing test list is reported at its key."""
    with pytest.raises(DecodeError) as exc:
        from_arc_json(json.dumps({"train": []}))

    assert exc.value.path == "test"


def test_malformed_json():
    """Test text that is not JSON fails at the root."""
    with pytest.raises(DecodeError) as exc:
        from_arc_json("{not json")

    assert exc.value.path == "$"
