import json

import numpy as np
import pytest

from multischmidt.stateio import (StateFormatError, dumps, load_state, save_state, state_from_json,
                                  state_to_json)
from multischmidt.tensor import random_state


def test_round_trip_is_exact(tmp_path):
    psi = random_state((2, 3, 2), seed=5)
    path = tmp_path / "s.json"
    save_state(path, psi)
    again = load_state(path)
    assert np.array_equal(again.data, psi.data)


def test_seventeen_digits():
    assert dumps({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}\n'
    assert json.loads(dumps([1.0 / 3])) == [1.0 / 3]


def test_dumps_rejects_nan():
    with pytest.raises(ValueError):
        dumps([float("nan")])


@pytest.mark.parametrize("obj, field", [
    ({"amplitudes": []}, "dims"),
    ({"dims": [2, 0], "amplitudes": []}, "dims"),
    ({"dims": [2, 2], "amplitudes": [[1, 0]] * 3}, "amplitudes"),
    ({"dims": [2], "amplitudes": [[1, 0], [0]]}, "amplitudes"),
    ({"dims": [2], "amplitudes": [[1, 0], [1, 0]]}, "amplitudes"),
    ([1, 2], "top level"),
])
def test_errors_name_the_field(obj, field):
    with pytest.raises(StateFormatError, match=field):
        state_from_json(obj)


def test_normalize_flag():
    obj = {"dims": [2], "amplitudes": [[3, 0], [0, 4]]}
    psi = state_from_json(obj, normalize=True)
    assert psi[1] == pytest.approx(0.8j)


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{dims: ")
    with pytest.raises(StateFormatError, match="malformed"):
        load_state(p)


def test_to_json_layout():
    obj = state_to_json(random_state((2, 2), seed=0))
    assert obj["dims"] == [2, 2] and len(obj["amplitudes"]) == 4
