import json
import math

import numpy as np
from hypothesis import given, strategies as st

from hypertube.serialize import dumps, format_float, read_csv, to_csv


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert float(format_float(x)) == x


def test_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(2.0) == "2.0"
    assert format_float(-3.0) == "-3.0"
    assert format_float(1e300) == "1.0000000000000001e+300"


def test_dumps_is_json():
    obj = {"a": [1.5, 2, True, None], "b": {"c": np.float64(0.1), "d": np.arange(3)}, "e": "x"}
    for indent in (None, 2):
        back = json.loads(dumps(obj, indent=indent))
        assert back == {"a": [1.5, 2, True, None], "b": {"c": 0.1, "d": [0, 1, 2]}, "e": "x"}


def test_dumps_deterministic():
    obj = {"x": [math.pi, math.e], "y": {"z": 1 / 3}}
    assert dumps(obj, 2) == dumps(obj, 2)


def test_csv_round_trip():
    text = to_csv(["a", "b", "ok"], [[0.1, 2, True], [1 / 3, -1, False]], comments=["hello: 1"])
    assert text.startswith("# hello: 1\n")
    header, rows = read_csv(text)
    assert header == ["a", "b", "ok"]
    assert float(rows[1][0]) == 1 / 3
    assert rows[0][2] == "true"
    # no thousands separators, '.' decimals
    assert "," not in to_csv(["x"], [[1234567.5]]).splitlines()[1]
