import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skoromap import (
    Band,
    DomainError,
    PathParseError,
    StepPath,
    evaluate,
    oscillation,
    parse_csv,
    parse_json,
    project_band,
    read_path,
    shift,
    uniform_distance,
    write_path,
)

from strategies import step_paths


class TestStepPath:
    def test_evaluation_is_right_continuous_at_a_jump(self):
        p = StepPath([0, 0.5], [3, 1])
        assert evaluate(p, 0.25) == 3
        assert evaluate(p, 0.5) == 1
        assert evaluate(p, 0.49999) == 3

    def test_evaluation_past_horizon_holds_last_value(self):
        p = StepPath([0, 0.5], [3, 1])
        assert p(10.0) == 1

    def test_negative_time_is_rejected(self):
        with pytest.raises(DomainError):
            StepPath([0], [1])(-0.1)

    def test_vectorised_evaluation(self):
        p = StepPath([0, 1, 2], [5, 6, 7])
        assert p.eval([0, 0.9, 1, 2.5]).tolist() == [5, 5, 6, 7]

    @pytest.mark.parametrize(
        "times, values",
        [([], []), ([0.5], [1]), ([0, 1, 1], [1, 2, 3]), ([0, 2, 1], [1, 2, 3]), ([0], [np.nan]), ([0, 1], [1])],
    )
    def test_invalid_construction(self, times, values):
        with pytest.raises(DomainError):
            StepPath(times, values)

    def test_horizon_cannot_precede_last_time(self):
        with pytest.raises(DomainError):
            StepPath([0, 2], [0, 1], horizon=1.5)

    def test_immutable(self):
        p = StepPath([0, 1], [0, 1])
        with pytest.raises(AttributeError):
            p.values = None
        with pytest.raises(ValueError):
            p.values[0] = 5

    def test_arithmetic_on_merged_grid(self):
        p = StepPath([0, 1], [1, 2], 3)
        q = StepPath([0, 2], [10, 20], 3)
        s = p + q
        assert s.times.tolist() == [0, 1, 2]
        assert s.values.tolist() == [11, 12, 22]
        assert (2 * p - p) == p

    @given(step_paths(), st.floats(0, 10, allow_nan=False))
    def test_right_continuity_on_each_piece(self, p, u):
        k = int(p.index(u))
        assert p(u) == p.values[k]
        assert p.times[k] <= u
        if k + 1 < len(p):
            assert u < p.times[k + 1]


class TestProjectBand:
    @pytest.mark.parametrize("x, expected", [(1.5, 1.0), (0.5, 0.5), (-2.0, 0.0)])
    def test_examples(self, x, expected):
        assert project_band(x, Band(0, 1)) == expected

    def test_band_validation(self):
        for z, a in [(1, 1), (2, 1), (0, np.inf), (np.nan, 1)]:
            with pytest.raises(DomainError):
                Band(z, a)

    @given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(-100, 100), st.floats(0.01, 100))
    def test_monotone_and_nonexpansive(self, x, y, z, w):
        band = Band(z, z + w)
        px, py = project_band(x, band), project_band(y, band)
        if x <= y:
            assert px <= py
        assert abs(px - py) <= abs(x - y)
        assert band.z <= px <= band.a

    def test_array_input(self):
        out = project_band(np.array([-1.0, 0.3, 4.0]), (0, 1))
        assert out.tolist() == [0.0, 0.3, 1.0]


class TestShift:
    def test_shift_past_last_jump_is_zero(self):
        assert shift(StepPath([0, 1], [2, 5]), 1) == StepPath([0], [0])

    def test_shift_by_zero_subtracts_start(self):
        assert shift(StepPath([0, 1], [2, 5]), 0) == StepPath([0, 1], [0, 3])

    def test_shift_between_jumps(self):
        assert shift(StepPath([0, 1, 2], [0, 4, -1]), 1) == StepPath([0, 1], [0, -5])

    def test_shift_off_grid(self):
        q = shift(StepPath([0, 1, 2], [0, 4, -1]), 0.5)
        assert q.times.tolist() == [0, 0.5, 1.5]
        assert q.values.tolist() == [0, 4, -1]

    @pytest.mark.parametrize("r", [-0.1, 2.5])
    def test_out_of_range(self, r):
        with pytest.raises(DomainError):
            shift(StepPath([0, 1, 2], [0, 4, -1]), r)

    @given(step_paths(), st.integers(0, 16), st.integers(0, 16))
    def test_composition(self, p, i, j):
        T = p.horizon
        r1 = min(i / 4, T)
        r2 = min(j / 4, T - r1)
        assert shift(shift(p, r1), r2) == shift(p, r1 + r2)


class TestUniformDistance:
    def test_tightness_inputs_are_one_apart(self):
        p1 = StepPath([0], [2], 1)
        p2 = StepPath([0, 0.5], [3, 1], 1)
        assert uniform_distance(p1, p2, 1) == 1

    def test_identity(self):
        p = StepPath([0, 1], [2, 3])
        assert uniform_distance(p, p) == 0

    def test_merged_grid(self):
        assert uniform_distance(StepPath([0], [0]), StepPath([0, 0.5], [1, -2]), 1) == 2

    def test_restricted_horizon(self):
        p = StepPath([0, 2], [0, 10])
        assert uniform_distance(p, StepPath([0], [0], 3), 1) == 0

    @given(step_paths(), step_paths(), step_paths())
    def test_metric_axioms(self, p, q, r):
        T = max(p.horizon, q.horizon, r.horizon)
        d = lambda x, y: uniform_distance(x, y, T)  # noqa: E731
        assert d(p, q) == d(q, p)
        assert d(p, p) == 0
        assert d(p, r) <= d(p, q) + d(q, r)
        if d(p, q) == 0:
            grid = np.union1d(p.times, q.times)
            assert np.array_equal(p(grid), q(grid))


class TestOscillation:
    def test_constant(self):
        assert oscillation(StepPath([0, 1], [4, 4]), 0.2, 0.9) == 0

    def test_whole_window(self):
        assert oscillation(StepPath([0, 1, 2], [1, 4, 0]), 0, 2) == 4

    def test_single_piece(self):
        assert oscillation(StepPath([0, 1, 2], [1, 4, 0]), 1.5, 1.7) == 0

    def test_window_includes_value_in_force_at_start(self):
        assert oscillation(StepPath([0, 1, 2], [1, 4, 0]), 0.5, 1.0) == 3

    def test_reversed_window(self):
        with pytest.raises(DomainError):
            oscillation(StepPath([0], [0]), 1, 0)


class TestFileFormats:
    def test_csv_round_trip(self, tmp_path):
        p = StepPath([0, 0.1, 0.25], [0.3, -1e-17, 2.5])
        f = tmp_path / "p.csv"
        write_path(p, f)
        assert read_path(f) == p

    def test_json_round_trip(self, tmp_path):
        p = StepPath([0, 1], [1, 2])
        f = tmp_path / "p.json"
        write_path(p, f)
        assert json.loads(f.read_text()) == {"times": [0.0, 1.0], "values": [1.0, 2.0]}
        assert read_path(f) == p

    def test_csv_error_names_line(self):
        with pytest.raises(PathParseError, match="line 3"):
            parse_csv("t,value\n0,1\n1,oops\n")

    def test_csv_rejects_non_increasing_time(self):
        with pytest.raises(PathParseError, match="line 4"):
            parse_csv("t,value\n0,1\n1,2\n1,3\n")

    def test_csv_requires_header(self):
        with pytest.raises(PathParseError, match="header"):
            parse_csv("0,1\n1,2\n")

    def test_csv_requires_zero_start(self):
        with pytest.raises(PathParseError, match="first time"):
            parse_csv("t,value\n0.5,1\n")

    def test_json_errors(self):
        with pytest.raises(PathParseError):
            parse_json('{"times": [0, 1]}')
        with pytest.raises(PathParseError, match="row 1"):
            parse_json('{"times": [0, "x"], "values": [1, 2]}')
        with pytest.raises(PathParseError, match="line"):
            parse_json("{not json")
