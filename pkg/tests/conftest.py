from __future__ import annotations

import math

import pytest

from barriergame.params import ModelParams, sample_valid_params

random_valid_params = sample_valid_params


@pytest.fixture
def set_b() -> ModelParams:
    return ModelParams(delta=0.9, p=0.3, p1=0.7, mu=0.8, h0=0.6,
                       c_R=1.0, c_D=25.0)


def assert_close(a: float, b: float, tol: float = 1e-9) -> None:
    assert math.isfinite(a) and math.isfinite(b), (a, b)
    assert abs(a - b) <= tol, f"{a} vs {b} (diff {a - b})"
