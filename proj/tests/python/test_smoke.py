import math

import pytest

import fracmc


def test_version():
    assert fracmc.__version__ == "0.1.0"


def test_mittag_leffler_half_order():
    # E_{1/2}(-1) = e * erfc(1)
    assert fracmc.mittag_leffler(0.5, 1.0, -1.0) == pytest.approx(math.e * math.erfc(1.0), rel=1e-12)


def test_sample_mean_matches_first_moment():
    draws = fracmc.sample_inverse_time(0.5, 1.0, 20000, seed=3)
    mean = sum(draws) / len(draws)
    var = sum((x - mean) ** 2 for x in draws) / (len(draws) - 1)
    assert abs(mean - 1.0 / math.gamma(1.5)) < 4.0 * math.sqrt(var / len(draws))


def test_rc_preset_against_closed_form():
    out = fracmc.solve_preset("rc", 0.5, t_max=2.0, points=10, m=20000, seed=7)
    assert out["t"][-1] == 2.0
    within = sum(
        abs(m - c) <= 4.0 * s + 1e-15
        for m, s, c in zip(out["mc_mean"], out["mc_stderr"], out["closed_form"])
    )
    assert within >= 9


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        fracmc.solve_preset("no-such-preset", 0.5)
    with pytest.raises(ValueError):
        fracmc.g_density(1.5, 1.0, 1.0)
