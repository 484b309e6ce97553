"""Error function, complementary error function, and Kummer 1F1(1;1/2;q^2/2)."""

import math

import numpy as np
import pytest
import scipy.special as sp

from ratiodist.errors import OverflowRangeError
from ratiodist.special import erf, erfc, kummer_1f1_half, std_normal_cdf


def _series_1f1_half(z: float) -> float:
    """Power series sum_n (1)_n / (1/2)_n * z^n / n! summed until term < 1e-18."""
    total, term, n = 1.0, 1.0, 0
    while True:
        # (1)_n / n! = 1, so each factor is z / (1/2 + n)
        term *= z / (0.5 + n)
        total += term
        n += 1
        if abs(term) < 1e-18 * abs(total):
            return total


@pytest.mark.parametrize(
    ("x", "expected", "tol"),
    [
        (0.0, 0.0, 0.0),
        # erf(1/sqrt(2)) is the one-sigma normal mass
        (1.0 / math.sqrt(2.0), 0.6826894921370859, 1e-15),
        (1.0, 0.8427007929497149, 1e-15),
        (-1.0, -0.8427007929497149, 1e-15),
        (0.5, 0.5204998778130465, 1e-15),
        (2.0, 0.9953222650189527, 1e-15),
        (6.0, 0.9999999999999998, 1e-15),
    ],
)
def test_erf_known_values(x: float, expected: float, tol: float) -> None:
    assert math.isclose(erf(x), expected, rel_tol=tol, abs_tol=1e-300)


def test_erf_is_odd_and_bounded() -> None:
    rng = np.random.default_rng(20260815)
    for x in rng.uniform(0.0, 10.0, 500):
        assert erf(float(x)) == -erf(float(-x))
        assert -1.0 < erf(float(x)) < 1.0 or x > 5.9


def test_erf_matches_reference_oracle() -> None:
    # crosses the series/continued-fraction switch at 1.2 from both sides
    rng = np.random.default_rng(11)
    xs = np.concatenate(
        [rng.uniform(-8.0, 8.0, 2000), [1e-300, -1e-12, 1.1999, 1.2, 1.2001, 27.0]]
    )
    for x in xs:
        ref = float(sp.erf(x))
        assert math.isclose(erf(float(x)), ref, rel_tol=1e-15, abs_tol=1e-300)


def test_erfc_matches_reference_oracle() -> None:
    rng = np.random.default_rng(12)
    for x in rng.uniform(-6.0, 6.0, 1000):
        # both sides carry ~1 ulp; 5e-15 leaves room for the far positive tail
        assert math.isclose(erfc(float(x)), float(sp.erfc(x)), rel_tol=5e-15)


def test_erfc_complement_identity() -> None:
    for x in (-3.0, -0.7, 0.0, 0.4, 1.2, 2.5, 5.0):
        assert math.isclose(erf(x) + erfc(x), 1.0, rel_tol=1e-14)


@pytest.mark.parametrize(
    ("x", "expected"),
    [
        (0.0, 0.5),
        (1.0, 0.8413447460685429),
        (-1.0, 0.15865525393145705),
        (2.0, 0.9772498680518208),
    ],
)
def test_std_normal_cdf_values(x: float, expected: float) -> None:
    assert math.isclose(std_normal_cdf(x), expected, rel_tol=1e-14)


def test_std_normal_cdf_matches_reference_oracle() -> None:
    rng = np.random.default_rng(13)
    for x in rng.uniform(-8.0, 8.0, 1000):
        assert math.isclose(std_normal_cdf(float(x)), float(sp.ndtr(x)), rel_tol=5e-15)


@pytest.mark.parametrize(
    ("q", "expected"),
    [
        (0.0, 1.0),
        # 1F1(1; 1/2; 1/2) from the power series
        (1.0, 2.4106861346424484),
    ],
)
def test_kummer_known_values(q: float, expected: float) -> None:
    assert math.isclose(kummer_1f1_half(q), expected, rel_tol=1e-13)


def test_kummer_agrees_with_series_on_positive_branch() -> None:
    for q in np.linspace(0.0, 8.0, 81):
        ref = _series_1f1_half(0.5 * q * q)
        assert math.isclose(kummer_1f1_half(float(q)), ref, rel_tol=1e-13)


def test_kummer_even_in_q() -> None:
    for q in (0.25, 1.0, 3.5, 7.0):
        assert kummer_1f1_half(q) == kummer_1f1_half(-q)


def test_kummer_overflow_guard() -> None:
    with pytest.raises(OverflowRangeError):
        kummer_1f1_half(40.0)
