import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from paprbounds.errors import DomainError
from paprbounds.scalar_math import (
    BITS, NATS, LogBase, binary_entropy, log_q_function, mills_bounds, normal_pdf, q_function,
    q_inverse,
)

mp.mp.dps = 40


def mp_q(x):
    return mp.erfc(mp.mpf(x) / mp.sqrt(2)) / 2


@pytest.mark.parametrize("x", [-5.0, -1.0, 0.0, 0.3, 1.0, 2.5, 5.0, 10.0, 20.0, 30.0, 37.5])
def test_q_function_against_mpmath(x):
    ref = mp_q(x)
    assert abs(q_function(x) - float(ref)) <= 1e-12 * float(ref)


def test_q_function_subnormal_tail():
    # Q(38) ~ 2.9e-316 is subnormal: only ~8 significant digits exist
    assert q_function(38.0) == pytest.approx(float(mp_q(38)), rel=1e-8)


@pytest.mark.parametrize("x", [-3.0, 0.0, 2.0, 38.0, 45.0, 200.0])
def test_log_q_function(x):
    assert log_q_function(x) == pytest.approx(float(mp.log(mp_q(x))), rel=1e-14, abs=1e-15)


def test_q_function_examples():
    assert q_function(0.0) == 0.5
    assert q_function(40.0) < 1e-300
    assert q_function(1.0) == pytest.approx(0.158655253931457, rel=1e-12)


def test_q_function_strictly_decreasing():
    x = np.linspace(-5, 37, 5001)
    assert np.all(np.diff(q_function(x)) < 0)


def test_q_inverse_examples():
    assert q_inverse(0.5) == 0.0
    assert q_inverse(1e-3) == pytest.approx(3.09023230616781, rel=1e-12)
    assert q_inverse(q_function(2.0)) == pytest.approx(2.0, abs=1e-10)


def test_q_inverse_against_mpmath_root():
    for p in [1e-12, 1e-7, 0.01, 0.3, 0.9]:
        ref = mp.sqrt(2) * mp.erfinv(1 - 2 * mp.mpf(p))
        assert q_inverse(p) == pytest.approx(float(ref), rel=1e-11, abs=1e-13)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
def test_q_inverse_domain(p):
    with pytest.raises(DomainError):
        q_inverse(p)


def test_normal_pdf():
    assert normal_pdf(0.0) == pytest.approx(0.398942280401433, rel=1e-14)
    assert normal_pdf(1.0) == pytest.approx(0.241970724519143, rel=1e-14)
    x = np.linspace(0, 10, 11)
    assert np.array_equal(normal_pdf(x), normal_pdf(-x))


def test_mills_examples():
    lo, hi = mills_bounds(1.0)
    assert lo == pytest.approx(0.120985362259572, rel=1e-12)
    assert hi == pytest.approx(0.241970724519143, rel=1e-12)
    assert lo <= q_function(1.0) <= hi
    lo, hi = mills_bounds(3.0)
    assert lo <= 0.0013499 <= hi
    lo, hi = mills_bounds(30.0)
    assert hi / lo == pytest.approx(1.0 + 1.0 / 900.0, rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_mills_domain(x):
    with pytest.raises(DomainError):
        mills_bounds(x)


@given(st.floats(min_value=1e-6, max_value=37.0))
def test_mills_sandwich_property(x):
    lo, hi = mills_bounds(x)
    q = q_function(x)
    assert lo <= q * (1 + 1e-13) and q <= hi * (1 + 1e-13)


@given(st.floats(min_value=1e-3, max_value=1e3))
def test_mills_sandwich_log_domain(x):
    log_phi = -0.5 * x * x - 0.5 * math.log(2 * math.pi)
    lq = log_q_function(x)
    assert math.log(x) + log_phi - math.log1p(x * x) <= lq + 1e-13 * abs(lq)
    assert lq <= log_phi - math.log(x) + 1e-13 * abs(lq)


def test_binary_entropy_examples():
    assert binary_entropy(0.5, BITS) == pytest.approx(1.0, rel=1e-15)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    p = mp.mpf("0.11")
    ref = -(p * mp.log(p, 2) + (1 - p) * mp.log(1 - p, 2))
    assert binary_entropy(0.11, BITS) == pytest.approx(float(ref), rel=1e-13)
    assert binary_entropy(0.11, BITS) == pytest.approx(0.499915, abs=1e-6)
    assert binary_entropy(0.5, NATS) == pytest.approx(math.log(2), rel=1e-15)


@given(st.floats(min_value=0.0, max_value=1.0))
def test_binary_entropy_symmetric(p):
    assert binary_entropy(p) == pytest.approx(binary_entropy(1.0 - p), abs=1e-15)


def test_log_base_parse():
    assert LogBase.parse("e") == NATS
    assert LogBase.parse("bits") == BITS
    assert LogBase.parse(10).unit == "hartleys"
    assert BITS.from_nats(math.log(2)) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        LogBase(1.0)
