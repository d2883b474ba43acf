import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from annealfactor.energy import CostFunction, energy, max_energy

from .oracles import energy_oracle

LINEAR = CostFunction.LINEAR
QUADRATIC = CostFunction.QUADRATIC


class TestEnergy:
    def test_exact_product_scores_maximum(self):
        assert energy(3, 5, 15, LINEAR) == 10

    def test_partial_match_linear(self):
        # 3*3 = 9 = 1001b vs 1111b: digits 1 and 4 agree
        assert energy(3, 3, 15, LINEAR) == 5

    def test_partial_match_quadratic(self):
        assert energy(3, 3, 15, QUADRATIC) == 17

    def test_validation(self):
        with pytest.raises(ValueError):
            energy(1, 1, 1, LINEAR)
        with pytest.raises(ValueError):
            energy(0, 3, 15, LINEAR)

    @given(
        st.integers(min_value=1, max_value=1 << 40),
        st.integers(min_value=1, max_value=1 << 40),
        st.integers(min_value=2, max_value=1 << 40),
        st.sampled_from([LINEAR, QUADRATIC]),
    )
    def test_matches_digit_oracle(self, a, b, target, cost):
        assert energy(a, b, target, cost) == energy_oracle(a, b, target, cost.weight)

    @given(
        st.integers(min_value=1, max_value=1 << 30),
        st.integers(min_value=1, max_value=1 << 30),
        st.sampled_from([LINEAR, QUADRATIC]),
    )
    def test_symmetric_in_factors(self, a, b, cost):
        target = 999_999_866_000_004_473
        assert energy(a, b, target, cost) == energy(b, a, target, cost)

    def test_exact_products_hit_max_energy(self):
        rng = random.Random(3)
        for _ in range(200):
            a = rng.randint(1, 1 << 20)
            b = rng.randint(2, 1 << 20)
            target = a * b
            n = target.bit_length()
            for cost in (LINEAR, QUADRATIC):
                assert energy(a, b, target, cost) == max_energy(n, cost)

    def test_max_energy_without_factorization(self):
        # the converse fails: a product whose low digits match the target
        # while overflowing above digit n scores maximum without dividing it
        found = None
        for target in range(3, 64):
            n = target.bit_length()
            for a in range(1, 1 << (n + 2)):
                product = a  # b = 1
                if product != target and product & ((1 << n) - 1) == target:
                    found = (a, 1, target)
                    break
            if found:
                break
        assert found is not None
        a, b, target = found
        assert a * b != target
        assert energy(a, b, target, LINEAR) == max_energy(target.bit_length(), LINEAR)

    def test_quadratic_dominates_linear(self):
        rng = random.Random(4)
        for _ in range(300):
            a = rng.randint(2, 1 << 16)
            b = rng.randint(2, 1 << 16)
            target = rng.randint(4, 1 << 32)
            lin = energy(a, b, target, LINEAR)
            quad = energy(a, b, target, QUADRATIC)
            assert quad >= lin  # f(i)=i*i >= i pointwise for i >= 1


class TestMaxEnergy:
    @pytest.mark.parametrize(
        "n,expected",
        [(57, 63365), (60, 73810), (64, 89440), (67, 102510)],
    )
    def test_quadratic_reference_values(self, n, expected):
        assert max_energy(n, QUADRATIC) == expected

    def test_small_linear(self):
        assert max_energy(4, LINEAR) == 10

    def test_closed_forms_match_sums(self):
        for n in range(1, 200):
            assert max_energy(n, LINEAR) == sum(range(1, n + 1))
            assert max_energy(n, QUADRATIC) == sum(i * i for i in range(1, n + 1))

    def test_rejects_zero_digits(self):
        with pytest.raises(ValueError):
            max_energy(0, LINEAR)


def test_weights_table_matches_weight():
    for cost in (LINEAR, QUADRATIC):
        table = cost.weights(50)
        assert table == [cost.weight(i) for i in range(1, 51)]
