import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from annealfactor.numeric import (
    SMALL_PRIMES,
    BitView,
    is_prime,
    multiply,
    popcount,
    to_bit_view,
    trial_divide,
)

from .oracles import digits_oracle, popcount_oracle, prime_oracle

TABLE1 = [
    (316227731, 316227767, 99999989237606677, 57),
    (999999929, 999999937, 999999866000004473, 60),
    (3162277633, 3162277669, 9999999942014077477, 64),
    (9999999017, 9999999019, 99999980360000964323, 67),
]


def test_small_prime_table():
    assert len(SMALL_PRIMES) == 168
    assert SMALL_PRIMES[0] == 2
    assert SMALL_PRIMES[-1] == 997
    assert all(prime_oracle(p) for p in SMALL_PRIMES)


class TestBitView:
    def test_benchmark_target_has_57_digits(self):
        assert to_bit_view(99999989237606677).length == 57

    def test_fifteen(self):
        view = to_bit_view(15)
        assert view.bits == (1, 1, 1, 1)
        assert view.length == 4
        assert [view.digit(i) for i in (1, 2, 3, 4)] == [1, 1, 1, 1]

    def test_one(self):
        assert to_bit_view(1).bits == (1,)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            to_bit_view(0)

    def test_digit_index_bounds(self):
        view = to_bit_view(6)
        with pytest.raises(IndexError):
            view.digit(0)
        with pytest.raises(IndexError):
            view.digit(4)

    @given(st.integers(min_value=1, max_value=1 << 200))
    def test_roundtrip_and_leading_one(self, x):
        view = to_bit_view(x)
        assert view.value() == x
        assert view.bits[-1] == 1
        assert view.bits == tuple(digits_oracle(x))


class TestPopcount:
    def test_examples(self):
        assert popcount(15) == 4
        assert popcount(0) == 0
        assert popcount(316227731) == 12  # frozen from the div-mod-2 oracle

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            popcount(-1)

    def test_against_oracle_10k_random_128bit(self):
        rng = random.Random(1)
        for _ in range(10_000):
            x = rng.getrandbits(rng.randint(1, 128))
            assert popcount(x) == popcount_oracle(x)


class TestMultiply:
    @pytest.mark.parametrize("p,q,n,_bits", TABLE1)
    def test_benchmark_products(self, p, q, n, _bits):
        assert multiply(p, q) == n

    @given(st.integers(min_value=0, max_value=1 << 128))
    def test_identity(self, x):
        assert multiply(1, x) == x


class TestTrialDivide:
    def test_sixty(self):
        result = trial_divide(60)
        assert sorted(result.small_factors) == [2, 2, 3, 5]
        assert result.remainder == 1

    def test_survivor(self):
        # 1022117 = 1009 * 1013, both above the table, confirmed by brute force
        assert [f for f in range(2, 1011) if 1022117 % f == 0] == []
        result = trial_divide(1022117)
        assert result.small_factors == ()
        assert result.remainder == 1022117

    def test_mixed(self):
        result = trial_divide(2 * 1022117)
        assert result.small_factors == (2,)
        assert result.remainder == 1022117

    def test_rejects_below_two(self):
        with pytest.raises(ValueError):
            trial_divide(1)

    def test_small_prime_input(self):
        result = trial_divide(997)
        assert result.small_factors == (997,)
        assert result.remainder == 1

    def test_reconstruction_10k_random(self):
        rng = random.Random(2)
        for _ in range(10_000):
            x = rng.randint(2, 1 << 64)
            result = trial_divide(x)
            assert result.reconstruct() == x
            assert all(p <= 1000 and prime_oracle(p) for p in result.small_factors)
            if result.remainder > 1:
                assert all(result.remainder % p for p in SMALL_PRIMES)


class TestIsPrime:
    def test_examples(self):
        assert is_prime(2)
        assert is_prime(1009)
        assert not is_prime(1022117)  # 1009 * 1013

    def test_rejects_below_two(self):
        with pytest.raises(ValueError):
            is_prime(1)

    def test_large_known_primes(self):
        for p in (316227731, 316227767, 999999929, 9999999019):
            assert is_prime(p)
        assert not is_prime(316227731 * 316227767)

    def test_beyond_64_bits(self):
        # 2^89 - 1 is a Mersenne prime; its neighbors are not
        mersenne = (1 << 89) - 1
        assert is_prime(mersenne)
        assert not is_prime(mersenne - 2)
        assert not is_prime(mersenne + 2)

    def test_agrees_with_sieve_below_one_million(self):
        limit = 1_000_000
        flags = bytearray([1]) * limit
        flags[0] = flags[1] = 0
        for p in range(2, 1000):
            if flags[p]:
                flags[p * p :: p] = bytearray(len(range(p * p, limit, p)))
        mismatches = [x for x in range(2, limit) if is_prime(x) != bool(flags[x])]
        assert mismatches == []
