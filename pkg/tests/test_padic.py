"""Tests for bounded-precision Q_p arithmetic and Q/Z."""

import random

import pytest

from obstructor.padic import (
    DEFAULT_DIGITS,
    HALF,
    PadicNumber,
    PrecisionError,
    Prime,
    QmodZ,
    ZERO_QZ,
    is_square_qp,
    valuation,
)

P2 = Prime(2)
P5 = Prime(5)


def long_division_digits(n, p):
    """Oracle: strip factors of p by repeated exact division."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class TestPrime:
    def test_accepts_primes(self):
        for p in (2, 3, 5, 7, 97, 1091):
            assert Prime(p) == p

    @pytest.mark.parametrize("n", [0, 1, 4, 9, 91, 100])
    def test_rejects_composites(self, n):
        with pytest.raises(ValueError):
            Prime(n)


class TestFromRational:
    def test_48_is_2pow4_times_3(self):
        x = PadicNumber.from_rational(48, 1, P2)
        assert x.valuation == 4
        assert x.unit == 3

    def test_zero_marker(self):
        x = PadicNumber.from_rational(0, 1, P5)
        assert x.is_exact_zero
        assert not x.is_zero_at_precision

    def test_minus_72_long_division_oracle(self):
        # oracle: -72 -> -36 -> -18 -> -9, so valuation 3 and unit -9
        v, u = long_division_digits(-72, 2)
        assert (v, u) == (3, -9)
        x = PadicNumber.from_rational(-72, 1, P2)
        assert x.valuation == 3
        assert x.unit == (-9) % 2**DEFAULT_DIGITS

    def test_denominator_with_p_part(self):
        x = PadicNumber.from_rational(3, 8, P2)
        assert x.valuation == -3
        assert x.unit == 3

    def test_unit_inverse_against_modular_oracle(self):
        x = PadicNumber.from_rational(1, 7, P2, digits=10)
        assert x.valuation == 0
        assert x.unit == pow(7, -1, 2**10)


class TestArithmetic:
    def test_cancellation_flags_zero_at_precision(self):
        a = PadicNumber.from_rational(48, 1, P2)
        b = PadicNumber.from_rational(-48, 1, P2)
        s = a + b
        assert s.is_zero_at_precision
        assert s.zero_bound == 4 + DEFAULT_DIGITS

    def test_valuation_additivity_on_mul(self):
        a = PadicNumber.from_rational(2 * 7, 1, P2)
        b = PadicNumber.from_rational(2 * 11, 1, P2)
        assert (a * b).valuation == 2

    def test_inverse_of_3_matches_modular_inverse(self):
        # oracle: pow(3, -1, 2**10) == 683 and 3*683 == 2049 == 1 + 2**11
        assert pow(3, -1, 2**10) == 683
        x = PadicNumber.from_rational(3, 1, P2, digits=11)
        inv = x.inverse()
        assert inv.digits == 10
        assert inv.unit == 683

    def test_inversion_of_zero_rejected(self):
        with pytest.raises(ZeroDivisionError):
            PadicNumber.zero(P2).inverse()
        z = PadicNumber.zero_at_precision(P2, 5)
        with pytest.raises(PrecisionError):
            z.inverse()

    def test_precision_exhaustion(self):
        x = PadicNumber.from_rational(3, 1, P2, digits=1)
        with pytest.raises(PrecisionError):
            x.inverse()

    def test_add_mixed_precision_keeps_certified_digits(self):
        a = PadicNumber.from_rational(1, 1, P2, digits=5)
        b = PadicNumber.from_rational(4, 1, P2, digits=50)
        s = a + b
        assert s.valuation == 0
        assert s.digits == 5
        assert s.unit == 5

    def test_pow(self):
        x = PadicNumber.from_rational(6, 1, P5)
        assert (x ** 3).valuation == 0
        assert (x ** 3).unit_mod(1) == 216 % 5


class TestSquares:
    def test_17_is_square_in_q2(self):
        # oracle: brute-force odd squares mod 32
        sq = {x * x % 32 for x in range(1, 32, 2)}
        assert 17 in sq
        assert is_square_qp(PadicNumber.from_rational(17, 1, P2))

    def test_odd_valuation_never_square(self):
        assert not is_square_qp(PadicNumber.from_rational(2, 1, P2))
        assert not is_square_qp(PadicNumber.from_rational(5, 1, P5))

    def test_insufficient_precision_rejected(self):
        x = PadicNumber.from_rational(17, 1, P2, digits=2)
        with pytest.raises(PrecisionError):
            is_square_qp(x)

    def test_square_test_on_possible_zero_rejected(self):
        with pytest.raises(PrecisionError):
            is_square_qp(PadicNumber.zero_at_precision(P2, 9))


class TestQmodZ:
    def test_half_plus_half(self):
        assert HALF + HALF == ZERO_QZ

    def test_odd_multiple_of_half_is_half(self):
        assert 3 * HALF == HALF

    def test_even_multiple_of_half_is_zero(self):
        assert 2 * HALF == ZERO_QZ

    def test_reduction(self):
        assert QmodZ(7, 4) == QmodZ(3, 4)
        assert QmodZ(-1, 3) == QmodZ(2, 3)

    def test_parse_roundtrip(self):
        for text in ("0", "1/2", "2/3"):
            assert str(QmodZ.parse(text)) == text

    def test_group_axioms_random(self):
        rng = random.Random(20260810)
        for _ in range(300):
            a = QmodZ(rng.randrange(-30, 30), rng.randrange(1, 30))
            b = QmodZ(rng.randrange(-30, 30), rng.randrange(1, 30))
            c = QmodZ(rng.randrange(-30, 30), rng.randrange(1, 30))
            assert a + (-a) == ZERO_QZ
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            d = rng.randrange(0, 12)
            total = ZERO_QZ
            for _ in range(d):
                total = total + a
            assert total == d * a


def random_padic(rng, p, digits=DEFAULT_DIGITS):
    n = rng.randrange(-10**6, 10**6) or 1
    d = rng.randrange(1, 10**4)
    return PadicNumber.from_rational(n, d, p, digits)


class TestValuationLaws:
    def test_val_rules_on_random_pairs(self):
        rng = random.Random(1729)
        for _ in range(1000):
            p = Prime(rng.choice([2, 3, 5, 7, 13]))
            x = random_padic(rng, p)
            y = random_padic(rng, p)
            assert (x * y).valuation == x.valuation + y.valuation
            s = x + y
            if s.is_nonzero:
                assert s.valuation >= min(x.valuation, y.valuation)
            else:
                assert s.zero_bound >= min(x.valuation, y.valuation)
            if x.valuation != y.valuation:
                assert s.valuation == min(x.valuation, y.valuation)

    def test_ring_axioms_at_guaranteed_precision(self):
        rng = random.Random(8128)
        for _ in range(300):
            p = Prime(rng.choice([2, 3, 7]))
            x, y, z = (random_padic(rng, p) for _ in range(3))
            assert (x + y) + z == x + (y + z)
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert x * y == y * x

    def test_squares_detected_and_nonsquares_rejected(self):
        rng = random.Random(41)
        for _ in range(200):
            p = Prime(rng.choice([2, 3, 5, 11]))
            x = random_padic(rng, p)
            sq = x * x
            assert is_square_qp(sq)
            ppart = PadicNumber.from_rational(p, 1, p)
            assert not is_square_qp(ppart * sq)

    def test_division_inverts_multiplication(self):
        rng = random.Random(99)
        for _ in range(200):
            p = Prime(rng.choice([2, 5]))
            x = random_padic(rng, p)
            y = random_padic(rng, p)
            assert (x * y) / y == x


def test_valuation_helper():
    assert valuation(48, 2) == 4
    with pytest.raises(ValueError):
        valuation(0, 3)
