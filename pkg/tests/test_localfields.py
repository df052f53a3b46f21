"""Tests for local field towers, Hensel lifting, squares, norms, catalogs."""

import random

import pytest

from obstructor.localfields import (
    FieldError,
    LiftError,
    LocalField,
    NormHypothesisError,
    enumerate_extensions,
    has_root,
    hensel_lift,
    is_norm_unramified_quadratic,
    is_square,
    poly_eval,
    sqrt_element,
    val,
    _epoly_elements,
)
from obstructor.padic import PadicNumber, PrecisionError, Prime


def cbrt2_field(digits=60):
    """Q_2 with a cube root of 2 adjoined."""
    return LocalField(2, None, [-2, 0, 0, 1], digits=digits)


class TestBuildField:
    def test_cbrt2_tower(self):
        S = cbrt2_field()
        assert (S.e, S.f, S.degree) == (3, 1, 3)
        assert S.from_int(2).valuation() == 3

    def test_trivial_tower_is_qp(self):
        Q5 = LocalField.qp(5)
        assert Q5.degree == 1
        assert Q5.uniformizer().valuation() == 1
        assert Q5.from_int(5).valuation() == 1

    def test_unramified_quadratic_residue_field(self):
        U = LocalField(2, (1, 1, 1), None)
        # oracle: enumerate residues, the residue field must have 4 elements
        residues = {d.residue() for d in U.residue_digits()}
        assert len(residues) == 4
        assert U.from_int(2).valuation() == 1

    def test_reducible_f_poly_rejected(self):
        with pytest.raises(FieldError):
            LocalField(2, (1, 0, 1), None)  # t^2+1 = (t+1)^2 mod 2

    def test_non_eisenstein_rejected(self):
        with pytest.raises(FieldError):
            LocalField(2, None, [-3, 0, 1])  # constant term a unit
        with pytest.raises(FieldError):
            LocalField(2, None, [-4, 0, 1])  # constant valuation 2


class TestValuation:
    def test_uniformizer(self):
        assert cbrt2_field().uniformizer().valuation() == 1

    def test_val_of_2_is_3(self):
        assert val(cbrt2_field().from_int(2)) == 3

    def test_160_pi(self):
        # oracle: 160 = 2^5 * 5, so val = 5*3 + 1
        S = cbrt2_field()
        assert val(S.from_int(160) * S.uniformizer()) == 16

    def test_zero_at_precision_errors(self):
        S = cbrt2_field()
        x = S.from_int(7)
        with pytest.raises(PrecisionError):
            val(x - x)

    def test_tower_consistency_random(self):
        rng = random.Random(5)
        for p, epoly, e in [(2, [-2, 0, 0, 1], 3), (5, [-5, 0, 1], 2)]:
            S = LocalField(p, None, epoly)
            for _ in range(50):
                x = PadicNumber.from_rational(
                    rng.randrange(-999, 1000) or 1,
                    rng.randrange(1, 999), Prime(p))
                assert S.embed(x).valuation() == e * x.valuation


class TestHensel:
    def test_sqrt17_over_q2(self):
        # oracle: odd squares mod 32 -> roots of x^2 = 17 are {7, 9, 23, 25};
        # Newton from a=1 keeps val(r-a) > val(f'(a)) = 1, forcing r = 1 mod 4,
        # and the genuine lift is 9 mod 16.
        assert {x for x in range(32) if (x * x - 17) % 32 == 0} == \
            {7, 9, 23, 25}
        Q2 = LocalField.qp(2)
        poly = [Q2.from_int(-17), Q2.zero(), Q2.one()]
        r = hensel_lift(poly, Q2.one())
        assert poly_eval(poly, r).val_floor() >= 60
        assert (r - Q2.one()).valuation() > 1
        assert r.digits(4) == ((1,), (0,), (0,), (1,))  # 9 mod 16

    def test_unit_close_to_one_is_square_in_cbrt2(self):
        S = cbrt2_field()
        u = S.one() + S.pi_pow(7) * S.from_int(3)
        r = hensel_lift([-u, S.zero(), S.one()], S.one())
        assert (r * r - u).val_floor() >= 60

    def test_linear_polynomial(self):
        S = cbrt2_field()
        c = S.from_int(11)
        r = hensel_lift([-c, S.one()], S.zero())
        assert (r - c).val_floor() >= 60

    def test_criterion_failure_raises(self):
        Q2 = LocalField.qp(2)
        poly = [Q2.from_int(-3), Q2.zero(), Q2.one()]  # 3 not a square
        with pytest.raises(LiftError):
            hensel_lift(poly, Q2.one())

    def test_lift_reevaluates_to_zero_random(self):
        rng = random.Random(11)
        fields = [LocalField.qp(5), LocalField.qp(2), cbrt2_field(),
                  LocalField(3, (1, 0, 1), None)]
        for S in fields:
            for _ in range(25):
                x = _random_unit(S, rng)
                sq = x * x
                ok, root = is_square(sq, with_root=True)
                assert ok
                assert (root * root - sq).val_floor() >= \
                    S.e * S.digits - 2 * S.e


def _random_unit(S, rng):
    while True:
        vec = tuple(rng.randrange(S.modulus) for _ in range(S.degree))
        x = S.element(vec)
        if x.is_nonzero and x.valuation() == 0:
            return x


class TestSquares:
    def test_five_not_square_in_cbrt2_exhaustive_oracle(self):
        # oracle: all unit squares modulo pi^7 by direct enumeration
        S = cbrt2_field()
        units = []
        digits = S.residue_digits()
        for d0 in digits[1:]:  # unit first digit
            stack = [d0]
            for k in range(1, 7):
                stack = [x + d * S.pi_pow(k)
                         for x in stack for d in digits]
            units.extend(stack)
        squares = {(u * u).digits(7) for u in units}
        five = S.from_int(5)
        assert five.digits(7) not in squares
        assert not is_square(five)

    def test_pi_not_square(self):
        S = cbrt2_field()
        assert not is_square(S.uniformizer())

    def test_seventeen_square_in_q2(self):
        assert is_square(LocalField.qp(2).from_int(17))

    def test_squares_and_pi_shifts_random(self):
        rng = random.Random(23)
        fields = [LocalField.qp(2), LocalField.qp(7), cbrt2_field(),
                  LocalField(2, (1, 1, 1), None), LocalField(5, None, [-5, 0, 1])]
        for S in fields:
            for _ in range(40):
                x = _random_unit(S, rng)
                assert is_square(x * x)
                assert not is_square(S.uniformizer() * x * x)

    def test_sqrt_element_witness(self):
        S = cbrt2_field()
        x = S.from_int(5) + S.uniformizer()
        sq = x * x
        r = sqrt_element(sq)
        assert (r * r - sq).val_floor() >= 50


class TestNormRule:
    def test_even_valuation_is_norm(self):
        Q5 = LocalField.qp(5)
        pi2 = Q5.pi_pow(2)
        assert is_norm_unramified_quadratic(pi2, 2)

    def test_odd_valuation_is_not(self):
        Q5 = LocalField.qp(5)
        assert not is_norm_unramified_quadratic(Q5.from_int(35), 2)

    def test_square_a_rejected(self):
        Q5 = LocalField.qp(5)
        with pytest.raises(NormHypothesisError):
            is_norm_unramified_quadratic(Q5.one(), 4)

    def test_ramified_a_rejected(self):
        Q5 = LocalField.qp(5)
        with pytest.raises(NormHypothesisError):
            is_norm_unramified_quadratic(Q5.one(), 5)
        Q2 = LocalField.qp(2)
        with pytest.raises(NormHypothesisError):
            is_norm_unramified_quadratic(Q2.one(), 3)

    def test_q2_a5_pattern(self):
        # 5 = 5 mod 8 generates the unramified quadratic of Q_2
        Q2 = LocalField.qp(2)
        assert is_norm_unramified_quadratic(Q2.from_int(12), 5)
        assert not is_norm_unramified_quadratic(Q2.from_int(6), 5)


class TestCatalogs:
    def test_q2_quadratics_count(self):
        # |Q_2^* / squares| = 8 gives 7 quadratic extensions
        cat = enumerate_extensions(2, 2)
        assert len(cat) == 7
        assert cat.complete

    def test_q5_quadratics_count(self):
        cat = enumerate_extensions(5, 2)
        assert len(cat) == 3
        assert cat.complete

    def test_degree_one(self):
        cat = enumerate_extensions(7, 1)
        assert len(cat) == 1
        assert cat.entries[0].is_qp

    def test_entries_satisfy_invariants(self):
        for (p, d) in [(2, 2), (5, 2), (2, 3), (3, 2)]:
            cat = enumerate_extensions(p, d)
            for F in cat:
                assert F.e * F.f == d
                assert F.from_int(p).valuation() == F.e

    def test_dedup_soundness_q2_quadratics(self):
        cat = enumerate_extensions(2, 2)
        ram = [F for F in cat if F.e == 2]
        for i, F in enumerate(ram):
            for G in ram[i + 1:]:
                assert not (has_root(_epoly_elements(F, G), G)
                            and has_root(_epoly_elements(G, F), F))

    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            enumerate_extensions(2, 9, cap=4)

    def test_cbrt2_is_catalogued(self):
        cat = enumerate_extensions(2, 3)
        ram = [F for F in cat if F.e == 3]
        assert len(ram) == 1
        S = cbrt2_field()
        assert has_root(_epoly_elements(S, ram[0]), ram[0])


class TestElementViews:
    def test_coeffs_are_padic_numbers(self):
        S = cbrt2_field()
        x = S.from_int(12) + S.uniformizer() * S.from_int(5)
        c = x.coeffs
        assert len(c) == 3
        assert c[0].valuation == 2 and c[0].unit_mod(2) == 3
        assert c[1].valuation == 0 and c[1].unit_mod(3) == 5

    def test_digits_roundtrip(self):
        S = cbrt2_field()
        x = S.from_int(2025) + S.uniformizer() * S.from_int(7)
        d = x.digits(9)
        rebuilt = S.zero()
        for k, dk in enumerate(d):
            vec = dk + (0,) * (S.degree - S.f)
            rebuilt = rebuilt + S.element(vec) * S.pi_pow(k)
        assert (x - rebuilt).val_floor() >= 9
