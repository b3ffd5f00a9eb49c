import random

import pytest

import helpers
from etaq import (
    ModulusMismatchError,
    PrecisionError,
    ProductSpec,
    SpecSyntaxError,
    TruncatedSeries,
    ap_extract,
    dilate,
    euler_series,
    expand_product,
    mul,
    power,
    reduce_mod,
    shift,
    theta,
    truncate,
    u_operator,
)


def spec(text):
    return ProductSpec.parse(text)


class TestEulerSeries:
    def test_opening_coefficients(self):
        e = euler_series(8)
        assert [e.coeff(n) for n in range(8)] == [1, -1, -1, 0, 0, 1, 0, 1]

    def test_pentagonal_support(self):
        # nonzero exactly at k(3k-1)/2 and k(3k+1)/2, with sign (-1)^k
        e = euler_series(300)
        expected = {0: 1}
        for k in range(1, 15):
            for exp in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
                if exp < 300:
                    expected[exp] = (-1) ** k
        for n in range(300):
            assert e.coeff(n) == expected.get(n, 0), n

    def test_coefficient_at_twelve(self):
        assert euler_series(13).coeff(12) == -1

    def test_matches_expand_product(self):
        assert euler_series(64) == expand_product(spec("1^1"), 64)


class TestExpandProduct:
    def test_partition_oracle(self):
        got = expand_product(spec("1^-1"), 201)
        want = helpers.partitions_upto(200)
        assert [got.coeff(n) for n in range(201)] == want

    def test_two_color_oracle(self):
        got = expand_product(spec("1^-1 2^-1"), 101)
        want = helpers.two_color_upto(100)
        assert [got.coeff(n) for n in range(101)] == want
        assert got.coeff(2) == 3
        assert got.coeff(5) == 12

    def test_two_color_examples(self):
        got = expand_product(spec("1^-1 2^-1"), 9)
        assert [got.coeff(n) for n in range(9)] == [1, 1, 3, 4, 9, 12, 23, 31, 54]

    def test_mod_lane_matches_exact(self):
        texts = ["1^-1", "1^-1 2^-1", "1^2 3^-4", "2^-3 5^1 1^1", "1^-2 2^2 4^-1"]
        for text in texts:
            for ell in (5, 13):
                exact = expand_product(spec(text), 160)
                modded = expand_product(spec(text), 160, ell)
                assert reduce_mod(exact, ell) == modded, (text, ell)

    def test_positive_exponents_polynomial(self):
        # 1^2 is the square of the euler series
        sq = expand_product(spec("1^2"), 120)
        direct = mul(euler_series(120), euler_series(120))
        assert sq == direct

    def test_offset_is_zero(self):
        assert expand_product(spec("1^1"), 10).offset == 0
        assert expand_product(spec("3^-2 1^4"), 10).offset == 0

    def test_rejects_bad_modulus(self):
        with pytest.raises(ValueError):
            expand_product(spec("1^-1"), 10, 6)
        with pytest.raises(ValueError):
            expand_product(spec("1^-1"), 10, 1 << 21)


class TestProductSpec:
    def test_parse_round_trip(self):
        s = spec("2^-1 1^-1")
        assert str(s) == "1^-1 2^-1"
        assert ProductSpec.parse(str(s)) == s

    def test_merge_repeated_scale(self):
        assert spec("1^-1 1^-1").factors == ((1, -2),)

    def test_cancellation_drops_factor(self):
        assert spec("2^1 2^-1 1^-1").factors == ((1, -1),)

    def test_lcm_and_parts(self):
        s = spec("1^-1 10^-1")
        assert s.lcm == 10
        assert s.is_reciprocal
        assert s.parts() == (1, 10)
        assert s.part_count == 2
        assert not spec("1^2").is_reciprocal

    def test_rejects_malformed(self):
        for bad in ["", "1^", "^2", "x^1", "1^0", "0^-1", "-2^1", "1^-1,2^-1"]:
            with pytest.raises(SpecSyntaxError):
                ProductSpec.parse(bad)


class TestSeriesContainer:
    def test_coeff_window(self):
        s = TruncatedSeries(2, [5, 0, 7])
        assert s.offset == 2
        assert s.precision == 5
        assert s.coeff(0) == 0
        assert s.coeff(1) == 0
        assert s.coeff(2) == 5
        assert s.coeff(4) == 7
        with pytest.raises(PrecisionError):
            s.coeff(5)

    def test_equality_on_overlap(self):
        # the offset asserts vanishing below it, so it participates in equality
        a = TruncatedSeries(0, [0, 2, 3, 4])
        b = TruncatedSeries(1, [2, 3])
        assert a == b  # compared on [0, 3)
        c = TruncatedSeries(1, [2, 9])
        assert a != c
        d = TruncatedSeries(0, [1, 2, 3, 4])
        assert a != d  # nonzero constant term vs declared zero

    def test_zero_padding_before_offset(self):
        a = TruncatedSeries(3, [1, 1])
        b = TruncatedSeries(0, [0, 0, 0, 1, 1])
        assert a == b

    def test_modulus_mismatch_raises(self):
        a = TruncatedSeries(0, [1, 2], 5)
        b = TruncatedSeries(0, [1, 2], 7)
        with pytest.raises(ModulusMismatchError):
            a == b
        with pytest.raises(ModulusMismatchError):
            mul(a, b)

    def test_mod_lane_normalizes(self):
        s = TruncatedSeries(0, [-1, 12, 5], 5)
        assert [s.coeff(n) for n in range(3)] == [4, 2, 0]


class TestArithmetic:
    def test_ring_identities_sampled(self):
        rng = random.Random(0xE7A)
        for _ in range(20):
            modulus = rng.choice([None, 5, 11])
            a = helpers.random_series(rng, 12, modulus)
            b = helpers.random_series(rng, 12, modulus)
            c = helpers.random_series(rng, 12, modulus)
            assert mul(a, b) == mul(b, a)
            assert mul(mul(a, b), c) == mul(a, mul(b, c))
            assert mul(a + b, c) == mul(a, c) + mul(b, c)

    def test_karatsuba_matches_schoolbook_sizes(self):
        # lengths straddling the karatsuba cutoff
        rng = random.Random(7)
        for n in (40, 48, 49, 97, 140):
            a = helpers.random_series(rng, n, None, offset_range=(0, 0))
            b = helpers.random_series(rng, n, None, offset_range=(0, 0))
            prod = mul(a, b)
            for idx in (0, 1, n // 2, n - 1):
                want = sum(a.coeff(i) * b.coeff(idx - i) for i in range(idx + 1))
                assert prod.coeff(idx) == want

    def test_power_addition_law(self):
        rng = random.Random(11)
        for modulus in (None, 7):
            f = helpers.random_series(rng, 16, modulus, offset_range=(0, 2), unit_lead=True)
            assert power(f, 5) == mul(power(f, 2), power(f, 3))
            assert power(f, 0) == TruncatedSeries.one(f.precision - f.offset, modulus)

    def test_negative_power_inverts(self):
        e = euler_series(80)
        inv = power(e, -1)
        assert mul(e, inv) == TruncatedSeries.one(80)
        assert power(inv, -1) == truncate(e, inv.precision)

    def test_inverse_offset_bookkeeping(self):
        d = shift(euler_series(30), 2)  # starts at q^2
        inv = power(d, -1)
        assert inv.offset == -2
        assert mul(d, inv).coeff(0) == 1

    def test_delta_like_product_inverse(self):
        e = power(euler_series(40), 24)
        assert mul(shift(e, 1), power(shift(e, 1), -1)) == TruncatedSeries.one(39)

    def test_mod_inverse_requires_invertible_lead(self):
        s = TruncatedSeries(0, [5, 1, 1], 5)  # lead reduces to 0
        with pytest.raises(ValueError):
            power(s, -1)

    def test_exact_inverse_requires_unit_lead(self):
        s = TruncatedSeries(0, [2, 1, 1])
        with pytest.raises(ValueError):
            power(s, -1)


class TestOperators:
    def test_theta_multiplies_by_exponent(self):
        s = TruncatedSeries(-2, [3, 1, 4, 1])
        t = theta(s)
        assert [t.coeff(n) for n in range(-2, 2)] == [-6, -1, 0, 1]

    def test_theta_leibniz_sampled(self):
        rng = random.Random(23)
        for modulus in (None, 7):
            a = helpers.random_series(rng, 14, modulus)
            b = helpers.random_series(rng, 14, modulus)
            assert theta(mul(a, b)) == mul(theta(a), b) + mul(a, theta(b))

    def test_u_operator_partition_example(self):
        p = expand_product(spec("1^-1"), 15)
        u = u_operator(p, 5)
        assert [u.coeff(n) for n in range(3)] == [1, 7, 42]

    def test_u_operator_negative_offset(self):
        s = TruncatedSeries(-7, list(range(1, 16)))  # q^-7 .. q^7
        u = u_operator(s, 5)
        assert u.offset == -1
        assert [u.coeff(n) for n in (-1, 0, 1)] == [s.coeff(-5), s.coeff(0), s.coeff(5)]

    def test_u_then_dilate_is_projection(self):
        rng = random.Random(31)
        f = helpers.random_series(rng, 40, 5, offset_range=(0, 0))
        g = helpers.random_series(rng, 40, 5, offset_range=(0, 0))
        # U_ell(f(q) g(q^ell)) = (U_ell f) g
        lhs = u_operator(mul(f, dilate(g, 5)), 5)
        rhs = mul(u_operator(f, 5), g)
        assert lhs == rhs

    def test_ap_extract_is_shifted_u(self):
        p = expand_product(spec("1^-1"), 60)
        assert ap_extract(p, 5, 4) == u_operator(shift(p, -4), 5)
        with pytest.raises(ValueError):
            ap_extract(p, 5, 5)
        with pytest.raises(ValueError):
            ap_extract(p, 5, -1)

    def test_partition_progressions_vanish(self):
        for ell, a in [(5, 4), (7, 5), (11, 6)]:
            pm = expand_product(spec("1^-1"), 40 * ell, ell)
            assert ap_extract(pm, ell, a).is_zero()

    def test_frobenius_power(self):
        for ell in (5, 7):
            f = expand_product(spec("1^-1 2^-1"), 30, ell)
            lhs = power(f, ell)
            rhs = dilate(f, ell)
            assert truncate(lhs, 30) == truncate(rhs, 30)

    def test_u_power_vs_theta_iterate(self):
        # (f|U)^ell = f - theta^(ell-1) f  on the mod-ell lane
        for ell in (5, 7, 11):
            for text in ("1^-1", "1^-1 2^-1"):
                f = expand_product(spec(text), 60 * ell, ell)
                lhs = power(u_operator(f, ell), ell)
                g = f
                for _ in range(ell - 1):
                    g = theta(g)
                rhs = f - g
                assert min(lhs.precision, rhs.precision) >= 55
                assert lhs == rhs, (ell, text)

    def test_dilate_and_shift(self):
        s = TruncatedSeries(1, [2, 0, 3])
        d = dilate(s, 3)
        assert d.offset == 3
        assert d.coeff(3) == 2 and d.coeff(9) == 3
        assert d.coeff(4) == 0 and d.coeff(6) == 0
        sh = shift(s, -2)
        assert sh.offset == -1 and sh.coeff(-1) == 2

    def test_reduce_and_truncate(self):
        e = euler_series(30)
        r = reduce_mod(e, 5)
        assert r.modulus == 5
        assert r.coeff(1) == 4
        t = truncate(e, 10)
        assert t.precision == 10
        assert truncate(e, 31) is e  # never invents coefficients
