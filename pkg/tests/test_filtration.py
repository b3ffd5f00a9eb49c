import pytest

from etaq import (
    PrecisionError,
    ProductSpec,
    ThetaCycleReport,
    TruncatedSeries,
    delta,
    delta_product_form,
    dilate,
    eisenstein,
    expand_product,
    filtration,
    level1_basis,
    mul,
    power,
    reduce_mod,
    theta,
    theta_cycle,
    truncate,
    u_operator,
)


def delta_mod(ell, precision):
    return reduce_mod(truncate(delta(precision).series, precision), ell)


def _dim_level1(k):
    # dimension of the weight-k level-1 space, k even >= 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


class TestLevel1Basis:
    def test_small_weights(self):
        assert level1_basis(0, 10) == [TruncatedSeries.one(10)]
        assert level1_basis(2, 10) == []
        assert len(level1_basis(4, 10)) == 1
        assert len(level1_basis(12, 10)) == 2
        assert len(level1_basis(24, 10)) == 3

    def test_counts_match_dimension_formula(self):
        for k in range(0, 62, 2):
            assert len(level1_basis(k, 8)) == _dim_level1(k), k

    def test_weight12_monomials_ordered(self):
        b = level1_basis(12, 4)
        assert [m.coeff(1) for m in b] == [720, -1008]  # E4^3 then E6^2

    def test_mod_lane(self):
        for m, exact in zip(level1_basis(12, 6, 7), level1_basis(12, 6)):
            assert m == reduce_mod(exact, 7)


class TestFiltration:
    def test_discriminant_form(self):
        for ell in (5, 7, 11):
            assert filtration(delta_mod(ell, 30), 12, ell) == 12

    def test_eisenstein_drops_to_zero(self):
        for ell in (5, 7, 11, 13):
            e = eisenstein(ell - 1, 40, ell).series
            assert filtration(e, ell - 1, ell) == 0

    def test_weight_raising_under_theta(self):
        d5 = delta_mod(5, 30)
        assert filtration(theta(d5), 18, 5) == 18

    def test_squared_weight6_form_stays_at_twelve(self):
        # membership at weight 8 matches on the short initial segment but
        # fails on the tail, so the scan must stop at 12
        e6sq = power(eisenstein(6, 40, 5).series, 2)
        assert filtration(e6sq, 12, 5) == 12

    def test_power_law(self):
        for ell in (5, 7):
            dm = delta_mod(ell, 40)
            for i in (2, 3):
                assert filtration(power(dm, i), 12 * i, ell) == 12 * i
        e4 = eisenstein(4, 20, 7).series
        for i in (1, 2, 3):
            assert filtration(power(e4, i), 4 * i, 7) == 4 * i
        e4m5 = eisenstein(4, 20, 5).series
        assert filtration(power(e4m5, 3), 12, 5) == 0

    def test_wrong_declared_weight_raises(self):
        with pytest.raises(ValueError):
            filtration(delta_mod(5, 30), 10, 5)

    def test_corrupted_series_raises(self):
        d = delta_mod(5, 30)
        bad = d + TruncatedSeries(5, [1], 5)
        with pytest.raises(ValueError):
            filtration(bad, 12, 5)

    def test_zero_series_rejected(self):
        z = TruncatedSeries(0, [0] * 20, 5)
        with pytest.raises(ValueError):
            filtration(z, 12, 5)

    def test_precision_shortfall(self):
        with pytest.raises(PrecisionError):
            filtration(delta_mod(5, 2), 12, 5)

    def test_bad_ell(self):
        for ell in (3, 4):
            with pytest.raises(ValueError):
                filtration(delta_mod(5, 30), 12, ell)


class TestThetaCycle:
    def test_discriminant_mod5_regression(self):
        rep = theta_cycle(delta_mod(5, 40), 12, 5)
        assert rep == ThetaCycleReport(
            ell=5,
            weight=12,
            filtrations=(12, 18, 24, 30, 12),
            k0=3,
            case_label="II",
            drop_indices=(3,),
            drops=(6,),
            stable=True,
        )

    def test_discriminant_mod7_regression(self):
        rep = theta_cycle(delta_mod(7, 40), 12, 7)
        assert rep.filtrations == (12, 20, 28, 12, 20, 28, 12)
        assert rep.case_label == "IV"
        assert rep.k0 == 2
        assert rep.drop_indices == (2, 5)
        assert rep.drops == (4, 4)
        assert rep.stable

    def test_discriminant_mod11_unstable(self):
        rep = theta_cycle(delta_mod(11, 60), 12, 11)
        assert rep.case_label == "I"
        assert rep.filtrations[0] == 12
        assert rep.drop_indices == (10,)
        assert rep.drops == (12,)
        assert not rep.stable

    def test_stability_matches_u_nullity(self):
        # theta^(ell-1) f = f exactly when f | U_ell vanishes
        for ell in (5, 7, 11):
            dm = delta_mod(ell, 40 * ell)
            rep = theta_cycle(truncate(dm, 60), 12, ell)
            assert rep.stable == u_operator(dm, ell).is_zero(), ell

    def test_report_invariants(self):
        reports = [
            theta_cycle(delta_mod(5, 40), 12, 5),
            theta_cycle(delta_mod(7, 40), 12, 7),
            theta_cycle(delta_mod(11, 60), 12, 11),
        ]
        for rep in reports:
            ell = rep.ell
            assert len(rep.filtrations) == ell
            assert rep.k0 == (-rep.filtrations[0]) % ell
            assert rep.drop_indices == tuple(
                i for i, w in enumerate(rep.filtrations) if w % ell == 0
            )
            for i, w in enumerate(rep.filtrations):
                assert (w - rep.weight - i * (ell + 1)) % (ell - 1) == 0
            assert rep.stable == (rep.case_label in ("II", "IV"))

    def test_product_form_cycle_starts_at_declared(self):
        f = delta_product_form(ProductSpec.parse("1^-1 1^-1"), 5, 14)
        rep = theta_cycle(f.series, f.weight, 5)
        assert rep.filtrations[0] == 24

    def test_degenerate_theta_image_rejected(self):
        flat = dilate(delta_mod(5, 30), 5)
        with pytest.raises(ValueError):
            theta_cycle(flat, 12, 5)

    def test_precision_shortfall(self):
        with pytest.raises(PrecisionError):
            theta_cycle(delta_mod(5, 4), 12, 5)

    def test_bad_ell(self):
        with pytest.raises(ValueError):
            theta_cycle(delta_mod(5, 40), 12, 6)
