"""Error bounds, constants, and parameter selection."""

import math

import pytest

from latcompress.analysis import (
    BoundQuery,
    constants,
    loss_gap_envelope,
    select_parameter,
    total_bound,
)
from latcompress.index_sets import cross_cardinality_constant
from latcompress.lattice import ProductWeights, bound_constant_C
from latcompress.special import zeta


def _query(**kw) -> BoundQuery:
    base = dict(
        space="wiener",
        family="cross",
        alpha=1.5,
        gamma=ProductWeights.ones(2),
        L=127,
        norm_g=1.0,
        mu_bar=1.0,
    )
    base.update(kw)
    return BoundQuery(**base)


class TestConstants:
    def test_hand_values(self) -> None:
        c, z = constants(1.0, (1.0, 1.0), 0.5)
        assert c == 4.0
        assert z == pytest.approx(1.0 + 2.0 * zeta(2.0), rel=1e-13)

    def test_small_weights_clamp(self) -> None:
        # 2^(2 alpha) gamma below 1 contributes nothing.
        c, _ = constants(1.0, (0.1, 0.1), 0.5)
        assert c == 1.0

    def test_dimension_zero(self) -> None:
        c, z = constants(1.0, (), 0.5)
        assert c == 1.0 and z == 1.0

    def test_validation(self) -> None:
        with pytest.raises(ValueError):
            constants(0.0, (1.0,), 0.5)
        with pytest.raises(ValueError):
            constants(1.0, (1.0,), 0.0)


class TestBoundQuery:
    def test_defaults(self) -> None:
        q = _query(alpha=2.0)
        assert q.delta == pytest.approx(0.5)
        assert q.tau == pytest.approx(0.25)
        assert q.d == 2

    def test_with_data(self) -> None:
        q = _query().with_data(3.0, 0.5)
        assert q.norm_g == 3.0 and q.mu_bar == 0.5
        assert q.alpha == 1.5

    def test_validation(self) -> None:
        with pytest.raises(ValueError, match="space"):
            _query(space="sobolev")
        with pytest.raises(ValueError, match="family"):
            _query(family="diamond")
        with pytest.raises(ValueError, match="alpha"):
            _query(alpha=1.0)
        with pytest.raises(ValueError, match="delta"):
            _query(delta=0.6)
        with pytest.raises(ValueError, match="tau"):
            _query(delta=0.25, tau=0.3)
        with pytest.raises(ValueError, match="sigma"):
            _query(sigma=1.0)
        with pytest.raises(ValueError, match="eps"):
            _query(eps=0.0)
        with pytest.raises(ValueError, match="norm_g"):
            _query(norm_g=-1.0)
        with pytest.raises(ValueError, match="positive"):
            _query(L=0)


class TestTotalBound:
    def test_wiener_cross_hand_recomputation(self) -> None:
        q = _query(alpha=2.0, delta=0.25, tau=0.5, norm_g=2.0, mu_bar=0.5)
        nu = 30.0
        rep = total_bound(q, nu)
        alpha_eff = 2.0 - 0.5 - 0.25
        c = math.sqrt(max(1.0, 16.0) ** 2)
        z = (1.0 + 2.0 * zeta(1.5)) ** 1.0
        core = (
            127.0 ** -(alpha_eff - 0.5)
            * c
            * z
            * bound_constant_C(alpha_eff, 0.5, q.gamma)
        )
        scale = 2.0 * 0.5
        assert rep.err1 == pytest.approx(scale * nu**-0.5, rel=1e-13)
        assert rep.err2 == pytest.approx(scale * nu**0.5 * core, rel=1e-13)
        assert rep.total == rep.err1 + rep.err2
        assert rep.exact
        assert rep.note == "holds as displayed"

    def test_wiener_rectangle_exponent(self) -> None:
        q = _query(family="rectangle", alpha=2.0)
        nu = 16.0
        rep = total_bound(q, nu)
        cross = total_bound(_query(family="cross", alpha=2.0), nu)
        assert rep.err1 == pytest.approx(cross.err1)
        # d = 2 rectangles pay nu^(d/2) instead of nu^(1/2).
        assert rep.err2 == pytest.approx(cross.err2 * nu**0.5, rel=1e-12)

    def test_wiener_step_cross_hand_recomputation(self) -> None:
        q = _query(family="step-cross", alpha=2.0, delta=0.25, tau=0.5)
        m = 5
        rep = total_bound(q, m)
        alpha_eff = 1.25
        c, z = constants(2.0, q.gamma, 0.25)
        core = (
            127.0 ** -(alpha_eff - 0.5)
            * c
            * z
            * bound_constant_C(alpha_eff, 0.5, q.gamma)
        )
        assert rep.err1 == pytest.approx(2.0 ** (-(m - 2 + 1) / 2.0))
        assert rep.err2 == pytest.approx(2.0 ** (m / 2.0) * core, rel=1e-13)
        assert rep.exact

    def test_korobov_cross_terms(self) -> None:
        q = _query(space="korobov", alpha=2.0, eps=0.05)
        nu = 64.0
        rep = total_bound(q, nu)
        ctil = cross_cardinality_constant(2.0, q.gamma, 0.05)
        want1 = math.log(nu) ** 0.5 * nu ** (-(0.5 - 1.0 / 8.0))
        assert rep.err1 == pytest.approx(want1, rel=1e-13)
        assert rep.err2 / (nu ** (0.5 + 1.0 / 8.0 + 0.05) * ctil) == (
            pytest.approx(total_bound(_query(alpha=2.0), nu).err2 / nu**0.5)
        )
        assert not rep.exact
        assert "absolute constant" in rep.note

    def test_korobov_rectangle_terms(self) -> None:
        q = _query(space="korobov", family="rectangle", alpha=2.0)
        nu = 64.0
        rep = total_bound(q, nu)
        assert rep.err1 == pytest.approx(nu ** (-(0.5 - 1.0 / 8.0)))
        assert not rep.exact

    def test_korobov_step_cross_composition(self) -> None:
        q = _query(space="korobov", family="step-cross", alpha=2.0, eps=0.05)
        m = 6
        rep = total_bound(q, m)
        nu1, nu2 = 2.0 ** (m - 2 + 1), 2.0**m
        want1 = math.log(nu1) ** 0.5 * nu1 ** (-(0.5 - 1.0 / 8.0))
        assert rep.err1 == pytest.approx(want1, rel=1e-13)
        ctil = cross_cardinality_constant(2.0, q.gamma, 0.05)
        cross_rep = total_bound(_query(space="korobov", alpha=2.0, eps=0.05), nu2)
        assert rep.err2 == pytest.approx(cross_rep.err2, rel=1e-13)
        with pytest.raises(ValueError, match="m >= d"):
            total_bound(q, 1)

    def test_scaling_in_norm_and_mean(self) -> None:
        base = total_bound(_query(), 10.0)
        scaled = total_bound(_query(norm_g=3.0, mu_bar=2.0), 10.0)
        assert scaled.total == pytest.approx(6.0 * base.total, rel=1e-13)
        zero = total_bound(_query(mu_bar=0.0), 10.0)
        assert zero.total == 0.0

    def test_monotone_in_lattice_size(self) -> None:
        small = total_bound(_query(L=31), 10.0)
        large = total_bound(_query(L=509), 10.0)
        assert large.err2 < small.err2
        assert large.err1 == small.err1

    def test_level_domain(self) -> None:
        with pytest.raises(ValueError, match="nu > 1"):
            total_bound(_query(), 1.0)
        with pytest.raises(ValueError, match="integer order"):
            total_bound(_query(family="step-cross"), 2.5)
        with pytest.raises(ValueError, match="integer order"):
            total_bound(_query(family="step-cross"), -1)


class TestSelectParameter:
    def test_cross_example(self) -> None:
        q = BoundQuery(
            "wiener", "cross", 1.5, ProductWeights.ones(1), 100, 1.0, 1.0,
            sigma=0.5,
        )
        assert select_parameter(q) == pytest.approx(10.0)

    def test_step_cross_example(self) -> None:
        q = BoundQuery(
            "wiener", "step-cross", 1.5, ProductWeights.ones(1), 64, 1.0,
            1.0, sigma=0.5,
        )
        assert select_parameter(q) == 3

    def test_rectangle_exponents(self) -> None:
        qw = _query(family="rectangle", alpha=2.0, sigma=0.5, L=100)
        # rate = 1; wiener rectangle halves it per extra dimension.
        assert select_parameter(qw) == pytest.approx(100.0 ** (2.0 / 3.0))
        qk = _query(
            space="korobov", family="rectangle", alpha=2.0, sigma=0.5, L=100
        )
        want = 1.0 * 8.0 / (5.0 * 2.0 + 3.0)
        assert select_parameter(qk) == pytest.approx(100.0**want)

    def test_scale(self) -> None:
        q = _query(sigma=0.5)
        assert select_parameter(q, scale=2.0) == pytest.approx(
            2.0 * select_parameter(q)
        )
        qs = _query(family="step-cross", sigma=0.5, L=64)
        assert select_parameter(qs, scale=4.0) == select_parameter(qs) + 2
        with pytest.raises(ValueError):
            select_parameter(q, scale=0.0)

    def test_step_cross_never_negative(self) -> None:
        q = _query(family="step-cross", alpha=1.01, sigma=0.5, L=2)
        assert select_parameter(q) >= 0


class TestEnvelope:
    def test_assembly_identity(self) -> None:
        q = _query(alpha=2.0)
        rep = loss_gap_envelope(q, 20.0, norm_f=1.5, norm_f2=4.0, mu_y=0.7)
        quad = total_bound(q.with_data(4.0, 1.0), 20.0)
        cross = total_bound(q.with_data(1.5, 0.7), 20.0)
        assert rep.quadratic == quad
        assert rep.cross == cross
        assert rep.total == quad.total + 2.0 * cross.total
        assert rep.exact

    def test_korobov_flag_propagates(self) -> None:
        q = _query(space="korobov", alpha=2.0)
        rep = loss_gap_envelope(q, 20.0, 1.0, 1.0, 1.0)
        assert not rep.exact

    def test_json_shape(self) -> None:
        q = _query(alpha=2.0)
        obj = loss_gap_envelope(q, 20.0, 1.0, 1.0, 1.0).to_json()
        assert set(obj) == {"quadratic", "cross", "total", "exact"}
        assert set(obj["quadratic"]) == {
            "err1", "err2", "total", "exact", "note", "level",
        }
