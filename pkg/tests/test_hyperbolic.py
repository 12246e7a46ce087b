import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize

from funnelzeta.errors import DomainError
from funnelzeta.hyperbolic import (
    ScaledMatrix2,
    geodesic_distance,
    geodesic_length,
    geodesic_pair_distance,
    hexagon_side,
    make_surface,
    reflection_matrix,
    word_matrix,
)


def _endpoint_formula(j, theta, sign):
    a = 2 * math.pi * j / 3 + sign * theta
    return math.sin(a) / (1 + math.cos(a))


class TestSurface:
    @pytest.mark.parametrize("b", [0.5, 2.0, 4.0, 7.5, 12.0])
    def test_reflections_pairwise_b_apart(self, b):
        p = make_surface(b)
        for i, j in ((1, 2), (1, 3), (2, 3)):
            d = geodesic_pair_distance(p.endpoints(i), p.endpoints(j))
            assert d == pytest.approx(b, rel=1e-11)

    def test_theta_identity(self):
        # the corrected angle satisfies 4 sin^2(theta) cosh^2(b/2) = 3
        for b in (1.0, 4.0, 9.0):
            th = make_surface(b).theta
            assert 4 * math.sin(th) ** 2 * math.cosh(b / 2) ** 2 == pytest.approx(3.0, rel=1e-14)

    def test_eps_c_from_endpoint_formulas(self):
        p = make_surface(3.0)
        for j in (1, 2):  # the third centre sits at tan(pi) where the formula is exact anyway
            hi = _endpoint_formula(j, p.theta, +1)
            lo = _endpoint_formula(j, p.theta, -1)
            assert p.eps[j - 1] == pytest.approx(abs(hi - lo) / 2, rel=1e-12)
            assert p.c[j - 1] == pytest.approx((hi + lo) / 2, rel=1e-12)

    def test_disks_disjoint_and_positive(self):
        for b in np.linspace(0.2, 15, 30):
            p = make_surface(float(b))
            assert min(p.eps) > 0
            assert p.disks_disjoint()

    def test_symmetric_pair(self):
        p = make_surface(2.0)
        assert p.eps[0] == pytest.approx(p.eps[1], rel=1e-14)
        assert p.c[0] == pytest.approx(-p.c[1], rel=1e-14)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_b(self, bad):
        with pytest.raises(DomainError):
            make_surface(bad)

    @pytest.mark.parametrize("kappa", [1.0, 2.0, 0.5])
    def test_rejects_bad_kappa(self, kappa):
        with pytest.raises(DomainError):
            make_surface(4.0, kappa)


class TestHexagonSide:
    @pytest.mark.xfail(strict=True, reason="printed expansion carries a spurious e^-b term; see decisions ledger")
    def test_printed_expansion_b6(self):
        e = hexagon_side(6.0)
        assert abs(e - (2 * math.exp(-3) + math.exp(-6))) <= 5e-9

    @pytest.mark.parametrize("b", [4.0, 6.0, 10.0, 16.0])
    def test_expansion(self, b):
        # sinh(e/2) = 1/(2 sinh(b/2)) gives e = 2e^{-b/2} + (5/3) e^{-3b/2} + ...
        e = hexagon_side(b)
        assert abs(e - 2 * math.exp(-b / 2)) <= 2 * math.exp(-1.5 * b)
        assert abs(e - 2 * math.exp(-b / 2) - 5 / 3 * math.exp(-1.5 * b)) <= 5 * math.exp(-2.5 * b)

    def test_defining_identity(self):
        for b in (0.5, 2.0, 6.0):
            e = hexagon_side(b)
            assert math.cosh(e) * math.sinh(b) ** 2 == pytest.approx(math.cosh(b) + math.cosh(b) ** 2, rel=1e-13)

    def test_decreasing(self):
        vals = [hexagon_side(b) for b in np.linspace(1, 20, 400)]
        assert all(x > y for x, y in zip(vals, vals[1:]))

    def test_b2_high_precision_oracle(self):
        mpmath.mp.dps = 50
        b = mpmath.mpf(2)
        ref = mpmath.acosh((mpmath.cosh(b) + mpmath.cosh(b) ** 2) / mpmath.sinh(b) ** 2)
        assert hexagon_side(2.0) == pytest.approx(float(ref), rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            hexagon_side(0.0)


class TestGeodesicDistance:
    @staticmethod
    def _brute(g1, g2):
        # minimise the point-to-point distance over both half circles
        def pt(g, u):
            c, r = (g[0] + g[1]) / 2, abs(g[1] - g[0]) / 2
            return complex(c + r * math.cos(u), r * math.sin(u))

        def f(x):
            z, w = pt(g1, x[0]), pt(g2, x[1])
            return math.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))

        best = min((minimize(f, x0, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-14})
                    for x0 in ([1.0, 2.0], [0.5, 1.5], [2.0, 1.0])), key=lambda r: r.fun)
        return best.fun

    def test_symmetric_configuration(self):
        d = geodesic_distance(-2.0, -1.0, 1.0, 2.0)
        # cross ratio (-2-1)(-1-2)/((-2+1)(1-2)) = 9
        assert d == pytest.approx(2 * math.atanh(1 / 3), rel=1e-14)
        assert d == pytest.approx(self._brute((-2.0, 2.0), (-1.0, 1.0)), rel=1e-7)

    def test_brute_force_side_by_side(self):
        g1, g2 = (-3.0, -1.0), (0.5, 2.5)
        assert geodesic_pair_distance(g1, g2) == pytest.approx(self._brute(g1, g2), rel=1e-7)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(0.01, 100), min_size=4, max_size=4, unique=True),
           st.floats(0.01, 100))
    def test_scale_invariance(self, pts, lam):
        z1, w1, w2, z2 = sorted(pts)
        if min(np.diff([z1, w1, w2, z2])) < 1e-3 * z2:
            return
        d = geodesic_distance(z1, w1, w2, z2)
        assert geodesic_distance(lam * z1, lam * w1, lam * w2, lam * z2) == pytest.approx(d, rel=1e-9)

    def test_wrong_order(self):
        with pytest.raises(DomainError):
            geodesic_distance(0.0, 2.0, 1.0, 3.0)

    def test_intersecting(self):
        with pytest.raises(DomainError):
            geodesic_pair_distance((0.0, 2.0), (1.0, 3.0))


class TestGeodesicLength:
    @pytest.mark.parametrize("b", [2.0, 4.0, 6.0, 8.0])
    def test_two_letter_word(self, b):
        assert geodesic_length((1, 2), make_surface(b)) == pytest.approx(2 * b, rel=1e-12)

    def test_four_letter_word(self):
        b = 4.0
        ref = 2 * math.acosh(math.cosh(b) + 2 * math.cosh(b) ** 2)
        assert geodesic_length((1, 2, 3, 2), make_surface(b)) == pytest.approx(ref, rel=1e-12)

    def test_six_letter_word(self):
        b = 4.0
        ref = 2 * math.acosh(4 * math.cosh(b) ** 3 + 6 * math.cosh(b) ** 2 - 1)
        ell = geodesic_length((1, 2, 3, 1, 2, 3), make_surface(b))
        assert ell == pytest.approx(ref, rel=1e-12)
        assert abs(ell - (6 * b + 6 * math.exp(-b))) <= 20 * math.exp(-2 * b)

    def test_powers_scale_linearly(self):
        p = make_surface(5.0)
        w = (1, 2, 3, 2, 1, 3)
        base = geodesic_length(w, p)
        assert geodesic_length(w * 40, p) == pytest.approx(40 * base, rel=1e-12)

    def test_long_word_stays_finite(self):
        # a 2000-letter product overflows plain floats; the scaled form does not
        p = make_surface(12.0)
        assert geodesic_length((1, 2) * 1000, p) == pytest.approx(2000 * 12.0, rel=1e-12)

    def test_accepts_orbit_record(self):
        from funnelzeta.symdyn import enumerate_fixed_points
        p = make_surface(3.0)
        orb = enumerate_fixed_points(4)[0]
        assert geodesic_length(orb, p) == geodesic_length(orb.rep, p)

    @pytest.mark.parametrize("word", [(), (1,), (1, 1), (1, 2, 1), (1, 2, 3, 1)[:3], (1, 4)])
    def test_rejects_bad_words(self, word):
        with pytest.raises(DomainError):
            geodesic_length(word, make_surface(3.0))


class TestScaledMatrix:
    def test_entries_renormalized(self):
        p = make_surface(9.0)
        acc = ScaledMatrix2.identity()
        for j in (1, 2, 3, 1, 3, 2) * 30:
            acc = acc @ reflection_matrix(j, p)
            assert 0.5 <= acc.max_abs_entry() <= 2.0

    def test_determinant_tracked_exactly(self):
        p = make_surface(3.0)
        w = (1, 2, 3, 2)
        m = word_matrix(w, p)
        expect = sum(2 * math.log(p.eps[j - 1]) for j in w)
        assert m.logabsdet == pytest.approx(expect, rel=1e-15)
        assert m.detsign == 1
        raw = math.exp(2 * m.logscale) * (m.a * m.d - m.b * m.c)
        assert raw == pytest.approx(math.exp(m.logabsdet), rel=1e-9)
