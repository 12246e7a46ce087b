import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from funnelzeta.errors import DomainError
from funnelzeta.transfermat import build_B
from funnelzeta.zerofinder import ZeroSet
from funnelzeta.zerogeom import (
    CLIP_SIGMA,
    SINGULAR,
    curve_modulus,
    curve_sigma,
    curve_sigma_array,
    curves_to_csv,
    directed_hausdorff,
    hausdorff_distance,
    lattice_compare,
    lattice_points,
    almost_period_test,
    rescale_zeros,
    sample_curves,
    windowed_hausdorff,
)

rng = np.random.default_rng(3)


def zset(s, rect=(0.0, 1.0, -10.0, 10.0), b=6.0):
    s = np.asarray(s, dtype=complex)
    return ZeroSet(s, np.zeros(len(s)), np.zeros(len(s), np.int64), rect, 14, b)


def brute_hausdorff(A, B):
    D = np.abs(np.asarray(A)[:, None] - np.asarray(B)[None, :])
    return max(D.min(axis=1).max(), D.min(axis=0).max())


class TestRescale:
    def test_examples(self):
        b = 6.0
        d = 0.1147
        r = rescale_zeros(zset([d, 0.1 + 1j * math.pi * math.exp(b)], rect=(0, 1, 0, 2000)), b)
        assert r[0] == pytest.approx(d * b)
        assert r[1] == pytest.approx(0.6 + 1j * math.pi, rel=1e-15)

    def test_empty(self):
        assert len(rescale_zeros(zset([]), 6.0)) == 0

    def test_wrong_b(self):
        with pytest.raises(DomainError):
            rescale_zeros(zset([0.1]), 5.0)


class TestCurves:
    def test_values(self):
        assert curve_sigma(2, 0.0) == pytest.approx(math.log(2), rel=1e-15)
        assert curve_sigma(1, math.pi) == pytest.approx(math.log(2), rel=1e-15)
        for j in (1, 2, 3, 4):
            assert curve_sigma(j, math.pi / 2) == pytest.approx(0.5 * math.log(2), abs=1e-12)
            assert curve_sigma(j, -math.pi / 2) == pytest.approx(0.5 * math.log(2), abs=1e-12)

    def test_singular(self):
        assert curve_sigma(1, 0.0) == SINGULAR
        assert curve_sigma(2, math.pi) == SINGULAR

    def test_bad_index(self):
        with pytest.raises(DomainError):
            curve_sigma(5, 0.0)

    def test_even_and_periodic(self):
        t = np.linspace(0.01, 3.1, 500)
        for j in (1, 2, 3, 4):
            a = curve_sigma_array(j, t)
            np.testing.assert_allclose(curve_sigma_array(j, -t), a, atol=1e-12)
            np.testing.assert_allclose(curve_sigma_array(j, t + 2 * math.pi), a, atol=1e-12)

    def test_round_trip(self):
        t = rng.uniform(-6, 6, 200)
        for j in (1, 2, 3, 4):
            np.testing.assert_allclose(np.exp(2 * curve_sigma_array(j, t)), curve_modulus(j, t), rtol=1e-13)

    def test_product_is_determinant(self):
        for t in rng.uniform(-6, 6, 30):
            prod = curve_modulus(1, t) * curve_modulus(2, t) * curve_modulus(3, t) ** 2 * curve_modulus(4, t) ** 2
            det = abs(np.linalg.det(build_B(np.exp(1j * t))))
            assert prod == pytest.approx(det, rel=1e-10, abs=1e-12)

    def test_sampling(self):
        cur = sample_curves(-math.pi, math.pi, 1e-3)
        assert cur.sigma.shape == (4, len(cur.t))
        assert cur.sigma.min() >= CLIP_SIGMA
        assert cur.discretisation_error() > 0
        assert len(cur.points((0, 1, -1, 1))) > 0
        with pytest.raises(DomainError):
            sample_curves(0, 1, 2e-3)

    def test_csv(self):
        text = curves_to_csv(sample_curves(0, 0.01, 1e-3))
        lines = text.splitlines()
        assert lines[0] == "t,sigma1,sigma2,sigma3,sigma4"
        assert len(lines) == 12
        assert float(lines[1].split(",")[2]) == pytest.approx(math.log(2))


class TestHausdorff:
    def test_examples(self):
        assert hausdorff_distance([0j], [3 + 4j]) == 5.0
        A = rng.normal(size=20) + 1j * rng.normal(size=20)
        assert hausdorff_distance(A, A) == 0.0

    def test_empty(self):
        with pytest.raises(DomainError):
            hausdorff_distance([], [1j])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 30), st.integers(1, 30), st.integers(0, 2 ** 31))
    def test_matches_brute_force(self, na, nb, seed):
        r = np.random.default_rng(seed)
        A = r.normal(size=na) + 1j * r.normal(size=na)
        B = r.normal(size=nb) + 1j * r.normal(size=nb)
        assert hausdorff_distance(A, B) == pytest.approx(brute_hausdorff(A, B), rel=1e-14)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2 ** 31))
    def test_metric(self, seed):
        r = np.random.default_rng(seed)
        A, B, C = (r.normal(size=(r.integers(1, 15), 2)) @ [1, 1j] for _ in range(3))
        ab = hausdorff_distance(A, B)
        assert ab == hausdorff_distance(B, A)
        assert hausdorff_distance(A, C) <= ab + hausdorff_distance(B, C) + 1e-12

    def test_directed(self):
        assert directed_hausdorff([0j], [0j, 10j]) == 0
        assert directed_hausdorff([0j, 10j], [0j]) == 10

    def test_window_margin(self):
        A = np.array([0.1 + 0j, 0.1 + 0.95j])
        B = np.array([0.1 + 0.01j, 0.5 + 0.95j])
        rep = windowed_hausdorff(A, B, (0, 1, -1, 1), margin=0.1)
        assert rep.distance == pytest.approx(0.01)
        assert rep.n_a == 1 and rep.n_b == 1


class TestAlmostPeriod:
    def test_identity(self):
        zs = zset(rng.uniform(0, 0.2, 30) + 1j * rng.uniform(0, 20, 30), rect=(0, 0.2, 0, 20))
        rep = almost_period_test(zs, 0.0, 1e-9, 0.0, 20.0)
        assert rep.passed and rep.max_distance == 0.0

    def test_perturbed_periodic(self):
        base = rng.uniform(0, 0.2, 8) + 1j * rng.uniform(0, 5, 8)
        pts = np.concatenate([base + 5j * k for k in range(4)])
        eps = 1e-3
        pts = pts + (rng.uniform(-1, 1, len(pts)) + 1j * rng.uniform(-1, 1, len(pts))) * eps / 2 / math.sqrt(2)
        zs = zset(pts, rect=(0, 0.2, 0, 20))
        rep = almost_period_test(zs, 5.0, eps, 0.5, 12.0, edge_margin=0.01)
        assert rep.passed and rep.max_distance <= eps

    def test_coverage(self):
        zs = zset([0.1 + 1j], rect=(0, 0.2, 0, 5))
        with pytest.raises(DomainError):
            almost_period_test(zs, 4.0, 0.1, 0.0, 3.0)

    def test_fails_when_shifted_wrong(self):
        pts = np.array([0.1 + 1j, 0.1 + 6j])
        rep = almost_period_test(zset(pts, rect=(0, 0.2, 0, 10)), 4.0, 0.1, 0.0, 6.0)
        assert not rep.passed


class TestLattice:
    def test_exact_lattice(self):
        b = 6.0
        L = lattice_points(3.0)
        zs = zset(L / b, rect=(-0.1, 0.2, -0.5, 0.5), b=b)
        assert lattice_compare(zs, b, 0.5, delta=math.log(2) / b + 1e-12) == pytest.approx(0, abs=1e-15)

    def test_single_delta(self):
        b, d = 6.0, 0.1147
        zs = zset([d], rect=(-0.1, 0.2, -0.1, 0.1), b=b)
        # |Im| <= 0.6 contains only the two k = 0 lattice points; the one at 0 is far
        val = lattice_compare(zs, b, 0.1, delta=d)
        assert val == pytest.approx(max(abs(d * b - math.log(2)), d * b))

    def test_points(self):
        L = lattice_points(2 * math.pi)
        assert len(L) == 10
        assert np.isclose(L, math.log(2) + 2j * math.pi).any()

    def test_window_check(self):
        with pytest.raises(DomainError):
            lattice_compare(zset([0.1], rect=(0, 1, 0, 1)), 6.0, 1.0, delta=0.1)
