from math import pi

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susy8v import elliptic, hilbert
from susy8v.elliptic import EllipticParams, VanishingWeightError


def mp_theta(kind, u, q):
    with mpmath.workdps(40):
        return float(mpmath.jtheta(kind, mpmath.mpf(u), mpmath.mpf(q)))


class TestTheta:
    @given(kind=st.integers(1, 4), u=st.floats(-4, 4), q=st.floats(0.0, 0.5))
    @settings(max_examples=100, deadline=None)
    def test_matches_extended_precision(self, kind, u, q):
        assert elliptic.jacobi_theta(kind, u, q) == pytest.approx(mp_theta(kind, u, q), rel=1e-13, abs=1e-14)

    def test_theta3_at_tenth(self):
        exact = 1 + 2 * 0.1 + 2 * 0.1**4 + 2 * 0.1**9
        assert elliptic.theta3(0.0, 0.1) == pytest.approx(exact, rel=1e-15)
        assert elliptic.theta3(0.0, 0.1) == pytest.approx(mp_theta(3, 0, 0.1), rel=1e-15)

    @pytest.mark.parametrize("q", [0.0, 0.2, 0.7])
    def test_theta1_odd(self, q):
        assert elliptic.theta1(0.0, q) == 0.0

    @given(st.floats(-3, 3))
    def test_zero_nome(self, u):
        assert elliptic.theta4(u, 0.0) == 1.0

    @pytest.mark.parametrize("q", [-0.1, 1.0, 1.5])
    def test_rejects_bad_nome(self, q):
        with pytest.raises(ValueError):
            elliptic.jacobi_theta(1, 0.3, q)

    def test_quasi_periodicity(self, rng):
        for _ in range(20):
            u, q = rng.uniform(-3, 3), rng.uniform(0, 0.9)
            assert abs(elliptic.theta1(u + pi, q) + elliptic.theta1(u, q)) < 1e-13 * max(1, abs(elliptic.theta1(u, q)))
            assert abs(elliptic.theta4(u + pi, q) - elliptic.theta4(u, q)) < 1e-13 * max(1, abs(elliptic.theta4(u, q)))

    @pytest.mark.parametrize("text, value", [("pi/3", pi / 3), ("2*pi/5", 2 * pi / 5), ("pi", pi), ("0.7", 0.7)])
    def test_parse_angle(self, text, value):
        assert elliptic.parse_angle(text) == pytest.approx(value)


class TestWeights:
    def test_susy_example(self):
        w = elliptic.weights_from_elliptic(EllipticParams(pi / 3, 0.2, 0.4))
        assert w.constraint_residual() < 1e-11

    def test_weights_match_extended_precision(self):
        eta, p, u = 0.9, 0.35, 0.55
        q = p * p
        ref = (
            mp_theta(4, 2 * eta, q) * mp_theta(1, u + 2 * eta, q) * mp_theta(4, u, q),
            mp_theta(4, 2 * eta, q) * mp_theta(4, u + 2 * eta, q) * mp_theta(1, u, q),
            mp_theta(1, 2 * eta, q) * mp_theta(4, u + 2 * eta, q) * mp_theta(4, u, q),
            mp_theta(1, 2 * eta, q) * mp_theta(1, u + 2 * eta, q) * mp_theta(1, u, q),
        )
        w = elliptic.weights_from_elliptic(EllipticParams(eta, p, u))
        np.testing.assert_allclose(w.as_tuple(), ref, rtol=1e-13)

    def test_u_zero_vanishes(self):
        with pytest.raises(VanishingWeightError, match="weight vanishes"):
            elliptic.weights_from_elliptic(EllipticParams(pi / 3, 0.2, 0.0))

    def test_zero_nome_is_six_vertex(self):
        with pytest.raises(VanishingWeightError):
            elliptic.weights_from_elliptic(EllipticParams(pi / 3, 0.0, 0.4))
        w = elliptic.weights_from_elliptic(EllipticParams(pi / 3, 0.0, 0.4), allow_degenerate=True)
        # every weight carries a theta1 factor, which vanishes with the nome
        assert w.as_tuple() == (0.0, 0.0, 0.0, 0.0)

    def test_rho_scales(self):
        w1 = elliptic.weights_from_elliptic(EllipticParams(pi / 3, 0.3, 0.5, 1.0))
        w2 = elliptic.weights_from_elliptic(EllipticParams(pi / 3, 0.3, 0.5, 2.5))
        np.testing.assert_allclose(np.array(w2.as_tuple()), 2.5 * np.array(w1.as_tuple()))

    def test_bad_nome(self):
        with pytest.raises(ValueError):
            EllipticParams(pi / 3, 1.2, 0.4)

    def test_constraint_on_manifold(self, rng):
        for _ in range(100):
            w = elliptic.random_susy_weights(rng)
            assert w.constraint_residual() < 1e-10
            assert min(w.as_tuple()) > 0

    def test_constraint_off_manifold(self, rng):
        for _ in range(100):
            eta = rng.uniform(0.1, 1.5)
            while abs(eta - pi / 3) < 0.1:
                eta = rng.uniform(0.1, 1.5)
            w = elliptic.weights_from_elliptic(EllipticParams(eta, rng.uniform(0.05, 0.5), rng.uniform(0.05, 1.0)))
            assert w.constraint_residual() > 1e-4

    def test_zeta_independent_of_u(self):
        zs = [elliptic.weights_from_elliptic(EllipticParams(pi / 3, 0.3, u)).zeta for u in np.linspace(0.1, 1.0, 7)]
        assert np.ptp(zs) / abs(zs[0]) < 1e-10


class TestConsistency:
    def test_susy_point(self):
        r = elliptic.zeta_and_jz_consistency(EllipticParams(pi / 3, 0.3, 0.5))
        assert r.zeta_residual < 1e-11 and r.jz_residual < 1e-11
        assert r.susy_point and r.jz_susy_residual < 1e-11

    def test_zero_nome_flagged(self):
        r = elliptic.zeta_and_jz_consistency(EllipticParams(pi / 3, 0.0, 0.5))
        assert r.six_vertex and r.zeta_theta == 0.0

    def test_general_eta(self):
        r = elliptic.zeta_and_jz_consistency(EllipticParams(pi / 4, 0.3, 0.5))
        assert r.zeta_residual < 1e-11 and r.jz_residual < 1e-11
        assert not r.susy_point
        assert abs(r.jz_theta - (r.zeta_theta**2 - 1) / 2) > 1e-3


class TestYangBaxter:
    @pytest.mark.parametrize(
        "eta, p, u, v, tol",
        [(pi / 3, 0.2, 0.7, 0.3, 1e-11), (pi / 3, 0.2, 0.45, 0.45, 1e-11), (pi / 5, 0.4, 1.1, 0.2, 1e-10)],
    )
    def test_examples(self, eta, p, u, v, tol):
        assert elliptic.yang_baxter_residual(eta, p, u, v) < tol

    def test_strict_mode_rejects_vanishing(self):
        with pytest.raises(VanishingWeightError):
            elliptic.yang_baxter_residual(pi / 3, 0.2, 0.45, 0.45, allow_degenerate=False)

    def test_generic_quadruples_fail(self):
        # an arbitrary constant R-matrix does not solve the equation
        from susy8v import vertex
        from susy8v.vertex import VertexWeights

        R = vertex.r_matrix_array(VertexWeights(1.0, 0.3, 0.7, 0.2))
        R12 = vertex._embed_pair(3, 0, 1, R).toarray()
        R13 = vertex._embed_pair(3, 0, 2, 1.7 * R.T[::-1, ::-1]).toarray()
        R23 = vertex._embed_pair(3, 1, 2, R @ R).toarray()
        assert np.linalg.norm(R12 @ R13 @ R23 - R23 @ R13 @ R12) > 1e-3

    @pytest.mark.parametrize("L", [3, 4, 5])
    def test_commuting_family(self, L, rng):
        psi = hilbert.random_state(L, rng)
        assert elliptic.commuting_residual(pi / 3, 0.3, 0.2, 0.8, L, psi) < 1e-10


class TestTUZero:
    def test_susy_example(self):
        r = elliptic.tu_zero_checks(pi / 3, 0.25, 3)
        assert r.shift_residual < 1e-10
        assert r.log_derivative_residual < 1e-7
        assert max(r.coupling_residuals) < 1e-9

    def test_two_sites(self):
        r = elliptic.tu_zero_checks(pi / 3, 0.1, 2)
        assert r.shift_residual < 1e-12

    def test_general_eta(self):
        r = elliptic.tu_zero_checks(0.8, 0.3, 4)
        assert r.shift_residual < 1e-10 and r.log_derivative_residual < 1e-7
        assert r.susy_couplings is None

    def test_couplings_are_susy(self):
        Jx, Jy, Jz = elliptic.derived_couplings(pi / 3, 0.4)
        zeta = elliptic.zeta_theta(pi / 3, 0.4)
        assert Jx == pytest.approx(1 + zeta, abs=1e-9)
        assert Jy == pytest.approx(1 - zeta, abs=1e-9)
        assert Jz == pytest.approx((zeta**2 - 1) / 2, abs=1e-9)
