import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pyramid_povm.information import (
    FAMILY_OPTIMAL,
    SRM_OPTIMAL,
    JointDistribution,
    asymptotic_ratio,
    eta_pair,
    family_information,
    family_information_numeric,
    joint_distribution,
    lambda_threshold,
    maximize_family,
    mutual_information,
    optimum,
    srm_information,
    srm_mud_crossing,
)
from pyramid_povm.measurements import family_povm, mud, srm, t_from_T
from pyramid_povm.pyramid import make_pyramid


def test_mutual_information_extremes():
    N = 4
    assert mutual_information(JointDistribution(np.eye(N) / N)) == pytest.approx(1.0)
    assert mutual_information(JointDistribution(np.full((N, 6), 1 / 24))) == pytest.approx(0.0, abs=1e-15)


def test_mutual_information_ignores_zero_columns():
    j = JointDistribution(np.hstack([np.eye(3) / 3, np.zeros((3, 2))]))
    assert mutual_information(j) == pytest.approx(1.0)


def test_joint_srm_zero_overlap():
    p = make_pyramid(5, 0.0)
    np.testing.assert_allclose(joint_distribution(p, srm(p)).p, np.eye(5) / 5, atol=1e-15)


@pytest.mark.parametrize("N,lam", [(2, 0.5), (3, 0.7), (8, 0.2)])
def test_joint_srm_structure(N, lam):
    p = make_pyramid(N, lam)
    j = joint_distribution(p, srm(p))
    j.check()
    eta = eta_pair(p)
    np.testing.assert_allclose(j.p, (eta.eta1 + (eta.eta0 - eta.eta1) * np.eye(N)) / N, atol=1e-12)


def test_joint_family_inconclusive_column():
    p = make_pyramid(6, 0.5)
    t = 0.6
    j = joint_distribution(p, family_povm(p, t))
    np.testing.assert_allclose(j.p[:, -1], (1 - t * t) * p.r0 / 6, atol=1e-14)


def test_joint_dimension_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        joint_distribution(make_pyramid(3, 0.5), srm(make_pyramid(4, 0.5)))


@pytest.mark.parametrize("N", [2, 3, 5, 10, 50])
@pytest.mark.parametrize("lam", [0.0, 0.2, 0.5, 0.9, 1.0])
def test_eta_relations(N, lam):
    eta = eta_pair(make_pyramid(N, lam))
    r1 = (1 - lam) / N
    assert math.sqrt(eta.eta0) - math.sqrt(eta.eta1) == pytest.approx(math.sqrt(N * r1), abs=1e-12)
    assert eta.eta0 + (N - 1) * eta.eta1 == pytest.approx(1.0, abs=1e-12)


def test_eta_examples():
    eta = eta_pair(make_pyramid(4, 0.0))
    assert (eta.eta0, eta.eta1) == (pytest.approx(1.0), pytest.approx(0.0, abs=1e-15))
    eta = eta_pair(make_pyramid(4, 1.0))
    assert eta.eta0 == pytest.approx(0.25) and eta.eta1 == pytest.approx(0.25)
    eta = eta_pair(make_pyramid(2, 0.5))
    assert eta.eta0 == pytest.approx(0.9330127019, abs=1e-9)
    assert eta.eta1 == pytest.approx(0.0669872981, abs=1e-9)


def test_srm_information_examples():
    assert srm_information(make_pyramid(7, 0.0)) == pytest.approx(1.0)
    assert srm_information(make_pyramid(7, 1.0)) == pytest.approx(0.0, abs=1e-15)
    p = make_pyramid(10, 0.77276)
    assert srm_information(p) == pytest.approx(1 - 0.77276, abs=5e-5)


def test_srm_and_mud_information_agree_at_fig3_crossing():
    p = make_pyramid(10, 0.77276)
    i_mud = mutual_information(joint_distribution(p, mud(p)))
    assert i_mud == pytest.approx(1 - 0.77276, abs=1e-12)
    assert srm_information(p) == pytest.approx(i_mud, abs=5e-5)
    assert srm_mud_crossing(10) == pytest.approx(0.77276, abs=1e-4)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.floats(0.0, 0.999), st.floats(0.0, 1.0))
def test_closed_forms_match_pipeline(N, lam, T):
    p = make_pyramid(N, lam)
    assert srm_information(p) == pytest.approx(
        mutual_information(joint_distribution(p, srm(p))), abs=1e-10)
    assert family_information(p, T) == pytest.approx(family_information_numeric(p, T), abs=1e-10)


def test_family_information_endpoints():
    p = make_pyramid(4, 0.6)
    assert family_information(p, 0.0) == pytest.approx(srm_information(p), abs=1e-14)
    assert family_information(p, 1.0) == pytest.approx(0.4, abs=1e-12)
    assert family_information(make_pyramid(2, 0.5), 1.0) == pytest.approx(0.5, abs=1e-12)


def test_family_information_rejects_bad_T():
    with pytest.raises(ValueError):
        family_information(make_pyramid(4, 0.6), 1.5)


def test_lambda_threshold():
    assert lambda_threshold(2) == 1.0
    assert lambda_threshold(3) == pytest.approx(5 / 6)
    assert lambda_threshold(10) == pytest.approx(13 / 45)


def test_optimum_examples():
    for lam in (0.0, 0.3, 0.9, 1.0):
        assert optimum(make_pyramid(2, lam)).regime == SRM_OPTIMAL
    rep = optimum(make_pyramid(3, 0.9))
    assert rep.regime == FAMILY_OPTIMAL
    assert rep.Imax == pytest.approx(0.2 * math.log(2, 3), abs=1e-12)
    assert rep.Imax == pytest.approx(0.126186, abs=1e-6)
    rep = optimum(make_pyramid(10, 0.5))
    assert rep.Tstar == pytest.approx(0.46042, abs=1e-5)
    assert rep.Imax == pytest.approx(0.53676, abs=1e-5)


def test_optimum_rejects_negative_overlap():
    with pytest.raises(ValueError):
        optimum(make_pyramid(3, -0.2))


@pytest.mark.parametrize("N", [3, 4, 5, 10, 20, 100])
def test_branches_agree_at_boundary(N):
    L = lambda_threshold(N)
    p = make_pyramid(N, L)
    rep = optimum(p)
    assert rep.Imax == pytest.approx(srm_information(p), abs=1e-10)
    assert rep.Tstar == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize("N", [3, 5, 10])
@pytest.mark.parametrize("lam", [0.1, 0.3, 0.5, 0.7, 0.9, 0.99])
def test_imax_matches_scalar_maximization(N, lam):
    p = make_pyramid(N, lam)
    rep = optimum(p)
    T, I = maximize_family(p)
    assert I == pytest.approx(rep.Imax, abs=1e-9)
    assert rep.Imax >= rep.Isrm - 1e-12


@pytest.mark.parametrize("N", [3, 5, 10, 30])
def test_regime_boundary_argmax(N):
    L = lambda_threshold(N)
    below = make_pyramid(N, L - 1e-3)
    assert abs(maximize_family(below)[0]) < 1e-2
    above = make_pyramid(N, L + 1e-3)
    assert abs(maximize_family(above)[0] - optimum(above).Tstar) < 1e-2


@pytest.mark.parametrize("N", [3, 4, 10])
@pytest.mark.parametrize("lam", [0.05, 0.4, 0.85, 0.99])
def test_mud_never_optimal(N, lam):
    p = make_pyramid(N, lam)
    rep = optimum(p)
    assert family_information(p, 1.0) < rep.Imax
    t_opt = t_from_T(p, rep.Tstar)
    assert math.sqrt(p.r1 / p.r0) < t_opt <= 1.0


@pytest.mark.parametrize("N", [3, 5, 10, 20, 100])
def test_ratio_curve_shape(N):
    L = lambda_threshold(N)
    lams = np.linspace(0.01, 0.999, 300)
    ratios = []
    for lam in lams:
        rep = optimum(make_pyramid(N, lam))
        ratios.append(rep.Imax / rep.Isrm)
    ratios = np.array(ratios)
    assert np.allclose(ratios[lams <= L], 1.0, atol=1e-12)
    tail = ratios[lams > L]
    assert np.all(tail > 1.0) and np.all(np.diff(tail) >= -1e-12)
    assert tail[-1] < asymptotic_ratio(N)


def test_asymptotic_ratio():
    assert asymptotic_ratio(3) == pytest.approx(1.5 * math.log(2))
    assert asymptotic_ratio(100) == pytest.approx(50 / 98 * math.log(99))
    assert asymptotic_ratio(100) == pytest.approx(2.3445, abs=1e-4)
    with pytest.raises(ValueError):
        asymptotic_ratio(2)


def test_information_never_exceeds_one():
    for N, lam in [(2, 0.1), (5, 0.5), (9, 0.9)]:
        p = make_pyramid(N, lam)
        for q in (srm(p), mud(p), family_povm(p, 0.4)):
            assert mutual_information(joint_distribution(p, q)) <= 1 + 1e-12
