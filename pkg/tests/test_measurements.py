import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pyramid_povm.information import eta_pair
from pyramid_povm.measurements import (
    INCONCLUSIVE,
    Povm,
    family_povm,
    inconclusive_probability,
    mud,
    srm,
    srm_from_density,
    validate_povm,
)
from pyramid_povm.pyramid import make_pyramid

GRID = [(N, lam) for N in range(2, 13) for lam in (0.0, 0.1, 0.3, 0.5, 0.77, 0.95)]


def test_srm_orthogonal_edges_at_zero_overlap():
    p = make_pyramid(4, 0.0)
    q = srm(p)
    for m in range(4):
        np.testing.assert_allclose(q.elements[m], np.outer(p.edges[m], p.edges[m].conj()), atol=1e-15)


def test_srm_qubit_overlap():
    p = make_pyramid(2, 0.5)
    q = srm(p)
    eta0 = eta_pair(p).eta0
    for n in range(2):
        assert np.vdot(p.edges[n], q.elements[n] @ p.edges[n]).real == pytest.approx(eta0, abs=1e-12)
    assert eta0 == pytest.approx(0.9330127, abs=1e-7)


@pytest.mark.parametrize("N,lam", GRID)
def test_srm_structure(N, lam):
    p = make_pyramid(N, lam)
    q = srm(p)
    assert validate_povm(q, 1e-10).ok
    overlaps = np.einsum("mij,nji->mn", q.elements, q.elements).real
    np.testing.assert_allclose(overlaps, np.eye(N), atol=1e-10)
    np.testing.assert_allclose(q.elements, srm_from_density(p).elements, atol=1e-9)


@pytest.mark.parametrize("lam", [1.0, -0.5])
def test_degenerate_rejected(lam):
    p = make_pyramid(3, lam)
    with pytest.raises(ValueError, match="degenerate"):
        srm(p)
    with pytest.raises(ValueError, match="degenerate"):
        family_povm(p, 0.5)


def test_family_t1_is_srm_with_null_last_element():
    p = make_pyramid(5, 0.6)
    q = family_povm(p, 1.0)
    assert q.M == 6 and q.labels[-1] == INCONCLUSIVE
    np.testing.assert_allclose(q.elements[:5], srm(p).elements, atol=1e-15)
    assert not np.any(q.elements[5])


@pytest.mark.parametrize("N,lam", GRID)
def test_mud_unambiguous(N, lam):
    p = make_pyramid(N, lam)
    q = mud(p)
    amp = np.einsum("ni,mij,nj->nm", p.edges.conj(), q.elements[:N], p.edges).real
    off = amp - np.diag(np.diag(amp))
    assert np.max(np.abs(off)) <= 1e-10


def test_mud_conclusive_probability():
    p = make_pyramid(2, 0.5)
    q = mud(p)
    conclusive = sum(np.vdot(e, q.elements[m] @ e).real for e in p.edges for m in range(2)) / 2
    assert conclusive == pytest.approx(0.5, abs=1e-12)


def test_mud_equals_srm_at_zero_overlap():
    p = make_pyramid(3, 0.0)
    np.testing.assert_allclose(mud(p).elements[:3], srm(p).elements, atol=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.3, 0.7, 1.0])
@pytest.mark.parametrize("N,lam", [(2, 0.5), (3, 0.9), (7, 0.2), (12, 0.6)])
def test_family_validates(N, lam, t):
    assert validate_povm(family_povm(make_pyramid(N, lam), t), 1e-10).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.floats(0.0, 0.999), st.floats(0.0, 1.0))
def test_family_completeness_property(N, lam, t):
    assert validate_povm(family_povm(make_pyramid(N, lam), t), 1e-10).ok


def test_family_rejects_bad_t():
    with pytest.raises(ValueError):
        family_povm(make_pyramid(3, 0.5), 1.2)
    with pytest.raises(ValueError):
        inconclusive_probability(make_pyramid(3, 0.5), -0.1)


def test_inconclusive_probability_examples():
    p = make_pyramid(10, 0.5)
    assert inconclusive_probability(p, 1.0) == 0.0
    assert inconclusive_probability(p, 0.0) == pytest.approx(p.r0)
    assert inconclusive_probability(p, math.sqrt(p.r1 / p.r0)) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.2, 0.55, 0.9, 1.0])
def test_inconclusive_probability_matches_povm(t):
    p = make_pyramid(6, 0.4)
    q = family_povm(p, t)
    direct = np.mean([np.vdot(e, q.elements[-1] @ e).real for e in p.edges])
    assert inconclusive_probability(p, t) == pytest.approx(direct, abs=1e-12)


def test_inconclusive_probability_decreasing():
    p = make_pyramid(4, 0.3)
    vals = [inconclusive_probability(p, t) for t in np.linspace(0.01, 0.99, 50)]
    assert np.all(np.diff(vals) < 0)


def test_validate_detects_scaling():
    q = srm(make_pyramid(3, 0.4))
    bad = Povm(0.5 * q.elements, q.labels)
    rep = validate_povm(bad, 1e-10)
    assert not rep.ok
    assert rep.completeness_deviation == pytest.approx(0.5, abs=1e-12)
