import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bplab.cumulants import (
    CumulantSequence,
    MomentSequence,
    bp_transport,
    cumulants_from_moments,
    moments_from_cumulants,
)
from oracles import lattice_moment


def test_sequence_validation():
    with pytest.raises(ValueError):
        MomentSequence(())
    with pytest.raises(ValueError):
        CumulantSequence("weird", (1.0,))
    m = MomentSequence((2.0, 5.0))
    assert m[0] == 1.0 and m[1] == 2.0 and m[2] == 5.0 and m.kmax == 2


def test_cumulant_addition():
    a = CumulantSequence("classical", (1.0, 2.0))
    b = CumulantSequence("classical", (0.5, -1.0))
    assert (a + b).values == (1.5, 1.0)
    with pytest.raises(ValueError):
        a + CumulantSequence("free", (0.5, -1.0))


def test_standard_gaussian_moments():
    c = CumulantSequence("classical", (0.0, 1.0, 0.0, 0.0))
    assert moments_from_cumulants(c).values == (0.0, 1.0, 0.0, 3.0)


def test_standard_semicircle_moments():
    c = CumulantSequence("free", (0.0, 1.0, 0.0, 0.0, 0.0, 0.0))
    assert moments_from_cumulants(c).values == (0.0, 1.0, 0.0, 2.0, 0.0, 5.0)


def test_free_poisson_moments():
    c = CumulantSequence("free", (1.0, 1.0, 1.0))
    assert moments_from_cumulants(c).values == (1.0, 2.0, 5.0)


@pytest.mark.parametrize("kind", ("classical", "free"))
def test_recursion_matches_lattice_sum(kind):
    rng = np.random.default_rng(5)
    for _ in range(5):
        c = tuple(rng.uniform(-2, 2, size=8))
        m = moments_from_cumulants(CumulantSequence(kind, c))
        for n in range(1, 9):
            assert m[n] == pytest.approx(lattice_moment(c, n, kind), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("kind", ("classical", "free"))
@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=8))
def test_round_trip(kind, values):
    c = CumulantSequence(kind, tuple(values))
    back = cumulants_from_moments(moments_from_cumulants(c), kind)
    assert back.kind == kind
    assert np.allclose(back.values, c.values, rtol=1e-8, atol=1e-8)


@pytest.mark.parametrize("kind", ("classical", "free"))
def test_inverse_round_trip(kind):
    m = MomentSequence((0.3, 1.2, -0.4, 5.0, 1.1, 7.7, -2.0, 40.0))
    again = moments_from_cumulants(cumulants_from_moments(m, kind))
    assert np.allclose(again.values, m.values, rtol=1e-10, atol=1e-10)


def test_bp_transport_is_cumulant_identity():
    c = CumulantSequence("classical", (0.5, 1.5, -0.2))
    f = bp_transport(c)
    assert f.kind == "free" and f.values == c.values
    with pytest.raises(ValueError):
        bp_transport(f)


def test_bp_transport_maps_gaussian_to_semicircle():
    gauss = cumulants_from_moments(MomentSequence((0.0, 1.0, 0.0, 3.0)), "classical")
    sc = moments_from_cumulants(bp_transport(gauss))
    assert np.allclose(sc.values, (0.0, 1.0, 0.0, 2.0), atol=1e-12)


def test_bp_transport_maps_poisson_to_marchenko_pastur():
    # classical Poisson(1) has all cumulants 1; its free image has Catalan moments
    pois = CumulantSequence("classical", (1.0,) * 4)
    mp = moments_from_cumulants(bp_transport(pois))
    assert np.allclose(mp.values, (1.0, 2.0, 5.0, 14.0), atol=1e-12)
