"""Randomized invariants of the pure model and path-loss functions."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmwcov.model import (LOS, NLOS, AntennaPattern, BallSpec, MaternCluster,
                          ThomasCluster, TierParams, db_to_linear,
                          gain_distribution, linear_to_db, serving_gain)
from mmwcov.pathloss import (ball_index, ccdf_tier, intensity,
                             intensity_density, intensity_state, link_pathloss,
                             offset_ccdf, offset_pdf, support_bounds)

finite = st.floats(allow_nan=False, allow_infinity=False)


@st.composite
def tiers(draw):
    n = draw(st.integers(1, 3))
    radii = sorted(draw(st.lists(st.floats(1.0, 500.0), min_size=n,
                                 max_size=n, unique=True)))
    balls = BallSpec(
        tuple(radii),
        tuple(draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))),
        tuple(draw(st.lists(st.floats(1.5, 6.0), min_size=n, max_size=n))),
        tuple(draw(st.lists(st.floats(1.5, 6.0), min_size=n, max_size=n))),
        tuple(draw(st.lists(st.floats(1e-2, 1e7), min_size=n, max_size=n))),
        tuple(draw(st.lists(st.floats(1e-2, 1e7), min_size=n, max_size=n))),
    )
    density = draw(st.floats(1e-7, 1e-2))
    return TierParams(power_dbw=0.0, bias=1.0, density=density, balls=balls)


@given(tiers(), st.floats(1e-6, 1e30), st.floats(1.0, 1e4),
       st.sampled_from([LOS, NLOS]))
@settings(max_examples=200, deadline=None)
def test_intensity_monotone_and_bounded(tier, x, factor, state):
    a = intensity_state(tier, state, x)
    b = intensity_state(tier, state, x * factor)
    assert 0.0 <= a <= b
    # saturation: the annuli of this state cannot hold more mass than
    # the whole disc
    cap = tier.density * math.pi * tier.balls.outer_radius ** 2
    assert b <= cap + 1e-9 * cap


@given(tiers(), st.floats(1e-6, 1e30))
@settings(max_examples=200, deadline=None)
def test_state_split_adds_up(tier, x):
    total = intensity(tier, x)
    parts = intensity_state(tier, LOS, x) + intensity_state(tier, NLOS, x)
    assert total == pytest.approx(parts, rel=1e-12, abs=1e-300)
    # exp(-Lambda) may underflow to an exact 0 for dense tiers
    assert 0.0 <= ccdf_tier(tier, x) <= 1.0


@given(tiers(), st.sampled_from([LOS, NLOS]), st.floats(0.01, 0.99))
@settings(max_examples=200, deadline=None)
def test_density_nonnegative_inside_support(tier, state, q):
    b = support_bounds(tier, state)
    if b.hi <= b.lo:
        return
    x = b.lo + (b.hi - b.lo) * q
    assert intensity_density(tier, state, x) >= 0.0
    assert intensity_density(tier, state, b.hi * 1.5) == 0.0


@given(tiers(), st.floats(0.0, 600.0), st.sampled_from([LOS, NLOS]))
@settings(max_examples=200, deadline=None)
def test_link_pathloss_consistent_with_ball(tier, r, state):
    balls = tier.balls
    d = ball_index(balls, r)
    loss = link_pathloss(balls, r, state)
    if r >= balls.outer_radius:
        assert d == balls.n_balls
        assert math.isinf(loss)
    else:
        assert (d == 0 or balls.radii[d - 1] <= r) and r < balls.radii[d]
        assert loss == pytest.approx(
            balls.intercept(d, state) * r ** balls.exponent(d, state),
            rel=1e-12)


@given(st.floats(-300.0, 300.0))
def test_db_roundtrip(db):
    assert linear_to_db(db_to_linear(db)) == pytest.approx(db, abs=1e-9)


@given(st.floats(-30.0, 40.0), st.floats(0.0, 40.0),
       st.floats(1e-3, 2.0 * math.pi - 1e-3))
def test_gain_distribution_is_a_distribution(main_db, drop_db, width):
    # only patterns with main lobe >= side lobe are valid scenarios
    ant = AntennaPattern(main_db, main_db - drop_db, width)
    dist = gain_distribution(ant)
    probs = [p for _, p in dist]
    gains = [g for g, _ in dist]
    assert all(p >= 0.0 for p in probs)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)
    assert serving_gain(ant) == pytest.approx(max(gains), rel=1e-12)
    mean = sum(g * p for g, p in dist)
    assert min(gains) * (1.0 - 1e-9) - 1e-12 <= mean
    assert mean <= max(gains) * (1.0 + 1e-9) + 1e-12


@given(st.floats(0.1, 100.0), st.floats(0.0, 500.0), st.floats(1.0, 3.0))
def test_offset_law_monotone(scale, y, factor):
    for cluster in (ThomasCluster(scale), MaternCluster(scale)):
        c1 = offset_ccdf(cluster, y)
        c2 = offset_ccdf(cluster, y * factor)
        assert 0.0 <= c2 <= c1 <= 1.0
        assert offset_pdf(cluster, y) >= 0.0
    assert offset_ccdf(MaternCluster(scale), scale * 1.0001) == 0.0
