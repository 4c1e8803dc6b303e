"""Path-loss laws: closed forms re-derived by hand, an independent
area Monte Carlo for the intensity measure, and finite-difference
consistency between densities and CCDFs."""

import math

import numpy as np
import pytest

from conftest import simple_scenario
from mmwcov.model import (LOS, NLOS, MaternCluster, ThomasCluster,
                          effective_tier0)
from mmwcov.pathloss import (OUTAGE, ball_index, ccdf_center,
                             ccdf_center_state, ccdf_tier, ccdf_tier_state,
                             center_pathloss, center_support_end,
                             intensity, intensity_density, intensity_state,
                             link_pathloss, pdf_center_state, pdf_tier_state,
                             state_edges, support_bounds, tier_edges)
from mmwcov.quadrature import integrate


# -- independent oracle: area Monte Carlo of the intensity measure ----------

def mc_intensity(tier, state, xs, n=300_000, seed=0):
    """Empirical E[#BSs with loss < x in `state`], by uniform sampling
    of the outage disc.  Deliberately re-derives annulus membership,
    state draws and losses with plain loops over annuli."""
    rng = np.random.default_rng(seed)
    R = tier.balls.outer_radius
    r = R * np.sqrt(rng.random(n))
    u = rng.random(n)
    loss = np.full(n, np.inf)
    is_state = np.zeros(n, dtype=bool)
    lo = 0.0
    for d in range(tier.balls.n_balls):
        hi = tier.balls.radii[d]
        in_d = (r >= lo) & (r < hi)
        los_here = u < tier.balls.los_prob[d]
        if state == LOS:
            sel = in_d & los_here
            a, k = tier.balls.alpha_los[d], tier.balls.kappa_los[d]
        else:
            sel = in_d & ~los_here
            a, k = tier.balls.alpha_nlos[d], tier.balls.kappa_nlos[d]
        loss[sel] = k * r[sel] ** a
        is_state |= sel
        lo = hi
    area_bs = tier.density * math.pi * R * R
    return [area_bs * float(np.mean(is_state & (loss < x))) for x in xs]


def test_intensity_against_area_mc(table2):
    rng = np.random.default_rng(42)
    checked = 0
    for tier in table2.tiers:
        for state in (LOS, NLOS):
            b = support_bounds(tier, state)
            if b.hi <= b.lo:
                continue
            # probes spread over the support, away from exact edges
            xs = [b.lo + (b.hi - b.lo) * q for q in rng.uniform(0.1, 0.95, 5)]
            got = [intensity_state(tier, state, x) for x in xs]
            ref = mc_intensity(tier, state, xs, seed=checked)
            for g, m in zip(got, ref):
                assert g == pytest.approx(m, rel=0.015, abs=2e-3)
                checked += 1
    assert checked >= 10


# -- closed forms for the single-ball unit scenario -------------------------

def test_intensity_closed_form():
    sc = simple_scenario()  # lambda = 1e-3, R = 100, half LOS, kappa = 1
    tier = sc.tiers[0]
    lam_pi = math.pi * 1e-3
    # LOS: alpha = 2, so Lambda = pi lam 0.5 min(x, R^2)
    assert intensity_state(tier, LOS, 2500.0) == pytest.approx(
        lam_pi * 0.5 * 2500.0, rel=1e-12)
    assert intensity_state(tier, LOS, 1e4) == pytest.approx(
        lam_pi * 0.5 * 1e4, rel=1e-12)
    assert intensity_state(tier, LOS, 5e4) == pytest.approx(
        lam_pi * 0.5 * 1e4, rel=1e-12)
    # NLOS: alpha = 4, so Lambda = pi lam 0.5 min(sqrt(x), R^2)
    assert intensity_state(tier, NLOS, 2500.0) == pytest.approx(
        lam_pi * 0.5 * 50.0, rel=1e-12)
    assert intensity(tier, 2500.0) == pytest.approx(
        lam_pi * 0.5 * (2500.0 + 50.0), rel=1e-12)
    # densities: d/dx of the above
    assert intensity_density(tier, LOS, 2500.0) == pytest.approx(
        lam_pi * 0.5, rel=1e-12)
    assert intensity_density(tier, NLOS, 2500.0) == pytest.approx(
        lam_pi * 0.5 / (2.0 * 50.0), rel=1e-12)
    assert intensity_density(tier, LOS, 1.1e4) == 0.0
    assert ccdf_tier(tier, 2500.0) == pytest.approx(
        math.exp(-lam_pi * 0.5 * 2550.0), rel=1e-12)
    assert ccdf_tier_state(tier, NLOS, 2500.0) == pytest.approx(
        math.exp(-lam_pi * 0.5 * 50.0), rel=1e-12)


def test_intensity_density_matches_finite_difference(table2):
    for tier in table2.tiers:
        for state in (LOS, NLOS):
            b = support_bounds(tier, state)
            if b.hi <= b.lo:
                continue
            for q in (0.2, 0.5, 0.8):
                x = b.lo + (b.hi - b.lo) * q
                h = x * 1e-6
                fd = (intensity_state(tier, state, x + h)
                      - intensity_state(tier, state, x - h)) / (2.0 * h)
                assert intensity_density(tier, state, x) == pytest.approx(
                    fd, rel=1e-5)


def test_tier_pdf_matches_ccdf_derivative(table2):
    # each state's nearest-loss density is -d/dx of that state's CCDF
    for tier in table2.tiers:
        for state in (LOS, NLOS):
            b = support_bounds(tier, state)
            for q in (0.25, 0.5, 0.75):
                x = b.lo + (b.hi - b.lo) * q
                h = x * 1e-6
                fd = -(ccdf_tier_state(tier, state, x + h)
                       - ccdf_tier_state(tier, state, x - h)) / (2.0 * h)
                assert pdf_tier_state(tier, state, x) == pytest.approx(
                    fd, rel=1e-5)


def test_tier_total_min_density(table2):
    # the overall nearest link's density factorizes as the summed
    # intensity density times the joint void probability, which is not
    # the sum of the per-state minimum densities
    tier = table2.tiers[0]
    b = support_bounds(tier, NLOS)
    x = 0.5 * (b.lo + b.hi)
    h = x * 1e-6
    fd = -(ccdf_tier(tier, x + h) - ccdf_tier(tier, x - h)) / (2.0 * h)
    total = sum(intensity_density(tier, s, x) for s in (LOS, NLOS)) \
        * ccdf_tier(tier, x)
    assert total == pytest.approx(fd, rel=1e-5)
    naive = sum(pdf_tier_state(tier, s, x) for s in (LOS, NLOS))
    assert naive > total * 1.05


def test_support_bounds_and_edges(table2):
    tier = table2.tiers[0]  # radii (40, 60), LOS ball then NLOS ball
    k_l = tier.balls.kappa_los[0]
    k_n = tier.balls.kappa_nlos[1]
    b_los = support_bounds(tier, LOS)
    assert b_los.lo == 0.0
    assert b_los.hi == pytest.approx(k_l * 40.0 ** 2)
    b_nlos = support_bounds(tier, NLOS)
    assert b_nlos.lo == pytest.approx(k_n * 40.0 ** 4)
    assert b_nlos.hi == pytest.approx(k_n * 60.0 ** 4)
    assert set(state_edges(tier, NLOS)) == {b_nlos.lo, b_nlos.hi}
    assert set(tier_edges(tier)) >= {b_los.hi, b_nlos.lo, b_nlos.hi}


def test_intensity_zero_weight_state_is_empty(table2):
    tier = table2.tiers[0]
    # no NLOS inside the first ball: intensity stays 0 below its edge
    k_n = tier.balls.kappa_nlos[1]
    assert intensity_state(tier, NLOS, 0.9 * k_n * 40.0 ** 4) == 0.0


def test_ball_index_boundaries(table2):
    balls = table2.tiers[0].balls
    assert ball_index(balls, 0.0) == 0
    assert ball_index(balls, 39.999) == 0
    assert ball_index(balls, 40.0) == 1  # annuli are [lo, hi)
    assert ball_index(balls, 59.999) == 1
    assert ball_index(balls, 60.0) == 2


def test_link_pathloss_and_outage(table2):
    balls = table2.tiers[0].balls
    k_l = balls.kappa_los[0]
    k_n = balls.kappa_nlos[1]
    assert link_pathloss(balls, 30.0, LOS) == pytest.approx(k_l * 900.0)
    assert link_pathloss(balls, 50.0, NLOS) == pytest.approx(k_n * 50.0 ** 4)
    assert link_pathloss(balls, 60.0, LOS) == OUTAGE
    assert link_pathloss(balls, 1e9, NLOS) == OUTAGE
    assert OUTAGE == math.inf


# -- cluster-center link ----------------------------------------------------

def test_center_closed_forms_thomas():
    # alpha = 2, kappa = 1: loss = offset^2, which is exponential with
    # mean 2 sigma^2 under a Rayleigh(sigma) offset
    sc = simple_scenario(cluster=ThomasCluster(10.0))
    t0 = effective_tier0(sc)
    for x in (10.0, 200.0, 1500.0):
        assert ccdf_center_state(t0, sc.cluster, LOS, x) == pytest.approx(
            math.exp(-x / 200.0), rel=1e-12)
        assert pdf_center_state(t0, sc.cluster, LOS, x) == pytest.approx(
            math.exp(-x / 200.0) / 200.0, rel=1e-12)
    assert math.isinf(center_support_end(t0, sc.cluster, LOS))


def test_center_closed_forms_matern():
    # alpha = 2, kappa = 1: loss = offset^2 is uniform on (0, R^2)
    sc = simple_scenario(cluster=MaternCluster(8.0))
    t0 = effective_tier0(sc)
    end = center_support_end(t0, sc.cluster, LOS)
    assert end == pytest.approx(64.0)
    for x in (5.0, 30.0, 60.0):
        assert ccdf_center_state(t0, sc.cluster, LOS, x) == pytest.approx(
            1.0 - x / 64.0, rel=1e-12)
        assert pdf_center_state(t0, sc.cluster, LOS, x) == pytest.approx(
            1.0 / 64.0, rel=1e-12)
    assert ccdf_center_state(t0, sc.cluster, LOS, 70.0) == 0.0
    assert pdf_center_state(t0, sc.cluster, LOS, 70.0) == 0.0


def test_center_pdf_matches_ccdf_derivative(table2):
    t0 = effective_tier0(table2)
    for x in (1e5, 1e6, 1e7):
        h = x * 1e-6
        fd = -(ccdf_center_state(t0, table2.cluster, LOS, x + h)
               - ccdf_center_state(t0, table2.cluster, LOS, x - h)) / (2.0 * h)
        assert pdf_center_state(t0, table2.cluster, LOS, x) == pytest.approx(
            fd, rel=1e-5)


def test_center_pdf_integrates_to_one(table2):
    # the state pdf is a proper density; the state weight enters at the
    # mixture level, not here
    t0 = effective_tier0(table2)
    hi = 1e9
    res = integrate(lambda x: pdf_center_state(t0, table2.cluster, LOS, x),
                    0.0, hi, breakpoints=(1e3, 1e6), tol=1e-10)
    tail = ccdf_center_state(t0, table2.cluster, LOS, hi)
    assert res.value + tail == pytest.approx(1.0, abs=1e-8)


def test_center_mixture(table2):
    t0 = effective_tier0(table2)
    # all-LOS center: mixture equals the LOS state law
    assert ccdf_center(t0, table2.cluster, 1e6) == pytest.approx(
        ccdf_center_state(t0, table2.cluster, LOS, 1e6), rel=1e-12)
    assert ccdf_center(t0, table2.cluster, 1e-9) == pytest.approx(1.0, abs=1e-9)


def test_center_pathloss_values(table2):
    t0 = effective_tier0(table2)
    assert center_pathloss(t0, 10.0, LOS) == pytest.approx(
        t0.kappa_los * 100.0)
    assert center_pathloss(t0, 10.0, NLOS) == pytest.approx(
        t0.kappa_nlos * 1e4)
