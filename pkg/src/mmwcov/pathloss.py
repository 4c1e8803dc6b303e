"""Path-loss point process of each tier, and the tier-0 link law.

For a PPP tier with density lambda and a piecewise blockage model,
mapping every BS through the distance/state-dependent loss law gives
an inhomogeneous Poisson process of loss values on the positive line.
Its intensity measure on [0, x) is

    Lambda_js(x) = pi * lambda * sum_d w_d(s) *
                   [ min(x / kappa, r_d^alpha)^(2/alpha) - r_{d-1}^2 ]_+

summed over annuli d where the state weight w_d(s) is beta_d (LOS) or
1 - beta_d (NLOS), with the bracket clipped to the annulus.  The void
probability of [0, x) then gives the CCDF of the smallest loss in the
tier, exp(-Lambda_j(x)); beyond the outermost radius links carry
infinite loss (the OUTAGE sentinel).

The cluster-center link (tier 0) is a single BS whose distance follows
the cluster offset law, so its loss has an ordinary CCDF/pdf mixture
over the LOS/NLOS states.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .model import (LOS, NLOS, STATES, BallSpec, ClusterModel, MaternCluster,
                    ThomasCluster, Tier0Params, TierParams)

# Loss assigned to links that cannot be established at all.  A float
# so realized path losses stay plain floats; any power divided by it
# is exactly 0.0.
OUTAGE = math.inf


@dataclass(frozen=True)
class SupportBounds:
    """Closure of the set where a state's intensity density is
    positive.  hi == 0 means the state is impossible in this tier."""

    lo: float
    hi: float


def _state_pieces(balls: BallSpec, state: str):
    """Yield (lo_edge, hi_edge, weight, alpha, kappa) per annulus with
    positive weight, edges in loss units."""
    prev_r = 0.0
    for d in range(balls.n_balls):
        w = balls.weight(d, state)
        r = balls.radii[d]
        if w > 0.0:
            alpha = balls.exponent(d, state)
            kappa = balls.intercept(d, state)
            yield kappa * prev_r ** alpha, kappa * r ** alpha, w, alpha, kappa
        prev_r = r


def intensity_state(tier: TierParams, state: str, x: float) -> float:
    """Intensity measure Lambda_js([0, x)) of the tier's loss process
    restricted to one blockage state.  Continuous and nondecreasing in
    x; saturates at pi*lambda*sum_d w_d*(r_d^2 - r_{d-1}^2)."""
    if x <= 0.0:
        return 0.0
    total = 0.0
    prev_r = 0.0
    for d in range(tier.balls.n_balls):
        w = tier.balls.weight(d, state)
        r = tier.balls.radii[d]
        if w > 0.0:
            alpha = tier.balls.exponent(d, state)
            kappa = tier.balls.intercept(d, state)
            hi_edge = kappa * r ** alpha
            if x >= hi_edge:
                total += w * (r * r - prev_r * prev_r)
            else:
                lo_edge = kappa * prev_r ** alpha
                if x > lo_edge:
                    total += w * ((x / kappa) ** (2.0 / alpha) - prev_r * prev_r)
        prev_r = r
    return math.pi * tier.density * total


def intensity(tier: TierParams, x: float) -> float:
    """Total intensity measure Lambda_j([0, x)), both states."""
    return intensity_state(tier, LOS, x) + intensity_state(tier, NLOS, x)


def intensity_density(tier: TierParams, state: str, x: float) -> float:
    """Density Lambda_js'(x), the derivative of intensity_state in x.

    Piecewise x**(2/alpha - 1) segments; zero outside the mapped
    annuli.  Values exactly on a segment edge belong to the closure of
    the segment below (measure-zero choice, irrelevant under the
    integral)."""
    if x <= 0.0:
        return 0.0
    total = 0.0
    for lo_edge, hi_edge, w, alpha, kappa in _state_pieces(tier.balls, state):
        if lo_edge < x <= hi_edge:
            total += w * x ** (2.0 / alpha - 1.0) / (alpha * kappa ** (2.0 / alpha))
    return 2.0 * math.pi * tier.density * total


def ccdf_tier(tier: TierParams, x: float) -> float:
    """P(smallest loss in the tier > x): the void probability of
    [0, x).  Saturates at exp(-pi*lambda*R_D^2), the probability that
    the whole tier is in outage."""
    return math.exp(-intensity(tier, x))


def ccdf_tier_state(tier: TierParams, state: str, x: float) -> float:
    """P(smallest loss among the tier's links in one state > x)."""
    return math.exp(-intensity_state(tier, state, x))


def pdf_tier_state(tier: TierParams, state: str, x: float) -> float:
    """Defective density of the smallest loss in one state:
    Lambda_js'(x) * exp(-Lambda_js(x))."""
    d = intensity_density(tier, state, x)
    if d == 0.0:
        return 0.0
    return d * math.exp(-intensity_state(tier, state, x))


def support_bounds(tier: TierParams, state: str) -> SupportBounds:
    """Range of loss values the tier can produce in one state;
    (0, 0) when no annulus carries the state."""
    lo = math.inf
    hi = 0.0
    for lo_edge, hi_edge, _, _, _ in _state_pieces(tier.balls, state):
        lo = min(lo, lo_edge)
        hi = max(hi, hi_edge)
    return SupportBounds(0.0 if hi == 0.0 else lo, hi)


def state_edges(tier: TierParams, state: str) -> list:
    """Sorted loss-domain segment edges of one state's density, for
    use as quadrature breakpoints."""
    edges = set()
    for lo_edge, hi_edge, _, _, _ in _state_pieces(tier.balls, state):
        edges.add(lo_edge)
        edges.add(hi_edge)
    return sorted(edges)


def tier_edges(tier: TierParams) -> list:
    """Sorted union of segment edges over both states."""
    edges = set()
    for state in STATES:
        edges.update(state_edges(tier, state))
    return sorted(edges)


# -- cluster-center link ----------------------------------------------------

def offset_ccdf(cluster: ClusterModel, y: float) -> float:
    """CCDF of the user's distance to its own cluster center."""
    if y <= 0.0:
        return 1.0
    if isinstance(cluster, ThomasCluster):
        return math.exp(-y * y / (2.0 * cluster.sigma ** 2))
    if y >= cluster.radius:
        return 0.0
    return 1.0 - y * y / (cluster.radius ** 2)


def offset_pdf(cluster: ClusterModel, y: float) -> float:
    """Density of the user's distance to its own cluster center."""
    if y <= 0.0:
        return 0.0
    if isinstance(cluster, ThomasCluster):
        s2 = cluster.sigma ** 2
        return (y / s2) * math.exp(-y * y / (2.0 * s2))
    if y >= cluster.radius:
        return 0.0
    return 2.0 * y / cluster.radius ** 2


def ccdf_center_state(tier0: Tier0Params, cluster: ClusterModel, state: str,
                      x: float) -> float:
    """P(tier-0 loss > x | state).  The loss is kappa_s * y^alpha_s
    with y the cluster offset, so this is the offset CCDF evaluated at
    (x / kappa)^(1/alpha)."""
    if x <= 0.0:
        return 1.0
    kappa = tier0.intercept(state)
    alpha = tier0.exponent(state)
    return offset_ccdf(cluster, (x / kappa) ** (1.0 / alpha))


def pdf_center_state(tier0: Tier0Params, cluster: ClusterModel, state: str,
                     x: float) -> float:
    """Density of the tier-0 loss conditioned on the blockage state.

    Thomas:  x^(2/alpha-1) / (alpha kappa^(2/alpha) sigma^2)
             * exp(-(x/kappa)^(2/alpha) / (2 sigma^2))
    Matern:  2 x^(2/alpha-1) / (alpha kappa^(2/alpha) R^2)
             on (0, kappa R^alpha)

    Integrable x**-power singularity at 0 when alpha > 2.
    """
    if x <= 0.0:
        return 0.0
    kappa = tier0.intercept(state)
    alpha = tier0.exponent(state)
    base = x ** (2.0 / alpha - 1.0) / (alpha * kappa ** (2.0 / alpha))
    if isinstance(cluster, ThomasCluster):
        s2 = cluster.sigma ** 2
        return (base / s2) * math.exp(-((x / kappa) ** (2.0 / alpha)) / (2.0 * s2))
    if x >= kappa * cluster.radius ** tier0.exponent(state):
        return 0.0
    return 2.0 * base / cluster.radius ** 2


def ccdf_center(tier0: Tier0Params, cluster: ClusterModel, x: float) -> float:
    """Unconditional P(tier-0 loss > x), mixing the states."""
    total = 0.0
    for state in STATES:
        p = tier0.state_prob(state)
        if p > 0.0:
            total += p * ccdf_center_state(tier0, cluster, state, x)
    return total


def center_support_end(tier0: Tier0Params, cluster: ClusterModel,
                       state: str) -> float:
    """Supremum of the tier-0 loss in one state: finite for the
    uniform-disc offset, infinite for the Gaussian offset."""
    if isinstance(cluster, MaternCluster):
        return tier0.intercept(state) * cluster.radius ** tier0.exponent(state)
    return math.inf


# -- pointwise loss evaluation (used by the simulator) -----------------------

def ball_index(balls: BallSpec, r: float) -> int:
    """Annulus index of a distance r (half-open annuli; r exactly on
    an edge belongs to the annulus starting there), or n_balls when r
    is beyond the outermost radius."""
    return bisect_right(balls.radii, r)


def link_pathloss(balls: BallSpec, r: float, state: str) -> float:
    """Loss of a link at distance r in a given state, OUTAGE beyond
    the outermost radius."""
    d = ball_index(balls, r)
    if d >= balls.n_balls:
        return OUTAGE
    return balls.intercept(d, state) * r ** balls.exponent(d, state)


def center_pathloss(tier0: Tier0Params, y: float, state: str) -> float:
    """Loss of the cluster-center link at offset y (never OUTAGE)."""
    return tier0.intercept(state) * y ** tier0.exponent(state)
