"""Cell-association probabilities under biased averaged received power.

The user attaches to the link maximizing P_j B_j / L over the
cluster-center link (when present) and the best link of every PPP
tier.  Conditioning on the serving loss l, independence of the tiers
turns the winning event into a product of CCDFs, giving the defective
serving-loss density of each (tier, state) pair:

    tier 0:  P_s0 * f_0s(l) * prod_k exp(-Lambda_k(ratio_k * l))
    tier j:  Fbar_0(ratio_0 * l) * Lambda_js'(l)
             * prod_k exp(-Lambda_k(ratio_k * l))

with ratio_k = (P_k B_k) / (P_j B_j) for serving tier j.  Association
probabilities are the integrals of these densities; each (j, s) entry
is independent of the others, so the table can be assembled in any
order or in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (LOS, NLOS, STATES, NetworkScenario, biased_power,
                    effective_tier0)
from .pathloss import (ccdf_center, ccdf_center_state, center_support_end,
                       intensity, intensity_density, pdf_center_state,
                       state_edges, support_bounds, tier_edges)
from .quadrature import QuadratureError, integrate, tail_cutoff

# Gaussian-offset integrals are truncated where the tier-0 state CCDF
# drops below this; the lost mass is bounded by it.
CENTER_TAIL_EPS = 1e-10


@dataclass(frozen=True)
class AssociationTable:
    """Association probability of every (tier, state) pair.

    ``expected_total`` is the reachable probability mass: 1 with a
    cluster-center BS, 1 - P(every tier entirely in outage) without
    one.  ``normalization_defect`` is the signed gap between the
    integrated table and that target, a pure numerical-quality
    indicator.
    """

    entries: dict
    errors: dict
    expected_total: float

    @property
    def total(self) -> float:
        return sum(self.entries.values())

    @property
    def normalization_defect(self) -> float:
        return self.total - self.expected_total

    def marginal(self, j: int) -> float:
        return sum(v for (tj, _), v in self.entries.items() if tj == j)


def reachable_mass(scenario: NetworkScenario) -> float:
    """Probability that at least one link is available."""
    if scenario.tier0 is not None:
        return 1.0
    total = 0.0
    for tier in scenario.tiers:
        r = tier.balls.outer_radius
        total += tier.density * math.pi * r * r
    return 1.0 - math.exp(-total)


def _ratios(scenario: NetworkScenario, j: int):
    """(P_k B_k) / (P_j B_j) for k = 1..K, plus the tier-0 ratio
    (None when there is no tier 0)."""
    wj = biased_power(scenario, j)
    tier_r = [biased_power(scenario, k) / wj
              for k in range(1, scenario.n_tiers + 1)]
    r0 = biased_power(scenario, 0) / wj if scenario.tier0 is not None else None
    return tier_r, r0


def serving_density(scenario: NetworkScenario, j: int, state: str,
                    l: float) -> float:
    """Defective density of the serving loss on the event that tier j
    in the given state serves.  Integrates to the association
    probability of (j, state)."""
    if l <= 0.0:
        return 0.0
    tier_r, r0 = _ratios(scenario, j)
    if j == 0:
        t0 = effective_tier0(scenario)
        p_state = t0.state_prob(state)
        if p_state == 0.0:
            return 0.0
        val = p_state * pdf_center_state(t0, scenario.cluster, state, l)
    else:
        val = intensity_density(scenario.tiers[j - 1], state, l)
        if val == 0.0:
            return 0.0
        if r0 is not None:
            t0 = effective_tier0(scenario)
            val *= ccdf_center(t0, scenario.cluster, r0 * l)
    if val == 0.0:
        return 0.0
    exponent = 0.0
    for k, tier in enumerate(scenario.tiers):
        exponent += intensity(tier, tier_r[k] * l)
    return val * math.exp(-exponent)


def _integral_spec(scenario: NetworkScenario, j: int, state: str):
    """Integration range and breakpoints for the (j, state) serving
    density: segment edges of every tier's intensity and the tier-0
    support end, mapped into serving-loss units."""
    tier_r, r0 = _ratios(scenario, j)
    if j == 0:
        t0 = effective_tier0(scenario)
        if t0.state_prob(state) == 0.0:
            return 0.0, []
        hi = center_support_end(t0, scenario.cluster, state)
        if math.isinf(hi):
            hi = tail_cutoff(
                lambda x: ccdf_center_state(t0, scenario.cluster, state, x),
                CENTER_TAIL_EPS)
    else:
        hi = support_bounds(scenario.tiers[j - 1], state).hi
        if hi == 0.0:
            return 0.0, []
    breaks = set()
    if j != 0:
        breaks.update(state_edges(scenario.tiers[j - 1], state))
    for k, tier in enumerate(scenario.tiers):
        breaks.update(e / tier_r[k] for e in tier_edges(tier))
    if r0 is not None and j != 0:
        t0 = effective_tier0(scenario)
        for s in STATES:
            if t0.state_prob(s) > 0.0:
                end = center_support_end(t0, scenario.cluster, s)
                if math.isfinite(end):
                    breaks.add(end / r0)
    return hi, sorted(b for b in breaks if 0.0 < b < hi)


def assoc_prob(scenario: NetworkScenario, j: int, state: str,
               tol: float = 1e-6) -> float:
    """Association probability of (tier j, state), by quadrature of
    the serving density.  Raises QuadratureError when the integral
    does not converge to the requested tolerance."""
    hi, breaks = _integral_spec(scenario, j, state)
    if hi <= 0.0:
        return 0.0
    res = integrate(lambda l: serving_density(scenario, j, state, l),
                    0.0, hi, breakpoints=breaks, tol=tol)
    if not res.converged:
        raise QuadratureError(
            f"association integral for tier {j} {state} stalled at "
            f"error {res.error:.3e}", res)
    return res.value


def assoc_table(scenario: NetworkScenario, tol: float = 1e-6) -> AssociationTable:
    """Full association table over every (tier, state) pair."""
    entries = {}
    errors = {}
    start_j = 0 if scenario.tier0 is not None else 1
    for j in range(start_j, scenario.n_tiers + 1):
        for state in STATES:
            hi, breaks = _integral_spec(scenario, j, state)
            if hi <= 0.0:
                entries[(j, state)] = 0.0
                errors[(j, state)] = 0.0
                continue
            res = integrate(lambda l: serving_density(scenario, j, state, l),
                            0.0, hi, breakpoints=breaks, tol=tol)
            if not res.converged:
                raise QuadratureError(
                    f"association integral for tier {j} {state} stalled at "
                    f"error {res.error:.3e}", res)
            entries[(j, state)] = res.value
            errors[(j, state)] = res.error
    return AssociationTable(entries=entries, errors=errors,
                            expected_total=reachable_mass(scenario))
