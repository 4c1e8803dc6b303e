"""SINR coverage probability, by conditioning on the serving link.

Conditioned on tier j in state s serving at loss l, the SINR test
SINR > T factors through the exponential fading of the serving link:

    P(cov | j, s, l) = exp(-mu sigma_n^2)
                       * L_center(mu) * prod_k L_tier_k(mu)

with mu = T l / (P_j G0), G0 the aligned antenna gain, and L_* the
Laplace transforms of the interference of the cluster-center BS and of
each PPP tier, evaluated under the association constraint that every
interferer's loss exceeds (P_k B_k / P_j B_j) l.  Deconditioning
weights each term by the serving-loss density of (j, s) and integrates.

The center Laplace transform conditions the tier-0 loss on exceeding
its exclusion point; the conditional (renormalized) form is exact and
equals 1 at mu = 0.  The raw unnormalized integral is kept reachable
for diagnostics via renormalize=False.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (LOS, NLOS, STATES, NetworkScenario, biased_power,
                    db_to_linear, effective_tier0, gain_distribution,
                    noise_watts, power_watts, serving_gain)
from .pathloss import (ccdf_center_state, center_support_end,
                       intensity_density, pdf_center_state, state_edges,
                       support_bounds)
from .association import _integral_spec, serving_density
from .quadrature import QuadratureError, integrate, tail_cutoff

# Tolerance of the inner Laplace-transform integrals; the outer
# deconditioning integral dominates the error budget, so this only
# needs to stay a couple of orders below the outer tolerance.
INNER_TOL = 1e-8

# Below this much tier-0 tail mass the center factor degenerates: the
# serving density at the same point carries the identical tail-mass
# factor, so the deconditioned contribution is bounded by the floor no
# matter what value the transform takes, and the quadrature of the
# underflowing integrand is meaningless anyway.
_TAIL_FLOOR = 1e-40


def laplace_tier_interference(scenario: NetworkScenario, j: int, state: str,
                              l: float, k: int, mu: float,
                              tol: float = INNER_TOL) -> float:
    """Laplace transform at mu of tier k's interference, conditioned
    on (j, state) serving at loss l.

    Independent thinning over blockage states and antenna gains gives

        exp( -sum_n int_{t0}^{} sum_G p_G mu P_k G / (t + mu P_k G)
             Lambda_kn'(t) dt ),

    t0 = (P_k B_k / P_j B_j) l.  Equals 1 at mu = 0 and whenever the
    exclusion point clears the tier's support.
    """
    if mu == 0.0:
        return 1.0
    tier = scenario.tiers[k - 1]
    t0 = biased_power(scenario, k) / biased_power(scenario, j) * l
    p_k = power_watts(scenario, k)
    gain_terms = [(g, p) for g, p in gain_distribution(scenario.antenna)
                  if p > 0.0]
    exponent = 0.0
    for n in STATES:
        hi = support_bounds(tier, n).hi
        if hi <= t0:
            continue

        def integrand(t, _n=n):
            d = intensity_density(tier, _n, t)
            if d == 0.0:
                return 0.0
            acc = 0.0
            for g, p in gain_terms:
                mpg = mu * p_k * g
                acc += p * mpg / (t + mpg)
            return acc * d

        res = integrate(integrand, t0, hi,
                        breakpoints=state_edges(tier, n), tol=tol)
        if not res.converged:
            raise QuadratureError(
                f"tier-{k} interference transform stalled at error "
                f"{res.error:.3e}", res, stage="inner")
        exponent += res.value
    return math.exp(-exponent)


def laplace_center_interference(scenario: NetworkScenario, j: int, state: str,
                                l: float, mu: float, tol: float = INNER_TOL,
                                renormalize: bool = True) -> float:
    """Laplace transform at mu of the cluster-center interference,
    conditioned on (j, state) serving at loss l (j >= 1).

    The tier-0 loss is conditioned on exceeding its exclusion point
    t0 = (P_0 B_0 / P_j B_j) l; averaging the fading and the
    interferer gain gives

        sum_G p_G sum_m P_m int_{t0} f_0m(t) t / (t + mu P_0 G) dt

    divided (renormalize=True) by the tail mass sum_m P_m Fbar_0m(t0),
    which makes the transform equal 1 at mu = 0.  renormalize=False
    returns the raw integral.
    """
    t0p = effective_tier0(scenario)
    t0 = biased_power(scenario, 0) / biased_power(scenario, j) * l
    p0 = power_watts(scenario, 0)
    if mu == 0.0 and renormalize:
        return 1.0
    tail = 0.0
    for m in STATES:
        pm = t0p.state_prob(m)
        if pm > 0.0:
            tail += pm * ccdf_center_state(t0p, scenario.cluster, m, t0)
    if tail <= _TAIL_FLOOR:
        return 1.0 if renormalize else 0.0
    gain_terms = [(g, p) for g, p in gain_distribution(scenario.antenna)
                  if p > 0.0]
    total = 0.0
    for m in STATES:
        pm = t0p.state_prob(m)
        if pm == 0.0:
            continue
        hi = center_support_end(t0p, scenario.cluster, m)
        if math.isinf(hi):
            hi = tail_cutoff(
                lambda x: ccdf_center_state(t0p, scenario.cluster, m, x),
                eps=tail * 1e-12, start=max(1.0, 2.0 * t0))
        if hi <= t0:
            continue

        def integrand(t, _m=m):
            f = pdf_center_state(t0p, scenario.cluster, _m, t)
            if f == 0.0:
                return 0.0
            acc = 0.0
            for g, p in gain_terms:
                acc += p * t / (t + mu * p0 * g)
            return acc * f

        res = integrate(integrand, t0, hi, tol=tol)
        if not res.converged:
            raise QuadratureError(
                f"center interference transform stalled at error "
                f"{res.error:.3e}", res, stage="inner")
        total += pm * res.value
    if renormalize:
        return total / tail
    return total


def conditional_coverage(scenario: NetworkScenario, j: int, state: str,
                         l: float, threshold: float, tol: float = INNER_TOL,
                         renormalize_center: bool = True) -> float:
    """P(SINR > threshold | tier j in `state` serves at loss l).
    threshold is linear."""
    mu = threshold * l / (power_watts(scenario, j) * serving_gain(scenario.antenna))
    val = math.exp(-mu * noise_watts(scenario, j))
    for k in range(1, scenario.n_tiers + 1):
        val *= laplace_tier_interference(scenario, j, state, l, k, mu, tol=tol)
    if j != 0 and scenario.tier0 is not None:
        val *= laplace_center_interference(scenario, j, state, l, mu, tol=tol,
                                           renormalize=renormalize_center)
    return val


def tier_coverage_contribution(scenario: NetworkScenario, j: int, state: str,
                               threshold: float, tol: float = 1e-5,
                               snr_only: bool = False,
                               renormalize_center: bool = True):
    """A_js * P(cov | j, s): the (j, state) term of total coverage at a
    linear threshold.  snr_only drops all interference factors.
    Returns (value, QuadratureResult)."""
    hi, breaks = _integral_spec(scenario, j, state)
    if hi <= 0.0:
        from .quadrature import QuadratureResult
        return 0.0, QuadratureResult(0.0, 0.0, 0, True)
    g0 = serving_gain(scenario.antenna)
    p_j = power_watts(scenario, j)
    noise = noise_watts(scenario, j)

    if snr_only:
        def integrand(l):
            w = serving_density(scenario, j, state, l)
            if w == 0.0:
                return 0.0
            return w * math.exp(-threshold * l * noise / (p_j * g0))
    else:
        def integrand(l):
            w = serving_density(scenario, j, state, l)
            if w == 0.0:
                return 0.0
            return w * conditional_coverage(
                scenario, j, state, l, threshold,
                renormalize_center=renormalize_center)

    res = integrate(integrand, 0.0, hi, breakpoints=breaks, tol=tol)
    if not res.converged:
        raise QuadratureError(
            f"coverage integral for tier {j} {state} at threshold "
            f"{threshold:.4g} stalled at error {res.error:.3e}", res,
            stage="outer")
    return res.value, res


@dataclass(frozen=True)
class CoverageCurve:
    """Coverage probability across thresholds, with the per-(tier,
    state) decomposition.  ``converged`` flags points whose every term
    met tolerance; failed points hold best-effort values."""

    thresholds_db: tuple
    total: np.ndarray
    contributions: dict
    snr_total: np.ndarray | None
    error: np.ndarray
    converged: np.ndarray
    failures: tuple


def _serving_pairs(scenario: NetworkScenario):
    pairs = []
    start_j = 0 if scenario.tier0 is not None else 1
    for j in range(start_j, scenario.n_tiers + 1):
        for state in STATES:
            pairs.append((j, state))
    return pairs


def total_coverage(scenario: NetworkScenario, thresholds_db,
                   tol: float = 1e-5, include_snr: bool = False,
                   renormalize_center: bool = True) -> CoverageCurve:
    """SINR coverage probability at each threshold (dB), summing the
    (tier, state) contributions.  include_snr adds the
    interference-free curve, an upper bound approached as interference
    vanishes."""
    thresholds_db = tuple(float(t) for t in thresholds_db)
    pairs = _serving_pairs(scenario)
    n = len(thresholds_db)
    total = np.zeros(n)
    snr_total = np.zeros(n) if include_snr else None
    error = np.zeros(n)
    converged = np.ones(n, dtype=bool)
    contributions = {pair: np.zeros(n) for pair in pairs}
    failures = []
    for i, t_db in enumerate(thresholds_db):
        thr = db_to_linear(t_db)
        for pair in pairs:
            j, state = pair
            try:
                val, res = tier_coverage_contribution(
                    scenario, j, state, thr, tol=tol,
                    renormalize_center=renormalize_center)
                err = res.error
            except QuadratureError as exc:
                # Only an outer-stage result estimates the contribution
                # itself; an inner failure leaves no usable value.
                val = exc.result.value if exc.stage == "outer" else math.nan
                err = exc.result.error
                converged[i] = False
                failures.append(
                    f"threshold {t_db:g} dB, tier {j} {state}: {exc}")
            contributions[pair][i] = val
            total[i] += val
            error[i] += err
            if include_snr:
                sval, _ = tier_coverage_contribution(
                    scenario, j, state, thr, tol=tol, snr_only=True)
                snr_total[i] += sval
    return CoverageCurve(thresholds_db=thresholds_db, total=total,
                         contributions=contributions, snr_total=snr_total,
                         error=error, converged=converged,
                         failures=tuple(failures))
