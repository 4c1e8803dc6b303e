"""Monte Carlo simulator for association and SINR coverage.

Independent of the analytical pipeline by construction: trials sample
explicit BS positions, blockage states, antenna orientations and
fading, then apply the association rule and the SINR definition
directly.  Each trial draws from its own generator seeded by
(seed, trial_index), so estimates are reproducible for a given seed
and independent of how trials are distributed over worker processes.

Each PPP tier is sampled on a disc of its outermost blockage radius;
BSs beyond that radius are in outage and contribute nothing, which the
window_factor argument exists to demonstrate (it appends the annulus
links of an enlarged window as outage links without touching the
draws of the base window).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import (LOS, NLOS, NetworkScenario, biased_power, db_to_linear,
                    effective_tier0, gain_distribution, noise_watts,
                    power_watts, serving_gain, MaternCluster, ThomasCluster)
from .pathloss import center_pathloss

_STATE_NAMES = (LOS, NLOS)


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one network realization."""

    serving_tier: int | None
    serving_state: str | None
    serving_pathloss: float
    sinr: float
    snr: float
    covered: np.ndarray
    snr_covered: np.ndarray


@dataclass(frozen=True)
class EstimateWithCI:
    """Binomial estimate with its standard error."""

    value: float
    std_error: float
    n_trials: int


@dataclass(frozen=True)
class SimulationEstimate:
    """Aggregated Monte Carlo output.

    ``association`` maps (tier index, state) to the fraction of trials
    served by that pair; ``coverage`` and ``snr_coverage`` align with
    ``thresholds_db``.
    """

    thresholds_db: tuple
    n_trials: int
    seed: int
    coverage: tuple
    snr_coverage: tuple
    association: dict
    no_service: EstimateWithCI


@lru_cache(maxsize=None)
def _gain_table(antenna):
    dist = gain_distribution(antenna)
    gains = np.array([g for g, _ in dist])
    cum = np.cumsum([p for _, p in dist])
    cum[-1] = 1.0
    return gains, cum


@lru_cache(maxsize=None)
def _ball_arrays(balls):
    return (np.asarray(balls.radii), np.asarray(balls.los_prob),
            np.asarray(balls.alpha_los), np.asarray(balls.alpha_nlos),
            np.asarray(balls.kappa_los), np.asarray(balls.kappa_nlos))


def sample_ppp(density: float, radius: float, rng) -> np.ndarray:
    """One realization of a homogeneous PPP on a disc, as an (n, 2)
    array of positions."""
    n = rng.poisson(density * math.pi * radius * radius)
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * math.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def sample_offset(cluster, rng) -> float:
    """One draw of the user's distance to its cluster center."""
    if isinstance(cluster, ThomasCluster):
        # Rayleigh(sigma) via the exponential of the squared radius
        return cluster.sigma * math.sqrt(2.0 * rng.standard_exponential())
    return cluster.radius * math.sqrt(rng.random())


def trial_rng(seed: int, trial_index: int):
    """The generator owning all draws of one trial."""
    return np.random.default_rng(np.random.SeedSequence((seed, trial_index)))


def run_trial(scenario: NetworkScenario, thresholds_db, rng,
              window_factor: float = 1.0) -> TrialResult:
    """Simulate one network realization seen from a typical user.

    Draw order is fixed: cluster-center link first, then each tier's
    disc (positions, blockage states, interferer gains, fading), and
    only then the enlarged-window annuli when window_factor > 1, so
    enlarging the window never perturbs the base draws.
    """
    thr = np.array([db_to_linear(t) for t in thresholds_db])
    gains, gain_cum = _gain_table(scenario.antenna)
    n_thr = len(thr)

    center = None
    if scenario.tier0 is not None:
        t0 = effective_tier0(scenario)
        y0 = sample_offset(scenario.cluster, rng)
        state0 = LOS if rng.random() < t0.los_prob else NLOS
        loss0 = center_pathloss(t0, y0, state0)
        gain0 = gains[int(np.searchsorted(gain_cum, rng.random(), side="right"))]
        fade0 = rng.standard_exponential()
        center = (state0, loss0, gain0, fade0)

    tier_links = []
    for tier in scenario.tiers:
        radii, los_prob, a_los, a_nlos, k_los, k_nlos = _ball_arrays(tier.balls)
        pos = sample_ppp(tier.density, tier.balls.outer_radius, rng)
        r = np.hypot(pos[:, 0], pos[:, 1])
        d = np.searchsorted(radii, r, side="right")
        is_los = rng.random(len(r)) < los_prob[d]
        loss = np.where(is_los,
                        k_los[d] * r ** a_los[d],
                        k_nlos[d] * r ** a_nlos[d])
        g = gains[np.searchsorted(gain_cum, rng.random(len(r)), side="right")]
        h = rng.standard_exponential(len(r))
        tier_links.append((loss, is_los, g, h))

    # Biased association on fading-free averaged power P_j B_j / L.
    best_j = None
    best_state = None
    best_loss = math.inf
    best_fade = 0.0
    best_idx = -1
    best_metric = 0.0
    if center is not None:
        w0 = biased_power(scenario, 0)
        metric = w0 / center[1] if center[1] > 0.0 else math.inf
        best_j, best_state = 0, center[0]
        best_loss, best_fade, best_metric = center[1], center[3], metric
    for k, (loss, is_los, _, h) in enumerate(tier_links, start=1):
        if len(loss) == 0:
            continue
        i = int(np.argmin(loss))
        metric = biased_power(scenario, k) / loss[i] if loss[i] > 0.0 else math.inf
        if metric > best_metric:
            best_j = k
            best_state = LOS if is_los[i] else NLOS
            best_loss, best_fade, best_idx, best_metric = loss[i], h[i], i, metric

    # Enlarged-window annuli: all links beyond the outage radius, drawn
    # last so the base realization above is a prefix of this stream.
    if window_factor > 1.0:
        for tier in scenario.tiers:
            r_out = tier.balls.outer_radius
            area = math.pi * r_out * r_out * (window_factor ** 2 - 1.0)
            n_extra = rng.poisson(tier.density * area)
            rng.random(n_extra)  # radial positions of outage-only links

    if best_j is None or best_metric <= 0.0:
        flags = np.zeros(n_thr, dtype=bool)
        return TrialResult(None, None, math.inf, 0.0, 0.0, flags, flags.copy())

    p_serv = power_watts(scenario, best_j)
    if best_loss > 0.0:
        signal = p_serv * serving_gain(scenario.antenna) * best_fade / best_loss
    else:
        signal = math.inf

    interference = 0.0
    if center is not None and best_j != 0:
        p0 = power_watts(scenario, 0)
        interference += p0 * center[2] * center[3] / center[1]
    for k, (loss, _, g, h) in enumerate(tier_links, start=1):
        if len(loss) == 0:
            continue
        contrib = g * h / loss
        if k == best_j:
            contrib = np.delete(contrib, best_idx)
        interference += power_watts(scenario, k) * float(np.sum(contrib))

    noise = noise_watts(scenario, best_j)
    if math.isinf(signal):
        sinr = snr = math.inf
    else:
        sinr = signal / (noise + interference)
        snr = signal / noise
    return TrialResult(best_j, best_state, best_loss, sinr, snr,
                       sinr > thr, snr > thr)


def _run_range(scenario, thresholds_db, seed, start, stop, window_factor):
    """Per-trial counts over a contiguous index range.  Returns plain
    integer arrays so reductions are exact and order-independent."""
    k = scenario.n_tiers
    n_thr = len(thresholds_db)
    assoc = np.zeros((k + 1, 2), dtype=np.int64)
    none_count = 0
    cov = np.zeros(n_thr, dtype=np.int64)
    snr_cov = np.zeros(n_thr, dtype=np.int64)
    for t in range(start, stop):
        res = run_trial(scenario, thresholds_db, trial_rng(seed, t),
                        window_factor)
        if res.serving_tier is None:
            none_count += 1
        else:
            s = 0 if res.serving_state == LOS else 1
            assoc[res.serving_tier, s] += 1
        cov += res.covered
        snr_cov += res.snr_covered
    return assoc, none_count, cov, snr_cov


def estimate(scenario: NetworkScenario, thresholds_db, n_trials: int,
             seed: int, workers: int = 1,
             window_factor: float = 1.0) -> SimulationEstimate:
    """Monte Carlo association and coverage estimate.

    Reproducible: a given (scenario, thresholds, n_trials, seed)
    produces bit-identical output for any worker count, because trial
    t always uses the generator seeded by (seed, t) and the reduction
    sums integer counts.
    """
    thresholds_db = tuple(float(t) for t in thresholds_db)
    if n_trials <= 0:
        raise ValueError("n_trials must be positive")
    if workers <= 1:
        parts = [_run_range(scenario, thresholds_db, seed, 0, n_trials,
                            window_factor)]
    else:
        chunk = max(1, -(-n_trials // (workers * 4)))
        spans = [(s, min(s + chunk, n_trials))
                 for s in range(0, n_trials, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_range,
                                  *zip(*[(scenario, thresholds_db, seed, a, b,
                                          window_factor) for a, b in spans])))
    assoc = sum(p[0] for p in parts)
    none_count = sum(p[1] for p in parts)
    cov = sum(p[2] for p in parts)
    snr_cov = sum(p[3] for p in parts)

    def binom(count):
        p = count / n_trials
        return EstimateWithCI(p, math.sqrt(p * (1.0 - p) / n_trials), n_trials)

    association = {}
    start_j = 0 if scenario.tier0 is not None else 1
    for j in range(start_j, scenario.n_tiers + 1):
        for s, name in enumerate(_STATE_NAMES):
            association[(j, name)] = binom(int(assoc[j, s]))
    return SimulationEstimate(
        thresholds_db=thresholds_db,
        n_trials=n_trials,
        seed=seed,
        coverage=tuple(binom(int(c)) for c in cov),
        snr_coverage=tuple(binom(int(c)) for c in snr_cov),
        association=association,
        no_service=binom(none_count),
    )
