"""Coverage and association analysis for multi-tier mmWave downlink
networks with user-centric clustering.

The analytical pipeline (pathloss -> association -> coverage)
evaluates exact expressions by adaptive quadrature; the montecarlo
module estimates the same quantities by direct simulation and exists
to cross-validate the analytics.
"""

from .model import (LOS, NLOS, STATES, DEFAULT_INTERCEPT, AntennaPattern,
                    BallSpec, MaternCluster, NetworkScenario, ScenarioError,
                    ThomasCluster, Tier0Params, TierParams, Violation,
                    cluster_scale, effective_tier0, gain_distribution,
                    load_scenario, scenario_digest, scenario_from_dict,
                    scenario_to_dict, serving_gain, validate,
                    with_cluster_scale)
from .quadrature import QuadratureError, QuadratureResult, integrate, tail_cutoff
from .pathloss import (OUTAGE, SupportBounds, ball_index, ccdf_center,
                       ccdf_center_state, ccdf_tier, ccdf_tier_state,
                       center_pathloss, intensity, intensity_density,
                       intensity_state, link_pathloss, pdf_center_state,
                       pdf_tier_state, support_bounds)
from .association import AssociationTable, assoc_prob, assoc_table, serving_density
from .coverage import (CoverageCurve, conditional_coverage,
                       laplace_center_interference, laplace_tier_interference,
                       tier_coverage_contribution, total_coverage)
from .montecarlo import (EstimateWithCI, SimulationEstimate, TrialResult,
                         estimate, run_trial, sample_offset, sample_ppp,
                         trial_rng)

__version__ = "0.1.0"
