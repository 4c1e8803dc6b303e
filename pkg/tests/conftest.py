"""Shared fixtures: the reference scenario files and a compact builder
for hand-checkable single-tier setups."""

import math
import pathlib

import pytest

from mmwcov.model import (AntennaPattern, BallSpec, NetworkScenario,
                          ThomasCluster, Tier0Params, TierParams,
                          load_scenario)

SCENARIO_DIR = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(scope="session")
def table2() -> NetworkScenario:
    return load_scenario(str(SCENARIO_DIR / "table2.scenario"))


@pytest.fixture(scope="session")
def table2_matern() -> NetworkScenario:
    return load_scenario(str(SCENARIO_DIR / "table2_matern.scenario"))


def simple_scenario(*, density=1e-3, radius=100.0, los=0.5, kappa=1.0,
                    alpha_los=2.0, alpha_nlos=4.0, with_center=True,
                    cluster=None, noise_dbm=-200.0, power_dbw=0.0,
                    bias=1.0) -> NetworkScenario:
    """One PPP tier with a single blockage ball and unit-friendly
    constants, so intensity and offset laws reduce to closed forms
    that tests re-derive by hand."""
    balls = BallSpec((radius,), (los,), (alpha_los,), (alpha_nlos,),
                     (kappa,), (kappa,))
    tier = TierParams(power_dbw=power_dbw, bias=bias, density=density,
                      balls=balls)
    tier0 = None
    if with_center:
        tier0 = Tier0Params(los_prob=1.0, alpha_los=2.0, alpha_nlos=4.0,
                            kappa_los=kappa, kappa_nlos=kappa)
    return NetworkScenario(
        tiers=(tier,),
        cluster=cluster if cluster is not None else ThomasCluster(10.0),
        antenna=AntennaPattern(10.0, -10.0, math.pi / 6),
        noise_dbm=noise_dbm,
        tier0=tier0,
    )
