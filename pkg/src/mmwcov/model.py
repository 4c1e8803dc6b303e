"""Scenario description for a multi-tier downlink mmWave network.

A scenario bundles the parameters of K base-station tiers (each a
homogeneous PPP with a distance-dependent blockage model), an optional
cluster-center tier serving clustered users, the user offset
distribution (Gaussian or uniform-disc), a sectored antenna pattern,
and the noise level.  All objects are frozen dataclasses: immutable
after construction and safe to share across worker processes.

Unit conventions, used consistently everywhere downstream:

* transmit power in dBW in configs, converted to watts internally
* noise power in dBm in configs, converted to watts internally
* distances in meters, densities in points per square meter
* antenna gains in dB in configs, linear internally
* path loss is the unitless ratio L >= 1 such that received power
  is P * G * h / L
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

LOS = "LOS"
NLOS = "NLOS"
STATES = (LOS, NLOS)

SPEED_OF_LIGHT = 299792458.0
DEFAULT_CARRIER_HZ = 28.0e9

# Free-space path loss at 1 m reference distance, (4 pi f / c)^2.
# At 28 GHz this is about 1.38e6 (61.4 dB).
DEFAULT_INTERCEPT = (4.0 * math.pi * DEFAULT_CARRIER_HZ / SPEED_OF_LIGHT) ** 2


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbw_to_watts(dbw: float) -> float:
    return 10.0 ** (dbw / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


class ScenarioError(ValueError):
    """Raised when a scenario file or dict cannot be interpreted."""


@dataclass(frozen=True)
class Violation:
    """One failed consistency check, located by a dotted field path."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass(frozen=True)
class BallSpec:
    """Piecewise blockage model for one tier.

    Distances are partitioned into annuli by ``radii``: annulus d is
    [radii[d-1], radii[d]) with radii[-1] := 0.  Within annulus d a
    link is line-of-sight with probability ``los_prob[d]``; each state
    has its own path-loss exponent and unit-distance intercept, so the
    loss of a link at distance r in state s is
    ``kappa_s[d] * r ** alpha_s[d]``.  Beyond the outermost radius the
    link is in outage (infinite loss).
    """

    radii: tuple
    los_prob: tuple
    alpha_los: tuple
    alpha_nlos: tuple
    kappa_los: tuple
    kappa_nlos: tuple

    def __post_init__(self):
        for name in ("radii", "los_prob", "alpha_los", "alpha_nlos",
                     "kappa_los", "kappa_nlos"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def n_balls(self) -> int:
        return len(self.radii)

    @property
    def outer_radius(self) -> float:
        return self.radii[-1]

    def weight(self, d: int, state: str) -> float:
        """Probability of ``state`` in annulus d (0-based)."""
        p = self.los_prob[d]
        return p if state == LOS else 1.0 - p

    def exponent(self, d: int, state: str) -> float:
        return self.alpha_los[d] if state == LOS else self.alpha_nlos[d]

    def intercept(self, d: int, state: str) -> float:
        return self.kappa_los[d] if state == LOS else self.kappa_nlos[d]


@dataclass(frozen=True)
class TierParams:
    """One PPP tier: transmit power, bias, density, blockage model."""

    power_dbw: float
    bias: float
    density: float
    balls: BallSpec


@dataclass(frozen=True)
class Tier0Params:
    """The cluster-center base station (tier 0).

    A single BS at the user's cluster center, always reachable (no
    outage ball): one blockage zone with LOS probability ``los_prob``.
    ``power_dbw`` and ``bias`` default to the first PPP tier's values
    when left as None.
    """

    los_prob: float
    alpha_los: float
    alpha_nlos: float
    kappa_los: float = DEFAULT_INTERCEPT
    kappa_nlos: float = DEFAULT_INTERCEPT
    power_dbw: float | None = None
    bias: float | None = None

    def state_prob(self, state: str) -> float:
        return self.los_prob if state == LOS else 1.0 - self.los_prob

    def exponent(self, state: str) -> float:
        return self.alpha_los if state == LOS else self.alpha_nlos

    def intercept(self, state: str) -> float:
        return self.kappa_los if state == LOS else self.kappa_nlos


@dataclass(frozen=True)
class ThomasCluster:
    """Gaussian user offset: radial distance is Rayleigh(sigma)."""

    sigma: float


@dataclass(frozen=True)
class MaternCluster:
    """Uniform user offset over a disc of the given radius."""

    radius: float


ClusterModel = Union[ThomasCluster, MaternCluster]


@dataclass(frozen=True)
class AntennaPattern:
    """Sectored antenna: main-lobe gain M over beamwidth theta, side
    lobe m elsewhere.  Gains in dB; beamwidth in radians."""

    main_gain_db: float
    side_gain_db: float
    beamwidth_rad: float


@dataclass(frozen=True)
class NetworkScenario:
    """Complete network description.

    ``tiers`` holds the K PPP tiers (index j = 1..K downstream).
    ``tier0`` is the optional cluster-center BS; None gives the
    unclustered baseline where users have no dedicated center BS.
    ``noise_dbm`` is either one shared value or one value per serving
    tier (tier 0 first when present).
    """

    tiers: tuple
    cluster: ClusterModel
    antenna: AntennaPattern
    noise_dbm: float | tuple
    tier0: Tier0Params | None = None

    def __post_init__(self):
        object.__setattr__(self, "tiers", tuple(self.tiers))
        if isinstance(self.noise_dbm, (list, tuple)):
            object.__setattr__(self, "noise_dbm", tuple(self.noise_dbm))

    @property
    def n_tiers(self) -> int:
        return len(self.tiers)


def effective_tier0(scenario: NetworkScenario) -> Tier0Params:
    """Tier-0 parameters with power/bias defaults resolved."""
    t0 = scenario.tier0
    if t0 is None:
        raise ValueError("scenario has no cluster-center tier")
    power = t0.power_dbw if t0.power_dbw is not None else scenario.tiers[0].power_dbw
    bias = t0.bias if t0.bias is not None else scenario.tiers[0].bias
    return replace(t0, power_dbw=power, bias=bias)


def power_watts(scenario: NetworkScenario, j: int) -> float:
    """Transmit power of serving tier j in watts (j = 0 is tier 0)."""
    if j == 0:
        return dbw_to_watts(effective_tier0(scenario).power_dbw)
    return dbw_to_watts(scenario.tiers[j - 1].power_dbw)


def tier_bias(scenario: NetworkScenario, j: int) -> float:
    if j == 0:
        return effective_tier0(scenario).bias
    return scenario.tiers[j - 1].bias


def biased_power(scenario: NetworkScenario, j: int) -> float:
    """Association weight P_j * B_j in watts."""
    return power_watts(scenario, j) * tier_bias(scenario, j)


def noise_watts(scenario: NetworkScenario, j: int) -> float:
    """Noise power seen when served by tier j, in watts."""
    nd = scenario.noise_dbm
    if isinstance(nd, tuple):
        idx = j if scenario.tier0 is not None else j - 1
        return dbm_to_watts(nd[idx])
    return dbm_to_watts(nd)


def cluster_scale(cluster: ClusterModel) -> float:
    """The single spread parameter: sigma (Gaussian) or disc radius."""
    if isinstance(cluster, ThomasCluster):
        return cluster.sigma
    return cluster.radius


def with_cluster_scale(scenario: NetworkScenario, value: float) -> NetworkScenario:
    """Copy of the scenario with the cluster spread replaced."""
    if isinstance(scenario.cluster, ThomasCluster):
        c = ThomasCluster(sigma=value)
    else:
        c = MaternCluster(radius=value)
    return replace(scenario, cluster=c)


def gain_distribution(antenna: AntennaPattern):
    """Distribution of the composite interferer antenna gain.

    Both ends of an interfering link point their main lobe uniformly
    at random, so the composite gain takes the values M*M, M*m, m*m
    with probabilities c^2, 2c(1-c), (1-c)^2 where c = theta / (2 pi).
    Returns a list of (gain_linear, probability) pairs; the
    probabilities sum to 1 up to float rounding.
    """
    big = db_to_linear(antenna.main_gain_db)
    small = db_to_linear(antenna.side_gain_db)
    c = antenna.beamwidth_rad / (2.0 * math.pi)
    return [
        (big * big, c * c),
        (big * small, 2.0 * c * (1.0 - c)),
        (small * small, (1.0 - c) * (1.0 - c)),
    ]


def serving_gain(antenna: AntennaPattern) -> float:
    """Composite gain on the serving link: perfect beam alignment at
    both ends, so M^2 linear."""
    big = db_to_linear(antenna.main_gain_db)
    return big * big


def _check_num(out, path, value, name) -> bool:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        out.append(Violation(f"{path}.{name}", "not a number"))
        return False
    if not math.isfinite(value):
        out.append(Violation(f"{path}.{name}", "not finite"))
        return False
    return True


def _validate_balls(out, path, balls: BallSpec):
    n = balls.n_balls
    for name in ("los_prob", "alpha_los", "alpha_nlos", "kappa_los", "kappa_nlos"):
        if len(getattr(balls, name)) != n:
            out.append(Violation(f"{path}.{name}", f"length must match radii ({n})"))
            return
    prev = 0.0
    for d in range(n):
        if not _check_num(out, path, balls.radii[d], f"radii[{d}]"):
            continue
        if balls.radii[d] <= prev:
            out.append(Violation(f"{path}.radii[{d}]",
                                 "radii must be strictly increasing and positive"))
        prev = balls.radii[d]
        if _check_num(out, path, balls.los_prob[d], f"los_prob[{d}]"):
            if not 0.0 <= balls.los_prob[d] <= 1.0:
                out.append(Violation(f"{path}.los_prob[{d}]", "must be in [0, 1]"))
        for name in ("alpha_los", "alpha_nlos"):
            v = getattr(balls, name)[d]
            if _check_num(out, path, v, f"{name}[{d}]") and v <= 0.0:
                out.append(Violation(f"{path}.{name}[{d}]", "must be positive"))
        for name in ("kappa_los", "kappa_nlos"):
            v = getattr(balls, name)[d]
            if _check_num(out, path, v, f"{name}[{d}]") and v <= 0.0:
                out.append(Violation(f"{path}.{name}[{d}]", "must be positive"))


def validate(scenario: NetworkScenario) -> list:
    """Consistency-check a scenario.

    Returns a list of Violation records, empty when the scenario is
    usable.  Never raises on finite numeric input; callers decide
    whether violations are fatal.
    """
    out: list = []
    if scenario.n_tiers < 1:
        out.append(Violation("tiers", "at least one PPP tier is required"))
    for i, tier in enumerate(scenario.tiers):
        path = f"tiers[{i}]"
        _check_num(out, path, tier.power_dbw, "power_dbw")
        if _check_num(out, path, tier.bias, "bias") and tier.bias <= 0.0:
            out.append(Violation(f"{path}.bias", "must be positive"))
        if _check_num(out, path, tier.density, "density") and tier.density <= 0.0:
            out.append(Violation(f"{path}.density", "must be positive"))
        _validate_balls(out, f"{path}.balls", tier.balls)

    t0 = scenario.tier0
    if t0 is not None:
        if _check_num(out, "tier0", t0.los_prob, "los_prob"):
            if not 0.0 <= t0.los_prob <= 1.0:
                out.append(Violation("tier0.los_prob", "must be in [0, 1]"))
        for name in ("alpha_los", "alpha_nlos", "kappa_los", "kappa_nlos"):
            v = getattr(t0, name)
            if _check_num(out, "tier0", v, name) and v <= 0.0:
                out.append(Violation(f"tier0.{name}", "must be positive"))
        for name in ("power_dbw", "bias"):
            v = getattr(t0, name)
            if v is not None:
                _check_num(out, "tier0", v, name)
        if t0.bias is not None and isinstance(t0.bias, (int, float)) and t0.bias <= 0.0:
            out.append(Violation("tier0.bias", "must be positive"))

    cl = scenario.cluster
    if isinstance(cl, ThomasCluster):
        if _check_num(out, "cluster", cl.sigma, "sigma") and cl.sigma <= 0.0:
            out.append(Violation("cluster.sigma", "must be positive"))
    elif isinstance(cl, MaternCluster):
        if _check_num(out, "cluster", cl.radius, "radius") and cl.radius <= 0.0:
            out.append(Violation("cluster.radius", "must be positive"))
    else:
        out.append(Violation("cluster", "unknown cluster model"))

    ant = scenario.antenna
    ok_m = _check_num(out, "antenna", ant.main_gain_db, "main_gain_db")
    ok_s = _check_num(out, "antenna", ant.side_gain_db, "side_gain_db")
    if ok_m and ok_s and ant.main_gain_db < ant.side_gain_db:
        out.append(Violation("antenna.main_gain_db",
                             "main-lobe gain must be >= side-lobe gain"))
    if _check_num(out, "antenna", ant.beamwidth_rad, "beamwidth_rad"):
        if not 0.0 < ant.beamwidth_rad < 2.0 * math.pi:
            out.append(Violation("antenna.beamwidth_rad", "must be in (0, 2 pi)"))

    nd = scenario.noise_dbm
    if isinstance(nd, tuple):
        expect = scenario.n_tiers + (1 if t0 is not None else 0)
        if len(nd) != expect:
            out.append(Violation("noise_dbm",
                                 f"need one value per serving tier ({expect})"))
        for i, v in enumerate(nd):
            _check_num(out, "noise_dbm", v, f"[{i}]")
    else:
        _check_num(out, "", nd, "noise_dbm")
    return out


# -- serialization ----------------------------------------------------------

def _ball_spec_from_dict(d: dict, path: str) -> BallSpec:
    try:
        radii = list(d["radii"])
        los_prob = list(d["los_prob"])
    except KeyError as exc:
        raise ScenarioError(f"{path}: missing required key {exc}") from exc
    n = len(radii)

    def _vec(key, default=None):
        v = d.get(key, default)
        if v is None:
            raise ScenarioError(f"{path}: missing required key '{key}'")
        if isinstance(v, (int, float)):
            return [float(v)] * n
        return [float(x) for x in v]

    return BallSpec(
        radii=[float(r) for r in radii],
        los_prob=[float(p) for p in los_prob],
        alpha_los=_vec("alpha_los"),
        alpha_nlos=_vec("alpha_nlos"),
        kappa_los=_vec("kappa_los", DEFAULT_INTERCEPT),
        kappa_nlos=_vec("kappa_nlos", DEFAULT_INTERCEPT),
    )


def scenario_from_dict(data: dict) -> NetworkScenario:
    """Build a scenario from plain dicts (the parsed config format)."""
    try:
        tier_dicts = data["tiers"]
        cluster_d = data["cluster"]
        antenna_d = data["antenna"]
        noise = data["noise_dbm"]
    except KeyError as exc:
        raise ScenarioError(f"missing required section {exc}") from exc
    if not isinstance(tier_dicts, list) or not tier_dicts:
        raise ScenarioError("tiers: need a non-empty array of tables")

    tiers = []
    for i, td in enumerate(tier_dicts):
        path = f"tiers[{i}]"
        try:
            tiers.append(TierParams(
                power_dbw=float(td["power_dbw"]),
                bias=float(td.get("bias", 1.0)),
                density=float(td["density"]),
                balls=_ball_spec_from_dict(td, path),
            ))
        except KeyError as exc:
            raise ScenarioError(f"{path}: missing required key {exc}") from exc
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"{path}: {exc}") from exc

    ctype = str(cluster_d.get("type", "")).lower()
    try:
        scale = float(cluster_d["scale"])
    except KeyError as exc:
        raise ScenarioError("cluster: missing required key 'scale'") from exc
    if ctype == "thomas":
        cluster: ClusterModel = ThomasCluster(sigma=scale)
    elif ctype == "matern":
        cluster = MaternCluster(radius=scale)
    else:
        raise ScenarioError(f"cluster.type: expected 'thomas' or 'matern', got {ctype!r}")

    try:
        antenna = AntennaPattern(
            main_gain_db=float(antenna_d["main_gain_db"]),
            side_gain_db=float(antenna_d["side_gain_db"]),
            beamwidth_rad=float(antenna_d["beamwidth_rad"]),
        )
    except KeyError as exc:
        raise ScenarioError(f"antenna: missing required key {exc}") from exc

    tier0 = None
    if "tier0" in data:
        t0d = data["tier0"]
        try:
            tier0 = Tier0Params(
                los_prob=float(t0d["los_prob"]),
                alpha_los=float(t0d["alpha_los"]),
                alpha_nlos=float(t0d["alpha_nlos"]),
                kappa_los=float(t0d.get("kappa_los", DEFAULT_INTERCEPT)),
                kappa_nlos=float(t0d.get("kappa_nlos", DEFAULT_INTERCEPT)),
                power_dbw=(float(t0d["power_dbw"]) if "power_dbw" in t0d else None),
                bias=(float(t0d["bias"]) if "bias" in t0d else None),
            )
        except KeyError as exc:
            raise ScenarioError(f"tier0: missing required key {exc}") from exc

    if isinstance(noise, list):
        noise = tuple(float(v) for v in noise)
    else:
        noise = float(noise)

    return NetworkScenario(tiers=tiers, cluster=cluster, antenna=antenna,
                           noise_dbm=noise, tier0=tier0)


def load_scenario(path: str) -> NetworkScenario:
    """Load a scenario from a TOML file."""
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    return scenario_from_dict(data)


def scenario_to_dict(scenario: NetworkScenario) -> dict:
    """Plain-dict form of a scenario (canonical, round-trips through
    scenario_from_dict up to tier-0 default resolution)."""
    out: dict = {
        "noise_dbm": (list(scenario.noise_dbm)
                      if isinstance(scenario.noise_dbm, tuple)
                      else scenario.noise_dbm),
        "antenna": {
            "main_gain_db": scenario.antenna.main_gain_db,
            "side_gain_db": scenario.antenna.side_gain_db,
            "beamwidth_rad": scenario.antenna.beamwidth_rad,
        },
        "cluster": {
            "type": "thomas" if isinstance(scenario.cluster, ThomasCluster) else "matern",
            "scale": cluster_scale(scenario.cluster),
        },
        "tiers": [
            {
                "power_dbw": t.power_dbw,
                "bias": t.bias,
                "density": t.density,
                "radii": list(t.balls.radii),
                "los_prob": list(t.balls.los_prob),
                "alpha_los": list(t.balls.alpha_los),
                "alpha_nlos": list(t.balls.alpha_nlos),
                "kappa_los": list(t.balls.kappa_los),
                "kappa_nlos": list(t.balls.kappa_nlos),
            }
            for t in scenario.tiers
        ],
    }
    if scenario.tier0 is not None:
        t0 = scenario.tier0
        t0d: dict = {
            "los_prob": t0.los_prob,
            "alpha_los": t0.alpha_los,
            "alpha_nlos": t0.alpha_nlos,
            "kappa_los": t0.kappa_los,
            "kappa_nlos": t0.kappa_nlos,
        }
        if t0.power_dbw is not None:
            t0d["power_dbw"] = t0.power_dbw
        if t0.bias is not None:
            t0d["bias"] = t0.bias
        out["tier0"] = t0d
    return out


def scenario_digest(scenario: NetworkScenario) -> str:
    """Stable sha256 hex digest of the scenario contents."""
    blob = json.dumps(scenario_to_dict(scenario), sort_keys=True,
                      separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
