"""
Blockage geometry and the path-loss point process
=================================================

A tier's base stations live on a plane, but everything downstream
(association, SINR) only sees their path losses.  This script walks the
chain from the annulus blockage model to the one-dimensional loss
process: per-state intensity measures, void probabilities, and the law
of the cluster-center link.
"""

import math
import pathlib

import numpy as np

from mmwcov import (LOS, NLOS, ball_index, ccdf_center_state, ccdf_tier,
                    ccdf_tier_state, effective_tier0, intensity_state,
                    link_pathloss, load_scenario, support_bounds)

HERE = pathlib.Path(__file__).resolve().parent
scenario = load_scenario(str(HERE.parent / "scenarios" / "table2.scenario"))

# ---------------------------------------------------------------------
# The blockage model maps distance to loss, with a different law in
# every annulus and total outage beyond the last radius.
tier = scenario.tiers[0]
print("tier 1 blockage (radii", tier.balls.radii, "):")
for r in (10.0, 30.0, 45.0, 59.0, 61.0):
    d = ball_index(tier.balls, r)
    los = link_pathloss(tier.balls, r, LOS)
    nlos = link_pathloss(tier.balls, r, NLOS)
    print(f"  r = {r:5.1f} m  ball {d}  loss LOS {los:10.3e}  NLOS {nlos:10.3e}")

# ---------------------------------------------------------------------
# The intensity measure counts the expected number of links below a
# loss level; its exponential is the probability that no link is that
# good yet.
print("\nper-state intensity and void probability, tier 2:")
tier = scenario.tiers[1]
for state in (LOS, NLOS):
    b = support_bounds(tier, state)
    xs = np.geomspace(max(b.lo, 1e6), b.hi, 4)
    row = ", ".join(
        f"L({x:8.2e}) = {intensity_state(tier, state, x):6.4f}" for x in xs)
    print(f"  {state:4s}: {row}")
x_mid = 1e12
print(f"  total void probability at loss {x_mid:.0e}: "
      f"{ccdf_tier(tier, x_mid):.4f}")

# ---------------------------------------------------------------------
# The cluster-center BS is special: one link, its loss driven by the
# user's offset law instead of a point process.
t0 = effective_tier0(scenario)
print("\ncluster-center link CCDF (Thomas offsets, spread 10 m):")
for x in (1e5, 1e6, 1e7, 1e8):
    print(f"  P(loss > {x:.0e}) = "
          f"{ccdf_center_state(t0, scenario.cluster, LOS, x):.4f}")


def plot():
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("\nmatplotlib not installed; skipping the figure")
        return
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    for tier, name in ((scenario.tiers[0], "tier 1"),
                       (scenario.tiers[1], "tier 2")):
        lo = min(b.lo for s in (LOS, NLOS)
                 if (b := support_bounds(tier, s)).hi > 0)
        hi = max(support_bounds(tier, s).hi for s in (LOS, NLOS))
        xs = np.geomspace(max(lo, 1e3), hi, 400)
        axes[0].plot(xs, [intensity_state(tier, LOS, x)
                          + intensity_state(tier, NLOS, x) for x in xs],
                     label=name)
        axes[1].plot(xs, [ccdf_tier(tier, x) for x in xs], label=name)
    axes[0].set_xscale("log")
    axes[0].set_ylabel("intensity measure")
    axes[1].set_xscale("log")
    axes[1].set_ylabel("P(no link below loss)")
    for ax in axes:
        ax.set_xlabel("path loss")
        ax.grid(True, alpha=0.3)
        ax.legend()
    fig.tight_layout()
    out = HERE / "01_pathloss_laws.svg"
    fig.savefig(out)
    print(f"\nwrote {out}")


if __name__ == "__main__":
    plot()
