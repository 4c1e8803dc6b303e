"""
Monte Carlo cross-check and the value of clustering
===================================================

The simulator shares no code with the analytic pipeline: it drops
points on a disc, draws blockage, orientations and fading, and applies
the association and SINR definitions directly.  Agreement between the
two is the package's core correctness argument.  The same run also
shows what the cluster-center BS buys: removing it (plain PPP users)
costs a large slice of coverage.
"""

import dataclasses
import pathlib

import numpy as np

from mmwcov import assoc_table, estimate, load_scenario, total_coverage

HERE = pathlib.Path(__file__).resolve().parent
scenario = load_scenario(str(HERE.parent / "scenarios" / "table2.scenario"))

thresholds = (-10.0, -5.0, 0.0, 5.0, 10.0)
n_trials = 20_000

est = estimate(scenario, thresholds, n_trials, seed=7)
curve = total_coverage(scenario, thresholds)
table = assoc_table(scenario)

print(f"association, analytic vs {n_trials} simulated trials:")
for key in sorted(table.entries):
    mc = est.association[key]
    print(f"  tier {key[0]} {key[1]:4s}: {table.entries[key]:.4f} vs "
          f"{mc.value:.4f} (se {mc.std_error:.4f})")

print("\ncoverage, analytic vs simulated:")
for i, t in enumerate(thresholds):
    mc = est.coverage[i]
    print(f"  T = {t:6.1f} dB: {curve.total[i]:.4f} vs {mc.value:.4f} "
          f"(se {mc.std_error:.4f})")

# ---------------------------------------------------------------------
# Drop the cluster-center BS: users become ordinary PPP users served by
# the nearest (biased) tier only.
bare = dataclasses.replace(scenario, tier0=None)
bare_curve = total_coverage(bare, thresholds)
print("\nwith the cluster-center BS removed:")
for i, t in enumerate(thresholds):
    print(f"  T = {t:6.1f} dB: {bare_curve.total[i]:.4f} "
          f"(clustered model: {curve.total[i]:.4f})")
print("clustering the users around their own BS is worth "
      f"{float(np.min(curve.total - bare_curve.total)):.2f} to "
      f"{float(np.max(curve.total - bare_curve.total)):.2f} of coverage here")


def plot():
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the figure")
        return
    fig, ax = plt.subplots(figsize=(5.5, 4))
    ax.plot(thresholds, curve.total, "-o", label="analytic")
    ax.errorbar(thresholds, [c.value for c in est.coverage],
                yerr=[3 * c.std_error for c in est.coverage],
                fmt="s", capsize=3, label="simulated (3 se)")
    ax.plot(thresholds, bare_curve.total, "--^", label="no cluster-center BS")
    ax.set_xlabel("SINR threshold (dB)")
    ax.set_ylabel("coverage probability")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = HERE / "05_simulation_crosscheck.svg"
    fig.savefig(out)
    print(f"wrote {out}")


if __name__ == "__main__":
    plot()
