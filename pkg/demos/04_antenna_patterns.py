"""
Beamforming gains and coverage sensitivity
==========================================

The sectored pattern gives every interferer a random gain (both lobes
of both ends), while the served link always enjoys the aligned
main-to-main product.  Narrower beams and taller main lobes therefore
help twice: more serving gain, less expected interference.  This script
prints the gain distribution and compares coverage across patterns.
"""

import dataclasses
import math
import pathlib

import numpy as np

from mmwcov import gain_distribution, load_scenario, serving_gain, total_coverage

HERE = pathlib.Path(__file__).resolve().parent
base = load_scenario(str(HERE.parent / "scenarios" / "table2.scenario"))

print("interferer gain distribution for the shipped pattern "
      "(10 dB main, -10 dB side, 30 degree beam):")
for g, p in gain_distribution(base.antenna):
    print(f"  gain {g:8.2f}  prob {p:.4f}")
print(f"serving gain {serving_gain(base.antenna):.1f}, mean interferer gain "
      f"{sum(g * p for g, p in gain_distribution(base.antenna)):.2f}")

variants = {
    "main 10 dB, beam 30 deg": base,
    "main 20 dB, beam 30 deg": dataclasses.replace(
        base, antenna=dataclasses.replace(base.antenna, main_gain_db=20.0)),
    "main 10 dB, beam 60 deg": dataclasses.replace(
        base, antenna=dataclasses.replace(base.antenna,
                                          beamwidth_rad=math.pi / 3.0)),
}

thresholds = tuple(np.linspace(-10.0, 20.0, 7))
curves = {name: total_coverage(sc, thresholds) for name, sc in variants.items()}

print("\ncoverage by threshold:")
print("T(dB)  " + "  ".join(f"{name:>24s}" for name in variants))
for i, t in enumerate(thresholds):
    vals = "  ".join(f"{curves[name].total[i]:24.4f}" for name in variants)
    print(f"{t:5.1f}{vals}")
print("\nthe taller main lobe dominates everywhere, and the narrower beam "
      "beats the wider one")


def plot():
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the figure")
        return
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for name, style in zip(variants, ("-o", "-s", "-^")):
        ax.plot(thresholds, curves[name].total, style, label=name)
    ax.set_xlabel("SINR threshold (dB)")
    ax.set_ylabel("coverage probability")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = HERE / "04_antenna_patterns.svg"
    fig.savefig(out)
    print(f"wrote {out}")


if __name__ == "__main__":
    plot()
