"""Adaptive quadrature helpers.

Thin layer over scipy's QUADPACK routines.  The integrands in this
package are piecewise smooth with known breakpoints (annulus edges
mapped through the path-loss law) and may have integrable endpoint
singularities such as x**-0.5, so the strategy is: split the interval
at the breakpoints and run adaptive Gauss-Kronrod with extrapolation
on each piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad


@dataclass(frozen=True)
class QuadratureResult:
    """Integral estimate with an error estimate.

    ``converged`` is False when the summed error estimate exceeds the
    requested tolerance (absolute or relative, whichever is looser);
    the value is still the best available estimate.  QUADPACK warnings
    with an error estimate inside tolerance are accepted: the roundoff
    warning fires routinely on exponent integrals whose value is small
    in absolute terms.
    """

    value: float
    error: float
    subdivisions: int
    converged: bool


class QuadratureError(RuntimeError):
    """Raised by callers that require a converged integral.  Carries
    the partial result so diagnostics can report the achieved error,
    and the stage ('inner'/'outer') for nested integrals."""

    def __init__(self, message: str, result: QuadratureResult,
                 stage: str = ""):
        super().__init__(message)
        self.result = result
        self.stage = stage


# Pieces spanning more than this loss ratio are pre-split into
# geometric subintervals: QAGS extrapolation degrades to roundoff
# noise on intervals covering many decades.
_SPLIT_RATIO = 100.0
_MAX_GEOM_PIECES = 24


def _geometric_split(edges):
    out = [edges[0]]
    for lo, hi in zip(edges, edges[1:]):
        if lo > 0.0 and hi / lo > _SPLIT_RATIO:
            n = int(math.ceil(math.log(hi / lo) / math.log(_SPLIT_RATIO)))
            n = min(n, _MAX_GEOM_PIECES)
            ratio = hi / lo
            out.extend(lo * ratio ** (i / n) for i in range(1, n))
        out.append(hi)
    return out


def integrate(f, a: float, b: float, breakpoints=(), tol: float = 1e-8,
              limit: int = 200) -> QuadratureResult:
    """Integrate f over [a, b], splitting at the given breakpoints.

    Breakpoints outside (a, b) are ignored.  The tolerance is treated
    as absolute or relative, whichever is looser, matching QUADPACK
    semantics.  Requires a <= b.
    """
    if not (a <= b):
        raise ValueError(f"bad interval: a={a}, b={b}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, True)
    inner = sorted({float(p) for p in breakpoints if a < p < b})
    edges = _geometric_split([a, *inner, b])
    n_pieces = len(edges) - 1
    total = 0.0
    err = 0.0
    subdivisions = 0
    for lo, hi in zip(edges, edges[1:]):
        if hi - lo <= 0.0:
            continue
        out = quad(f, lo, hi, epsabs=tol / n_pieces, epsrel=tol,
                   limit=limit, full_output=1)
        total += out[0]
        err += out[1]
        subdivisions += out[2]["last"]
    # Each piece may stop at epsabs = tol/n_pieces or at epsrel * its
    # own value, so the guaranteed summed budget is tol + tol*|total|.
    converged = err <= tol + tol * abs(total)
    return QuadratureResult(total, err, subdivisions, converged)


def tail_cutoff(decay, eps: float, start: float = 1.0) -> float:
    """Upper integration limit for a nonnegative, eventually
    decreasing tail function: the smallest bracketed x with
    decay(x) <= eps, found by doubling then bisection.

    The returned point always satisfies decay(x) <= eps, so truncating
    an integral of a density with this CCDF loses at most eps of mass.
    For compactly supported decay and eps = 0 this converges to the
    support end.
    """
    if decay(0.0) <= eps:
        return 0.0
    lo = 0.0
    hi = float(start)
    while decay(hi) > eps:
        lo = hi
        hi *= 2.0
        if not math.isfinite(hi):
            raise ValueError("tail never fell below eps")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if decay(mid) <= eps:
            hi = mid
        else:
            lo = mid
    return hi
