"""Step-size selection: exact quadratic minimization, golden section, analytic rules."""

from __future__ import annotations

import math

import numpy as np

from .core import ConfigurationError, Matrix, NumericError, Objective, Vector

GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0  # ~0.618
GOLDEN_MAX_ITERS = 200


def exact_quadratic(A: Matrix, grad: Vector, d: Vector, gamma_max: float) -> float:
    """Minimizer of gamma -> f(x + gamma d) over [0, gamma_max] for f quadratic with Hessian A.

    The unconstrained minimizer -<grad, d> / (d'Ad) is clamped to the interval;
    when d'Ad = 0 (d in the null space) the objective is linear along d.
    """
    gd = float(np.dot(grad, d))
    dAd = float(d @ A @ d)
    if dAd <= 0.0:
        return float(gamma_max) if gd < 0 else 0.0
    return float(min(max(-gd / dAd, 0.0), gamma_max))


def golden_section(obj: Objective, x: Vector, d: Vector, gamma_max: float,
                   tol: float = 1e-10) -> float:
    """Derivative-free 1-d minimization over [0, gamma_max] for a convex segment."""
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)

    def phi(gamma: float) -> float:
        val = obj.value(x + gamma * d)
        if not np.isfinite(val):
            raise NumericError(f"objective non-finite at step {gamma:g}")
        return val

    lo, hi = 0.0, float(gamma_max)
    m1 = hi - GOLDEN_RATIO * (hi - lo)
    m2 = lo + GOLDEN_RATIO * (hi - lo)
    f1, f2 = phi(m1), phi(m2)
    for _ in range(GOLDEN_MAX_ITERS):
        if hi - lo <= tol:
            break
        if f1 < f2:
            hi, m2, f2 = m2, m1, f1
            m1 = hi - GOLDEN_RATIO * (hi - lo)
            f1 = phi(m1)
        else:
            lo, m1, f1 = m1, m2, f2
            m2 = lo + GOLDEN_RATIO * (hi - lo)
            f2 = phi(m2)
    return 0.5 * (lo + hi)


def rule_fw(gap: float, cf: float) -> float:
    """Analytic step for standard FW: min(1, gap / cf)."""
    if cf <= 0:
        raise ConfigurationError("curvature constant must be positive for the analytic rule")
    return min(1.0, gap / cf)


def rule_afw(pair_gap: float, cf_away: float, gamma_max: float) -> float:
    """Analytic step for away-step FW: min(1, gamma_max, pair_gap / (2 cf_away))."""
    if cf_away <= 0:
        raise ConfigurationError("curvature constant must be positive for the analytic rule")
    return min(1.0, float(gamma_max), pair_gap / (2.0 * cf_away))
