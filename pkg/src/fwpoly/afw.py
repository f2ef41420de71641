"""Away-step Frank-Wolfe: direction selection, weight updates, drop steps, main loop."""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import linesearch
from .core import (
    ActiveSet,
    ConfigurationError,
    ConstantEstimates,
    IterateRecord,
    NumericError,
    Objective,
    QuadraticObjective,
    RunTrace,
    SolverConfig,
    StructuralError,
    Vector,
    VPolytope,
    active_set_point,
)
from .oracles import OracleAnswer, away_vertex, lmo, pairwise_gap

DROP_DETECT_TOL = 1e-12
VANISHING_WEIGHT = 1e-14


def select_direction(grad: Vector, x: Vector, s: OracleAnswer,
                     v: OracleAnswer) -> tuple[Vector, str]:
    """Pick the better of the toward and away directions; ties go to the toward branch."""
    d_fw = s.vertex - x
    d_away = x - v.vertex
    if float(grad @ d_fw) <= float(grad @ d_away):
        return d_fw, "fw"
    return d_away, "away"


def gamma_max(alpha_v: float) -> float:
    """Largest feasible away step alpha / (1 - alpha) for the selected atom's weight."""
    if alpha_v >= 1.0:
        raise StructuralError("away step from a full-weight atom is infeasible upstream")
    if alpha_v <= 0.0:
        raise StructuralError("away atom has nonpositive weight")
    return alpha_v / (1.0 - alpha_v)


def _prune_and_renormalize(entries: dict[int, float], drop_tolerance: float) -> dict[int, float]:
    kept = {i: w for i, w in entries.items() if w > drop_tolerance}
    if not kept:
        raise StructuralError("all weights fell below the drop tolerance")
    total = sum(kept[i] for i in sorted(kept))
    return {i: w / total for i, w in kept.items()}


def apply_fw_update(aset: ActiveSet, s_index: int, gamma: float,
                    drop_tolerance: float = DROP_DETECT_TOL) -> ActiveSet:
    """Shift weight gamma onto atom s_index; gamma = 1 resets the set to that atom."""
    if not (0.0 <= gamma <= 1.0):
        raise StructuralError(f"toward-step size {gamma!r} outside [0, 1]")
    if gamma == 1.0:
        return ActiveSet.single(s_index)
    entries = {i: (1.0 - gamma) * w for i, w in aset.entries.items()}
    entries[s_index] = entries.get(s_index, 0.0) + gamma
    return ActiveSet(entries=_prune_and_renormalize(entries, drop_tolerance))


def apply_away_update(aset: ActiveSet, v_index: int, gamma: float, gamma_max: float,
                      drop_tolerance: float = DROP_DETECT_TOL) -> tuple[ActiveSet, bool]:
    """Move weight away from atom v_index; gamma = gamma_max removes it (drop step)."""
    if v_index not in aset.entries:
        raise StructuralError(f"away atom {v_index} not in the active set")
    if gamma < 0:
        raise StructuralError("away-step size must be nonnegative")
    if gamma > gamma_max + DROP_DETECT_TOL:
        raise StructuralError(
            f"away-step size {gamma!r} exceeds gamma_max {gamma_max!r}"
        )
    dropped = gamma >= gamma_max - DROP_DETECT_TOL
    entries = {i: (1.0 + gamma) * w for i, w in aset.entries.items()}
    if dropped:
        del entries[v_index]
        if not entries:
            raise StructuralError("drop step would empty the active set")
    else:
        entries[v_index] = (1.0 + gamma) * aset.entries[v_index] - gamma
    return ActiveSet(entries=_prune_and_renormalize(entries, drop_tolerance)), dropped


def _step_size(obj: Objective, x: Vector, d: Vector, grad: Vector, cap: float,
               pair_gap_value: float, cfg: SolverConfig,
               constants: Optional[ConstantEstimates]) -> float:
    if cfg.step_rule == "line_search_exact":
        if not isinstance(obj, QuadraticObjective):
            raise ConfigurationError("exact line search needs a quadratic objective")
        return linesearch.exact_quadratic(obj.A, grad, d, cap)
    if cfg.step_rule == "line_search_golden":
        return linesearch.golden_section(obj, x, d, cap)
    if cfg.step_rule == "analytic_cfa":
        if constants is None or not np.isfinite(constants.cf_away):
            raise ConfigurationError("analytic_cfa needs a curvature constant")
        return linesearch.rule_afw(pair_gap_value, constants.cf_away, cap)
    raise ConfigurationError(f"step rule {cfg.step_rule!r} not valid for the away-step solver")


def solve_afw(obj: Objective, poly: VPolytope, x0: ActiveSet, cfg: SolverConfig,
              constants: Optional[ConstantEstimates] = None,
              problem_id: str = "") -> RunTrace:
    """Full away-steps loop: oracle calls, direction choice, step, weight update.

    Each record carries the pairwise gap certificate.  The loop stops when the
    gap falls to cfg.gap_tolerance or after cfg.max_iters steps; a terminal
    record with step_type "none" captures the final iterate either way.
    """
    if cfg.step_rule not in ("line_search_exact", "line_search_golden", "analytic_cfa"):
        raise ConfigurationError(
            f"step rule {cfg.step_rule!r} not supported by the away-step solver"
        )
    if cfg.nu < 1.0:
        raise ConfigurationError("inexact oracles are only supported by the standard solver")

    aset = x0.copy()
    aset.validate(poly, drop_tolerance=0.0)
    x = active_set_point(aset, poly)
    trace = RunTrace(problem_id=problem_id, solver_id="afw", seed=cfg.seed)
    f_prev = np.inf

    k = 0
    while True:
        grad = np.asarray(obj.gradient(x), dtype=float)
        f_val = float(obj.value(x))
        if not (np.isfinite(f_val) and np.all(np.isfinite(grad))):
            raise NumericError(f"non-finite objective data at iteration {k}")
        s = lmo(poly, grad)
        v = away_vertex(aset, poly, grad)
        gap = pairwise_gap(grad, s, v)

        if gap <= cfg.gap_tolerance or k >= cfg.max_iters:
            trace.records.append(IterateRecord(
                k=k, x=x.copy(), f_value=f_val, gap=gap, step_type="none",
                gamma=0.0, gamma_max=0.0, active_size=aset.size))
            break

        d, branch = select_direction(grad, x, s, v)
        if branch == "away":
            alpha = aset.entries[v.atom_index]
            if alpha < VANISHING_WEIGHT:
                # numeric dust: prune the atom and redo the selection once
                entries = dict(aset.entries)
                del entries[v.atom_index]
                aset = ActiveSet(entries=_prune_and_renormalize(entries, cfg.drop_tolerance))
                v = away_vertex(aset, poly, grad)
                gap = pairwise_gap(grad, s, v)
                d, branch = select_direction(grad, x, s, v)
        if branch == "away":
            cap = gamma_max(aset.entries[v.atom_index])
        else:
            cap = 1.0

        gamma = _step_size(obj, x, d, grad, cap, gap, cfg, constants)
        record_size = aset.size
        if branch == "away":
            aset, dropped = apply_away_update(aset, v.atom_index, gamma, cap,
                                              cfg.drop_tolerance)
            step_type = "drop" if dropped else "away"
        else:
            aset = apply_fw_update(aset, s.atom_index, gamma, cfg.drop_tolerance)
            step_type = "fw"

        trace.records.append(IterateRecord(
            k=k, x=x.copy(), f_value=f_val, gap=gap, step_type=step_type,
            gamma=float(gamma), gamma_max=float(cap), active_size=record_size,
            dir_derivative=float(grad @ d)))

        x = x + gamma * d
        aset.validate(poly, drop_tolerance=cfg.drop_tolerance)
        if cfg.step_rule.startswith("line_search"):
            if f_val > f_prev + 1e-12 * max(1.0, abs(f_prev)):
                raise StructuralError(f"objective increased under line search at k={k}")
        f_prev = f_val
        k += 1

    return trace
