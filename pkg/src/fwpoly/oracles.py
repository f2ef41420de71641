"""Linear minimization oracle, away-vertex selection, gap certificates, inexact oracle."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    ActiveSet,
    ConfigurationError,
    NumericError,
    StructuralError,
    Vector,
    VPolytope,
)

log = logging.getLogger(__name__)

GAP_FLOOR = 1e-10


@dataclass(frozen=True)
class OracleAnswer:
    atom_index: int
    vertex: Vector
    inner_product: float  # <grad, vertex>


def _check_dimension(poly: VPolytope, grad: Vector):
    if grad.shape != (poly.dimension,):
        raise StructuralError(
            f"gradient shape {grad.shape} does not match dimension {poly.dimension}"
        )


def _argmin_lowest(values: np.ndarray) -> int:
    # np.argmin already returns the first (lowest-index) minimizer
    return int(np.argmin(values))


def lmo(poly: VPolytope, grad: Vector) -> OracleAnswer:
    """Vertex minimizing <grad, v>, ties broken toward the lowest atom index.

    Closed-form fast paths for the simplex, box and l1 ball reproduce the
    enumeration result exactly, including the tie-break.
    """
    grad = np.asarray(grad, dtype=float)
    _check_dimension(poly, grad)
    if poly.kind == "simplex":
        idx = _argmin_lowest(grad)
    elif poly.kind == "box":
        # vertex list comes from itertools.product over (low, high) pairs, so
        # bit i of the index is 1 iff the high bound is chosen for coordinate i
        d = poly.dimension
        idx = 0
        for i in range(d):
            if grad[i] < 0:
                idx |= 1 << (d - 1 - i)
    elif poly.kind == "l1ball":
        d = poly.dimension
        m = -float(np.max(np.abs(grad)))
        idx = None
        for i in range(d):
            if grad[i] == m:
                idx = i
                break
        if idx is None:
            for i in range(d):
                if -grad[i] == m:
                    idx = d + i
                    break
        if idx is None:  # grad == 0
            idx = 0
    else:
        idx = _argmin_lowest(poly.vertices @ grad)
    vertex = poly.vertices[idx]
    return OracleAnswer(atom_index=idx, vertex=vertex, inner_product=float(grad @ vertex))


def lmo_brute_force(poly: VPolytope, grad: Vector) -> OracleAnswer:
    """Reference enumeration path, used to validate the fast paths."""
    grad = np.asarray(grad, dtype=float)
    _check_dimension(poly, grad)
    idx = _argmin_lowest(poly.vertices @ grad)
    return OracleAnswer(atom_index=idx, vertex=poly.vertices[idx],
                        inner_product=float(grad @ poly.vertices[idx]))


def away_vertex(aset: ActiveSet, poly: VPolytope, grad: Vector) -> OracleAnswer:
    """Active atom maximizing <grad, v>, ties broken toward the lowest atom index."""
    grad = np.asarray(grad, dtype=float)
    _check_dimension(poly, grad)
    if not aset.entries:
        raise StructuralError("away vertex undefined for an empty active set")
    best_idx = -1
    best_val = -np.inf
    for i in aset.indices():
        val = float(grad @ poly.vertices[i])
        if val > best_val:
            best_idx, best_val = i, val
    return OracleAnswer(atom_index=best_idx, vertex=poly.vertices[best_idx],
                        inner_product=best_val)


def fw_gap(grad: Vector, x: Vector, poly: VPolytope) -> float:
    """Duality gap <grad, x> - min_v <grad, v>; tiny negatives are clamped to zero."""
    grad = np.asarray(grad, dtype=float)
    x = np.asarray(x, dtype=float)
    ans = lmo(poly, grad)
    gap = float(grad @ x - ans.inner_product)
    if -GAP_FLOOR <= gap < 0:
        log.debug("clamping slightly negative gap %g to 0", gap)
        return 0.0
    return gap


def pairwise_gap(grad: Vector, s: OracleAnswer, v: OracleAnswer) -> float:
    """<-grad, s.vertex - v.vertex>: the gap certificate used by the away-step solver."""
    grad = np.asarray(grad, dtype=float)
    gap = float(-grad @ (s.vertex - v.vertex))
    if -GAP_FLOOR <= gap < 0:
        log.debug("clamping slightly negative pairwise gap %g to 0", gap)
        return 0.0
    return gap


def inexact_lmo(poly: VPolytope, grad: Vector, x: Vector, nu: float,
                rng: Optional[np.random.Generator] = None,
                mode: str = "adversarial") -> OracleAnswer:
    """Oracle with multiplicative accuracy nu.

    Among the vertices that retain at least a nu-fraction of the true gap,
    the adversarial mode returns the one with the smallest descent
    <grad, x - v> (worst admissible answer, ties toward the lowest index);
    the random mode picks uniformly among admissible vertices.  nu = 1
    reproduces the exact oracle.
    """
    if not (0 < nu <= 1):
        raise ConfigurationError("nu must lie in (0, 1]")
    grad = np.asarray(grad, dtype=float)
    x = np.asarray(x, dtype=float)
    _check_dimension(poly, grad)
    descents = float(grad @ x) - poly.vertices @ grad  # <grad, x - v> per vertex
    true_gap = float(np.max(descents))
    threshold = nu * true_gap
    admissible = np.flatnonzero(descents >= threshold)
    if admissible.size == 0:  # cannot happen: the exact answer is always admissible
        raise NumericError("no admissible vertex for the inexact oracle")
    if mode == "random":
        if rng is None:
            rng = np.random.default_rng(0)
        idx = int(rng.choice(admissible))
    else:
        idx = int(admissible[_argmin_lowest(descents[admissible])])
    # multiplicative-accuracy contract, checked on every call
    if descents[idx] < threshold - 1e-12 * max(1.0, abs(true_gap)):
        raise NumericError("inexact oracle violated its accuracy contract")
    vertex = poly.vertices[idx]
    return OracleAnswer(atom_index=idx, vertex=vertex, inner_product=float(grad @ vertex))
