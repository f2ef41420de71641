"""Affine-invariant constants and polytope geometry.

Estimates of infimum-type constants are sampled upper bounds and estimates of
supremum-type constants are sampled lower bounds; every consumer compares on
the side that stays valid for that bound direction.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .core import (
    ConfigurationError,
    ConstantEstimates,
    Matrix,
    NumericError,
    Objective,
    QuadraticObjective,
    StructuralError,
    UnsupportedOperationError,
    Vector,
    VPolytope,
)
from .oracles import OracleAnswer, fw_gap, lmo

log = logging.getLogger(__name__)

PROPER_WEIGHT_TOL = 1e-9
SUPPORT_ENUM_CAP = 16
FACE_CONSTRAINT_CAP = 12
ACTIVITY_TOL = 1e-9
BRACKET_NOISE_FLOOR = 1e-13
GAMMA_GRID = np.geomspace(1e-2, 1.0, 13)


@dataclass(frozen=True)
class ProperSupport:
    """Vertex subset carrying x as a convex combination with all-positive weights."""

    atom_indices: tuple[int, ...]
    weights: dict[int, float]

    def min_weight(self) -> float:
        return min(self.weights.values())


# --- proper-support machinery -------------------------------------------

def _minimal_face_candidates(x: Vector, poly: VPolytope) -> list[int]:
    """Indices of vertices on the minimal face containing x.

    Any vertex subset expressing x with positive weights lies inside this
    face, so restricting enumeration to it loses nothing.
    """
    if poly.halfspaces is None:
        return list(range(poly.num_vertices))
    V = poly.vertices
    keep = np.ones(poly.num_vertices, dtype=bool)
    for n, off in poly.halfspaces:
        if abs(float(n @ x) - off) <= ACTIVITY_TOL:
            keep &= np.abs(V @ n - off) <= ACTIVITY_TOL
    idx = np.flatnonzero(keep)
    if idx.size == 0:
        raise StructuralError("point lies outside the polytope (no face contains it)")
    return [int(i) for i in idx]


def _affinely_independent(V: Matrix) -> bool:
    if V.shape[0] <= 1:
        return True
    diffs = V[1:] - V[0]
    s = np.linalg.svd(diffs, compute_uv=False)
    rank = int(np.sum(s > 1e-10 * max(1.0, s[0])))
    return rank == V.shape[0] - 1


def _barycentric_unique(V: Matrix, x: Vector) -> Optional[np.ndarray]:
    """Weights of x over affinely independent V, or None if x is not in its hull."""
    m = V.shape[0]
    A = np.vstack([V.T, np.ones((1, m))])
    rhs = np.concatenate([x, [1.0]])
    w, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    if np.linalg.norm(A @ w - rhs) > 1e-9 * max(1.0, float(np.linalg.norm(rhs))):
        return None
    return w


def _max_min_weight(V: Matrix, x: Vector) -> Optional[tuple[float, np.ndarray]]:
    """Maximize the minimum weight among representations of x over rows of V."""
    m, n = V.shape
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((n + 1, m + 1))
    A_eq[:n, :m] = V.T
    A_eq[n, :m] = 1.0
    b_eq = np.concatenate([x, [1.0]])
    A_ub = np.hstack([-np.eye(m), np.ones((m, 1))])
    b_ub = np.zeros(m)
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m + [(None, None)], method="highs")
    if not res.success:
        return None
    w = res.x[:m]
    if np.linalg.norm(V.T @ w - x) > 1e-8:
        return None
    return float(res.x[-1]), w


def _conv_feasible(V: Matrix, x: Vector) -> bool:
    out = _max_min_weight(V, x)
    return out is not None and out[0] > -1e-12


def enumerate_proper_supports(x: Vector, poly: VPolytope,
                              cap: int = SUPPORT_ENUM_CAP) -> list[ProperSupport]:
    """All vertex subsets expressing x as a strictly positive convex combination.

    Decision per subset: maximize the minimum weight subject to the
    convex-combination equalities; accepted when it reaches 1e-9.  Candidate
    atoms are pruned to the minimal face containing x, and an affinely
    independent candidate set short-circuits to the unique representation.
    """
    x = np.asarray(x, dtype=float)
    if poly.num_vertices > cap:
        raise UnsupportedOperationError(
            f"support enumeration capped at {cap} vertices, got {poly.num_vertices}"
        )
    cand = _minimal_face_candidates(x, poly)
    Vc = poly.vertices[cand]

    if _affinely_independent(Vc):
        w = _barycentric_unique(Vc, x)
        if w is None:
            raise StructuralError("point is not a convex combination of its face vertices")
        if np.any(w < -1e-9):
            raise StructuralError("negative barycentric weight: point outside the face")
        positive = [i for i, wi in enumerate(w) if wi > PROPER_WEIGHT_TOL]
        total = float(sum(w[i] for i in positive))
        weights = {cand[i]: float(w[i]) / total for i in positive}
        indices = tuple(sorted(weights))
        return [ProperSupport(atom_indices=indices, weights=weights)]

    supports = []
    for size in range(1, len(cand) + 1):
        for combo in itertools.combinations(range(len(cand)), size):
            sub = Vc[list(combo)]
            out = _max_min_weight(sub, x)
            if out is None:
                continue
            t, w = out
            if t < PROPER_WEIGHT_TOL:
                continue
            weights = {cand[combo[i]]: float(w[i]) for i in range(size)}
            supports.append(ProperSupport(
                atom_indices=tuple(sorted(weights)), weights=weights))
    return supports


def worst_case_away_vertex(grad: Vector, x: Vector, poly: VPolytope) -> OracleAnswer:
    """Away vertex minimizing its inner product over all proper supports of x.

    Works by a level search: the smallest tau such that x is a convex
    combination of candidate vertices with <grad, v> <= tau equals the
    min-over-supports of the support's worst inner product.  Equivalent to
    enumerating supports but needs only O(log #levels) feasibility solves.
    """
    grad = np.asarray(grad, dtype=float)
    x = np.asarray(x, dtype=float)
    cand = _minimal_face_candidates(x, poly)
    Vc = poly.vertices[cand]
    values = Vc @ grad
    scale = max(1.0, float(np.max(np.abs(values))))

    if _affinely_independent(Vc):
        w = _barycentric_unique(Vc, x)
        if w is None:
            raise StructuralError("point is not a convex combination of its face vertices")
        best_idx, best_val = -1, -np.inf
        for i in range(len(cand)):
            if w[i] > PROPER_WEIGHT_TOL and values[i] > best_val:
                best_idx, best_val = cand[i], float(values[i])
        if best_idx < 0:
            raise StructuralError("empty support for the away-vertex search")
        return OracleAnswer(atom_index=best_idx, vertex=poly.vertices[best_idx],
                            inner_product=best_val)

    levels = np.unique(values)
    lo, hi = 0, len(levels) - 1
    while lo < hi:  # smallest level whose sublevel set contains x
        mid = (lo + hi) // 2
        sub = Vc[values <= levels[mid] + 1e-12 * scale]
        if _conv_feasible(sub, x):
            hi = mid
        else:
            lo = mid + 1
    tau = levels[lo]
    top = [i for i in range(len(cand)) if abs(values[i] - tau) <= 1e-12 * scale]
    below_mask = values < tau - 1e-12 * scale
    below = Vc[below_mask]
    for i in top:
        sub = np.vstack([below, Vc[i][None, :]]) if below.size else Vc[i][None, :]
        if _conv_feasible(sub, x):
            return OracleAnswer(atom_index=cand[i], vertex=poly.vertices[cand[i]],
                                inner_product=float(values[i]))
    at_level = Vc[values <= tau + 1e-12 * scale]
    at_level_idx = [i for i in range(len(cand)) if values[i] <= tau + 1e-12 * scale]
    for i in top:  # lowest-index top atom usable with positive weight
        pos = at_level_idx.index(i)
        m = at_level.shape[0]
        c = np.zeros(m)
        c[pos] = -1.0
        A_eq = np.vstack([at_level.T, np.ones((1, m))])
        b_eq = np.concatenate([x, [1.0]])
        res = linprog(c, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.success and res.x[pos] > PROPER_WEIGHT_TOL:
            return OracleAnswer(atom_index=cand[i], vertex=poly.vertices[cand[i]],
                                inner_product=float(values[i]))
    raise NumericError("level search failed to certify an away vertex")


# --- curvature ------------------------------------------------------------

def curvature_quadratic_exact(A: Matrix, poly: VPolytope) -> tuple[float, float, float]:
    """Exact curvature constants of a quadratic over the polytope.

    For a quadratic the normalized Bregman bracket reduces to the quadratic
    form of the segment direction, so the supremum sits on a vertex pair; the
    negative-step variant coincides by sign symmetry of the form.
    """
    A = np.asarray(A, dtype=float)
    V = poly.vertices
    G = V @ A @ V.T
    diag = np.diag(G)
    vals = diag[:, None] + diag[None, :] - 2 * G  # (u-v)' A (u-v)
    cf = float(max(np.max(vals), 0.0))
    return cf, cf, cf


def _bregman(obj: Objective, y: Vector, x: Vector, fx: float, gx: Vector) -> float:
    b = float(obj.value(y)) - fx - float(gx @ (y - x))
    scale = max(1.0, abs(fx))
    if abs(b) <= BRACKET_NOISE_FLOOR * scale:
        return 0.0
    return b


def curvature_sampled(obj: Objective, poly: VPolytope, num_samples: int,
                      seed: int) -> float:
    """Sampled lower bound on the curvature constant."""
    if num_samples < 1:
        raise ConfigurationError("num_samples must be >= 1")
    rng = np.random.default_rng(seed)
    V = poly.vertices
    m = poly.num_vertices
    best = 0.0
    for _ in range(num_samples):
        w = rng.dirichlet(np.ones(m))
        s_idx = int(rng.integers(m))
        gamma = float(GAMMA_GRID[int(rng.integers(GAMMA_GRID.size))])
        x = w @ V
        y = x + gamma * (V[s_idx] - x)
        fx = float(obj.value(x))
        gx = np.asarray(obj.gradient(x), dtype=float)
        if not (np.isfinite(fx) and np.all(np.isfinite(gx))):
            raise NumericError("non-finite objective data while sampling curvature")
        val = 2.0 / gamma**2 * _bregman(obj, y, x, fx, gx)
        best = max(best, val)
    return best


# --- rays, radii ----------------------------------------------------------

def ray_boundary_intersection(x: Vector, xstar: Vector, poly: VPolytope) -> Vector:
    """Point where the ray from x through xstar leaves the polytope."""
    x = np.asarray(x, dtype=float)
    xstar = np.asarray(xstar, dtype=float)
    u = xstar - x
    nu = float(np.linalg.norm(u))
    if nu <= 1e-14 * max(1.0, float(np.linalg.norm(x))):
        raise StructuralError("degenerate ray: x equals xstar")
    if poly.halfspaces is None:
        raise UnsupportedOperationError("ray intersection needs halfspace data")
    t_best = np.inf
    for n, off in poly.halfspaces:
        den = float(n @ u)
        if den > 1e-14 * max(1.0, float(np.linalg.norm(n))) * nu:
            t = (off - float(n @ x)) / den
            t_best = min(t_best, t)
    if not np.isfinite(t_best):
        raise NumericError("ray never leaves the polytope: halfspace data incomplete")
    t_best = max(t_best, 1.0)  # both endpoints are feasible, so the exit is beyond xstar
    return x + t_best * u


def _span_basis(poly: VPolytope) -> Matrix:
    """Orthonormal basis (columns) of the span of vertex differences."""
    V = poly.vertices
    diffs = V - V.mean(axis=0)
    _, s, vt = np.linalg.svd(diffs, full_matrices=False)
    if s.size == 0 or s[0] <= 0:
        return np.zeros((poly.dimension, 0))
    rank = int(np.sum(s > 1e-10 * s[0]))
    return vt[:rank].T


def interior_radius(xstar: Vector, poly: VPolytope) -> float:
    """Distance from xstar to the relative boundary of the polytope.

    Constraints tight at every vertex belong to the affine hull and are
    skipped; the remaining slacks are measured against normals projected onto
    the span of the polytope.
    """
    xstar = np.asarray(xstar, dtype=float)
    if poly.halfspaces is None:
        raise UnsupportedOperationError("interior radius needs halfspace data")
    U = _span_basis(poly)
    V = poly.vertices
    best = np.inf
    for n, off in poly.halfspaces:
        if np.all(np.abs(V @ n - off) <= ACTIVITY_TOL):
            continue  # affine-hull constraint
        pn = float(np.linalg.norm(U.T @ n))
        if pn <= 1e-12:
            continue  # facet parallel to the hull cannot be approached inside it
        slack = off - float(n @ xstar)
        best = min(best, slack / pn)
    if not np.isfinite(best):
        return 0.0
    return max(best, 0.0)


def strong_convexity_modulus(A: Matrix, poly: VPolytope) -> float:
    """Smallest eigenvalue of A restricted to the span of the polytope."""
    U = _span_basis(poly)
    if U.shape[1] == 0:
        return 0.0
    M = U.T @ np.asarray(A, dtype=float) @ U
    return max(float(np.linalg.eigvalsh(M)[0]), 0.0)


# --- strong-convexity estimates -------------------------------------------

def mu_fw_estimate(obj: Objective, poly: VPolytope, xstar: Vector,
                   num_samples: int, seed: int) -> float:
    """Sampled upper bound on the interior strong-convexity constant.

    Samples points x and step sizes gamma, walks toward the boundary point of
    the ray from x through the optimum, and takes the smallest normalized
    Bregman bracket.
    """
    if num_samples < 1:
        raise ConfigurationError("num_samples must be >= 1")
    xstar = np.asarray(xstar, dtype=float)
    gap_at_opt = fw_gap(np.asarray(obj.gradient(xstar), dtype=float), xstar, poly)
    if gap_at_opt > 1e-9:
        raise ConfigurationError(f"xstar is not optimal: gap {gap_at_opt:g}")
    rng = np.random.default_rng(seed)
    V = poly.vertices
    m = poly.num_vertices
    best = np.inf
    skipped = 0
    for _ in range(num_samples):
        w = rng.dirichlet(np.ones(m))
        gamma = float(GAMMA_GRID[int(rng.integers(GAMMA_GRID.size))])
        x = w @ V
        if np.linalg.norm(x - xstar) <= 1e-9:
            skipped += 1
            continue
        sbar = ray_boundary_intersection(x, xstar, poly)
        if np.linalg.norm(sbar - x) <= 1e-12:
            skipped += 1
            continue
        y = x + gamma * (sbar - x)
        fx = float(obj.value(x))
        gx = np.asarray(obj.gradient(x), dtype=float)
        val = 2.0 / gamma**2 * _bregman(obj, y, x, fx, gx)
        best = min(best, val)
    if skipped:
        log.debug("mu_fw_estimate skipped %d degenerate samples", skipped)
    if not np.isfinite(best):
        raise NumericError("no valid samples for the interior strong-convexity estimate")
    return max(best, 0.0)


def mu_away_estimate(obj: Objective, poly: VPolytope, num_samples: int,
                     seed: int) -> float:
    """Sampled upper bound on the geometric strong-convexity constant.

    Pairs (x, x*) are scored by the Bregman bracket normalized by the anchor
    ratio gamma = <grad, x*-x> / <grad, s(x) - v(x)> built from the toward
    vertex and the worst-case away vertex.  Every vertex paired with its
    toward vertex is sampled first: those pairs have ratio one and certify
    that the estimate never exceeds the curvature constant of a quadratic.
    """
    if num_samples < 1:
        raise ConfigurationError("num_samples must be >= 1")
    rng = np.random.default_rng(seed)
    V = poly.vertices
    m = poly.num_vertices
    best = np.inf
    skipped = 0

    def score(x: Vector, target: Vector) -> Optional[float]:
        nonlocal skipped
        gx = np.asarray(obj.gradient(x), dtype=float)
        fx = float(obj.value(x))
        num = float(gx @ (target - x))
        scale = max(1.0, float(np.linalg.norm(gx)), float(np.linalg.norm(target - x)))
        if num >= -1e-14 * scale:
            skipped += 1
            return None
        s_ans = lmo(poly, gx)
        v_ans = worst_case_away_vertex(gx, x, poly)
        den = float(gx @ (s_ans.vertex - v_ans.vertex))
        if abs(den) <= 1e-14 * scale:
            skipped += 1
            log.debug("mu_away_estimate skipped a zero-denominator sample")
            return None
        ratio = num / den
        return 2.0 / ratio**2 * _bregman(obj, target, x, fx, gx)

    for i in range(m):
        s_ans = lmo(poly, np.asarray(obj.gradient(V[i]), dtype=float))
        if s_ans.atom_index == i:
            continue
        val = score(V[i], s_ans.vertex)
        if val is not None:
            best = min(best, val)
    for _ in range(num_samples):
        w1 = rng.dirichlet(np.ones(m))
        w2 = rng.dirichlet(np.ones(m))
        val = score(w1 @ V, w2 @ V)
        if val is not None:
            best = min(best, val)
    if skipped:
        log.debug("mu_away_estimate skipped %d samples", skipped)
    if not np.isfinite(best):
        raise NumericError("no valid samples for the geometric strong-convexity estimate")
    return max(best, 0.0)


# --- widths ----------------------------------------------------------------

def directional_width(points, d: Vector) -> float:
    """Extent of a point set along the normalized direction d."""
    d = np.asarray(d, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm <= 0.0:
        raise StructuralError("directional width undefined for the zero direction")
    P = np.atleast_2d(np.asarray(points, dtype=float))
    vals = P @ (d / norm)
    return float(np.max(vals) - np.min(vals))


def pyramidal_dir_width(poly: VPolytope, d: Vector, x: Vector) -> float:
    """Pyramidal directional width of the polytope at base point x.

    Evaluates both the min-over-supports definition and the inner-product
    identity with the worst-case away vertex, and insists they agree.
    """
    d = np.asarray(d, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm <= 0.0:
        raise StructuralError("pyramidal width undefined for the zero direction")
    x = np.asarray(x, dtype=float)
    s_ans = lmo(poly, -d)  # argmax <d, v> with the lowest-index tie-break
    supports = enumerate_proper_supports(x, poly)
    width_enum = np.inf
    for sup in supports:
        pts = np.vstack([poly.vertices[list(sup.atom_indices)], s_ans.vertex[None, :]])
        width_enum = min(width_enum, directional_width(pts, d))
    v_ans = worst_case_away_vertex(-d, x, poly)
    width_ident = float(d @ (s_ans.vertex - v_ans.vertex)) / norm
    if abs(width_enum - width_ident) > 1e-10:
        raise NumericError(
            f"pyramidal width formulas disagree: {width_enum!r} vs {width_ident!r}"
        )
    return float(width_enum)


def enumerate_faces(poly: VPolytope) -> list[tuple[int, ...]]:
    """Vertex index sets of all nonempty faces, from halfspace activity patterns."""
    if poly.halfspaces is None:
        raise UnsupportedOperationError("face enumeration needs halfspace data")
    V = poly.vertices
    activity = []
    for n, off in poly.halfspaces:
        act = np.abs(V @ n - off) <= ACTIVITY_TOL
        if np.all(act):
            continue  # hull constraint: active on every face
        activity.append(act)
    if len(activity) > FACE_CONSTRAINT_CAP:
        raise UnsupportedOperationError(
            f"face enumeration capped at {FACE_CONSTRAINT_CAP} facet constraints"
        )
    faces = set()
    for r in range(len(activity) + 1):
        for combo in itertools.combinations(range(len(activity)), r):
            mask = np.ones(poly.num_vertices, dtype=bool)
            for j in combo:
                mask &= activity[j]
            if mask.any():
                faces.add(tuple(int(i) for i in np.flatnonzero(mask)))
    return sorted(faces, key=lambda f: (len(f), f))


def _face_base_points(Vf: Matrix) -> list[Vector]:
    points = [Vf[i] for i in range(Vf.shape[0])]
    for i in range(Vf.shape[0]):
        for j in range(i + 1, Vf.shape[0]):
            points.append(0.5 * (Vf[i] + Vf[j]))
    points.append(Vf.mean(axis=0))
    out, seen = [], set()
    for p in points:
        key = tuple(np.round(p, 12))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def _partition_directions(Vf: Matrix) -> list[Vector]:
    """Centroid differences over all two-block partitions of the face vertices.

    These contain the two-level direction patterns where the width infimum of
    simplicial and box faces is attained, which random cone samples only
    approach slowly.
    """
    m = Vf.shape[0]
    if m < 2 or m > 10:
        return []
    dirs = []
    indices = list(range(m))
    for r in range(1, m // 2 + 1):
        for blockA in itertools.combinations(indices, r):
            if 2 * r == m and 0 not in blockA:
                continue  # complement of an already-enumerated half split
            blockB = [i for i in indices if i not in blockA]
            d = Vf[blockB].mean(axis=0) - Vf[list(blockA)].mean(axis=0)
            dirs.append(d)
            dirs.append(-d)
    return dirs


def pyramidal_width_estimate(poly: VPolytope, directions_per_face: int,
                             seed: int) -> float:
    """Sampled upper bound on the pyramidal width of the polytope.

    Iterates all faces; base points are face vertices, pair midpoints and the
    barycenter; feasible directions are random positive combinations of the
    (vertex - base) generators, the generators themselves, and (from the
    barycenter) all centroid-difference partitions of the face.
    """
    if poly.num_vertices > SUPPORT_ENUM_CAP:
        raise UnsupportedOperationError(
            f"pyramidal width estimation capped at {SUPPORT_ENUM_CAP} vertices"
        )
    if directions_per_face < 1:
        raise ConfigurationError("directions_per_face must be >= 1")
    rng = np.random.default_rng(seed)
    faces = enumerate_faces(poly)
    best = np.inf
    for face in faces:
        if len(face) < 2:
            continue  # no nonzero feasible direction from a vertex face
        Vf = poly.vertices[list(face)]
        sub = VPolytope(vertices=Vf, kind="generic", halfspaces=poly.halfspaces)
        bases = _face_base_points(Vf)
        n_rand = max(1, directions_per_face // len(bases))
        barycenter = Vf.mean(axis=0)
        for xb in bases:
            gens = [v - xb for v in Vf if np.linalg.norm(v - xb) > 1e-12]
            if not gens:
                continue
            gens = np.asarray(gens)
            dirs = [g for g in gens]
            coeffs = rng.exponential(1.0, size=(n_rand, gens.shape[0]))
            dirs.extend(coeffs @ gens)
            if np.linalg.norm(xb - barycenter) <= 1e-12:
                dirs.extend(_partition_directions(Vf))
            D = np.asarray([d for d in dirs if np.linalg.norm(d) > 1e-12])
            if D.size == 0:
                continue
            supports = enumerate_proper_supports(xb, sub)
            G = D @ Vf.T
            s_val = G.max(axis=1)
            support_min = np.full(D.shape[0], -np.inf)
            for sup in supports:  # atom indices are local to the face sub-polytope
                cols = list(sup.atom_indices)
                np.maximum(support_min, G[:, cols].min(axis=1), out=support_min)
            widths = (s_val - support_min) / np.linalg.norm(D, axis=1)
            best = min(best, float(widths.min()))
    if not np.isfinite(best):
        raise NumericError("no feasible directions found for the width estimate")
    return best


def simplex_width_conjecture(dimension: int) -> float:
    """Conjectured pyramidal width of the unit simplex, 2/sqrt(d)."""
    return 2.0 / math.sqrt(dimension)


# --- rate constants and inequality checks ----------------------------------

def rate_constants(est: ConstantEstimates, nu: float = 1.0) -> tuple[float, float]:
    """Per-step contraction constants for the two solvers."""
    if not (est.cf > 0 and est.cf_away > 0):
        raise ConfigurationError("rate constants need positive curvature constants")
    if not (0 < nu <= 1):
        raise ConfigurationError("nu must lie in (0, 1]")
    rho_fw = min(nu / 2.0, nu**2 * est.mu_fw / est.cf)
    rho_away = est.mu_away / (4.0 * est.cf_away)
    return float(rho_fw), float(rho_away)


@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    relation: str  # "<=" or ">="
    margin: float
    verdict: str  # pass | fail | vacuous


def _check(name: str, lhs: float, rhs: float, relation: str,
           vacuous_below: Optional[float] = None) -> BoundCheck:
    if relation == "<=":
        ok = lhs <= rhs
        margin = rhs - lhs
    else:
        ok = lhs >= rhs
        margin = lhs - rhs
    verdict = "pass" if ok else "fail"
    if vacuous_below is not None and rhs <= vacuous_below:
        verdict = "vacuous"
    return BoundCheck(name=name, lhs=float(lhs), rhs=float(rhs), relation=relation,
                      margin=float(margin), verdict=verdict)


def bound_checks(est: ConstantEstimates, quad: QuadraticObjective, poly: VPolytope,
                 xstar: Vector) -> list[BoundCheck]:
    """Inequalities tying the sampled constants to norm-based quantities.

    The strong-convexity estimates are upper bounds on true infima, so the
    lower-bound inequalities compare them on the large side, where they must
    hold whenever the underlying inequality holds.
    """
    V = poly.vertices
    diffs = V[:, None, :] - V[None, :, :]
    diam2 = float(np.max(np.einsum("ijk,ijk->ij", diffs, diffs)))
    lipschitz = float(np.linalg.eigvalsh(quad.A)[-1])
    mu = strong_convexity_modulus(quad.A, poly)
    delta = est.delta if np.isfinite(est.delta) else interior_radius(xstar, poly)
    checks = [
        _check("curvature_le_diam2_lipschitz", est.cf, diam2 * lipschitz + 1e-9, "<="),
        _check("mu_fw_le_curvature", est.mu_fw, est.cf + 1e-9, "<="),
        _check("mu_fw_ge_modulus_radius2", est.mu_fw, mu * delta**2, ">=",
               vacuous_below=1e-12),
        _check("mu_away_ge_modulus_pyramidal2", est.mu_away, mu * est.pdirw**2, ">=",
               vacuous_below=1e-12),
        _check("mu_away_le_curvature", est.mu_away, est.cf + 1e-9, "<="),
    ]
    return checks


def estimate_constants(quad: QuadraticObjective, poly: VPolytope, xstar: Vector,
                       num_samples: int = 2000, seed: int = 0,
                       directions_per_face: int = 2000, nu: float = 1.0,
                       with_mu_away: bool = True,
                       with_pdirw: bool = True) -> ConstantEstimates:
    """Full constants report for a quadratic problem with known optimum.

    The away-step quantities can be skipped when only the standard solver is
    audited; their fields stay NaN and the away rate is left uncomputed.
    """
    cf, cf_minus, cf_away = curvature_quadratic_exact(quad.A, poly)
    est = ConstantEstimates()
    est = est.with_field("cf", cf, "exact")
    est = est.with_field("cf_minus", cf_minus, "exact")
    est = est.with_field("cf_away", cf_away, "exact")
    est = est.with_field("delta", interior_radius(xstar, poly), "exact")
    est = est.with_field(
        "mu_fw", mu_fw_estimate(quad, poly, xstar, num_samples, seed),
        "sampled_upper_bound")
    if with_mu_away:
        est = est.with_field(
            "mu_away", mu_away_estimate(quad, poly, num_samples, seed),
            "sampled_upper_bound")
    if with_pdirw:
        est = est.with_field(
            "pdirw", pyramidal_width_estimate(poly, directions_per_face, seed),
            "sampled_upper_bound")
    rho_fw, rho_away = rate_constants(est, nu)
    est = est.with_field("rho_fw", rho_fw, "sampled_upper_bound")
    if with_mu_away:
        est = est.with_field("rho_away", rho_away, "sampled_upper_bound")
    est.validate()
    return est
