"""Shared domain types: objectives, polytopes, active sets, traces, configuration."""

from __future__ import annotations

import itertools
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

Vector = np.ndarray
Matrix = np.ndarray

WEIGHT_SUM_TOL = 1e-10
DUPLICATE_VERTEX_TOL = 1e-12
HALFSPACE_TOL = 1e-10
MEMBERSHIP_TOL = 1e-9
DROP_TOLERANCE_DEFAULT = 1e-12


class FWError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(FWError):
    """Malformed input or broken invariant: bad index, dimension mismatch, invalid state."""


class NumericError(FWError):
    """Non-finite values or numerically meaningless results."""


class ConfigurationError(FWError):
    """Invalid configuration or parameter value."""


class UnsupportedOperationError(FWError):
    """Operation not available for this polytope representation."""


def as_vector(x) -> Vector:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise StructuralError(f"expected a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NumericError("vector has non-finite components")
    return v


class Objective(ABC):
    """Convex differentiable function given by value and gradient oracles."""

    @abstractmethod
    def value(self, x: Vector) -> float:
        ...

    @abstractmethod
    def gradient(self, x: Vector) -> Vector:
        ...


class FunctionObjective(Objective):
    """Objective wrapping plain callables."""

    def __init__(self, value_fn, gradient_fn):
        self._value = value_fn
        self._gradient = gradient_fn

    def value(self, x: Vector) -> float:
        return float(self._value(x))

    def gradient(self, x: Vector) -> Vector:
        return np.asarray(self._gradient(x), dtype=float)


class QuadraticObjective(Objective):
    """f(x) = 0.5 x'Ax + b'x + c with A symmetric positive semidefinite."""

    def __init__(self, A: Matrix, b: Vector, c: float = 0.0):
        A = np.asarray(A, dtype=float)
        b = as_vector(b)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise StructuralError(f"A must be square, got shape {A.shape}")
        if A.shape[0] != b.shape[0]:
            raise StructuralError("A and b dimensions disagree")
        if not np.array_equal(A, A.T):
            raise StructuralError("A must be exactly symmetric as stored")
        eigmin = float(np.linalg.eigvalsh(A)[0]) if A.size else 0.0
        if eigmin < -1e-10:
            raise StructuralError(f"A is not positive semidefinite (lambda_min={eigmin:g})")
        self.A = A
        self.b = b
        self.c = float(c)

    def value(self, x: Vector) -> float:
        x = np.asarray(x, dtype=float)
        return float(0.5 * x @ self.A @ x + self.b @ x + self.c)

    def gradient(self, x: Vector) -> Vector:
        return self.A @ np.asarray(x, dtype=float) + self.b

    @property
    def dimension(self) -> int:
        return self.b.shape[0]


@dataclass(frozen=True)
class VPolytope:
    """Bounded polytope given by its vertex list, optionally with halfspace data.

    ``halfspaces`` is a list of (normal, offset) pairs describing
    {x : <normal, x> <= offset for all pairs}; equality constraints of the
    affine hull appear as two opposite halfspaces.
    """

    vertices: Matrix
    kind: str = "generic"
    halfspaces: Optional[list[tuple[Vector, float]]] = None

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] == 0:
            raise StructuralError("vertex list must be a nonempty 2-d array")
        if not np.all(np.isfinite(V)):
            raise NumericError("vertices contain non-finite values")
        for i in range(V.shape[0]):
            for j in range(i + 1, V.shape[0]):
                if np.linalg.norm(V[i] - V[j]) <= DUPLICATE_VERTEX_TOL:
                    raise StructuralError(f"duplicate vertices at indices {i} and {j}")
        object.__setattr__(self, "vertices", V)
        if self.halfspaces is not None:
            hs = [(as_vector(n), float(off)) for n, off in self.halfspaces]
            for n, off in hs:
                worst = float(np.max(V @ n) - off)
                if worst > HALFSPACE_TOL:
                    raise StructuralError(
                        f"vertex violates halfspace by {worst:g} (> {HALFSPACE_TOL:g})"
                    )
            object.__setattr__(self, "halfspaces", hs)

    @property
    def dimension(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def num_vertices(self) -> int:
        return int(self.vertices.shape[0])

    def contains(self, x: Vector, tol: float = MEMBERSHIP_TOL) -> bool:
        """Halfspace membership test; requires halfspace data."""
        if self.halfspaces is None:
            raise UnsupportedOperationError("membership test needs halfspace data")
        x = np.asarray(x, dtype=float)
        return all(float(n @ x) <= off + tol for n, off in self.halfspaces)


def simplex(dimension: int) -> VPolytope:
    """Unit (probability) simplex conv{e_1, ..., e_d} in R^d."""
    if dimension < 1:
        raise ConfigurationError("simplex dimension must be >= 1")
    eye = np.eye(dimension)
    halfspaces = [(-eye[i], 0.0) for i in range(dimension)]
    ones = np.ones(dimension)
    halfspaces += [(ones, 1.0), (-ones, -1.0)]
    return VPolytope(vertices=eye, kind="simplex", halfspaces=halfspaces)


def box(bounds) -> VPolytope:
    """Axis-aligned box given per-coordinate (lower, upper) bounds."""
    bounds = np.asarray(bounds, dtype=float)
    if bounds.ndim != 2 or bounds.shape[1] != 2:
        raise ConfigurationError("bounds must have shape (d, 2)")
    if np.any(bounds[:, 0] >= bounds[:, 1]):
        raise ConfigurationError("each lower bound must be strictly below its upper bound")
    d = bounds.shape[0]
    corners = np.array(list(itertools.product(*[(lo, hi) for lo, hi in bounds])))
    eye = np.eye(d)
    halfspaces = [(eye[i], float(bounds[i, 1])) for i in range(d)]
    halfspaces += [(-eye[i], float(-bounds[i, 0])) for i in range(d)]
    return VPolytope(vertices=corners, kind="box", halfspaces=halfspaces)


def unit_box(dimension: int) -> VPolytope:
    return box([(0.0, 1.0)] * dimension)


def l1_ball(dimension: int) -> VPolytope:
    """Cross-polytope conv{+-e_i}; halfspaces only stored for small dimensions."""
    if dimension < 1:
        raise ConfigurationError("l1 ball dimension must be >= 1")
    eye = np.eye(dimension)
    vertices = np.vstack([eye, -eye])
    halfspaces = None
    if dimension <= 10:
        halfspaces = [
            (np.array(signs, dtype=float), 1.0)
            for signs in itertools.product((1.0, -1.0), repeat=dimension)
        ]
    return VPolytope(vertices=vertices, kind="l1ball", halfspaces=halfspaces)


@dataclass
class ActiveSet:
    """Convex-combination state: atom index -> weight in (0, 1]."""

    entries: dict[int, float]

    @classmethod
    def single(cls, index: int) -> "ActiveSet":
        return cls(entries={int(index): 1.0})

    def copy(self) -> "ActiveSet":
        return ActiveSet(entries=dict(self.entries))

    @property
    def size(self) -> int:
        return len(self.entries)

    def indices(self) -> list[int]:
        return sorted(self.entries)

    def weight_sum(self) -> float:
        return float(sum(self.entries[i] for i in self.indices()))

    def validate(self, poly: Optional[VPolytope] = None,
                 drop_tolerance: float = DROP_TOLERANCE_DEFAULT):
        if not self.entries:
            raise StructuralError("active set is empty")
        for i, w in self.entries.items():
            if poly is not None and not (0 <= i < poly.num_vertices):
                raise StructuralError(f"atom index {i} out of range")
            if not (w > drop_tolerance):
                raise StructuralError(f"weight {w:g} at atom {i} not above drop tolerance")
        s = self.weight_sum()
        if abs(s - 1.0) > WEIGHT_SUM_TOL:
            raise StructuralError(f"weights sum to {s!r}, outside 1 +- {WEIGHT_SUM_TOL:g}")
        if poly is not None and poly.halfspaces is not None:
            x = active_set_point(self, poly)
            if not poly.contains(x, tol=MEMBERSHIP_TOL):
                raise StructuralError("reconstructed point leaves the domain")


def active_set_point(aset: ActiveSet, poly: VPolytope) -> Vector:
    """Weighted vertex combination sum_v alpha_v * vertices[v].

    Summation runs in ascending atom-index order so reruns are bit-reproducible.
    """
    x = np.zeros(poly.dimension)
    for i in aset.indices():
        if not (0 <= i < poly.num_vertices):
            raise StructuralError(f"atom index {i} out of range for {poly.num_vertices} vertices")
        x = x + aset.entries[i] * poly.vertices[i]
    return x


@dataclass
class IterateRecord:
    k: int
    x: Vector
    f_value: float
    gap: float
    step_type: str  # fw | away | drop | none (terminal record carries no step)
    gamma: float
    gamma_max: float
    active_size: int
    gap_certified: Optional[float] = None  # inexact-oracle runs: <grad, x - s> for the returned s
    dir_derivative: Optional[float] = None  # <grad, d_k> for the step taken


@dataclass
class RunTrace:
    records: list[IterateRecord] = field(default_factory=list)
    problem_id: str = ""
    solver_id: str = ""
    seed: int = 0

    def __len__(self) -> int:
        return len(self.records)

    def h_values(self, fstar: float) -> np.ndarray:
        return np.array([r.f_value - fstar for r in self.records])

    def gaps(self) -> np.ndarray:
        return np.array([r.gap for r in self.records])

    def step_types(self) -> list[str]:
        return [r.step_type for r in self.records]

    def drop_count_prefix(self) -> np.ndarray:
        """Cumulative number of drop steps among records 0..k-1, for each k."""
        drops = np.array([1 if r.step_type == "drop" else 0 for r in self.records])
        out = np.zeros(len(self.records) + 1, dtype=int)
        np.cumsum(drops, out=out[1:])
        return out


STEP_RULES = ("fixed_schedule", "analytic_cf", "line_search_exact",
              "line_search_golden", "analytic_cfa")


@dataclass
class SolverConfig:
    max_iters: int = 1000
    gap_tolerance: float = 1e-10
    step_rule: str = "line_search_exact"
    drop_tolerance: float = DROP_TOLERANCE_DEFAULT
    tie_break: str = "lowest_index"
    nu: float = 1.0
    inexact_mode: str = "adversarial"  # or "random"
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigurationError("max_iters must be >= 1")
        if self.gap_tolerance < 0:
            raise ConfigurationError("gap_tolerance must be >= 0")
        if self.step_rule not in STEP_RULES:
            raise ConfigurationError(f"unknown step rule {self.step_rule!r}")
        if not (0 < self.nu <= 1):
            raise ConfigurationError("nu must lie in (0, 1]")
        if self.tie_break != "lowest_index":
            raise ConfigurationError("only lowest_index tie-breaking is supported")
        if self.inexact_mode not in ("adversarial", "random"):
            raise ConfigurationError("inexact_mode must be adversarial or random")


PROVENANCE_TAGS = ("exact", "sampled_lower_bound", "sampled_upper_bound")

CONSTANT_FIELDS = ("cf", "cf_minus", "cf_away", "mu_fw", "mu_away",
                   "delta", "pdirw", "rho_fw", "rho_away")


@dataclass
class ConstantEstimates:
    cf: float = float("nan")
    cf_minus: float = float("nan")
    cf_away: float = float("nan")
    mu_fw: float = float("nan")
    mu_away: float = float("nan")
    delta: float = float("nan")
    pdirw: float = float("nan")
    rho_fw: float = float("nan")
    rho_away: float = float("nan")
    provenance: dict[str, str] = field(default_factory=dict)

    def with_field(self, name: str, value: float, provenance: str) -> "ConstantEstimates":
        if name not in CONSTANT_FIELDS:
            raise ConfigurationError(f"unknown constant field {name!r}")
        if provenance not in PROVENANCE_TAGS:
            raise ConfigurationError(f"unknown provenance tag {provenance!r}")
        prov = dict(self.provenance)
        prov[name] = provenance
        return replace(self, **{name: float(value), "provenance": prov})

    def validate(self):
        for name in CONSTANT_FIELDS:
            v = getattr(self, name)
            if np.isnan(v):
                continue
            if v < 0:
                raise StructuralError(f"constant {name} is negative: {v!r}")
        if not np.isnan(self.cf_away) and not np.isnan(self.cf) and not np.isnan(self.cf_minus):
            if abs(self.cf_away - max(self.cf, self.cf_minus)) > 1e-9 * max(1.0, self.cf_away):
                raise StructuralError("cf_away must equal max(cf, cf_minus)")
        for mu_name in ("mu_fw", "mu_away"):
            mu = getattr(self, mu_name)
            if not np.isnan(mu) and not np.isnan(self.cf) and mu > self.cf + 1e-9:
                raise StructuralError(f"{mu_name}={mu!r} exceeds cf={self.cf!r}")


def gradient_check(obj: Objective, x: Vector, step: float = 1e-6) -> float:
    """Max relative deviation between the analytic gradient and central differences."""
    x = as_vector(x)
    g = np.asarray(obj.gradient(x), dtype=float)
    if not np.all(np.isfinite(g)):
        raise NumericError("gradient is non-finite")
    worst = 0.0
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = step
        fp = obj.value(x + e)
        fm = obj.value(x - e)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise NumericError("objective value is non-finite near x")
        fd = (fp - fm) / (2 * step)
        worst = max(worst, abs(g[i] - fd) / (1.0 + abs(g[i])))
    return worst


# --- problem spec files -------------------------------------------------

def polytope_to_json(poly: VPolytope) -> dict:
    if poly.kind == "simplex":
        return {"kind": "simplex"}
    if poly.kind == "box":
        lo = poly.vertices.min(axis=0)
        hi = poly.vertices.max(axis=0)
        return {"kind": "box", "bounds": [[float(a), float(b)] for a, b in zip(lo, hi)]}
    if poly.kind == "l1ball":
        return {"kind": "l1ball"}
    out = {"kind": "generic", "vertices": poly.vertices.tolist()}
    if poly.halfspaces is not None:
        out["halfspaces"] = [
            {"normal": n.tolist(), "offset": off} for n, off in poly.halfspaces
        ]
    return out


def polytope_from_json(data: dict, dimension: int) -> VPolytope:
    kind = data.get("kind")
    if kind == "simplex":
        return simplex(dimension)
    if kind == "box":
        bounds = data.get("bounds")
        if bounds is None:
            return unit_box(dimension)
        return box(bounds)
    if kind == "l1ball":
        return l1_ball(dimension)
    if kind == "generic":
        halfspaces = None
        if "halfspaces" in data:
            halfspaces = [(as_vector(h["normal"]), float(h["offset"]))
                          for h in data["halfspaces"]]
        return VPolytope(vertices=np.asarray(data["vertices"], dtype=float),
                         kind="generic", halfspaces=halfspaces)
    raise ConfigurationError(f"unknown polytope kind {kind!r}")


def problem_to_json(name: str, poly: VPolytope, objective: QuadraticObjective,
                    optimum_hint: Optional[Vector] = None) -> str:
    data = {
        "name": name,
        "dimension": objective.dimension,
        "polytope": polytope_to_json(poly),
        "objective": {
            "kind": "quadratic",
            "A": objective.A.tolist(),
            "b": objective.b.tolist(),
            "c": objective.c,
        },
    }
    if optimum_hint is not None:
        data["optimum_hint"] = np.asarray(optimum_hint, dtype=float).tolist()
    return json.dumps(data, indent=2)


def problem_from_json(text: str) -> tuple[str, VPolytope, QuadraticObjective, Optional[Vector]]:
    data = json.loads(text)
    try:
        name = data["name"]
        dimension = int(data["dimension"])
        obj_data = data["objective"]
    except KeyError as exc:
        raise ConfigurationError(f"problem file missing field {exc}") from exc
    if obj_data.get("kind") != "quadratic":
        raise ConfigurationError("only quadratic objectives are supported in problem files")
    poly = polytope_from_json(data["polytope"], dimension)
    if poly.dimension != dimension:
        raise ConfigurationError("polytope dimension disagrees with declared dimension")
    objective = QuadraticObjective(
        A=np.asarray(obj_data["A"], dtype=float),
        b=as_vector(obj_data["b"]),
        c=float(obj_data.get("c", 0.0)),
    )
    if objective.dimension != dimension:
        raise ConfigurationError("objective dimension disagrees with declared dimension")
    hint = None
    if "optimum_hint" in data:
        hint = as_vector(data["optimum_hint"])
    return name, poly, objective, hint
