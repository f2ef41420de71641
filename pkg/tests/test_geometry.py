import itertools
import math

import numpy as np
import pytest

import fwpoly as fp
from fwpoly import geometry as geo


def brute_force_curvature(A, poly):
    # independent oracle: explicit double loop over vertex pairs
    best = 0.0
    V = poly.vertices
    for i in range(V.shape[0]):
        for j in range(V.shape[0]):
            d = V[i] - V[j]
            best = max(best, float(d @ A @ d))
    return best


def brute_force_away_vertex(grad, x, poly):
    # definitional oracle: enumerate proper supports, take each support's
    # argmax (lowest index on ties), return the candidate with minimal value
    supports = fp.enumerate_proper_supports(x, poly)
    best_idx, best_val = None, np.inf
    for sup in supports:
        cand_idx, cand_val = None, -np.inf
        for i in sup.atom_indices:
            v = float(grad @ poly.vertices[i])
            if v > cand_val:
                cand_idx, cand_val = i, v
        if cand_val < best_val or (cand_val == best_val and cand_idx < best_idx):
            best_idx, best_val = cand_idx, cand_val
    return best_idx, best_val


# --- curvature ---------------------------------------------------------------

def test_curvature_exact_identity_simplex():
    poly = fp.simplex(3)
    cf, cf_minus, cf_away = fp.curvature_quadratic_exact(np.eye(3), poly)
    assert cf == brute_force_curvature(np.eye(3), poly) == 2.0
    assert cf_minus == cf
    assert cf_away == max(cf, cf_minus)


def test_curvature_exact_identity_box():
    poly = fp.box([(-1, 1), (-1, 1)])
    cf, _, _ = fp.curvature_quadratic_exact(np.eye(2), poly)
    assert cf == brute_force_curvature(np.eye(2), poly) == 8.0


def test_curvature_exact_linear_objective():
    assert fp.curvature_quadratic_exact(np.zeros((3, 3)), fp.simplex(3))[0] == 0.0


def test_curvature_exact_matches_brute_force_random():
    rng = np.random.default_rng(6)
    poly = fp.VPolytope(vertices=rng.normal(size=(7, 4)), kind="generic")
    for seed in range(5):
        rng2 = np.random.default_rng(seed)
        Q, _ = np.linalg.qr(rng2.normal(size=(4, 4)))
        A = Q @ np.diag(rng2.uniform(0.1, 2.0, 4)) @ Q.T
        A = 0.5 * (A + A.T)
        cf, _, _ = fp.curvature_quadratic_exact(A, poly)
        assert cf == pytest.approx(brute_force_curvature(A, poly), rel=1e-12)


def test_curvature_sampled_close_to_exact():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    val = fp.curvature_sampled(spec.objective, spec.poly, 100000, 0)
    assert 2.0 - 0.05 <= val <= 2.0


def test_curvature_sampled_linear_objective_zero():
    obj = fp.QuadraticObjective(np.zeros((3, 3)), np.array([1.0, -2.0, 0.5]))
    assert fp.curvature_sampled(obj, fp.simplex(3), 2000, 0) <= 1e-12


def test_curvature_sampled_deterministic():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    a = fp.curvature_sampled(spec.objective, spec.poly, 1, 123)
    b = fp.curvature_sampled(spec.objective, spec.poly, 1, 123)
    assert a == b


def test_curvature_sampled_is_lower_bound():
    rng = np.random.default_rng(8)
    poly = fp.simplex(4)
    for seed in range(5):
        rng2 = np.random.default_rng(seed)
        Q, _ = np.linalg.qr(rng2.normal(size=(4, 4)))
        A = Q @ np.diag(rng2.uniform(0.1, 2.0, 4)) @ Q.T
        A = 0.5 * (A + A.T)
        obj = fp.QuadraticObjective(A, rng2.normal(size=4))
        exact = fp.curvature_quadratic_exact(A, poly)[0]
        assert fp.curvature_sampled(obj, poly, 3000, seed) <= exact + 1e-9


# --- rays and radii ------------------------------------------------------------

def membership_bisection(x, direction, poly, t_hi=1e6):
    # independent oracle: bisect the largest feasible t along x + t*direction
    lo, hi = 0.0, t_hi
    assert poly.contains(x + lo * direction)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if poly.contains(x + mid * direction, tol=1e-12):
            lo = mid
        else:
            hi = mid
    return lo


def test_ray_boundary_intersection_simplex():
    poly = fp.simplex(3)
    x = np.array([1.0, 0.0, 0.0])
    xstar = np.full(3, 1.0 / 3.0)
    sbar = fp.ray_boundary_intersection(x, xstar, poly)
    np.testing.assert_allclose(sbar, [0.0, 0.5, 0.5], atol=1e-12)
    t_oracle = membership_bisection(x, xstar - x, poly, t_hi=10.0)
    np.testing.assert_allclose(sbar, x + t_oracle * (xstar - x), atol=1e-4)


def test_ray_boundary_intersection_box_diagonal():
    poly = fp.unit_box(2)
    sbar = fp.ray_boundary_intersection(np.zeros(2), np.array([0.25, 0.25]), poly)
    np.testing.assert_allclose(sbar, [1.0, 1.0], atol=1e-12)


def test_ray_boundary_intersection_boundary_target():
    poly = fp.simplex(3)
    x = np.full(3, 1.0 / 3.0)
    xstar = np.array([0.5, 0.5, 0.0])  # already on the boundary
    sbar = fp.ray_boundary_intersection(x, xstar, poly)
    np.testing.assert_allclose(sbar, xstar, atol=1e-12)


def test_ray_boundary_intersection_degenerate():
    poly = fp.simplex(3)
    x = np.full(3, 1.0 / 3.0)
    with pytest.raises(fp.StructuralError):
        fp.ray_boundary_intersection(x, x, poly)


def test_ray_boundary_intersection_needs_halfspaces():
    poly = fp.VPolytope(vertices=np.eye(3), kind="generic")
    with pytest.raises(fp.UnsupportedOperationError):
        fp.ray_boundary_intersection(np.array([1.0, 0, 0]), np.full(3, 1 / 3), poly)


def boundary_sampling_radius(xstar, poly, n_samples=200000, seed=0):
    # dense boundary sampling oracle for the simplex: points with a zero coord
    rng = np.random.default_rng(seed)
    d = poly.dimension
    best = np.inf
    per_facet = n_samples // d
    for zero_idx in range(d):
        w = rng.dirichlet(np.ones(d - 1), size=per_facet)
        pts = np.insert(w, zero_idx, 0.0, axis=1)
        best = min(best, float(np.min(np.linalg.norm(pts - xstar, axis=1))))
    return best


def test_interior_radius_box_center():
    assert fp.interior_radius(np.array([0.5, 0.5]), fp.unit_box(2)) == 0.5


def test_interior_radius_boundary_point():
    assert fp.interior_radius(np.array([1.0, 0.5]), fp.unit_box(2)) == 0.0
    assert fp.interior_radius(np.array([0.5, 0.5, 0.0]), fp.simplex(3)) == 0.0


def test_interior_radius_simplex_matches_boundary_sampling():
    xstar = np.array([0.5, 0.3, 0.2])
    closed_form = fp.interior_radius(xstar, fp.simplex(3))
    sampled = boundary_sampling_radius(xstar, fp.simplex(3))
    assert abs(closed_form - sampled) < 1e-4
    assert closed_form == pytest.approx(0.2 * math.sqrt(1.5), abs=1e-12)


# --- proper supports -----------------------------------------------------------

def test_supports_vertex_is_unique_singleton():
    sups = fp.enumerate_proper_supports(np.array([1.0, 0.0, 0.0]), fp.simplex(3))
    assert [s.atom_indices for s in sups] == [(0,)]


def test_supports_barycenter_unique_full():
    sups = fp.enumerate_proper_supports(np.full(3, 1 / 3), fp.simplex(3))
    assert [s.atom_indices for s in sups] == [(0, 1, 2)]
    assert sups[0].weights == pytest.approx({0: 1 / 3, 1: 1 / 3, 2: 1 / 3})


def test_supports_box_center_all_three():
    poly = fp.box([(-1, 1), (-1, 1)])
    sups = fp.enumerate_proper_supports(np.zeros(2), poly)
    found = {s.atom_indices for s in sups}
    # vertex order: (-1,-1), (-1,1), (1,-1), (1,1): the two diagonals + all four
    assert found == {(0, 3), (1, 2), (0, 1, 2, 3)}


def test_supports_reconstruct_and_weight_floor():
    rng = np.random.default_rng(12)
    poly = fp.unit_box(2)
    for _ in range(20):
        w = rng.dirichlet(np.ones(4))
        x = w @ poly.vertices
        for sup in fp.enumerate_proper_supports(x, poly):
            assert sup.min_weight() >= 1e-9
            recon = sum(sup.weights[i] * poly.vertices[i] for i in sup.atom_indices)
            np.testing.assert_allclose(recon, x, atol=1e-9)
            assert sum(sup.weights.values()) == pytest.approx(1.0, abs=1e-10)


def test_supports_cap_enforced():
    poly = fp.VPolytope(vertices=np.random.default_rng(0).normal(size=(17, 2)))
    with pytest.raises(fp.UnsupportedOperationError):
        fp.enumerate_proper_supports(np.zeros(2), poly)


# --- worst-case away vertex ----------------------------------------------------

def test_worst_case_away_at_vertex():
    ans = fp.worst_case_away_vertex(np.array([1.0, 2.0, 3.0]),
                                    np.array([1.0, 0.0, 0.0]), fp.simplex(3))
    assert ans.atom_index == 0


def test_worst_case_away_box_center_example():
    poly = fp.box([(-1, 1), (-1, 1)])
    ans = fp.worst_case_away_vertex(np.array([1.0, 0.0]), np.zeros(2), poly)
    assert ans.inner_product == pytest.approx(1.0, abs=1e-12)
    assert ans.atom_index == 2  # (1,-1): lowest index among value-1 candidates


def test_worst_case_away_zero_gradient():
    poly = fp.box([(-1, 1), (-1, 1)])
    ans = fp.worst_case_away_vertex(np.zeros(2), np.zeros(2), poly)
    assert ans.atom_index == 0


def test_worst_case_away_matches_support_enumeration():
    rng = np.random.default_rng(21)
    for poly, trials in ((fp.unit_box(2), 25), (fp.unit_box(3), 8)):
        m = poly.num_vertices
        for _ in range(trials):
            w = rng.dirichlet(np.ones(m))
            x = w @ poly.vertices
            grad = rng.normal(size=poly.dimension)
            fast = fp.worst_case_away_vertex(grad, x, poly)
            slow_idx, slow_val = brute_force_away_vertex(grad, x, poly)
            assert fast.inner_product == pytest.approx(slow_val, abs=1e-9)
            assert fast.atom_index == slow_idx


def test_worst_case_away_matches_enumeration_on_face_points():
    poly = fp.unit_box(2)
    rng = np.random.default_rng(22)
    for _ in range(10):
        t = rng.uniform(0.1, 0.9)
        x = np.array([t, 0.0])  # on an edge
        grad = rng.normal(size=2)
        fast = fp.worst_case_away_vertex(grad, x, poly)
        slow_idx, slow_val = brute_force_away_vertex(grad, x, poly)
        assert (fast.atom_index, fast.inner_product) == (slow_idx, pytest.approx(slow_val, abs=1e-12))


# --- strong convexity estimates -------------------------------------------------

def test_mu_fw_estimate_lemma_direction():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    delta = fp.interior_radius(spec.xstar, spec.poly)
    mu = geo.strong_convexity_modulus(spec.objective.A, spec.poly)
    est = fp.mu_fw_estimate(spec.objective, spec.poly, spec.xstar, 2000, 0)
    assert est >= mu * delta**2
    assert est <= fp.curvature_quadratic_exact(spec.objective.A, spec.poly)[0] + 1e-9


def test_mu_fw_estimate_vertex_optimum_collapses():
    spec = fp.generate_problem("simplex_vertex", 3, 0)
    est = fp.mu_fw_estimate(spec.objective, spec.poly, spec.xstar, 4000, 0)
    assert est < 0.1


def test_mu_fw_estimate_linear_objective_zero():
    obj = fp.QuadraticObjective(np.zeros((3, 3)), np.array([1.0, 2.0, 3.0]))
    xstar = np.array([1.0, 0.0, 0.0])
    assert fp.mu_fw_estimate(obj, fp.simplex(3), xstar, 500, 0) <= 1e-12


def test_mu_fw_estimate_rejects_non_optimal_xstar():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    with pytest.raises(fp.ConfigurationError):
        fp.mu_fw_estimate(spec.objective, spec.poly, np.array([1.0, 0.0, 0.0]), 100, 0)


def test_mu_estimates_monotone_in_samples():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    vals_fw = [fp.mu_fw_estimate(spec.objective, spec.poly, spec.xstar, n, 7)
               for n in (100, 500, 2000)]
    assert vals_fw[0] >= vals_fw[1] >= vals_fw[2]
    vals_away = [fp.mu_away_estimate(spec.objective, spec.poly, n, 7)
                 for n in (100, 500, 2000)]
    assert vals_away[0] >= vals_away[1] >= vals_away[2]


def test_mu_away_estimate_bracketed():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    est = fp.mu_away_estimate(spec.objective, spec.poly, 2000, 0)
    cf = fp.curvature_quadratic_exact(spec.objective.A, spec.poly)[0]
    pdirw = fp.pyramidal_width_estimate(spec.poly, 2000, 0)
    mu = geo.strong_convexity_modulus(spec.objective.A, spec.poly)
    assert est <= cf + 1e-9
    assert est >= mu * pdirw**2 - 1e-9


def test_mu_away_estimate_linear_objective_zero():
    obj = fp.QuadraticObjective(np.zeros((3, 3)), np.array([1.0, 2.0, 3.0]))
    assert fp.mu_away_estimate(obj, fp.simplex(3), 500, 0) <= 1e-12


# --- widths ----------------------------------------------------------------------

def test_directional_width_examples():
    assert fp.directional_width([[0.0, 0.0], [1.0, 0.0]], np.array([1.0, 0.0])) == 1.0
    square = [[0, 0], [1, 0], [0, 1], [1, 1]]
    by_hand = max(np.dot(p, [1, 1]) for p in square) / math.sqrt(2) \
        - min(np.dot(p, [1, 1]) for p in square) / math.sqrt(2)
    assert fp.directional_width(square, np.array([1.0, 1.0])) == pytest.approx(by_hand, abs=1e-15)
    assert by_hand == pytest.approx(math.sqrt(2), abs=1e-12)
    assert fp.directional_width([[0.3, 0.4]], np.array([1.0, 1.0])) == 0.0
    with pytest.raises(fp.StructuralError):
        fp.directional_width(square, np.zeros(2))


def segment_2d():
    return fp.VPolytope(vertices=np.array([[1.0, 0.0], [0.0, 1.0]]), kind="generic")


def test_pyramidal_dir_width_segment_midpoint():
    w = fp.pyramidal_dir_width(segment_2d(), np.array([-1.0, 1.0]), np.array([0.5, 0.5]))
    assert w == pytest.approx(math.sqrt(2), abs=1e-12)


def test_pyramidal_dir_width_segment_vertex_base():
    w = fp.pyramidal_dir_width(segment_2d(), np.array([-1.0, 1.0]), np.array([1.0, 0.0]))
    assert w == pytest.approx(math.sqrt(2), abs=1e-12)


def test_pyramidal_dir_width_orthogonal_direction():
    w = fp.pyramidal_dir_width(segment_2d(), np.array([1.0, 1.0]), np.array([0.5, 0.5]))
    assert w == pytest.approx(0.0, abs=1e-12)


def test_pyramidal_dir_width_identity_agreement_random():
    # both formulas are computed and compared inside; passing means agreement
    rng = np.random.default_rng(17)
    poly = fp.unit_box(2)
    for _ in range(50):
        w = rng.dirichlet(np.ones(4))
        x = w @ poly.vertices
        d = rng.normal(size=2)
        fp.pyramidal_dir_width(poly, d, x)


def test_pyramidal_width_segment_exact():
    est = fp.pyramidal_width_estimate(fp.simplex(2), 500, 0)
    assert est == pytest.approx(math.sqrt(2), abs=1e-12)


def test_pyramidal_width_even_simplex_matches_conjecture():
    est = fp.pyramidal_width_estimate(fp.simplex(4), 2000, 0)
    assert abs(est - 1.0) < 1e-3


def test_pyramidal_width_odd_simplex_two_level_value():
    # the minimizing direction pattern gives 2/sqrt(d - 1/d) for odd d
    est = fp.pyramidal_width_estimate(fp.simplex(3), 2000, 0)
    assert est == pytest.approx(2.0 / math.sqrt(3 - 1.0 / 3), abs=1e-9)


def test_pyramidal_width_unit_square_upper_bound():
    est = fp.pyramidal_width_estimate(fp.unit_box(2), 2000, 0)
    assert est <= 1.0 + 1e-9


def test_pyramidal_width_deterministic():
    a = fp.pyramidal_width_estimate(fp.simplex(3), 777, 3)
    b = fp.pyramidal_width_estimate(fp.simplex(3), 777, 3)
    assert a == b


def test_pyramidal_width_estimate_never_below_sampled_op_values():
    # the face/base/direction sweep can only tighten toward the infimum, so
    # any single evaluation of the op upper-bounds the estimate
    poly = fp.simplex(3)
    est = fp.pyramidal_width_estimate(poly, 3000, 0)
    rng = np.random.default_rng(23)
    for _ in range(30):
        w = rng.dirichlet(np.ones(3))
        x = w @ poly.vertices
        d = rng.normal(size=3)
        d -= d.mean()  # feasible from interior points of the simplex
        if np.linalg.norm(d) < 1e-9:
            continue
        assert fp.pyramidal_dir_width(poly, d, x) >= est - 1e-10


# --- faces, rates, bound checks ---------------------------------------------------

def test_enumerate_faces_simplex_all_subsets():
    faces = geo.enumerate_faces(fp.simplex(3))
    expected = set()
    for r in range(1, 4):
        expected.update(itertools.combinations(range(3), r))
    assert set(faces) == expected


def test_enumerate_faces_unit_square():
    faces = geo.enumerate_faces(fp.unit_box(2))
    sizes = sorted(len(f) for f in faces)
    assert sizes == [1, 1, 1, 1, 2, 2, 2, 2, 4]


def test_rate_constants_examples():
    est = fp.ConstantEstimates()
    est = est.with_field("cf", 2.0, "exact")
    est = est.with_field("cf_minus", 2.0, "exact")
    est = est.with_field("cf_away", 2.0, "exact")
    est = est.with_field("mu_fw", 2.0, "sampled_upper_bound")
    est = est.with_field("mu_away", 2.0, "sampled_upper_bound")
    rho_fw, rho_away = fp.rate_constants(est, 1.0)
    assert rho_fw == 0.5
    assert rho_away == 0.25
    rho_fw_half, _ = fp.rate_constants(est, 0.5)
    assert rho_fw_half == 0.25
    with pytest.raises(fp.ConfigurationError):
        fp.rate_constants(fp.ConstantEstimates(), 1.0)


def test_strong_convexity_modulus_restriction():
    # off-span curvature is invisible over the simplex
    A = np.diag([1.0, 1.0, 100.0])
    poly = fp.simplex(2)
    full = geo.strong_convexity_modulus(np.eye(2), fp.unit_box(2))
    assert full == pytest.approx(1.0, abs=1e-12)
    seg = fp.VPolytope(vertices=np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
    assert geo.strong_convexity_modulus(A, seg) == pytest.approx(1.0, abs=1e-9)
    del poly


def test_bound_checks_interior_instance_all_pass():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    est = fp.estimate_constants(spec.objective, spec.poly, spec.xstar,
                                num_samples=1500, seed=0, directions_per_face=1500)
    checks = fp.bound_checks(est, spec.objective, spec.poly, spec.xstar)
    assert len(checks) == 5
    assert all(c.verdict == "pass" for c in checks)


def test_bound_checks_lipschitz_equality_case():
    # identity quadratic over the simplex: cf = 2 and diam^2 * L = 2 exactly
    spec = fp.generate_problem("simplex_interior", 3, 0)
    est = fp.estimate_constants(spec.objective, spec.poly, spec.xstar,
                                num_samples=200, seed=0, directions_per_face=200)
    check = [c for c in fp.bound_checks(est, spec.objective, spec.poly, spec.xstar)
             if c.name == "curvature_le_diam2_lipschitz"][0]
    assert check.lhs == 2.0
    assert check.rhs == pytest.approx(2.0, abs=2e-9)
    assert check.verdict == "pass"


def test_bound_checks_linear_objective_vacuous_mu():
    obj = fp.QuadraticObjective(np.zeros((3, 3)), np.array([1.0, 2.0, 3.0]))
    poly = fp.simplex(3)
    xstar = np.array([1.0, 0.0, 0.0])
    est = fp.ConstantEstimates()
    est = est.with_field("cf", 0.0, "exact")
    est = est.with_field("cf_minus", 0.0, "exact")
    est = est.with_field("cf_away", 0.0, "exact")
    est = est.with_field("delta", 0.0, "exact")
    est = est.with_field("mu_fw", 0.0, "sampled_upper_bound")
    est = est.with_field("mu_away", 0.0, "sampled_upper_bound")
    est = est.with_field("pdirw", fp.pyramidal_width_estimate(poly, 200, 0),
                         "sampled_upper_bound")
    checks = {c.name: c for c in fp.bound_checks(est, obj, poly, xstar)}
    assert checks["mu_fw_ge_modulus_radius2"].verdict == "vacuous"
    assert checks["mu_away_ge_modulus_pyramidal2"].verdict == "vacuous"
    assert checks["mu_fw_le_curvature"].verdict == "pass"


def test_curvature_affine_invariance():
    spec = fp.generate_problem("simplex_interior", 3, 0)
    cf = fp.curvature_quadratic_exact(spec.objective.A, spec.poly)[0]
    for seed in range(5):
        M = fp.harness.random_transform(seed, 3)
        hat = fp.harness.transform_problem(spec, M)
        cf_hat = fp.curvature_quadratic_exact(hat.objective.A, hat.poly)[0]
        assert cf_hat == pytest.approx(cf, rel=1e-9)
