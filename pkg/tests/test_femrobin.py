import math

import numpy as np
import pytest
import scipy.linalg
import scipy.sparse

from robinspec import diskmodes as dm, femrobin as fem
from robinspec.errors import DomainError, WeightBoundError


class TestMesh:
    def test_rejects_single_ring(self):
        with pytest.raises(DomainError):
            fem.build_disk_mesh(1)

    def test_small_mesh_counts(self):
        mesh = fem.build_disk_mesh(2)
        assert mesh.n_vertices == 19  # 1 + 6 + 12
        assert mesh.triangles.shape[0] == 24
        assert np.all(mesh.triangle_areas() > 0.0)

    def test_vertex_count_formula(self):
        for n in (3, 7, 12):
            mesh = fem.build_disk_mesh(n)
            assert mesh.n_vertices == 1 + 3 * n * (n + 1)
            assert mesh.triangles.shape[0] == 6 * n * n

    def test_area_deficit_order(self):
        for n in (10, 20):
            mesh = fem.build_disk_mesh(n)
            rel = abs(mesh.area() - math.pi) / math.pi
            assert rel < 2.0 / n**2

    def test_boundary_is_single_cycle_on_circle(self):
        mesh = fem.build_disk_mesh(5)
        edges = mesh.boundary_edges
        on_circle = np.flatnonzero(np.abs(np.abs(mesh.vertices) - 1.0) < 1e-12)
        assert sorted(edges[:, 0]) == sorted(on_circle)
        # edges chain into one closed cycle
        succ = dict(edges)
        node = edges[0, 0]
        seen = set()
        for _ in range(len(edges)):
            seen.add(node)
            node = succ[node]
        assert node == edges[0, 0]
        assert len(seen) == len(edges)

    def test_quadrature_partition_of_unity(self):
        mesh = fem.build_disk_mesh(6)
        pts, wts, interp = mesh.interior_quadrature()
        ones = interp @ np.ones(mesh.n_vertices)
        assert np.allclose(ones, 1.0)
        assert abs(wts.sum() - mesh.area()) < 1e-12
        bpts, bwts, binterp = mesh.boundary_quadrature()
        assert np.allclose(binterp @ np.ones(mesh.n_vertices), 1.0)
        # polygonal boundary length below 2*pi, converging to it
        assert 2.0 * math.pi * 0.99 < bwts.sum() < 2.0 * math.pi

    def test_export_format(self, tmp_path):
        mesh = fem.build_disk_mesh(3)
        path = tmp_path / "mesh.txt"
        fem.export_mesh(mesh, path)
        lines = path.read_text().strip().splitlines()
        kinds = [ln.split()[0] for ln in lines]
        assert kinds.count("v") == mesh.n_vertices
        assert kinds.count("t") == mesh.triangles.shape[0]
        assert kinds.count("b") == mesh.boundary_edges.shape[0]
        first = lines[0].split()
        assert complex(float(first[1]), float(first[2])) == mesh.vertices[0]


class TestAssembly:
    def test_stiffness_kernel_contains_constants(self, mesh12):
        K, M = fem.assemble(fem.constant_problem(0.0), mesh12)
        row_sums = np.asarray(K.sum(axis=1)).ravel()
        assert np.max(np.abs(row_sums)) < 1e-12

    def test_neumann_ground_state_is_zero(self, mesh12):
        res = fem.solve_problem(fem.constant_problem(0.0), mesh12, 1)
        assert abs(res.eigenvalues[0]) < 1e-8

    def test_total_mass_equals_weighted_area(self, mesh12):
        K, M = fem.assemble(fem.constant_problem(0.0), mesh12)
        ones = np.ones(mesh12.n_vertices)
        assert abs(ones @ (M @ ones) - mesh12.area()) < 1e-12

    def test_unit_mass_matrix_matches_exact_p1_integrals(self):
        # with omega = 1 the 3-point rule integrates P1*P1 exactly, so the
        # diagonal entry at a vertex is sum(area/6) over incident triangles
        mesh = fem.build_disk_mesh(3)
        _, M = fem.assemble(fem.constant_problem(0.0), mesh)
        Md = M.toarray()
        areas = mesh.triangle_areas()
        for vertex in (0, 5, 11):
            incident = [t for t, tri in enumerate(mesh.triangles) if vertex in tri]
            exact = sum(areas[t] / 6.0 for t in incident)
            assert abs(Md[vertex, vertex] - exact) < 1e-14

    def test_matrices_symmetric_and_mass_spd(self, mesh12):
        K, M = fem.assemble(fem.constant_problem(-1.0), mesh12)
        assert abs(K - K.T).max() < 1e-13
        assert abs(M - M.T).max() < 1e-13
        scipy.linalg.cholesky(M.toarray())

    def test_weight_bound_violation(self, mesh12):
        bad = fem.WeightedRobinProblem(
            rho=lambda z: np.full(np.shape(z), 10.0),
            omega=lambda z: np.ones(np.shape(z)),
            beta=lambda z: np.zeros(np.shape(z)),
            bound=2.0,
        )
        with pytest.raises(WeightBoundError):
            fem.assemble(bad, mesh12)

    def test_bound_must_exceed_one(self):
        with pytest.raises(WeightBoundError):
            fem.WeightedRobinProblem(
                rho=lambda z: np.ones(np.shape(z)),
                omega=lambda z: np.ones(np.shape(z)),
                beta=lambda z: np.zeros(np.shape(z)),
                bound=1.0,
            )


class TestSolve:
    def test_disk_robin_minus_one_has_vanishing_lambda2(self):
        mesh = fem.build_disk_mesh(25)
        res = fem.solve_problem(fem.constant_problem(-1.0), mesh, 2)
        assert abs(res.eigenvalues[1]) < 0.02

    def test_disk_neumann_lambda2_against_closed_form(self):
        mesh = fem.build_disk_mesh(25)
        res = fem.solve_problem(fem.constant_problem(0.0), mesh, 2)
        exact = dm.disk_lambda2(0.0)
        assert abs(res.eigenvalues[1] - exact) / exact < 0.005

    def test_disk_multiplicity(self, mesh20):
        res = fem.solve_problem(fem.constant_problem(-0.5), mesh20, 3)
        lam2, lam3 = res.eigenvalues[1], res.eigenvalues[2]
        assert abs(lam3 - lam2) / abs(lam2) < 1e-3

    def test_eigenfunctions_mass_orthonormal(self, mesh12):
        prob = fem.constant_problem(-0.5)
        K, M = fem.assemble(prob, mesh12)
        vals, vecs = fem.solve_lowest(K, M, 4)
        gram = vecs @ (M @ vecs.T)
        assert np.max(np.abs(gram - np.eye(4))) < 1e-8

    def test_sign_convention(self, mesh12):
        res = fem.solve_problem(fem.constant_problem(-0.5), mesh12, 3)
        for vec in res.eigenfunctions:
            assert vec[np.argmax(np.abs(vec))] > 0.0

    def test_sparse_path_matches_dense(self, mesh12):
        prob = fem.constant_problem(-0.8)
        K, M = fem.assemble(prob, mesh12)
        dense_vals, _ = fem.solve_lowest(K, M, 4)
        sparse_vals, svecs = fem.solve_lowest(K, M, 4, sigma=-50.0)
        assert np.max(np.abs(dense_vals - sparse_vals)) < 1e-9
        gram = svecs @ (M @ svecs.T)
        assert np.max(np.abs(gram - np.eye(4))) < 1e-8

    def test_mesh_convergence_second_order(self):
        exact = dm.disk_lambda2(0.0)
        errs = []
        for n in (15, 30):
            res = fem.solve_problem(fem.constant_problem(0.0), fem.build_disk_mesh(n), 2)
            errs.append(abs(res.eigenvalues[1] - exact))
        assert errs[0] / errs[1] >= 3.0

    def test_eigenvalue_monotonicity_in_beta(self, mesh12):
        def solve_with_beta(c):
            return fem.solve_problem(fem.constant_problem(c), mesh12, 3).eigenvalues

        low = solve_with_beta(-1.0)
        high = solve_with_beta(-0.25)
        assert np.all(high >= low - 1e-12)

    def test_coercivity_margin(self, mesh12, gallery):
        from robinspec import domains

        for dom in gallery:
            prob = domains.pullback_problem(dom, -4.0 * math.pi)
            K, M = fem.assemble(prob, mesh12)
            c = 10.0 * prob.bound**2
            scipy.linalg.cholesky((K + c * M).toarray())

    def test_too_many_eigenpairs_rejected(self, mesh12):
        K, M = fem.assemble(fem.constant_problem(0.0), mesh12)
        with pytest.raises(DomainError):
            fem.solve_lowest(K, M, mesh12.n_vertices + 1)

    def test_indefinite_mass_signaled(self, mesh12):
        K, M = fem.assemble(fem.constant_problem(0.0), mesh12)
        broken = M - 2.0 * scipy.sparse.identity(mesh12.n_vertices, format="csr")
        with pytest.raises(WeightBoundError):
            fem.solve_lowest(K, broken, 2)


class TestRayleigh:
    def test_eigenpair_consistency(self, mesh12):
        prob = fem.constant_problem(-0.5)
        res = fem.solve_problem(prob, mesh12, 3)
        for lam, vec in zip(res.eigenvalues, res.eigenfunctions):
            q = fem.rayleigh_quotient(prob, mesh12, vec)
            assert abs(q - lam) <= 1e-10 * max(1.0, abs(lam))

    def test_constant_field_neumann(self, mesh12):
        q = fem.rayleigh_quotient(fem.constant_problem(0.0), mesh12, np.ones(mesh12.n_vertices))
        assert abs(q) < 1e-12

    def test_variational_lower_bound(self, mesh12, rng):
        prob = fem.constant_problem(-0.5)
        res = fem.solve_problem(prob, mesh12, 1)
        for _ in range(5):
            u = rng.standard_normal(mesh12.n_vertices)
            assert fem.rayleigh_quotient(prob, mesh12, u) >= res.eigenvalues[0] - 1e-9

    def test_zero_field_rejected(self, mesh12):
        with pytest.raises(DomainError):
            fem.rayleigh_quotient(
                fem.constant_problem(0.0), mesh12, np.zeros(mesh12.n_vertices)
            )
