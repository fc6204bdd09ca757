import cmath
import math

import numpy as np
import pytest

from robinspec import caps, conformal as cf, diskmodes as dm, domains, trial
from robinspec.errors import DomainError, RefinementError
from conftest import normalized_to_double_disk_area


class TestVectorField:
    def test_radially_outward_on_circle(self, limacon_ctx):
        cap = caps.Cap(0.8, 0.25)
        for ang in (0.0, 1.1, 3.9):
            w = cmath.exp(1j * ang)
            val = trial.vector_field(limacon_ctx, cap, w)
            # V(w) = g(1) * (int f1 |f'|^2) * w for |w| = 1
            expected = limacon_ctx.v_scale * w
            assert abs(val - expected) < 1e-10 * limacon_ctx.v_scale

    def test_zero_at_normalizing_point(self, limacon_ctx):
        cap = caps.Cap(2.1, -0.4)
        w = trial.find_normalizing_point(limacon_ctx, cap)
        val = trial.vector_field(limacon_ctx, cap, w)
        assert abs(val) < trial.V_REL_TOL * limacon_ctx.v_scale

    def test_context_normalization_residual(self, limacon_ctx):
        # int (v o M_{w0}) f1 |f'|^2 = 0 is the defining property of w0
        base = cf.moebius(limacon_ctx.w0, limacon_ctx.qpts)
        vals = limacon_ctx.v(base)
        resid = abs(complex(limacon_ctx.integrate(vals * limacon_ctx.f1_q)))
        assert resid < trial.V_REL_TOL * limacon_ctx.v_scale

    def test_neumann_disk_constant_ground_state_centered(self):
        # at alpha = 0 the ground state is constant, the Hersch point sits
        # at the origin, and V at w = 0 vanishes by radial symmetry even
        # for near-full caps
        dom = domains.make_domain([1.0], name="disk")
        ctx = trial.make_trial_context(dom, 0.0, n_rings=10)
        assert abs(ctx.w0) < 1e-6
        val = trial.vector_field(ctx, caps.Cap(0.9, 0.999), 0.0 + 0.0j)
        assert abs(val) < 1e-4 * ctx.v_scale


class TestNormalizingPoint:
    def test_disk_cap_symmetry_axis(self, disk_ctx):
        # for the disk every cap's Hersch point lies on the cap's axis;
        # numerically exact when the axis is a symmetry axis of the mesh,
        # otherwise up to the quadrature's symmetry defect
        for ang in (0.0, math.pi / 6.0, math.pi / 2.0):
            w = trial.find_normalizing_point(disk_ctx, caps.Cap(ang, 0.45))
            p = cmath.exp(1j * ang)
            # limited by the |V| stopping tolerance, not the symmetry
            assert abs((w / p).imag) < 5e-5
        w = trial.find_normalizing_point(disk_ctx, caps.Cap(0.7, 0.45))
        assert abs((w / cmath.exp(0.7j)).imag) < 5e-3

    def test_large_cap_recenters_to_zero(self, limacon_ctx):
        w = trial.find_normalizing_point(limacon_ctx, caps.Cap(1.0, 0.999))
        assert abs(w) < 0.05

    def test_small_cap_recenters_to_zero(self, limacon_ctx):
        w = trial.find_normalizing_point(limacon_ctx, caps.Cap(1.0, -0.999))
        assert abs(w) < 0.05

    def test_continuity_in_cap(self, limacon_ctx):
        base = trial.find_normalizing_point(limacon_ctx, caps.Cap(0.9, 0.3))
        moved = trial.find_normalizing_point(
            limacon_ctx, caps.Cap(0.9 + 1e-4, 0.3 + 1e-4), w_start=base
        )
        assert abs(moved - base) < 1e-2

    def test_disk_context_hersch_point_is_origin(self, disk_ctx):
        assert abs(disk_ctx.w0) < 1e-6


class TestPhi:
    def test_large_cap_limit_is_zeta(self, limacon_ctx):
        val = trial.phi(limacon_ctx, caps.Cap(1.7, 0.999))
        zeta = limacon_ctx.zeta
        assert abs(val - zeta) < 0.05 * abs(zeta)

    def test_small_cap_limit_is_reflected_zeta(self, limacon_ctx):
        for ang in (0.4, 2.0):
            val = trial.phi(limacon_ctx, caps.Cap(ang, -0.999))
            p = cmath.exp(1j * ang)
            expected = -p * p * limacon_ctx.zeta.conjugate()
            assert abs(val - expected) < 0.05 * abs(limacon_ctx.zeta)

    def test_disk_zeta_nonzero_under_real_eigenfunctions(self, disk_ctx):
        # with a real second eigenfunction ~ g_h(r) cos(theta) the bilinear
        # pairing with g(r) e^{i theta} is pi*(g, g_h) != 0, so even the
        # disk carries a genuinely two-sided homotopy (Case 2)
        assert disk_ctx.case_two()
        assert abs(disk_ctx.zeta) > 0.1 * disk_ctx.zeta_scale


class TestWindingNumber:
    def test_constant_loop(self):
        assert trial.winding_number(np.full(16, 0.3 + 0.1j)) == 0

    def test_reflected_loop_winds_twice(self):
        zeta = 0.4 - 0.2j
        p = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False))
        assert trial.winding_number(-p * p * np.conj(zeta)) == 2

    def test_rotation_loop_winds_once(self):
        zeta = 0.4 - 0.2j
        p = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False))
        assert trial.winding_number(p * zeta) == 1

    def test_refinement_error_on_coarse_loop(self):
        with pytest.raises(RefinementError):
            trial.winding_number([1.0, -1.0, 1.0, -1.0])

    def test_rejects_zero_sample(self):
        with pytest.raises(RefinementError):
            trial.winding_number([1.0, 0.0, -1.0])

    def test_phi_homotopy_endpoints(self, limacon_ctx):
        lo = trial.phi_loop(limacon_ctx, -0.95, 32)
        hi = trial.phi_loop(limacon_ctx, 0.95, 32)
        assert trial.winding_number(lo) == 2
        assert trial.winding_number(hi) == 0


class TestOrthogonalCap:
    def test_locates_cap_with_both_orthogonalities(self, limacon_ctx):
        cap, w, val = trial.find_orthogonal_cap(limacon_ctx, return_details=True)
        assert abs(val) < trial.PHI_REL_TOL * abs(limacon_ctx.zeta)
        r1, r2 = trial.orthogonality_residuals(limacon_ctx, cap, w)
        assert r1 < 1e-6 * limacon_ctx.v_scale
        assert r2 < 1e-6 * limacon_ctx.zeta_scale

    def test_case_one_precondition(self, disk_ctx):
        # a context whose zeta is numerically zero routes to Case 1
        import dataclasses

        degenerate = dataclasses.replace(disk_ctx, zeta=0.0 + 0.0j)
        assert not degenerate.case_two()
        with pytest.raises(DomainError):
            trial.find_orthogonal_cap(degenerate)


class TestRayleighPieces:
    def test_numerator_vanishes_at_minus_four_pi(self):
        dom = normalized_to_double_disk_area(domains.make_domain([1.0, 0.3], name="limacon"))
        ctx = trial.make_trial_context(dom, -4.0 * math.pi, n_rings=10)
        num, den = trial.trial_rayleigh_pieces(ctx, caps.Cap(0.3, 0.2), 0.1 + 0.0j)
        # 2 * (2*pi) + (-4*pi) * 1 with g(r) = r
        assert abs(num) < 1e-9
        assert den > 0.0

    def test_numerator_identity(self, limacon_ctx):
        cap = caps.Cap(1.0, 0.3)
        w = trial.find_normalizing_point(limacon_ctx, cap)
        num, _ = trial.trial_rayleigh_pieces(limacon_ctx, cap, w)
        _, mass, _ = limacon_ctx.energies
        lam2 = dm.disk_lambda2(limacon_ctx.disk_param)
        assert abs(num - 2.0 * lam2 * mass) / abs(num) < 1e-6

    def test_denominator_exceeds_area_comparison(self, limacon_ctx):
        # two-to-one comparison: int |u|^2 > (A/pi) int |v|^2, with A = 2*pi
        cap = caps.Cap(1.0, 0.3)
        w = trial.find_normalizing_point(limacon_ctx, cap)
        _, den = trial.trial_rayleigh_pieces(limacon_ctx, cap, w)
        _, mass, _ = limacon_ctx.energies
        assert den > 2.0 * mass

    def test_quotient_upper_bounds_lambda3(self, limacon_ctx):
        cap, w, _ = trial.find_orthogonal_cap(limacon_ctx, return_details=True)
        num, den = trial.trial_rayleigh_pieces(limacon_ctx, cap, w)
        lam3 = limacon_ctx.eigenvalues[2]
        assert num / den >= lam3 - 1e-6

    def test_boundary_modulus_constant(self, limacon_ctx):
        cap = caps.Cap(2.3, -0.35)
        w = trial.find_normalizing_point(limacon_ctx, cap)
        assert trial.boundary_modulus_error(limacon_ctx, cap, w) < 1e-8

    def test_case_one_pieces_on_disk(self, disk_ctx):
        num, den = trial.case_one_pieces(disk_ctx)
        dirichlet, _, g1sq = disk_ctx.energies
        assert abs(num - (dirichlet + disk_ctx.alpha * g1sq)) < 1e-12
        # den is int |v o M_{w0}|^2 by mesh quadrature; compare against the
        # same quadrature of |v|^2 so the one-to-one bound is like-for-like
        mass_quad = float(
            np.real(disk_ctx.integrate(np.abs(disk_ctx.v(disk_ctx.qpts)) ** 2))
        )
        assert den >= mass_quad * (1.0 - 1e-9)
        assert num / den >= disk_ctx.eigenvalues[2] - 1e-6


class TestModeSymmetry:
    def test_v_commutes_with_reflections(self, disk_ctx, rng):
        z = rng.uniform(-0.6, 0.6, 20) + 1j * rng.uniform(-0.6, 0.6, 20)
        for ang in (0.0, 0.9, 2.2):
            q = cmath.exp(1j * ang)
            lhs = disk_ctx.v(cf.reflect(q, z))
            rhs = cf.reflect(q, disk_ctx.v(z))
            assert np.max(np.abs(lhs - rhs)) < 1e-12


class TestAreaComparisonLemma:
    def test_radial_mean_comparison(self, gallery, mesh20):
        # (1/pi) int_D g^2 dA <= (1/A) int_D g^2 |f'|^2 dA, strict off the disk
        qpts, qwts, _ = mesh20.interior_quadrature()
        g2 = dm.disk_g(-0.5, np.abs(qpts)) ** 2
        lhs = np.sum(qwts * g2) / mesh20.area()
        for d in gallery:
            weighted = np.sum(qwts * g2 * np.abs(d.dmap(qpts)) ** 2)
            rhs = weighted / (d.area * (mesh20.area() / math.pi))
            if d.name == "disk":
                assert abs(rhs - lhs) < 1e-12
            else:
                assert rhs > lhs * (1.0 + 1e-3)


def test_context_requires_nonpositive_alpha():
    dom = domains.make_domain([1.0], name="disk")
    with pytest.raises(DomainError):
        trial.make_trial_context(dom, 0.5, n_rings=8)
