"""Weighted Robin eigenproblems on a triangulated unit disk.

P1 elements on a structured hexagonal-polar mesh.  The assembled forms are

    K[u,v] = int rho grad(u).grad(v) dA + int_boundary beta u v ds
    M[u,v] = int omega u v dA

with 3-point interior and 2-point edge Gauss quadrature.  Weight fields
are vectorized callables z -> values on complex coordinate arrays and must
respect the bounds 1/a <= rho, omega <= a and |beta| <= a.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .errors import DomainError, WeightBoundError

__all__ = [
    "Mesh",
    "WeightedRobinProblem",
    "SpectrumResult",
    "build_disk_mesh",
    "assemble",
    "solve_lowest",
    "solve_problem",
    "rayleigh_quotient",
    "export_mesh",
]

#: dense generalized eigensolver is used up to this many vertices
DENSE_LIMIT = 5000

# 3-point triangle rule (degree 2): barycentric (2/3,1/6,1/6) cyclic.
_TRI_BARY = np.array(
    [[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0],
     [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
     [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0]]
)
# 2-point edge Gauss rule (degree 3): parameters on [0,1].
_EDGE_PTS = np.array([0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0)])


@dataclasses.dataclass(frozen=True, eq=False)
class Mesh:
    """Triangulation of the unit disk.

    vertices: complex coordinates, shape (nv,)
    triangles: CCW vertex index triples, shape (nt, 3)
    boundary_edges: CCW-oriented index pairs on |z| = 1, shape (nb, 2)
    h: maximum edge length
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    h: float

    @property
    def n_vertices(self) -> int:
        return self.vertices.size

    def triangle_areas(self):
        v = self.vertices[self.triangles]
        e1 = v[:, 1] - v[:, 0]
        e2 = v[:, 2] - v[:, 0]
        return 0.5 * (e1.real * e2.imag - e1.imag * e2.real)

    def area(self) -> float:
        return float(self.triangle_areas().sum())

    def interior_quadrature(self):
        """(points, weights, interp) for the 3-point rule on every triangle.

        ``interp`` is a sparse (nq, nv) matrix evaluating a P1 nodal field
        at the quadrature points; ``weights`` sum to the mesh area.
        """
        areas = self.triangle_areas()
        v = self.vertices[self.triangles]  # (nt, 3)
        pts = (_TRI_BARY[None, :, :] @ v[:, :, None])[:, :, 0]  # (nt, 3)
        wts = np.repeat(areas / 3.0, 3)
        nt = self.triangles.shape[0]
        rows = np.repeat(np.arange(3 * nt), 3)
        cols = np.tile(self.triangles, (1, 3)).reshape(-1)
        vals = np.tile(_TRI_BARY.reshape(-1), nt)
        interp = scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(3 * nt, self.n_vertices)
        )
        return pts.reshape(-1), wts, interp

    def boundary_quadrature(self):
        """(points, weights, interp) for the 2-point rule on boundary edges."""
        a = self.vertices[self.boundary_edges[:, 0]]
        b = self.vertices[self.boundary_edges[:, 1]]
        lengths = np.abs(b - a)
        pts = a[:, None] + _EDGE_PTS[None, :] * (b - a)[:, None]
        wts = np.repeat(lengths / 2.0, 2)
        nb = self.boundary_edges.shape[0]
        rows = np.repeat(np.arange(2 * nb), 2)
        cols = np.repeat(self.boundary_edges, 2, axis=0).reshape(-1)
        vals = np.stack(
            [1.0 - _EDGE_PTS, _EDGE_PTS], axis=1
        ).reshape(-1)
        vals = np.tile(vals, nb)
        interp = scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(2 * nb, self.n_vertices)
        )
        return pts.reshape(-1), wts, interp


def build_disk_mesh(n_rings) -> Mesh:
    """Structured polar triangulation: ring k holds 6k vertices at radius
    k/n_rings, giving 1 + 3 n (n+1) vertices and 6 n^2 triangles."""
    if n_rings < 2:
        raise DomainError("build_disk_mesh requires n_rings >= 2")
    n = int(n_rings)
    verts = [0.0 + 0.0j]
    ring_start = [0]  # index of first vertex of ring k (ring 0 = center)
    for k in range(1, n + 1):
        ring_start.append(len(verts))
        angles = 2.0 * np.pi * np.arange(6 * k) / (6 * k)
        verts.extend((k / n) * np.exp(1j * angles))
    vertices = np.asarray(verts, dtype=complex)

    triangles = []
    # center fan
    s = ring_start[1]
    for j in range(6):
        triangles.append((s + j, s + (j + 1) % 6, 0))
    # annulus zippers: advance whichever ring has the smaller next angle
    for k in range(2, n + 1):
        m_in, m_out = 6 * (k - 1), 6 * k
        s_in, s_out = ring_start[k - 1], ring_start[k]
        i = j = 0
        while i < m_in or j < m_out:
            ang_in = 2.0 * np.pi * (i + 1) / m_in if i < m_in else np.inf
            ang_out = 2.0 * np.pi * (j + 1) / m_out if j < m_out else np.inf
            if ang_out <= ang_in:
                triangles.append(
                    (s_out + j % m_out, s_out + (j + 1) % m_out, s_in + i % m_in)
                )
                j += 1
            else:
                triangles.append(
                    (s_out + j % m_out, s_in + (i + 1) % m_in, s_in + i % m_in)
                )
                i += 1
    triangles = np.asarray(triangles, dtype=np.int64)

    m = 6 * n
    first = ring_start[n]
    boundary = np.column_stack(
        [first + np.arange(m), first + (np.arange(m) + 1) % m]
    ).astype(np.int64)

    v = vertices[triangles]
    edge_lengths = np.abs(np.stack([v[:, 1] - v[:, 0], v[:, 2] - v[:, 1], v[:, 0] - v[:, 2]]))
    mesh = Mesh(vertices, triangles, boundary, float(edge_lengths.max()))
    if np.any(mesh.triangle_areas() <= 0.0):
        raise DomainError("mesh construction produced a non-CCW triangle")
    return mesh


@dataclasses.dataclass(frozen=True, eq=False)
class WeightedRobinProblem:
    """Weight fields for the Robin form: interior rho and omega, boundary
    beta, all bounded by ``bound`` as 1/a <= rho, omega <= a, |beta| <= a."""

    rho: object
    omega: object
    beta: object
    bound: float

    def __post_init__(self):
        if not self.bound > 1.0:
            raise WeightBoundError("weight bound a must exceed 1")


def constant_problem(alpha, bound=None) -> WeightedRobinProblem:
    """rho = omega = 1 with constant boundary weight alpha."""
    if bound is None:
        bound = max(2.0, abs(alpha)) + 1.0
    return WeightedRobinProblem(
        rho=lambda z: np.ones(np.shape(z)),
        omega=lambda z: np.ones(np.shape(z)),
        beta=lambda z: np.full(np.shape(z), float(alpha)),
        bound=bound,
    )


def _check_bounds(problem, rho_q, omega_q, beta_q):
    a = problem.bound
    tol = 1e-12 * a
    if np.any(rho_q < 1.0 / a - tol) or np.any(rho_q > a + tol):
        raise WeightBoundError("rho leaves [1/a, a] at a quadrature node")
    if np.any(omega_q < 1.0 / a - tol) or np.any(omega_q > a + tol):
        raise WeightBoundError("omega leaves [1/a, a] at a quadrature node")
    if np.any(np.abs(beta_q) > a + tol):
        raise WeightBoundError("|beta| exceeds a at a quadrature node")


def assemble(problem, mesh):
    """Assemble (K, M) sparse CSR matrices for the weighted Robin form."""
    tri = mesh.triangles
    v = mesh.vertices[tri]
    x = v.real
    y = v.imag
    areas = mesh.triangle_areas()
    nv = mesh.n_vertices

    qpts, _, _ = mesh.interior_quadrature()
    rho_q = np.asarray(problem.rho(qpts), dtype=float).reshape(-1, 3)
    omega_q = np.asarray(problem.omega(qpts), dtype=float).reshape(-1, 3)
    bpts, _, _ = mesh.boundary_quadrature()
    beta_q = np.asarray(problem.beta(bpts), dtype=float).reshape(-1, 2)
    _check_bounds(problem, rho_q, omega_q, beta_q)

    # P1 gradients: grad phi_i = (b_i, c_i) / (2A), cyclic differences.
    b = np.stack([x[:, 1] - x[:, 2], x[:, 2] - x[:, 0], x[:, 0] - x[:, 1]], axis=1)
    c = np.stack([y[:, 2] - y[:, 1], y[:, 0] - y[:, 2], y[:, 1] - y[:, 0]], axis=1)
    # note b holds the x-differences entering c_i and vice versa; the
    # product below only needs the symmetric combination
    grad_dot = b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]
    rho_mean = rho_q.mean(axis=1)
    k_local = grad_dot * (rho_mean / (4.0 * areas))[:, None, None]

    # mass with the 3-point rule: A/3 * Phi^T diag(omega_q) Phi
    m_local = np.einsum(
        "qi,tq,qj->tij", _TRI_BARY, omega_q, _TRI_BARY
    ) * (areas / 3.0)[:, None, None]

    rows = np.repeat(tri, 3, axis=1).reshape(-1)
    cols = np.tile(tri, (1, 3)).reshape(-1)
    K = scipy.sparse.coo_matrix((k_local.reshape(-1), (rows, cols)), shape=(nv, nv))
    M = scipy.sparse.coo_matrix((m_local.reshape(-1), (rows, cols)), shape=(nv, nv))

    # boundary term on straight edges, 2-point Gauss
    be = mesh.boundary_edges
    pa = mesh.vertices[be[:, 0]]
    pb = mesh.vertices[be[:, 1]]
    lengths = np.abs(pb - pa)
    phi = np.stack([1.0 - _EDGE_PTS, _EDGE_PTS], axis=1)  # (2 pts, 2 basis)
    b_local = np.einsum("qi,eq,qj->eij", phi, beta_q, phi) * (lengths / 2.0)[:, None, None]
    rows_b = np.repeat(be, 2, axis=1).reshape(-1)
    cols_b = np.tile(be, (1, 2)).reshape(-1)
    B = scipy.sparse.coo_matrix((b_local.reshape(-1), (rows_b, cols_b)), shape=(nv, nv))

    K = (K + B).tocsr()
    M = M.tocsr()
    return K, M


@dataclasses.dataclass(frozen=True, eq=False)
class SpectrumResult:
    """Lowest generalized eigenpairs, ascending, omega-mass-orthonormal."""

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray  # shape (k, nv)
    mesh: Mesh
    problem: WeightedRobinProblem


def _fix_signs(vecs):
    idx = np.argmax(np.abs(vecs), axis=1)
    signs = np.sign(vecs[np.arange(vecs.shape[0]), idx])
    signs[signs == 0.0] = 1.0
    return vecs * signs[:, None]


def solve_lowest(K, M, k, sigma=None):
    """k smallest eigenpairs of K u = lambda M u.

    Dense Cholesky-based reduction up to DENSE_LIMIT vertices; above that
    (or when ``sigma`` is given) shift-inverted Lanczos with the supplied
    spectral floor.  Eigenvectors come back M-orthonormal with the
    largest-magnitude component positive.
    """
    n = K.shape[0]
    if k > n:
        raise DomainError("cannot request more eigenpairs than the dimension")
    use_dense = sigma is None and n <= DENSE_LIMIT
    try:
        if use_dense:
            kd = K.toarray() if scipy.sparse.issparse(K) else np.asarray(K)
            md = M.toarray() if scipy.sparse.issparse(M) else np.asarray(M)
            vals, vecs = scipy.linalg.eigh(kd, md, subset_by_index=(0, k - 1))
        else:
            if sigma is None:
                # crude Gershgorin floor: lambda >= -max row sum / min mass diag
                row = np.abs(K).sum(axis=1).max()
                sigma = -float(row / M.diagonal().min()) - 1.0
            Ks = scipy.sparse.csc_matrix(K)
            Ms = scipy.sparse.csc_matrix(M)
            v0 = np.ones(n)
            vals, vecs = scipy.sparse.linalg.eigsh(
                Ks, k=k, M=Ms, sigma=sigma, which="LM", v0=v0
            )
            order = np.argsort(vals)
            vals = vals[order]
            vecs = vecs[:, order]
    except (scipy.linalg.LinAlgError, RuntimeError) as exc:
        raise WeightBoundError(
            "generalized eigensolve failed; mass matrix may be indefinite"
        ) from exc
    vecs = _fix_signs(vecs.T)
    return vals, vecs


def solve_problem(problem, mesh, k, sigma=None) -> SpectrumResult:
    """Assemble and solve, returning a :class:`SpectrumResult`."""
    K, M = assemble(problem, mesh)
    vals, vecs = solve_lowest(K, M, k, sigma=sigma)
    return SpectrumResult(vals, vecs, mesh, problem)


def rayleigh_quotient(problem, mesh, vertex_values):
    """(u^T K u) / (u^T M u) for a nodal field u on the mesh."""
    u = np.asarray(vertex_values, dtype=float)
    K, M = assemble(problem, mesh)
    den = float(u @ (M @ u))
    if den <= 0.0 or not np.isfinite(den):
        raise DomainError("Rayleigh quotient of a (numerically) zero field")
    return float(u @ (K @ u)) / den


def export_mesh(mesh, path):
    """Write the mesh as plain text: 'v re im', 't i j k', 'b i j' lines."""
    with open(path, "w") as fh:
        for z in mesh.vertices:
            fh.write(f"v {float(z.real)!r} {float(z.imag)!r}\n")
        for i, j, k in mesh.triangles:
            fh.write(f"t {i} {j} {k}\n")
        for i, j in mesh.boundary_edges:
            fh.write(f"b {i} {j}\n")
