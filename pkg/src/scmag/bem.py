"""Boundary-element solver for a Meissner-state wire of finite thickness.

Outside the wire the field splits as B = -grad(psi) + curl(A e_y). The
scalar potential carries the response to a homogeneous bias (with
psi -> -r.B0 at infinity) and the vector potential carries the transport
current. Both obey the 2D Laplace equation, solved through the boundary
integral representation with Green function G = -log(r)/(2 pi):

    M(r) = M_ext(r) - oint da(x) [ G dM/dn - dG/dn M ]

The surface condition n.B = 0 is enforced by construction: dpsi/dn = 0 and
A = A0 constant on the surface. Collocating at panel midpoints, the
singular self-terms are

    int_panel G dM/dn da   ~ (da / 2 pi) (1 - log(da/2)) dM/dn
    int_panel dG/dn M da   ~ (1/2 + dphi/(4 pi)) M,   dphi = da / R_curv

where the 1/2 is the exterior jump of the double layer and dphi/(4 pi) the
curvature correction (zero on flat panels). The vector problem is solved
with A0 = 1 and rescaled so that Ampere's law -oint dA/dn da = mu0 I holds
for the requested current.

Geometry for the log-kernel system is nondimensionalized by the perimeter;
this keeps the single-layer system away from the logarithmic-capacity
singularity that would occur for shapes of unit transfinite diameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InteriorPointError, SingularSystemError, TooCloseToSurfaceError
from .geometry import SurfaceMesh, distance_to_boundary, point_in_polygon
from .physical import MU0
from .sheet import FieldSample

NEAR_PANEL_FACTOR = 8.0  # within this many panel lengths of the boundary the
# evaluation switches from the midpoint rule to Gauss panel integration
SUPER_NEAR_FACTOR = 2.0  # panels this close get adaptive sub-panel refinement
SURFACE_CUTOFF_FACTOR = 0.1  # of the minimum panel length


@dataclass(frozen=True)
class BemProblem:
    mesh: SurfaceMesh
    bias: tuple[float, float] = (0.0, 0.0)
    current: float = 0.0


@dataclass(frozen=True)
class BemSolution:
    """Surface unknowns of the two subproblems.

    ``dadn_surface`` is the raw normal derivative solved with A0 = 1; the
    physical values (satisfying Ampere's law for the requested current) are
    ``dadn_surface * current_scale``.
    """

    problem: BemProblem
    psi_surface: np.ndarray
    dadn_surface: np.ndarray
    a0: float
    current_scale: float
    _min_length: float = field(default=0.0, repr=False)

    @property
    def dadn_physical(self) -> np.ndarray:
        return self.dadn_surface * self.current_scale

    @property
    def mesh(self) -> SurfaceMesh:
        return self.problem.mesh

    @cached_property
    def _psi_slope(self) -> np.ndarray:
        return _chain_slopes(self.psi_surface, self.mesh.lengths)

    @cached_property
    def _fine_samples(self):
        """Gauss samples and surface densities for near-boundary evaluation.

        All panels sampled with a fixed 12-point rule; densities are the
        quadratic midpoint reconstructions evaluated at the sample offsets.
        """
        mesh = self.mesh
        n = mesh.n_panels
        k = len(_GAUSS_NODES)
        pts = np.empty((n, k, 2))
        nrm = np.empty((n, k, 2))
        wts = np.empty((n, k))
        dpsi = np.zeros((n, k))
        dq = np.zeros((n, k))
        q = self.dadn_physical
        for j in range(n):
            pts[j], nrm[j], wts[j], u = _panel_samples(mesh, j, 1)
            if self.psi_surface.any():
                dpsi[j] = _quadratic_density(self.psi_surface, mesh.lengths, j, u)
            if q.any():
                dq[j] = _quadratic_density(q, mesh.lengths, j, u)
        return pts.reshape(-1, 2), nrm.reshape(-1, 2), wts.ravel(), dpsi.ravel(), dq.ravel()


def curvature_self_coefficient(da: float, curvature_radius: float) -> float:
    """Diagonal double-layer coefficient 1/2 + dphi/(4 pi), dphi = da/R."""
    if not np.isfinite(curvature_radius):
        return 0.5
    return 0.5 + da / curvature_radius / (4 * np.pi)


def log_self_term(da: float) -> float:
    """Single-layer self integral (da / 2 pi) (1 - log(da/2))."""
    return da / (2 * np.pi) * (1.0 - np.log(da / 2.0))


def assemble_scalar(problem: BemProblem) -> tuple[np.ndarray, np.ndarray]:
    """Collocation system for the surface scalar potential psi.

    Row s:  (1/2 + dphi_s/4pi) psi_s - sum_{j != s} da_j dG/dn_j(x_s) psi_j
            = -x_s . B0
    """
    mesh = problem.mesh
    mid, nrm, da = mesh.midpoints, mesh.normals, mesh.lengths
    n = mesh.n_panels
    # s_{sj} = x_s - x_j ; dG/dn_j(x_s) = (n_j . s) / (2 pi |s|^2)
    s = mid[:, None, :] - mid[None, :, :]
    r2 = np.einsum("sjk,sjk->sj", s, s)
    np.fill_diagonal(r2, 1.0)
    kernel = np.einsum("jk,sjk->sj", nrm, s) / (2 * np.pi * r2)
    a = -kernel * da[None, :]
    diag = np.array(
        [curvature_self_coefficient(da[i], mesh.curvature_radius[i]) for i in range(n)]
    )
    np.fill_diagonal(a, diag)
    rhs = -(mid @ np.asarray(problem.bias))
    return a, rhs


def assemble_vector(problem: BemProblem) -> tuple[np.ndarray, np.ndarray]:
    """Collocation system for q = dA/dn with A0 = 1 on the surface.

    Row s:  sum_{j != s} (da_j / 2 pi) log|x_s - x_j| q_j
            + (da_s / 2 pi) (log(da_s / 2) - 1) q_s  =  A0
    assembled in perimeter units.
    """
    mesh = problem.mesh
    scale = mesh.perimeter
    mid = mesh.midpoints / scale
    da = mesh.lengths / scale
    s = mid[:, None, :] - mid[None, :, :]
    r2 = np.einsum("sjk,sjk->sj", s, s)
    np.fill_diagonal(r2, 1.0)
    a = 0.5 * np.log(r2) * da[None, :] / (2 * np.pi)
    np.fill_diagonal(a, -np.array([log_self_term(d) for d in da]))
    rhs = np.ones(mesh.n_panels)
    return a, rhs


def _solve_dense(a: np.ndarray, rhs: np.ndarray, label: str) -> np.ndarray:
    try:
        x = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"{label} system is singular (cond ~ {np.linalg.cond(a):.3e})"
        ) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError(
            f"{label} solve produced non-finite values (cond ~ {np.linalg.cond(a):.3e})"
        )
    return x


def solve(problem: BemProblem) -> BemSolution:
    """Solve both subproblems by direct dense factorization."""
    mesh = problem.mesh
    n = mesh.n_panels
    bias = np.asarray(problem.bias, dtype=float)

    if np.hypot(*bias) > 0.0:
        a, rhs = assemble_scalar(problem)
        psi = _solve_dense(a, rhs, "scalar")
    else:
        psi = np.zeros(n)

    if problem.current != 0.0:
        a, rhs = assemble_vector(problem)
        q = _solve_dense(a, rhs, "vector")
        measured = -float(q @ mesh.lengths) / MU0  # Ampere's law at A0 = 1
        if measured == 0.0 or not np.isfinite(measured):
            raise SingularSystemError("vector solution carries no net current")
        current_scale = problem.current / measured
    else:
        q = np.zeros(n)
        current_scale = 0.0

    return BemSolution(problem, psi, q, 1.0, current_scale, float(mesh.lengths.min()))


_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _panel_samples(mesh: SurfaceMesh, j: int, n_sub: int):
    """Gauss sample points, normals, weights and arc offsets along panel j."""
    L = mesh.lengths[j]
    edges = np.linspace(-L / 2, L / 2, n_sub + 1)
    u = (0.5 * (edges[:-1] + edges[1:])[:, None]
         + 0.5 * (L / n_sub) * _GAUSS_NODES[None, :]).ravel()
    wts = np.tile(0.5 * (L / n_sub) * _GAUSS_WEIGHTS, n_sub)
    R = mesh.curvature_radius[j]
    if np.isfinite(R):
        centre = mesh.midpoints[j] - R * mesh.normals[j]
        mid_angle = np.arctan2(mesh.normals[j][1], mesh.normals[j][0])
        ang = mid_angle + u / R
        normals = np.column_stack([np.cos(ang), np.sin(ang)])
        pts = centre + R * normals
    else:
        pts = mesh.midpoints[j] + u[:, None] * mesh.tangents[j]
        normals = np.broadcast_to(mesh.normals[j], pts.shape).copy()
    return pts, normals, wts, u


def _chain_slopes(values: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Arc-length derivative of a per-panel quantity along the closed chain."""
    gap = 0.5 * np.roll(lengths, 1) + lengths + 0.5 * np.roll(lengths, -1)
    return (np.roll(values, -1) - np.roll(values, 1)) / gap


def _quadratic_density(values: np.ndarray, lengths: np.ndarray, j: int, u: np.ndarray):
    """Quadratic reconstruction of a per-panel density at arc offsets u.

    Newton interpolation through the midpoint values of panels j-1, j, j+1
    at their arc-length positions along the chain.
    """
    n = len(values)
    jm, jp = (j - 1) % n, (j + 1) % n
    um = -(lengths[jm] + lengths[j]) / 2.0
    up = (lengths[j] + lengths[jp]) / 2.0
    f0 = values[j]
    d1 = (values[jp] - f0) / up
    d2 = ((values[jm] - f0) / um - d1) / (um - up)
    return f0 + d1 * u + d2 * u * (u - up)


def _kernel_sums(points, normals, weights, dens_psi, dens_q, point, have_psi, have_q):
    """Accumulate grad A and the double-layer gradient over weighted samples."""
    ga = np.zeros(2)
    gd = np.zeros(2)
    s = point[None, :] - points
    r2 = np.einsum("ik,ik->i", s, s)
    if have_q:
        ga = ((weights * dens_q)[:, None] * s / r2[:, None]).sum(axis=0)
    if have_psi:
        ns = np.einsum("ik,ik->i", normals, s)
        gd = (
            (weights * dens_psi)[:, None]
            * (normals / r2[:, None] - 2.0 * ns[:, None] * s / (r2 * r2)[:, None])
        ).sum(axis=0)
    return ga, gd


def evaluate_field(solution: BemSolution, x: float, z: float) -> FieldSample:
    """Total exterior field (bias + screening + transport) at (x, z).

    Far from the boundary the surface integrals use the same midpoint rule
    as the solve; within NEAR_PANEL_FACTOR panel lengths every panel is
    integrated by Gauss quadrature of quadratically reconstructed densities
    (a mixed rule would spoil the error cancellation of the midpoint sums).
    """
    mesh = solution.mesh
    point = np.array([x, z], dtype=float)
    if point_in_polygon(mesh.vertices, x, z):
        raise InteriorPointError(f"point ({x:g}, {z:g}) lies inside the conductor")
    dist = distance_to_boundary(mesh.vertices, x, z)
    min_len = solution._min_length or mesh.lengths.min()
    if dist <= SURFACE_CUTOFF_FACTOR * min_len:
        raise TooCloseToSurfaceError(
            f"point ({x:g}, {z:g}) is within {SURFACE_CUTOFF_FACTOR} panel lengths "
            f"of the surface (distance {dist:.3g})"
        )

    mesh_mid, mesh_nrm, da = mesh.midpoints, mesh.normals, mesh.lengths
    have_psi = bool(solution.psi_surface.any())
    q = solution.dadn_physical
    have_q = bool(q.any())

    s = point[None, :] - mesh_mid
    r2 = np.einsum("jk,jk->j", s, s)
    near = r2 < (NEAR_PANEL_FACTOR * da) ** 2

    if not np.any(near):
        ga, gd = _kernel_sums(
            mesh_mid, mesh_nrm, da, solution.psi_surface, q, point, have_psi, have_q
        )
    else:
        pts, nrm, wts, dpsi, dq = solution._fine_samples
        super_near = np.nonzero(r2 < (SUPER_NEAR_FACTOR * da) ** 2)[0]
        if len(super_near):
            wts = wts.copy()
            k = len(_GAUSS_NODES)
            for j in super_near:
                wts[j * k:(j + 1) * k] = 0.0
        ga, gd = _kernel_sums(pts, nrm, wts, dpsi, dq, point, have_psi, have_q)
        for j in super_near:
            L = da[j]
            n_sub = int(np.clip(np.ceil(4.0 * L / max(dist, 1e-300)), 2, 16))
            pj, nj, wj, u = _panel_samples(mesh, j, n_sub)
            dens_psi = (
                _quadratic_density(solution.psi_surface, da, j, u) if have_psi else None
            )
            dens_q = _quadratic_density(q, da, j, u) if have_q else None
            ga_j, gd_j = _kernel_sums(pj, nj, wj, dens_psi, dens_q, point, have_psi, have_q)
            ga += ga_j
            gd += gd_j

    bx, bz = np.asarray(solution.problem.bias, dtype=float)
    if have_psi:
        # B_psi = B0 - (1/2pi) * grad(double layer)
        bx -= gd[0] / (2 * np.pi)
        bz -= gd[1] / (2 * np.pi)
    if have_q:
        # Bx = -dA/dz, Bz = +dA/dx with grad A = (1/2pi) sum q da s/|s|^2
        bx -= ga[1] / (2 * np.pi)
        bz += ga[0] / (2 * np.pi)
    return FieldSample(x, z, float(bx), float(bz))


def surface_current(solution: BemSolution) -> np.ndarray:
    """Signed sheet current K_y per panel (A/m), positive along +y.

    The tangential surface field is t.B = dA/dn - dpsi/dt; the screening
    current that cancels the interior field is K_y = -t.B / mu0.
    """
    mesh = solution.mesh
    if solution.psi_surface.any():
        dpsi_dt = solution._psi_slope
    else:
        dpsi_dt = np.zeros(mesh.n_panels)
    tangential = solution.dadn_physical - dpsi_dt
    return -tangential / MU0


def boundary_residual(solution: BemSolution, offset_factor: float = 0.5,
                      drift_corrected: bool = False) -> float:
    """RMS of n.B just outside the panels over RMS of t.B.

    At a finite offset delta from the surface the exact field already has
    n.B = -delta * d(t.B)/dt (from div B = 0), which dominates the raw
    residual whenever the tangential field varies along the boundary.
    ``drift_corrected`` subtracts that first-order term, isolating the
    numerical error of the solve.
    """
    mesh = solution.mesh
    tangential = solution.dadn_physical - (
        solution._psi_slope if solution.psi_surface.any() else 0.0
    )
    drift = _chain_slopes(tangential, mesh.lengths)
    ns, ts = [], []
    for i in range(mesh.n_panels):
        offset = offset_factor * mesh.lengths[i]
        p = mesh.midpoints[i] + offset * mesh.normals[i]
        sample = evaluate_field(solution, p[0], p[1])
        n_b = sample.b @ mesh.normals[i]
        if drift_corrected:
            n_b += offset * drift[i]
        ns.append(n_b)
        ts.append(sample.b @ mesh.tangents[i])
    ns = np.array(ns)
    ts = np.array(ts)
    return float(np.sqrt((ns**2).mean()) / np.sqrt((ts**2).mean()))


def evaluate_field_many(solution: BemSolution, points: np.ndarray) -> np.ndarray:
    """Field rows (x, z, bx, bz, |B|) for an (n, 2) array of points."""
    rows = []
    for x, z in np.asarray(points, dtype=float):
        s = evaluate_field(solution, float(x), float(z))
        rows.append((x, z, s.bx, s.bz, s.magnitude))
    return np.array(rows)
