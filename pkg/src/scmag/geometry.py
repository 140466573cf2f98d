"""Wire cross-sections and their discretization into boundary panels.

The strip sits at -d <= z <= 0, |x| <= w, so z = 0 is the top surface of the
wire. Panels traverse the boundary counter-clockwise in the (x, z) plane;
normals point out of the conductor and the tangent is n x e_y, which equals
the traversal direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometryError, TooCoarseMeshError

MIN_PANELS_RECTANGLE = 32
MIN_PANELS_CIRCLE = 16


@dataclass(frozen=True)
class StripGeometry:
    """Rectangular wire of width 2*half_width and given thickness.

    thickness = 0 selects the thin-strip idealization (no mesh possible);
    corner_radius rounds the four corners for the boundary-element solver.
    """

    half_width: float
    thickness: float = 0.0
    corner_radius: float = 0.0

    def __post_init__(self):
        w, d, r = self.half_width, self.thickness, self.corner_radius
        if w <= 0:
            raise InvalidGeometryError("half_width must be positive")
        if d < 0:
            raise InvalidGeometryError("thickness must be non-negative")
        if r < 0 or r > min(w, d / 2) + 1e-15 * w:
            raise InvalidGeometryError(
                f"corner_radius must satisfy 0 <= r <= min(w, d/2); got r={r:g}, "
                f"w={w:g}, d/2={d / 2:g}"
            )

    @property
    def cross_section_area(self) -> float:
        r = self.corner_radius
        return 2 * self.half_width * self.thickness - (4 - np.pi) * r * r

    @property
    def perimeter(self) -> float:
        w, d, r = self.half_width, self.thickness, self.corner_radius
        return 2 * (2 * w - 2 * r) + 2 * (d - 2 * r) + 2 * np.pi * r


def default_corner_radius(half_width: float) -> float:
    """Rounding radius r = w/32 used throughout for BEM geometries."""
    return half_width / 32.0


@dataclass(frozen=True)
class CylinderGeometry:
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise InvalidGeometryError("radius must be positive")


@dataclass(frozen=True)
class SurfaceMesh:
    """Closed boundary sampled at panel midpoints.

    curvature_radius is np.inf on flat panels. ``vertices`` holds the panel
    end points (closed polygon, length n+1) for inside/outside tests.
    """

    midpoints: np.ndarray  # (n, 2)
    normals: np.ndarray  # (n, 2), unit, outward
    tangents: np.ndarray  # (n, 2), unit, = normal x e_y
    lengths: np.ndarray  # (n,)
    curvature_radius: np.ndarray  # (n,)
    vertices: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        for name in ("midpoints", "normals", "tangents", "lengths", "curvature_radius", "vertices"):
            arr = getattr(self, name)
            if arr is not None:
                arr.setflags(write=False)

    @property
    def n_panels(self) -> int:
        return len(self.lengths)

    @property
    def perimeter(self) -> float:
        return float(self.lengths.sum())

    def to_csv(self, path) -> None:
        data = np.column_stack(
            [
                self.midpoints,
                self.normals,
                self.lengths,
                self.curvature_radius,
            ]
        )
        np.savetxt(
            path,
            data,
            delimiter=",",
            fmt="%.9g",
            header="x,z,nx,nz,da,curvature_radius",
            comments="",
        )


def _tangent_to_normal(t: np.ndarray) -> np.ndarray:
    # n x e_y = t  =>  n = (t_z, -t_x)
    return np.column_stack([t[:, 1], -t[:, 0]])


def mesh_circle(geom: CylinderGeometry, n_panels: int) -> SurfaceMesh:
    """Uniform panels on a circle centred at the origin."""
    if n_panels < MIN_PANELS_CIRCLE:
        raise TooCoarseMeshError(f"need at least {MIN_PANELS_CIRCLE} panels, got {n_panels}")
    R = geom.radius
    edges = np.linspace(0.0, 2 * np.pi, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    normals = np.column_stack([np.cos(mid), np.sin(mid)])
    midpoints = R * normals
    tangents = np.column_stack([-np.sin(mid), np.cos(mid)])
    lengths = np.full(n_panels, 2 * np.pi * R / n_panels)
    curvature = np.full(n_panels, R)
    corners = R * np.column_stack([np.cos(edges[:-1]), np.sin(edges[:-1])])
    vertices = np.vstack([corners, corners[:1]])  # exactly closed
    return SurfaceMesh(midpoints, normals, tangents, lengths, curvature, vertices)


def _allocate(n_panels: int, piece_lengths: np.ndarray) -> np.ndarray:
    """Split n_panels over boundary pieces proportionally to arc length."""
    fractions = piece_lengths / piece_lengths.sum()
    counts = np.maximum(1, np.floor(n_panels * fractions).astype(int))
    # distribute the remainder to the pieces with the largest deficit
    while counts.sum() < n_panels:
        deficit = n_panels * fractions - counts
        counts[np.argmax(deficit)] += 1
    while counts.sum() > n_panels:
        surplus = counts - n_panels * fractions
        candidates = np.where(counts > 1)[0]
        counts[candidates[np.argmax(surplus[candidates])]] -= 1
    return counts


def mesh_rounded_rectangle(geom: StripGeometry, n_panels: int) -> SurfaceMesh:
    """Panel a rectangle with rounded corners, counter-clockwise.

    Panels are distributed over the four faces and four corner arcs in
    proportion to arc length; arc panels carry the corner radius as their
    curvature radius.
    """
    if geom.thickness <= 0:
        raise InvalidGeometryError("BEM meshing requires a finite thickness")
    if geom.corner_radius <= 0:
        raise InvalidGeometryError("BEM meshing requires rounded corners (r > 0)")
    if n_panels < MIN_PANELS_RECTANGLE:
        raise TooCoarseMeshError(f"need at least {MIN_PANELS_RECTANGLE} panels, got {n_panels}")

    w, d, r = geom.half_width, geom.thickness, geom.corner_radius
    lx = 2 * (w - r)  # straight run along x
    lz = d - 2 * r  # straight run along z
    arc = 0.5 * np.pi * r

    # CCW starting on the bottom face: bottom, BR arc, right, TR arc,
    # top, TL arc, left, BL arc.  Corner arc centres:
    c_br = (w - r, -d + r)
    c_tr = (w - r, -r)
    c_tl = (-(w - r), -r)
    c_bl = (-(w - r), -d + r)

    pieces = []  # (kind, data, length)
    pieces.append(("seg", ((-(w - r), -d), (1.0, 0.0)), lx))
    pieces.append(("arc", (c_br, -0.5 * np.pi, 0.0), arc))
    pieces.append(("seg", ((w, -d + r), (0.0, 1.0)), lz))
    pieces.append(("arc", (c_tr, 0.0, 0.5 * np.pi), arc))
    pieces.append(("seg", ((w - r, 0.0), (-1.0, 0.0)), lx))
    pieces.append(("arc", (c_tl, 0.5 * np.pi, np.pi), arc))
    pieces.append(("seg", ((-w, -r), (0.0, -1.0)), lz))
    pieces.append(("arc", (c_bl, np.pi, 1.5 * np.pi), arc))

    lengths_arr = np.array([p[2] for p in pieces])
    counts = _allocate(n_panels, lengths_arr)

    mids, norms, tans, das, curv, verts = [], [], [], [], [], []
    for (kind, data, plen), count in zip(pieces, counts):
        if kind == "seg":
            start, direction = data
            start = np.asarray(start)
            direction = np.asarray(direction)
            u = np.linspace(0.0, plen, count + 1)
            mid_u = 0.5 * (u[:-1] + u[1:])
            mids.append(start + mid_u[:, None] * direction)
            t = np.tile(direction, (count, 1))
            tans.append(t)
            norms.append(_tangent_to_normal(t))
            das.append(np.full(count, plen / count))
            curv.append(np.full(count, np.inf))
            verts.append(start + u[:-1, None] * direction)
        else:
            centre, a0, a1 = data
            centre = np.asarray(centre)
            ang = np.linspace(a0, a1, count + 1)
            mid_a = 0.5 * (ang[:-1] + ang[1:])
            n = np.column_stack([np.cos(mid_a), np.sin(mid_a)])
            mids.append(centre + r * n)
            norms.append(n)
            tans.append(np.column_stack([-np.sin(mid_a), np.cos(mid_a)]))
            das.append(np.full(count, r * (a1 - a0) / count))
            curv.append(np.full(count, r))
            verts.append(centre + r * np.column_stack([np.cos(ang[:-1]), np.sin(ang[:-1])]))

    vertices = np.vstack(verts)
    vertices = np.vstack([vertices, vertices[:1]])
    return SurfaceMesh(
        np.vstack(mids),
        np.vstack(norms),
        np.vstack(tans),
        np.concatenate(das),
        np.concatenate(curv),
        vertices,
    )


def point_in_polygon(vertices: np.ndarray, x: float, z: float) -> bool:
    """Even-odd rule against the closed vertex polygon."""
    vx, vz = vertices[:-1, 0], vertices[:-1, 1]
    wx, wz = vertices[1:, 0], vertices[1:, 1]
    crossing = (vz > z) != (wz > z)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_at = vx + (z - vz) * (wx - vx) / (wz - vz)
    hits = crossing & (x < x_at)
    return bool(hits.sum() % 2)


def distance_to_boundary(vertices: np.ndarray, x: float, z: float) -> float:
    """Distance from a point to the closed polygon through the vertices."""
    p = np.array([x, z])
    a = vertices[:-1]
    b = vertices[1:]
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    closest = a + t[:, None] * ab
    return float(np.sqrt(((closest - p) ** 2).sum(axis=1).min()))
