"""Piecewise-affine maps on a triangulated grid.

Every grid cell is split along its main diagonal (lower-left to
upper-right) into two triangles; vertex images define the map.  Jacobian
determinants, Lipschitz constants (largest singular values), and image
areas are exact per triangle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .density import DensityField
from .geometry import Rect

JAC_MATCH_TOL = 1e-9


class DegenerateTriangleError(ValueError):
    pass


@dataclass(frozen=True)
class PLMap:
    domain: Rect
    nx: int
    ny: int
    vertices: np.ndarray   # ((nx+1)*(ny+1), 2) vertex images, row-major in x

    def __post_init__(self):
        want = (self.nx + 1) * (self.ny + 1)
        if self.vertices.shape != (want, 2):
            raise ValueError(f"expected {want} vertex images, got {self.vertices.shape}")

    def vidx(self, i: int, j: int) -> int:
        return j * (self.nx + 1) + i

    def grid_x(self, i: int) -> float:
        return self.domain.x0 + self.domain.width * i / self.nx

    def grid_y(self, j: int) -> float:
        return self.domain.y0 + self.domain.height * j / self.ny

    def triangles(self) -> np.ndarray:
        """Vertex-index triples; two per cell, lower then upper."""
        tris = []
        for j in range(self.ny):
            for i in range(self.nx):
                v00 = self.vidx(i, j)
                v10 = self.vidx(i + 1, j)
                v01 = self.vidx(i, j + 1)
                v11 = self.vidx(i + 1, j + 1)
                tris.append((v00, v10, v11))
                tris.append((v00, v11, v01))
        return np.array(tris, dtype=int)

    def __call__(self, p) -> np.ndarray:
        """Evaluate at a point of the domain (piecewise-affine interpolation)."""
        x, y = float(p[0]), float(p[1])
        if not self.domain.contains_point(x, y):
            raise ValueError(f"point ({x}, {y}) outside map domain")
        u = (x - self.domain.x0) / self.domain.width * self.nx
        v = (y - self.domain.y0) / self.domain.height * self.ny
        i = min(int(np.floor(u)), self.nx - 1)
        j = min(int(np.floor(v)), self.ny - 1)
        s, t = u - i, v - j
        q00 = self.vertices[self.vidx(i, j)]
        q10 = self.vertices[self.vidx(i + 1, j)]
        q01 = self.vertices[self.vidx(i, j + 1)]
        q11 = self.vertices[self.vidx(i + 1, j + 1)]
        if t <= s:   # lower triangle (v00, v10, v11)
            return q00 + s * (q10 - q00) + t * (q11 - q10)
        return q00 + s * (q11 - q01) + t * (q01 - q00)


def identity_map(domain: Rect, nx: int, ny: int) -> PLMap:
    xs = domain.x0 + domain.width * np.arange(nx + 1) / nx
    ys = domain.y0 + domain.height * np.arange(ny + 1) / ny
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    verts = np.column_stack([gx.ravel(), gy.ravel()])
    return PLMap(domain, nx, ny, verts)


@dataclass(frozen=True)
class PLMetrics:
    dets: np.ndarray            # per triangle
    lip: float
    lip_inv: float
    mismatch_area: float        # area where |det - density| > tolerance
    cell_image_areas: np.ndarray  # (ny, nx) signed image areas
    triangle_ref_areas: np.ndarray


def _differentials(m: PLMap) -> np.ndarray:
    """Affine differential per triangle, shape (ntri, 2, 2)."""
    tris = m.triangles()
    dx = m.domain.width / m.nx
    dy = m.domain.height / m.ny
    q0 = m.vertices[tris[:, 0]]
    q1 = m.vertices[tris[:, 1]]
    q2 = m.vertices[tris[:, 2]]
    e1 = q1 - q0
    e2 = q2 - q0
    ntri = len(tris)
    D = np.empty((ntri, 2, 2))
    lower = np.arange(ntri) % 2 == 0
    # lower: ref edges (dx,0), (dx,dy); upper: ref edges (dx,dy), (0,dy)
    D[lower, :, 0] = e1[lower] / dx
    D[lower, :, 1] = (e2[lower] - e1[lower]) / dy
    D[~lower, :, 1] = e2[~lower] / dy
    # upper e1 spans (dx, dy): D[:,0]*dx + D[:,1]*dy = e1
    D[~lower, :, 0] = (e1[~lower] - e2[~lower]) / dx
    return D


def pl_metrics(m: PLMap, field: DensityField) -> PLMetrics:
    """Per-triangle Jacobians, global Lipschitz constants, mismatch area
    against the density, and per-cell image areas."""
    if field.domain != m.domain:
        raise ValueError("density domain must equal map domain")
    D = _differentials(m)
    dets = D[:, 0, 0] * D[:, 1, 1] - D[:, 0, 1] * D[:, 1, 0]
    if np.any(np.abs(dets) < 1e-300):
        raise DegenerateTriangleError("degenerate triangle in map")

    frob2 = (D ** 2).sum(axis=(1, 2))
    disc = np.sqrt(np.maximum(frob2 ** 2 - 4.0 * dets ** 2, 0.0))
    smax = np.sqrt((frob2 + disc) / 2.0)
    smin = np.abs(dets) / smax
    lip = float(smax.max())
    lip_inv = float((1.0 / smin).max())

    dx = m.domain.width / m.nx
    dy = m.domain.height / m.ny
    tri_area = dx * dy / 2.0
    ref_areas = np.full(len(dets), tri_area)

    # centroids: lower tri of cell (i,j) at (x_i + 2dx/3, y_j + dy/3); upper
    # at (x_i + dx/3, y_j + 2dy/3)
    mism = 0.0
    idx = 0
    cell_areas = np.empty((m.ny, m.nx))
    for j in range(m.ny):
        for i in range(m.nx):
            x0, y0 = m.grid_x(i), m.grid_y(j)
            for t in range(2):
                if t == 0:
                    cx, cy = x0 + 2 * dx / 3, y0 + dy / 3
                else:
                    cx, cy = x0 + dx / 3, y0 + 2 * dy / 3
                rho = field.value_at(min(cx, field.domain.x1), min(cy, field.domain.y1))
                if abs(dets[idx + t] - rho) > JAC_MATCH_TOL:
                    mism += tri_area
            cell_areas[j, i] = (dets[idx] + dets[idx + 1]) * tri_area
            idx += 2

    return PLMetrics(
        dets=dets,
        lip=lip,
        lip_inv=lip_inv,
        mismatch_area=mism,
        cell_image_areas=cell_areas,
        triangle_ref_areas=ref_areas,
    )


def cell_image_areas_shoelace(m: PLMap) -> np.ndarray:
    """Signed image area of every cell via the shoelace formula on the
    image quadrilateral; independent of the determinant route."""
    out = np.empty((m.ny, m.nx))
    for j in range(m.ny):
        for i in range(m.nx):
            quad = m.vertices[[m.vidx(i, j), m.vidx(i + 1, j),
                               m.vidx(i + 1, j + 1), m.vidx(i, j + 1)]]
            x = quad[:, 0]
            y = quad[:, 1]
            out[j, i] = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    return out


def plmap_to_json(m: PLMap) -> str:
    doc = {
        "nx": m.nx,
        "ny": m.ny,
        "domain": {"x0": repr(m.domain.x0), "y0": repr(m.domain.y0),
                   "x1": repr(m.domain.x1), "y1": repr(m.domain.y1)},
        "vertices": [[repr(float(x)), repr(float(y))] for x, y in m.vertices],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def plmap_from_json(text: str) -> PLMap:
    doc = json.loads(text)
    dom = Rect(float(doc["domain"]["x0"]), float(doc["domain"]["y0"]),
               float(doc["domain"]["x1"]), float(doc["domain"]["y1"]))
    verts = np.array([[float(x), float(y)] for x, y in doc["vertices"]])
    return PLMap(dom, int(doc["nx"]), int(doc["ny"]), verts)
