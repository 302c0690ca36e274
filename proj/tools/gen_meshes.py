#!/usr/bin/env python3
"""Writes the polygonal mesh fixtures under data/meshes.

Voronoi-Lloyd meshes of the unit square are built from seeds mirrored across
the four sides, which makes every cell of an interior seed bounded and
clipped exactly at the boundary. The output is deterministic for a given seed.

    python3 tools/gen_meshes.py [--out data/meshes] [--seed 20]
"""

import argparse
import os

import numpy as np
from scipy.spatial import Voronoi

SNAP = 1e-12
LLOYD_STEPS = 60
SEQUENCE = [4, 8, 16, 32, 64, 128, 256]


def mirrored(points):
    x, y = points[:, 0], points[:, 1]
    return np.vstack([
        points,
        np.column_stack([-x, y]),
        np.column_stack([2.0 - x, y]),
        np.column_stack([x, -y]),
        np.column_stack([x, 2.0 - y]),
    ])


def voronoi_cells(points):
    vor = Voronoi(mirrored(points))
    cells = []
    for i in range(len(points)):
        region = vor.regions[vor.point_region[i]]
        if -1 in region or not region:
            raise RuntimeError("unbounded cell for an interior seed")
        poly = np.clip(vor.vertices[region], 0.0, 1.0)
        # counterclockwise order around the seed
        ang = np.arctan2(poly[:, 1] - points[i, 1], poly[:, 0] - points[i, 0])
        cells.append(poly[np.argsort(ang)])
    return cells


def centroid(poly):
    x, y = poly[:, 0], poly[:, 1]
    xs, ys = np.roll(x, -1), np.roll(y, -1)
    c = x * ys - xs * y
    a = c.sum() / 2.0
    return np.array([((x + xs) * c).sum(), ((y + ys) * c).sum()]) / (6.0 * a)


def lloyd(n, rng):
    pts = rng.uniform(0.05, 0.95, size=(n, 2))
    for _ in range(LLOYD_STEPS):
        pts = np.array([centroid(c) for c in voronoi_cells(pts)])
    return voronoi_cells(pts)


def merge(cells, min_edge):
    """Shared vertex list and index polygons; vertices closer than min_edge merge."""
    verts, polys = [], []

    def index(p):
        p = np.where(np.abs(p) < SNAP, 0.0, p)
        p = np.where(np.abs(p - 1.0) < SNAP, 1.0, p)
        for j, v in enumerate(verts):
            if np.hypot(*(v - p)) < min_edge:
                return j
        verts.append(p)
        return len(verts) - 1

    for cell in cells:
        ids = []
        for p in cell:
            j = index(p)
            if not ids or ids[-1] != j:
                ids.append(j)
        if ids[0] == ids[-1]:
            ids.pop()
        polys.append(ids)
    return np.array(verts), polys


def conformize(verts, polys, tol=1e-12):
    out = []
    for poly in polys:
        new = []
        for a, b in zip(poly, poly[1:] + poly[:1]):
            new.append(a)
            pa, pb = verts[a], verts[b]
            d = pb - pa
            inside = []
            for j, v in enumerate(verts):
                if j in (a, b):
                    continue
                t = np.dot(v - pa, d) / np.dot(d, d)
                if tol < t < 1 - tol and abs(d[0] * (v - pa)[1] - d[1] * (v - pa)[0]) < tol * np.dot(d, d):
                    inside.append((t, j))
            new.extend(j for _, j in sorted(inside))
        out.append(new)
    return out


def write(path, verts, polys, comment):
    with open(path, "w") as f:
        f.write(f"# {comment}\n")
        f.write(f"vertices {len(verts)}\n")
        for i, (x, y) in enumerate(verts):
            f.write(f"{i} {x:.17g} {y:.17g}\n")
        f.write(f"elements {len(polys)}\n")
        for i, p in enumerate(polys):
            f.write(f"{i} " + " ".join(map(str, p)) + "\n")
        f.write("boundary\ndefault R\n")


def voronoi_mesh(n, rng):
    cells = lloyd(n, rng)
    verts, polys = merge(cells, min_edge=1e-9)
    return verts, conformize(verts, polys)


def concave_mesh():
    # each unit cell splits into a C-shaped polygon and its complement
    a = [(0, 0), (1, 0), (1, .3), (.3, .3), (.3, .7), (.7, .7), (.7, 1), (0, 1)]
    b = [(1, .3), (1, 1), (.7, 1), (.7, .7), (.3, .7), (.3, .3)]
    cells = []
    for j in range(2):
        for i in range(2):
            for shape in (a, b):
                cells.append(np.array([(0.5 * (i + x), 0.5 * (j + y)) for x, y in shape]))
    verts, polys = merge(cells, min_edge=1e-9)
    return verts, conformize(verts, polys)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "meshes"))
    parser.add_argument("--seed", type=int, default=20)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    for level, n in enumerate(SEQUENCE):
        v, p = voronoi_mesh(n, rng)
        write(os.path.join(args.out, f"voronoi_{level}.mesh"), v, p, f"Voronoi-Lloyd, {n} cells, seed {args.seed}")
    v, p = voronoi_mesh(8, rng)
    write(os.path.join(args.out, "voronoi8.mesh"), v, p, f"Voronoi-Lloyd, 8 cells, seed {args.seed}")
    v, p = concave_mesh()
    write(os.path.join(args.out, "concave8.mesh"), v, p, "8 non-star-shaped cells")


if __name__ == "__main__":
    main()
