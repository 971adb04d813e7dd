"""Constructive meshing of a rectangular slab with prismatic top pockets.

Builds a watertight mesh directly (grid top/bottom faces, wall bands,
chamfer bands, zip-triangulated collars) instead of boolean operations.
Pocket cross-sections are convex CCW polygons; optional 45-degree chamfer
widens each pocket opening by the chamfer amount.

Local frame: x in [0, W], y in [0, L], z in [0, H]; pockets are carved
from the +z face.
"""

from __future__ import annotations

import numpy as np

from asmkit.errors import InvalidInputError
from asmkit.geometry.hull import convex_hull_2d, offset_convex_polygon, polygon_area


class _MeshBuilder:
    def __init__(self):
        self.verts: list = []
        self.index: dict = {}
        self.tris: list = []

    def vid(self, x, y, z) -> int:
        key = (round(x * 1e9), round(y * 1e9), round(z * 1e9))
        if key not in self.index:
            self.index[key] = len(self.verts)
            self.verts.append((x, y, z))
        return self.index[key]

    def tri(self, a, b, c):
        if a != b and b != c and a != c:
            self.tris.append((a, b, c))

    def quad(self, a, b, c, d):
        self.tri(a, b, c)
        self.tri(a, c, d)


def _ccw(poly: np.ndarray) -> np.ndarray:
    return poly if polygon_area(poly) > 0 else poly[::-1]


def _zip_rings(outer: np.ndarray, inner: np.ndarray):
    """Triangulate the planar annulus between nested convex CCW rings.

    Returns triangles as (source, index) pairs with source 0=outer,
    1=inner; orientation CCW viewed from +z.
    """
    center = inner.mean(axis=0)

    def angles(ring):
        v = ring - center
        a = np.arctan2(v[:, 1], v[:, 0])
        return a

    ao, ai = angles(outer), angles(inner)
    so = int(np.argmin(ao))
    theta0 = ao[so]
    rel_i = np.mod(ai - theta0, 2 * np.pi)
    si = int(np.argmin(rel_i))
    outer_order = [(so + k) % len(outer) for k in range(len(outer))]
    inner_order = [(si + k) % len(inner) for k in range(len(inner))]
    # unwrapped ascending angles around each ring, relative to outer start
    ua = []
    for order, a in ((outer_order, np.mod(ao - theta0, 2 * np.pi)),
                     (inner_order, rel_i)):
        vals = [a[order[0]]]
        for idx in order[1:]:
            v = a[idx]
            while v < vals[-1] - 1e-12:
                v += 2 * np.pi
            vals.append(v)
        ua.append(vals)
    ua_o, ua_i = ua
    nO, nI = len(outer), len(inner)
    tris = []
    i = j = 0

    def next_o():
        return ua_o[i + 1] if i + 1 < nO else ua_o[0] + 2 * np.pi

    def next_i():
        return ua_i[j + 1] if j + 1 < nI else ua_i[0] + 2 * np.pi

    while i < nO or j < nI:
        take_outer = j >= nI or (i < nO and next_o() <= next_i())
        oi = outer_order[i % nO]
        ii = inner_order[j % nI]
        if take_outer:
            tris.append(((0, oi), (0, outer_order[(i + 1) % nO]), (1, ii)))
            i += 1
        else:
            tris.append(((0, oi), (1, inner_order[(j + 1) % nI]), (1, ii)))
            j += 1
    return tris


def _insert_breaks(rect, xs, ys):
    """Rect boundary polyline (CCW) with grid breakpoints inserted."""
    (x0, y0), (x1, y1) = rect
    pts = []
    for x in sorted(v for v in xs if x0 <= v <= x1):
        pts.append((x, y0))
    for y in sorted(v for v in ys if y0 < v <= y1):
        pts.append((x1, y))
    for x in sorted((v for v in xs if x0 <= v < x1), reverse=True):
        pts.append((x, y1))
    for y in sorted((v for v in ys if y0 < v < y1), reverse=True):
        pts.append((x0, y))
    # drop consecutive duplicates
    out = []
    for p in pts:
        if not out or abs(out[-1][0] - p[0]) > 1e-12 or abs(out[-1][1] - p[1]) > 1e-12:
            out.append(p)
    return np.array(out)


def build_pocketed_slab(size_xy, height: float, pockets, chamfer: float = 0.0,
                        collar_margin: float = 0.002):
    """Slab of size (W, L) x height with convex pockets carved from +z.

    `pockets`: list of (polygon (k,2) in slab-local xy, depth). Pocket
    collars (polygon bounding box + collar_margin) must lie strictly
    inside the slab outline and be pairwise disjoint.
    """
    from asmkit.geometry.mesh import TriMesh

    W, L = float(size_xy[0]), float(size_xy[1])
    H = float(height)
    if W <= 0 or L <= 0 or H <= 0:
        raise InvalidInputError("slab dimensions must be positive")

    rings = []
    rects = []
    for poly, depth in pockets:
        poly = _ccw(convex_hull_2d(np.asarray(poly, dtype=float)))
        if len(poly) < 3:
            raise InvalidInputError("pocket cross-section is degenerate")
        depth = float(depth)
        if not 0 < depth < H:
            raise InvalidInputError(f"pocket depth {depth} outside (0, H)")
        ch = min(chamfer, 0.45 * depth)
        top_ring = offset_convex_polygon(poly, ch) if ch > 1e-9 else poly
        lo = top_ring.min(axis=0) - collar_margin
        hi = top_ring.max(axis=0) + collar_margin
        if lo[0] <= 1e-9 or lo[1] <= 1e-9 or hi[0] >= W - 1e-9 or hi[1] >= L - 1e-9:
            raise InvalidInputError("pocket collar exceeds slab outline")
        rings.append((poly, top_ring, depth, ch))
        rects.append((lo, hi))
    for a in range(len(rects)):
        for b in range(a + 1, len(rects)):
            (lo1, hi1), (lo2, hi2) = rects[a], rects[b]
            if np.all(lo1 < hi2) and np.all(lo2 < hi1):
                raise InvalidInputError(f"pocket collars {a} and {b} overlap")

    xs = sorted({0.0, W} | {float(r[0][0]) for r in rects} | {float(r[1][0]) for r in rects})
    ys = sorted({0.0, L} | {float(r[0][1]) for r in rects} | {float(r[1][1]) for r in rects})

    mb = _MeshBuilder()

    def in_rect(cx, cy):
        for lo, hi in rects:
            if lo[0] - 1e-12 <= cx <= hi[0] + 1e-12 and lo[1] - 1e-12 <= cy <= hi[1] + 1e-12:
                return True
        return False

    # top and bottom grid faces
    for ix in range(len(xs) - 1):
        for iy in range(len(ys) - 1):
            x0, x1, y0, y1 = xs[ix], xs[ix + 1], ys[iy], ys[iy + 1]
            a = mb.vid(x0, y0, H)
            b = mb.vid(x1, y0, H)
            c = mb.vid(x1, y1, H)
            d = mb.vid(x0, y1, H)
            if not in_rect((x0 + x1) / 2, (y0 + y1) / 2):
                mb.quad(a, b, c, d)
            ab = mb.vid(x0, y0, 0.0)
            bb = mb.vid(x1, y0, 0.0)
            cb = mb.vid(x1, y1, 0.0)
            db = mb.vid(x0, y1, 0.0)
            mb.quad(ab, db, cb, bb)

    # outer side walls, one band per boundary segment
    def wall_segment(p0, p1):
        t0 = mb.vid(p0[0], p0[1], H)
        t1 = mb.vid(p1[0], p1[1], H)
        b0 = mb.vid(p0[0], p0[1], 0.0)
        b1 = mb.vid(p1[0], p1[1], 0.0)
        mb.quad(t1, t0, b0, b1)

    for ix in range(len(xs) - 1):
        wall_segment((xs[ix], 0.0), (xs[ix + 1], 0.0))
        wall_segment((xs[ix + 1], L), (xs[ix], L))
    for iy in range(len(ys) - 1):
        wall_segment((W, ys[iy]), (W, ys[iy + 1]))
        wall_segment((0.0, ys[iy + 1]), (0.0, ys[iy]))

    # pockets: collar, chamfer band, wall band, floor
    for (poly, top_ring, depth, ch), (lo, hi) in zip(rings, rects):
        outer = _insert_breaks((lo, hi), xs, ys)
        collar = _zip_rings(outer, top_ring)
        oid = [mb.vid(p[0], p[1], H) for p in outer]
        tid = [mb.vid(p[0], p[1], H) for p in top_ring]
        for (sa, ia), (sb, ib), (sc, ic) in collar:
            ids = [oid[ia] if sa == 0 else tid[ia],
                   oid[ib] if sb == 0 else tid[ib],
                   oid[ic] if sc == 0 else tid[ic]]
            mb.tri(*ids)

        k = len(poly)
        z_wall_top = H - ch if ch > 1e-9 else H
        wid = [mb.vid(p[0], p[1], z_wall_top) for p in poly]
        if ch > 1e-9:
            for j in range(k):
                jn = (j + 1) % k
                a = tid[j]
                b = tid[jn]
                c = wid[jn]
                d = wid[j]
                mb.quad(a, b, c, d)
        z_floor = H - depth
        fid = [mb.vid(p[0], p[1], z_floor) for p in poly]
        for j in range(k):
            jn = (j + 1) % k
            mb.quad(wid[j], wid[jn], fid[jn], fid[j])
        for j in range(1, k - 1):
            mb.tri(fid[0], fid[j], fid[j + 1])

    mesh = TriMesh(np.array(mb.verts), np.array(mb.tris, dtype=np.int64),
                   check=True, warn_open=False)
    return mesh
