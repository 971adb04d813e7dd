"""2-D convex hulls and polygon predicates (monotone chain, CCW output)."""

from __future__ import annotations

import numpy as np

from asmkit.errors import InvalidInputError


def convex_hull_2d(points: np.ndarray) -> np.ndarray:
    """Counter-clockwise convex hull of 2-D points.

    Collinear interior points are dropped. Degenerate inputs yield a
    single point or a 2-point segment polygon.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 1 or pts.shape[1] != 2:
        raise InvalidInputError("need at least one 2-D point")
    uniq = np.unique(pts, axis=0)  # lexicographic sort by (x, y)
    if len(uniq) == 1:
        return uniq
    if len(uniq) == 2:
        return uniq

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 1e-18:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in uniq[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 1e-18:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) == 2:
        return hull
    return hull


def polygon_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def point_in_convex_polygon(point, poly: np.ndarray, margin: float = 0.0) -> bool:
    """True when `point` lies inside the CCW convex polygon, at least
    `margin` away from every edge (margin > 0 means strictly inside)."""
    p = np.asarray(point, dtype=float)
    if len(poly) == 1:
        return bool(np.linalg.norm(p - poly[0]) <= -margin)
    if len(poly) == 2:
        return False if margin > 0 else _point_on_segment(p, poly[0], poly[1])
    a = poly
    b = np.roll(poly, -1, axis=0)
    edges = b - a
    lens = np.linalg.norm(edges, axis=1)
    lens[lens == 0] = 1.0
    # signed distance to each edge line, positive inside for CCW
    signed = ((edges[:, 0]) * (p[1] - a[:, 1]) - (edges[:, 1]) * (p[0] - a[:, 0])) / lens
    return bool(np.all(signed >= margin))


def _point_on_segment(p, a, b, tol: float = 1e-12) -> bool:
    ab = b - a
    t = np.dot(p - a, ab) / max(np.dot(ab, ab), 1e-30)
    t = np.clip(t, 0.0, 1.0)
    return bool(np.linalg.norm(a + t * ab - p) <= tol)


def offset_convex_polygon(poly: np.ndarray, offset: float) -> np.ndarray:
    """Miter-offset a CCW convex polygon outward by `offset`."""
    if len(poly) < 3:
        raise InvalidInputError("offset needs a proper polygon")
    a = poly
    b = np.roll(poly, -1, axis=0)
    edges = b - a
    lens = np.linalg.norm(edges, axis=1)
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1) / lens[:, None]  # outward for CCW
    out = []
    n = len(poly)
    for i in range(n):
        # intersect the offsets of edge i-1 and edge i
        n0, n1 = normals[i - 1], normals[i]
        a0 = a[i - 1] + n0 * offset
        d0 = edges[i - 1]
        a1 = a[i] + n1 * offset
        d1 = edges[i]
        m = np.array([[d0[0], -d1[0]], [d0[1], -d1[1]]])
        det = np.linalg.det(m)
        if abs(det) < 1e-14:
            out.append(poly[i] + n1 * offset)
        else:
            t = np.linalg.solve(m, a1 - a0)
            out.append(a0 + t[0] * d0)
    return np.array(out)
