"""Mesh collision and proximity queries.

Exact triangle-level tests behind axis-aligned-box filtering. Surface
distance between two meshes is the minimum over close triangle pairs of
edge-edge and vertex-face distances, with a segment-triangle piercing
test catching crossing intersections (distance 0). Volumetric containment
(one body fully inside another) is detected by ray casting.

A pair of bodies "collides at clearance c" when their surface distance is
below c, when surfaces touch or penetrate, or when one contains the other.
"""

from __future__ import annotations

import numpy as np

from asmkit.errors import InvalidInputError
from asmkit.geometry.mesh import PosedMesh, TriMesh
from asmkit.geometry.path import Path

_EPS = 1e-12


def _dot(a, b):
    return np.einsum("ij,ij->i", a, b)


def point_triangle_distance(p: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """Distance from points p (n,3) to triangles tri (n,3,3), elementwise."""
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    ab, ac, ap = b - a, c - a, p - a
    d1, d2 = _dot(ab, ap), _dot(ac, ap)
    bp = p - b
    d3, d4 = _dot(ab, bp), _dot(ac, bp)
    cp = p - c
    d5, d6 = _dot(ab, cp), _dot(ac, cp)
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    with np.errstate(divide="ignore", invalid="ignore"):
        v_ab = d1 / (d1 - d3)
        w_ac = d2 / (d2 - d6)
        w_bc = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        denom = va + vb + vc
        v_in = vb / denom
        w_in = vc / denom

    closest = a + v_in[:, None] * ab + w_in[:, None] * ac  # interior default
    n = len(p)
    chosen = np.zeros(n, dtype=bool)

    def pick(mask, pts):
        nonlocal closest, chosen
        m = mask & ~chosen
        if m.any():
            closest = np.where(m[:, None], pts, closest)
            chosen |= m

    pick((d1 <= 0) & (d2 <= 0), a)
    pick((d3 >= 0) & (d4 <= d3), b)
    pick((vc <= 0) & (d1 >= 0) & (d3 <= 0), a + np.nan_to_num(v_ab)[:, None] * ab)
    pick((d6 >= 0) & (d5 <= d6), c)
    pick((vb <= 0) & (d2 >= 0) & (d6 <= 0), a + np.nan_to_num(w_ac)[:, None] * ac)
    pick((va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0),
         b + np.nan_to_num(w_bc)[:, None] * (c - b))
    closest = np.nan_to_num(closest)
    return np.linalg.norm(p - closest, axis=1)


def segment_segment_distance(p1, q1, p2, q2) -> np.ndarray:
    """Distance between segments [p1,q1] and [p2,q2], rowwise (n,3) inputs."""
    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a, e, f = _dot(d1, d1), _dot(d2, d2), _dot(d2, r)
    c = _dot(d1, r)
    b = _dot(d1, d2)
    denom = a * e - b * b
    a_safe = np.where(a > _EPS, a, 1.0)
    e_safe = np.where(e > _EPS, e, 1.0)
    denom_safe = np.where(denom > _EPS, denom, 1.0)

    s = np.clip((b * f - c * e) / denom_safe, 0.0, 1.0)
    s = np.where(denom > _EPS, s, 0.0)
    s = np.where(e <= _EPS, np.clip(-c / a_safe, 0.0, 1.0), s)
    s = np.where(a <= _EPS, 0.0, s)
    t0 = np.where(e > _EPS, (b * s + f) / e_safe, 0.0)
    tc = np.clip(t0, 0.0, 1.0)
    s_re = np.clip((b * tc - c) / a_safe, 0.0, 1.0)
    s = np.where((t0 != tc) & (a > _EPS) & (e > _EPS), s_re, s)
    return np.linalg.norm((p1 + s[:, None] * d1) - (p2 + tc[:, None] * d2), axis=1)


def segments_pierce_triangles(p, q, tri) -> np.ndarray:
    """Moller-Trumbore segment/triangle intersection, rowwise; boolean (n,)."""
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    d = q - p
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = _dot(e1, h)
    ok = np.abs(det) > 1e-14
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    s = p - a
    u = _dot(s, h) * inv
    qv = np.cross(s, e1)
    v = _dot(d, qv) * inv
    t = _dot(e2, qv) * inv
    tol = 1e-10
    return ok & (u >= -tol) & (v >= -tol) & (u + v <= 1 + tol) & (t >= -tol) & (t <= 1 + tol)


_EDGE_IDX = [(0, 1), (1, 2), (2, 0)]


def triangle_pair_distance(ta: np.ndarray, tb: np.ndarray) -> np.ndarray:
    """Exact distance between triangle pairs ta, tb of shape (n,3,3)."""
    n = len(ta)
    dmin = np.full(n, np.inf)
    # vertex-to-opposite-triangle, both directions
    for k in range(3):
        dmin = np.minimum(dmin, point_triangle_distance(ta[:, k], tb))
        dmin = np.minimum(dmin, point_triangle_distance(tb[:, k], ta))
    # all 9 edge-edge combinations
    for i, j in _EDGE_IDX:
        for k, l in _EDGE_IDX:
            dmin = np.minimum(
                dmin, segment_segment_distance(ta[:, i], ta[:, j], tb[:, k], tb[:, l])
            )
    # crossing intersections not caught above
    pierce = np.zeros(n, dtype=bool)
    for i, j in _EDGE_IDX:
        pierce |= segments_pierce_triangles(ta[:, i], ta[:, j], tb)
        pierce |= segments_pierce_triangles(tb[:, i], tb[:, j], ta)
    dmin[pierce] = 0.0
    return dmin


def _aabb_gap(lo_a, hi_a, lo_b, hi_b) -> float:
    d = np.maximum(0.0, np.maximum(lo_a - hi_b, lo_b - hi_a))
    return float(np.linalg.norm(d))


def surface_distance(a: PosedMesh, b: PosedMesh, cap: float = np.inf) -> float:
    """Minimum surface-to-surface distance, clipped above at `cap`.

    Returns `cap` when the true distance is >= cap (allows cheap
    thresholded queries). Crossing or touching surfaces give 0.
    """
    if len(a.mesh.triangles) == 0 or len(b.mesh.triangles) == 0:
        raise InvalidInputError("degenerate mesh in distance query")
    cap_eff = cap if np.isfinite(cap) else 1e9
    if _aabb_gap(a.lo, a.hi, b.lo, b.hi) >= cap_eff:
        return cap
    gaps = np.maximum(
        0.0,
        np.maximum(
            a.tri_lo[:, None, :] - b.tri_hi[None, :, :],
            b.tri_lo[None, :, :] - a.tri_hi[:, None, :],
        ),
    )
    d2 = np.einsum("ijk,ijk->ij", gaps, gaps)
    if np.isfinite(cap):
        ii, jj = np.nonzero(d2 < cap * cap + 1e-30)
    else:
        ii, jj = np.nonzero(d2 <= d2.min() + 1e-12)
    if len(ii) == 0:
        return cap
    d = triangle_pair_distance(a.world_tris[ii], b.world_tris[jj])
    return float(min(d.min(), cap))


_RAY_DIRS = [
    np.array([0.57735027, 0.52573111, 0.62348980]),
    np.array([-0.33721054, 0.86231887, 0.37802280]),
    np.array([0.21132487, -0.45903052, 0.86291004]),
]


def points_in_mesh(points: np.ndarray, body: PosedMesh) -> np.ndarray:
    """Boolean containment test by ray-crossing parity."""
    points = np.atleast_2d(points)
    tris = body.world_tris
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    e1, e2 = b - a, c - a
    out = np.zeros(len(points), dtype=bool)
    for pi, p in enumerate(points):
        inside = False
        for d in _RAY_DIRS:
            h = np.cross(d, e2)
            det = _dot(e1, h)
            ok = np.abs(det) > 1e-14
            inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
            s = p - a
            u = _dot(s, h) * inv
            qv = np.cross(s, e1)
            v = _dot(np.broadcast_to(d, e1.shape), qv) * inv
            t = _dot(e2, qv) * inv
            hits = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > 1e-9)
            # re-cast when the ray grazes an edge (ambiguous parity)
            margin = 1e-9
            grazing = hits & (
                (u < margin) | (v < margin) | (u + v > 1 - margin)
            )
            if grazing.any():
                continue
            inside = bool(hits.sum() % 2 == 1)
            break
        out[pi] = inside
    return out


def bodies_collide(a: PosedMesh, b: PosedMesh, clearance: float, contact_tol: float = 0.0) -> bool:
    """True when surface distance < clearance, surfaces touch/penetrate,
    or one body contains the other."""
    if clearance < 0:
        raise InvalidInputError("clearance must be >= 0")
    cap = max(clearance, contact_tol) + 1e-9
    d = surface_distance(a, b, cap)
    if d < clearance or d <= contact_tol:
        return True
    # surfaces clear of each other: only containment remains possible
    if np.all(a.lo >= b.lo - 1e-12) and np.all(a.hi <= b.hi + 1e-12):
        if points_in_mesh(a.world_vertices[:1], b)[0]:
            return True
    if np.all(b.lo >= a.lo - 1e-12) and np.all(b.hi <= a.hi + 1e-12):
        if points_in_mesh(b.world_vertices[:1], a)[0]:
            return True
    return False


def check_collision(
    body_a: PosedMesh,
    bodies_b,
    clearance: float = 0.0,
    contact_tol: float = 0.0,
) -> list:
    """Members of `bodies_b` colliding with `body_a` at the given clearance."""
    return [b for b in bodies_b if bodies_collide(body_a, b, clearance, contact_tol)]


def path_sample_poses(path: Path, body: TriMesh, step: float):
    """Poses along `path` spaced so no vertex of `body` moves more than
    `step` between consecutive samples."""
    if step <= 0:
        raise InvalidInputError("step must be > 0")
    radius = body.max_vertex_radius
    poses = [path.waypoints[0]]
    for k in range(len(path.waypoints) - 1):
        p0, p1 = path.waypoints[k], path.waypoints[k + 1]
        dp, da = p0.distance_to(p1)
        bound = dp + 2.0 * np.sin(min(da, np.pi) / 2.0) * radius
        nsub = max(1, int(np.ceil(bound / step)))
        for i in range(1, nsub + 1):
            poses.append(path.interpolate_segment(k, i / nsub))
    return poses


def check_path_collision(body: TriMesh, path: Path, obstacles, step: float = 0.001) -> list:
    """Sweep `body` along `path`; returns obstacles hit at any sample.

    Per-obstacle sampling is restricted to the parameter window where the
    swept bounding box can overlap the obstacle's box.
    """
    poses = path_sample_poses(path, body, step)
    samples = [PosedMesh(body, p) for p in poses]
    lo = np.stack([s.lo for s in samples])
    hi = np.stack([s.hi for s in samples])
    colliders = []
    for obs in obstacles:
        overlap = np.all(lo <= obs.hi + 1e-12, axis=1) & np.all(hi >= obs.lo - 1e-12, axis=1)
        idx = np.nonzero(overlap)[0]
        for i in idx:
            if bodies_collide(samples[i], obs, 0.0):
                colliders.append(obs)
                break
    return colliders


# -- deterministic surface sampling and contact extraction --------------

def surface_samples(mesh: TriMesh, spacing: float = 0.002):
    """Deterministic barycentric-lattice surface samples.

    Returns (points (k,3), normals (k,3)) in the mesh's local frame,
    deduplicated on a fine grid so shared edges are not double-counted.
    """
    corners = mesh.tri_corners()
    normals = mesh.face_normals()
    pts, nrm = [], []
    for t in range(len(corners)):
        a, b, c = corners[t]
        edge = max(np.linalg.norm(b - a), np.linalg.norm(c - a), np.linalg.norm(c - b))
        n = max(1, int(np.ceil(edge / spacing)))
        for i in range(n + 1):
            for j in range(n + 1 - i):
                u, v = i / n, j / n
                pts.append(a + u * (b - a) + v * (c - a))
                nrm.append(normals[t])
    pts = np.array(pts)
    nrm = np.array(nrm)
    rows = np.round(np.concatenate([pts / (spacing * 0.25), nrm * 1e4], axis=1)).astype(np.int64)
    _, keep = np.unique(rows, axis=0, return_index=True)
    keep.sort()
    return pts[keep], nrm[keep]


def points_to_mesh_distance(points: np.ndarray, body: PosedMesh) -> np.ndarray:
    """Distance of each point to the body's surface."""
    points = np.atleast_2d(points)
    out = np.empty(len(points))
    tris = body.world_tris
    for i, p in enumerate(points):
        gap = np.maximum(0.0, np.maximum(body.tri_lo - p, p - body.tri_hi))
        d2 = np.einsum("ij,ij->i", gap, gap)
        order = np.argsort(d2)
        best = np.inf
        # evaluate nearest boxes first, prune the rest
        for start in range(0, len(order), 64):
            chunk = order[start:start + 64]
            chunk = chunk[d2[chunk] < best * best]
            if len(chunk) == 0:
                break
            pd = point_triangle_distance(np.repeat(p[None, :], len(chunk), axis=0), tris[chunk])
            best = min(best, float(pd.min()))
        out[i] = best
    return out


def contact_points(
    part_a: PosedMesh,
    part_b: PosedMesh,
    tolerance: float = 1e-4,
    spacing: float = 0.002,
):
    """Sampled surface points of `part_a` within `tolerance` of `part_b`.

    Returns (points (k,3), outward unit normals (k,3)) in world frame;
    deterministic for a fixed sampling spacing. Empty arrays when there
    is no contact.
    """
    if tolerance <= 0:
        raise InvalidInputError("tolerance must be > 0")
    if _aabb_gap(part_a.lo, part_a.hi, part_b.lo, part_b.hi) > tolerance:
        return np.zeros((0, 3)), np.zeros((0, 3))
    pts_local, nrm_local = surface_samples(part_a.mesh, spacing)
    pts = part_a.pose.apply(pts_local)
    nrm = part_a.pose.rotate(nrm_local)
    near = (
        np.all(pts <= part_b.hi + tolerance, axis=1)
        & np.all(pts >= part_b.lo - tolerance, axis=1)
    )
    if not near.any():
        return np.zeros((0, 3)), np.zeros((0, 3))
    d = points_to_mesh_distance(pts[near], part_b)
    keep = d <= tolerance
    return pts[near][keep], nrm[near][keep]
