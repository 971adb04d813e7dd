"""Triangle meshes: construction, mass properties, file IO, posed instances.

Units are meters. Meshes are immutable after construction; derived
quantities (bounds, volume, center of mass) are computed once. Watertight
meshes get exact signed-volume mass properties; non-watertight inputs are
accepted with a warning and fall back to convex-hull mass properties.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path as FilePath

import numpy as np

from asmkit.errors import InvalidInputError
from asmkit.geometry.pose import Pose


class TriMesh:
    """Indexed triangle mesh with cached derived properties."""

    def __init__(self, vertices, triangles, *, check: bool = True, warn_open: bool = True):
        self.vertices = np.ascontiguousarray(vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.ascontiguousarray(triangles, dtype=np.int64).reshape(-1, 3)
        if check:
            if len(self.triangles) == 0:
                raise InvalidInputError("mesh has zero triangles")
            if self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices):
                raise InvalidInputError("triangle index out of range")
        self._watertight = _is_watertight(self.triangles) if len(self.triangles) else False
        if self._watertight:
            vol, com = _signed_volume_and_centroid(self.vertices, self.triangles)
            if vol < 0:
                # flip orientation so outward normals give positive volume
                self.triangles = self.triangles[:, ::-1].copy()
                vol, com = -vol, com
            self.volume = float(vol)
            self.center_of_mass = com
        else:
            if warn_open:
                warnings.warn("mesh is not watertight; volume/CoM taken from convex hull")
            vol, com = _hull_volume_and_centroid(self.vertices)
            self.volume = float(vol)
            self.center_of_mass = com

    # -- derived ------------------------------------------------------
    @property
    def bounds(self) -> np.ndarray:
        """(2,3) axis-aligned bounds [min; max]."""
        return np.stack([self.vertices.min(axis=0), self.vertices.max(axis=0)])

    @property
    def is_watertight(self) -> bool:
        return self._watertight

    @property
    def extents(self) -> np.ndarray:
        b = self.bounds
        return b[1] - b[0]

    @property
    def max_vertex_radius(self) -> float:
        """Largest vertex distance from the local origin (sweep bound helper)."""
        return float(np.linalg.norm(self.vertices, axis=1).max())

    def tri_corners(self) -> np.ndarray:
        """(m,3,3) triangle corner coordinates."""
        return self.vertices[self.triangles]

    def face_normals(self) -> np.ndarray:
        c = self.tri_corners()
        n = np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])
        lens = np.linalg.norm(n, axis=1)
        lens[lens == 0] = 1.0
        return n / lens[:, None]

    def face_areas(self) -> np.ndarray:
        c = self.tri_corners()
        return 0.5 * np.linalg.norm(np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]), axis=1)

    def transformed(self, pose: Pose) -> "TriMesh":
        return TriMesh(pose.apply(self.vertices), self.triangles, check=False, warn_open=False)

    def __reduce__(self):
        return (_rebuild_mesh, (self.vertices, self.triangles))


def _rebuild_mesh(vertices, triangles):
    return TriMesh(vertices, triangles, check=False, warn_open=False)


def _is_watertight(triangles: np.ndarray) -> bool:
    """Every directed edge must appear exactly once, with its reverse present."""
    edges = np.concatenate(
        [triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]], axis=0
    )
    fwd = set(map(tuple, edges.tolist()))
    if len(fwd) != len(edges):
        return False
    return all((b, a) in fwd for a, b in fwd)


def _signed_volume_and_centroid(vertices, triangles):
    c = vertices[triangles]
    cross = np.cross(c[:, 1], c[:, 2])
    vols = np.einsum("ij,ij->i", c[:, 0], cross) / 6.0
    vol = vols.sum()
    centroid = ((c[:, 0] + c[:, 1] + c[:, 2]) / 4.0 * vols[:, None]).sum(axis=0)
    if abs(vol) < 1e-15:
        return 0.0, vertices.mean(axis=0)
    return vol, centroid / vol


def _hull_volume_and_centroid(vertices):
    from scipy.spatial import ConvexHull

    try:
        hull = ConvexHull(vertices)
    except Exception:
        return 0.0, vertices.mean(axis=0)
    simplices = vertices[hull.simplices]
    interior = vertices[hull.vertices].mean(axis=0)
    a, b, c = simplices[:, 0] - interior, simplices[:, 1] - interior, simplices[:, 2] - interior
    vols = np.abs(np.einsum("ij,ij->i", a, np.cross(b, c))) / 6.0
    cents = interior + (a + b + c) / 4.0
    total = vols.sum()
    if total < 1e-15:
        return 0.0, vertices.mean(axis=0)
    return total, (cents * vols[:, None]).sum(axis=0) / total


# -- primitives --------------------------------------------------------

_BOX_CORNERS = np.array(
    [
        [-1, -1, -1], [1, -1, -1], [1, 1, -1], [-1, 1, -1],
        [-1, -1, 1], [1, -1, 1], [1, 1, 1], [-1, 1, 1],
    ],
    dtype=float,
)

_BOX_TRIS = np.array(
    [
        [0, 2, 1], [0, 3, 2],  # bottom (z-)
        [4, 5, 6], [4, 6, 7],  # top (z+)
        [0, 1, 5], [0, 5, 4],  # y-
        [2, 3, 7], [2, 7, 6],  # y+
        [1, 2, 6], [1, 6, 5],  # x+
        [3, 0, 4], [3, 4, 7],  # x-
    ],
    dtype=np.int64,
)


def box(extents, center=(0.0, 0.0, 0.0)) -> TriMesh:
    """Axis-aligned box with given full extents, centered at `center`."""
    e = np.asarray(extents, dtype=float) / 2.0
    v = _BOX_CORNERS * e + np.asarray(center, dtype=float)
    return TriMesh(v, _BOX_TRIS.copy(), check=False)


def cylinder(radius: float, height: float, segments: int = 24, center=(0.0, 0.0, 0.0)) -> TriMesh:
    """Closed cylinder along +z."""
    ang = np.linspace(0, 2 * np.pi, segments, endpoint=False)
    ring = np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1)
    lo, hi = -height / 2.0, height / 2.0
    verts = [np.column_stack([ring, np.full(segments, lo)]),
             np.column_stack([ring, np.full(segments, hi)]),
             np.array([[0.0, 0.0, lo], [0.0, 0.0, hi]])]
    v = np.concatenate(verts) + np.asarray(center, dtype=float)
    cb, ct = 2 * segments, 2 * segments + 1
    tris = []
    for i in range(segments):
        j = (i + 1) % segments
        tris.append([i, j, segments + j])
        tris.append([i, segments + j, segments + i])
        tris.append([cb, j, i])            # bottom cap (faces -z)
        tris.append([ct, segments + i, segments + j])  # top cap (faces +z)
    return TriMesh(v, np.array(tris, dtype=np.int64), check=False)


def icosphere(radius: float, subdivisions: int = 2, center=(0.0, 0.0, 0.0)) -> TriMesh:
    """Geodesic sphere from a subdivided icosahedron."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    v = np.array(
        [
            [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
            [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
            [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
        ],
        dtype=float,
    )
    f = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [p / np.linalg.norm(p) for p in v]
    faces = list(f)
    for _ in range(subdivisions):
        cache: dict = {}
        new_faces = []

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    v = np.array(verts) * radius + np.asarray(center, dtype=float)
    return TriMesh(v, np.array(faces, dtype=np.int64), check=False)


def box_with_top_pockets(extents, pockets, center=(0.0, 0.0, 0.0)) -> TriMesh:
    """Box with rectangular pockets carved into its top (+z) face.

    `pockets`: list of (cx, cy, w, l, depth) in the box's local frame.
    Pocket rectangles must be pairwise disjoint and strictly inside the
    top face. Used for socket-style parts and the pickup fixture base.
    """
    from asmkit.geometry.pockets import build_pocketed_slab  # shared mesher

    e = np.asarray(extents, dtype=float)
    polys = []
    for (cx, cy, w, l, depth) in pockets:
        half = np.array([w / 2.0, l / 2.0])
        corners = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]]) * half + np.array([cx, cy])
        polys.append((corners, float(depth)))
    mesh = build_pocketed_slab((e[0], e[1]), e[2], polys, chamfer=0.0)
    # slab mesher builds with xy in [0,w]x[0,l] and z in [0,h]; recenter
    off = np.asarray(center, dtype=float) - np.array([e[0] / 2.0, e[1] / 2.0, e[2] / 2.0])
    return TriMesh(mesh.vertices + off, mesh.triangles, check=False)


# -- file IO -----------------------------------------------------------

def save_obj(mesh: TriMesh, path) -> None:
    lines = ["# asmkit mesh"]
    for v in mesh.vertices:
        lines.append(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}")
    for t in mesh.triangles:
        lines.append(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}")
    FilePath(path).write_text("\n".join(lines) + "\n")


def load_obj(path) -> TriMesh:
    verts, tris = [], []
    for line in FilePath(path).read_text().splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) - 1 for p in parts[1:]]
            for k in range(1, len(idx) - 1):  # fan-triangulate polygons
                tris.append([idx[0], idx[k], idx[k + 1]])
    if not tris:
        raise InvalidInputError(f"no faces in OBJ file {path}")
    return TriMesh(np.array(verts), np.array(tris))


def save_stl(mesh: TriMesh, path) -> None:
    """Binary STL with deterministic triangle order."""
    tris = mesh.tri_corners()
    normals = mesh.face_normals()
    with open(path, "wb") as f:
        f.write(b"asmkit binary stl".ljust(80, b"\0"))
        f.write(struct.pack("<I", len(tris)))
        for n, c in zip(normals, tris):
            f.write(struct.pack("<12fH", *n, *c[0], *c[1], *c[2], 0))


def load_stl(path) -> TriMesh:
    raw = FilePath(path).read_bytes()
    if raw[:5] == b"solid" and b"facet" in raw[:300]:
        return _load_stl_ascii(raw.decode("ascii", errors="replace"))
    n = struct.unpack("<I", raw[80:84])[0]
    data = np.frombuffer(raw[84:84 + n * 50], dtype=np.uint8).reshape(n, 50)
    floats = data[:, :48].copy().view("<f4").reshape(n, 12)
    corners = floats[:, 3:12].reshape(n * 3, 3).astype(float)
    verts, inverse = np.unique(corners.round(9), axis=0, return_inverse=True)
    return TriMesh(verts, inverse.reshape(n, 3))


def _load_stl_ascii(text: str) -> TriMesh:
    corners = []
    for line in text.splitlines():
        parts = line.split()
        if parts and parts[0] == "vertex":
            corners.append([float(x) for x in parts[1:4]])
    corners = np.array(corners)
    if len(corners) == 0 or len(corners) % 3:
        raise InvalidInputError("malformed ASCII STL")
    verts, inverse = np.unique(corners.round(9), axis=0, return_inverse=True)
    return TriMesh(verts, inverse.reshape(-1, 3))


def load_mesh(path) -> TriMesh:
    p = FilePath(path)
    if not p.exists():
        raise InvalidInputError(f"mesh file not found: {p}")
    if p.suffix.lower() == ".obj":
        return load_obj(p)
    if p.suffix.lower() == ".stl":
        return load_stl(p)
    raise InvalidInputError(f"unsupported mesh format: {p.suffix}")


# -- posed instances ---------------------------------------------------

@dataclass
class PosedMesh:
    """A mesh placed in the world; world-frame arrays are cached."""

    mesh: TriMesh
    pose: Pose = field(default_factory=Pose.identity)
    name: str = ""

    def __post_init__(self):
        self.world_vertices = self.pose.apply(self.mesh.vertices)
        tris = self.world_vertices[self.mesh.triangles]
        self.world_tris = tris
        self.tri_lo = tris.min(axis=1)
        self.tri_hi = tris.max(axis=1)
        self.lo = self.tri_lo.min(axis=0)
        self.hi = self.tri_hi.max(axis=0)

    def at(self, pose: Pose) -> "PosedMesh":
        return PosedMesh(self.mesh, pose, self.name)
