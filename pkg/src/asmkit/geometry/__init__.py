from asmkit.geometry.pose import Pose, interpolate_pose, quat_angle
from asmkit.geometry.mesh import (
    PosedMesh,
    TriMesh,
    box,
    box_with_top_pockets,
    cylinder,
    icosphere,
    load_mesh,
    save_obj,
    save_stl,
)
from asmkit.geometry.path import Path
from asmkit.geometry.collision import (
    bodies_collide,
    check_collision,
    check_path_collision,
    contact_points,
    points_in_mesh,
    surface_distance,
    surface_samples,
)
from asmkit.geometry.hull import (
    convex_hull_2d,
    offset_convex_polygon,
    point_in_convex_polygon,
    polygon_area,
)

__all__ = [
    "Pose",
    "interpolate_pose",
    "quat_angle",
    "TriMesh",
    "PosedMesh",
    "box",
    "box_with_top_pockets",
    "cylinder",
    "icosphere",
    "load_mesh",
    "save_obj",
    "save_stl",
    "Path",
    "bodies_collide",
    "check_collision",
    "check_path_collision",
    "contact_points",
    "points_in_mesh",
    "surface_distance",
    "surface_samples",
    "convex_hull_2d",
    "offset_convex_polygon",
    "point_in_convex_polygon",
    "polygon_area",
]
