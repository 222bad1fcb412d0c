"""linevox: precomputed per-voxel paint orders for translucent streamlines."""

from .errors import (
    BadCameraFlags,
    BadOffset,
    BadSceneFile,
    CorruptBody,
    DegenerateView,
    DimensionMismatch,
    EmptyDataset,
    EmptyOrderSet,
    LinevoxError,
    MalformedHeader,
    MismatchedSegmentSets,
    MissingMagic,
    TckError,
    TruncatedBody,
    UnsupportedDatatype,
)
from .grid import (
    GridParams,
    VoxelMesh,
    VoxelScene,
    Voxline,
    build_scene,
    build_voxel_meshes,
    compute_bounds,
    generate_voxlines,
    voxel_center,
    voxel_coord,
    voxel_coords,
)
from .orders import (
    MODE_AXIS,
    MODE_DATASET,
    MODE_RANDOM,
    OrderSet,
    axis_orders,
    candidate_directions,
    dataset_order,
    order_for_direction,
    precompute_orders,
    random_orders,
    segment_key,
    segment_keys,
    voxel_random_directions,
)
from .render import (
    RenderSettings,
    composite_segment,
    image_mae,
    new_image,
    project,
    project_points,
    render,
    segment_colors,
    write_ppm,
)
from .scene_io import load_scene, read_scene, save_scene, write_scene
from .tck import StreamlineSet, parse_tck, synth_grid_lines, write_tck
from .view import (
    Camera,
    Orthographic,
    PaintOrder,
    Perspective,
    approx_paint_order,
    exact_paint_order,
    pair_inversion_rate,
    select_direction,
    sort_voxels_back_to_front,
)

__version__ = "0.1.0"

__all__ = [
    "BadCameraFlags",
    "BadOffset",
    "BadSceneFile",
    "Camera",
    "CorruptBody",
    "DegenerateView",
    "DimensionMismatch",
    "EmptyDataset",
    "EmptyOrderSet",
    "GridParams",
    "LinevoxError",
    "MODE_AXIS",
    "MODE_DATASET",
    "MODE_RANDOM",
    "MalformedHeader",
    "MismatchedSegmentSets",
    "MissingMagic",
    "OrderSet",
    "Orthographic",
    "PaintOrder",
    "Perspective",
    "RenderSettings",
    "StreamlineSet",
    "TckError",
    "TruncatedBody",
    "UnsupportedDatatype",
    "VoxelMesh",
    "VoxelScene",
    "Voxline",
    "approx_paint_order",
    "axis_orders",
    "build_scene",
    "build_voxel_meshes",
    "candidate_directions",
    "composite_segment",
    "compute_bounds",
    "dataset_order",
    "exact_paint_order",
    "generate_voxlines",
    "image_mae",
    "load_scene",
    "new_image",
    "order_for_direction",
    "pair_inversion_rate",
    "parse_tck",
    "precompute_orders",
    "project",
    "project_points",
    "random_orders",
    "read_scene",
    "render",
    "save_scene",
    "segment_colors",
    "segment_key",
    "segment_keys",
    "select_direction",
    "sort_voxels_back_to_front",
    "synth_grid_lines",
    "voxel_center",
    "voxel_coord",
    "voxel_coords",
    "voxel_random_directions",
    "write_ppm",
    "write_scene",
    "write_tck",
]
