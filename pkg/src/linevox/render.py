"""Headless CPU compositor for paint orders.

Segments are projected, rasterized as 1-pixel lines (no anti-aliasing, no
depth buffer), and alpha-blended strictly in paint-order sequence:
out = src * alpha + dst * (1 - alpha).  Transparency correctness is carried
entirely by the paint order, which is exactly what this package is meant to
verify, so the drawing itself stays deliberately primitive.

Images are (height, width, 3) float64 arrays with components in [0, 1],
row 0 at the top.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .grid import VoxelScene
from .view import Camera, Orthographic, PaintOrder

Image = np.ndarray

COLOR_DIRECTION = "direction"
COLOR_UNIFORM = "uniform"


@dataclass(frozen=True)
class RenderSettings:
    opacity: float = 0.5
    background: tuple[float, float, float] = (0.0, 0.0, 0.0)
    color_mode: str = COLOR_DIRECTION
    uniform_rgb: tuple[float, float, float] = (1.0, 1.0, 1.0)
    width: int = 512
    height: int = 512

    def __post_init__(self):
        if not 0.0 < self.opacity <= 1.0:
            raise ValueError("opacity must be in (0, 1]")
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        if self.color_mode not in (COLOR_DIRECTION, COLOR_UNIFORM):
            raise ValueError(f"unknown color mode {self.color_mode!r}")


def new_image(width: int, height: int, background=(0.0, 0.0, 0.0)) -> Image:
    img = np.empty((height, width, 3), dtype=np.float64)
    img[:] = np.asarray(background, dtype=np.float64)
    return img


def project_points(
    points: np.ndarray, cam: Camera, width: int, height: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Project (n, 3) world points to float pixel coordinates.

    Returns (x_px, y_px, visible); y grows downward, pixel (0, 0) is the
    top-left corner.  A point is invisible when in front of the near plane
    (behind the eye included).
    """
    r, u, f = cam.basis()
    d = np.asarray(points, dtype=np.float64) - cam.eye
    xv, yv, zv = d @ r, d @ u, d @ f
    proj = cam.projection
    visible = zv >= proj.near
    if isinstance(proj, Orthographic):
        ndc_x = xv / (proj.half_height * proj.aspect)
        ndc_y = yv / proj.half_height
    else:
        tan_half = np.tan(proj.fov_y * 0.5)
        safe_z = np.where(zv > 0, zv, 1.0)
        ndc_x = xv / (safe_z * tan_half * proj.aspect)
        ndc_y = yv / (safe_z * tan_half)
    x_px = (ndc_x + 1.0) * 0.5 * width
    y_px = (1.0 - ndc_y) * 0.5 * height
    return x_px, y_px, visible


def project(p, cam: Camera, width: int, height: int) -> tuple[float, float, bool]:
    """Scalar convenience wrapper around :func:`project_points`."""
    x, y, v = project_points(np.asarray(p, dtype=np.float64).reshape(1, 3), cam, width, height)
    return float(x[0]), float(y[0]), bool(v[0])


def _line_pixels(a_px, b_px) -> tuple[np.ndarray, np.ndarray]:
    """Integer pixels of the 1-pixel line from a_px to b_px (DDA stepping
    along the major axis; each covered pixel appears exactly once)."""
    x0 = int(np.rint(a_px[0]))
    y0 = int(np.rint(a_px[1]))
    x1 = int(np.rint(b_px[0]))
    y1 = int(np.rint(b_px[1]))
    n = max(abs(x1 - x0), abs(y1 - y0))
    t = np.arange(n + 1, dtype=np.float64)
    denom = max(n, 1)
    xs = np.rint(x0 + (x1 - x0) * t / denom).astype(np.int64)
    ys = np.rint(y0 + (y1 - y0) * t / denom).astype(np.int64)
    return xs, ys


def composite_segment(img: Image, a_px, b_px, color, alpha: float) -> Image:
    """Blend one segment over `img` in place (and return it).

    Each covered pixel is touched exactly once with
    out = src * alpha + dst * (1 - alpha).
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    h, w = img.shape[:2]
    xs, ys = _line_pixels(a_px, b_px)
    ok = (xs >= 0) & (xs < w) & (ys >= 0) & (ys < h)
    xs, ys = xs[ok], ys[ok]
    src = np.asarray(color, dtype=np.float64)
    img[ys, xs] = src * alpha + img[ys, xs] * (1.0 - alpha)
    return img


def segment_colors(p0: np.ndarray, p1: np.ndarray, settings: RenderSettings) -> np.ndarray:
    """(n, 3) per-segment colors: |normalized tangent| or the uniform color."""
    n = len(p0)
    if settings.color_mode == COLOR_UNIFORM:
        return np.broadcast_to(np.asarray(settings.uniform_rgb, dtype=np.float64), (n, 3))
    t = p1 - p0
    norm = np.linalg.norm(t, axis=1)
    safe = np.where(norm > 0, norm, 1.0)
    colors = np.abs(t) / safe[:, None]
    colors[norm == 0] = 0.0
    return colors


def render(
    scene: VoxelScene, order: PaintOrder, cam: Camera, settings: RenderSettings
) -> Image:
    """Composite the scene's segments in paint-order sequence.

    Equivalent to looping :func:`composite_segment` over the order (the
    closed form of k alpha-over layers is evaluated per pixel instead, so
    millions of segments stay tractable).  Segments with an endpoint in
    front of the near plane are skipped.
    """
    w, h = settings.width, settings.height
    img = new_image(w, h, settings.background)
    if len(order) == 0:
        return img
    alpha = settings.opacity

    sp0, sp1 = scene.segment_endpoints()
    p0, p1 = sp0[order.seg_ids], sp1[order.seg_ids]
    x0, y0, v0 = project_points(p0, cam, w, h)
    x1, y1, v1 = project_points(p1, cam, w, h)
    keep = v0 & v1
    if not keep.all():
        p0, p1 = p0[keep], p1[keep]
        x0, y0, x1, y1 = x0[keep], y0[keep], x1[keep], y1[keep]
    if len(p0) == 0:
        return img
    colors = segment_colors(p0, p1, settings)

    xi0 = np.rint(x0).astype(np.int64)
    yi0 = np.rint(y0).astype(np.int64)
    xi1 = np.rint(x1).astype(np.int64)
    yi1 = np.rint(y1).astype(np.int64)
    n = np.maximum(np.abs(xi1 - xi0), np.abs(yi1 - yi0))
    npx = n + 1
    starts = np.concatenate([[0], np.cumsum(npx)])
    n_events = int(starts[-1])

    seg = np.repeat(np.arange(len(n), dtype=np.int64), npx)
    t = np.arange(n_events, dtype=np.float64) - starts[seg]
    denom = np.maximum(n, 1)[seg]
    ex = np.rint(xi0[seg] + (xi1 - xi0)[seg] * t / denom).astype(np.int64)
    ey = np.rint(yi0[seg] + (yi1 - yi0)[seg] * t / denom).astype(np.int64)

    inb = (ex >= 0) & (ex < w) & (ey >= 0) & (ey < h)
    ex, ey, seg = ex[inb], ey[inb], seg[inb]
    if len(ex) == 0:
        return img
    pix = ey * w + ex
    seq = np.flatnonzero(inb)  # preserves paint-order sequence within a pixel

    srt = np.lexsort((seq, pix))
    pix_s, seg_s = pix[srt], seg[srt]
    grp_head = np.empty(len(pix_s), dtype=bool)
    grp_head[0] = True
    np.not_equal(pix_s[1:], pix_s[:-1], out=grp_head[1:])
    head_pos = np.flatnonzero(grp_head)
    grp = np.cumsum(grp_head) - 1
    counts = np.diff(np.append(head_pos, len(pix_s)))
    rank = np.arange(len(pix_s)) - head_pos[grp]
    rev_rank = counts[grp] - 1 - rank

    # out = bg*(1-a)^k + sum_i src_i * a * (1-a)^(k-1-i), i in paint order
    weights = alpha * np.power(1.0 - alpha, rev_rank)
    contrib = colors[seg_s] * weights[:, None]
    accum = np.add.reduceat(contrib, head_pos, axis=0)
    covered = pix_s[grp_head]
    bg = np.asarray(settings.background, dtype=np.float64)
    flat = img.reshape(-1, 3)
    flat[covered] = accum + bg * np.power(1.0 - alpha, counts)[:, None]
    np.clip(img, 0.0, 1.0, out=img)
    return img


def image_mae(a: Image, b: Image) -> float:
    """Mean absolute difference over all pixel components."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"image shapes differ: {a.shape} vs {b.shape}")
    return float(np.mean(np.abs(np.asarray(a, dtype=np.float64) - b)))


def write_ppm(img: Image) -> bytes:
    """Binary PPM (P6), 8-bit, components rounded half-up from [0, 1]."""
    h, w = img.shape[:2]
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    quantized = np.floor(np.asarray(img, dtype=np.float64) * 255.0 + 0.5)
    return header + np.clip(quantized, 0, 255).astype(np.uint8).tobytes()
