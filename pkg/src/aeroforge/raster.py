"""Software rasterizer: primitive fills, alpha compositing, filters, backgrounds.

Rasters are (height, width, 3) uint8 numpy arrays, row-major RGB.  Fills use
pixel-center coverage (a pixel is painted when its center lies inside the
shape) with no anti-aliasing; blending is 16-bit fixed-point source-over with
round-half-to-even, so output is bit-exact across runs, platforms, and worker
counts.  Smoke/fire parts render through a premultiplied softening layer that
is Gaussian-blurred before compositing.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import seeds
from .config import FIRE_CLASSES, FilterSpec, GeneratorConfig
from .errors import HybridSourceMissing
from .primitives import Circle, Dot, Ellipse, Line, Polygon, Rectangle, Style

ALPHA_ONE = 1 << 16
_HALF = ALPHA_ONE >> 1


def new_raster(width: int, height: int, rgb=(0, 0, 0)) -> np.ndarray:
    raster = np.empty((height, width, 3), dtype=np.uint8)
    raster[:, :] = np.asarray(rgb, dtype=np.uint8)
    return raster


def alpha_fp(opacity: float) -> int:
    """Quantize opacity to 1/65536 steps with round-half-to-even."""
    a = int(np.rint(opacity * ALPHA_ONE))
    return min(max(a, 0), ALPHA_ONE)


def _blend_rounded(t: np.ndarray) -> np.ndarray:
    """Round t / 2^16 half-to-even using integer arithmetic only."""
    q = t >> 16
    r = t & (ALPHA_ONE - 1)
    # t = q*2^16 + r with r < 2^16; the tie sits at r == 2^15.
    up = (r > _HALF).astype(np.int64) + ((r == _HALF) & ((q & 1) == 1))
    return q + up


def blend_mask(raster: np.ndarray, x0: int, y0: int, mask: np.ndarray,
               rgb, opacity: float) -> None:
    """Source-over blend of a solid color into raster[y0:, x0:] under mask."""
    a = alpha_fp(opacity)
    if a == 0 or mask.size == 0 or not mask.any():
        return
    h, w = mask.shape
    region = raster[y0:y0 + h, x0:x0 + w]
    if a == ALPHA_ONE:
        region[mask] = np.asarray(rgb, dtype=np.uint8)
        return
    src = np.asarray(rgb, dtype=np.int64)
    dst = region[mask].astype(np.int64)
    t = a * src + (ALPHA_ONE - a) * dst
    region[mask] = _blend_rounded(t).astype(np.uint8)


# ---------------------------------------------------------------------------
# Coverage masks.  Each builder returns (x0, y0, bool mask) clipped to the
# raster, or None when the shape lies entirely off-canvas.


def _clip_bbox(xmin, ymin, xmax, ymax, width, height):
    x0 = max(0, int(math.floor(xmin)))
    y0 = max(0, int(math.floor(ymin)))
    x1 = min(width, int(math.ceil(xmax)))
    y1 = min(height, int(math.ceil(ymax)))
    if x0 >= x1 or y0 >= y1:
        return None
    return x0, y0, x1, y1

def polygon_mask(points, width, height):
    """Even-odd coverage of an arbitrary polygon at pixel centers.

    Equivalent to an even-odd scanline fill sampled at (x + 0.5, y + 0.5):
    a center is inside when an odd number of edges cross the horizontal ray
    to its right.
    """
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    bbox = _clip_bbox(min(xs), min(ys), max(xs), max(ys), width, height)
    if bbox is None or len(points) < 3:
        return None
    x0, y0, x1, y1 = bbox
    xc = np.arange(x0, x1, dtype=np.float64) + 0.5
    yc = np.arange(y0, y1, dtype=np.float64) + 0.5
    inside = np.zeros((y1 - y0, x1 - x0), dtype=bool)
    n = len(points)
    for i in range(n):
        ex0, ey0 = points[i]
        ex1, ey1 = points[(i + 1) % n]
        if ey0 == ey1:
            continue
        spans = ((ey0 <= yc) & (yc < ey1)) | ((ey1 <= yc) & (yc < ey0))
        if not spans.any():
            continue
        t = (yc - ey0) / (ey1 - ey0)
        xi = ex0 + t * (ex1 - ex0)
        inside ^= spans[:, None] & (xi[:, None] > xc[None, :])
    return x0, y0, inside


def rectangle_mask(rx0, ry0, rx1, ry1, width, height):
    if rx1 < rx0:
        rx0, rx1 = rx1, rx0
    if ry1 < ry0:
        ry0, ry1 = ry1, ry0
    bbox = _clip_bbox(rx0, ry0, rx1, ry1, width, height)
    if bbox is None:
        return None
    x0, y0, x1, y1 = bbox
    xc = np.arange(x0, x1, dtype=np.float64) + 0.5
    yc = np.arange(y0, y1, dtype=np.float64) + 0.5
    mask = ((xc[None, :] >= rx0) & (xc[None, :] < rx1)
            & (yc[:, None] >= ry0) & (yc[:, None] < ry1))
    return x0, y0, mask


def ellipse_mask(cx, cy, rx, ry, rotation_deg, width, height,
                 inner_rx=None, inner_ry=None):
    """Filled ellipse coverage; with inner radii, an outline ring instead."""
    if rx <= 0 or ry <= 0:
        return None
    ext = max(rx, ry)
    bbox = _clip_bbox(cx - ext, cy - ext, cx + ext, cy + ext, width, height)
    if bbox is None:
        return None
    x0, y0, x1, y1 = bbox
    xc = np.arange(x0, x1, dtype=np.float64) + 0.5 - cx
    yc = np.arange(y0, y1, dtype=np.float64) + 0.5 - cy
    dx = xc[None, :]
    dy = yc[:, None]
    if rotation_deg:
        theta = math.radians(rotation_deg)
        c, s = math.cos(theta), math.sin(theta)
        dx, dy = dx * c + dy * s, -dx * s + dy * c
    mask = (dx / rx) ** 2 + (dy / ry) ** 2 <= 1.0
    if inner_rx is not None and inner_rx > 0 and inner_ry > 0:
        mask &= (dx / inner_rx) ** 2 + (dy / inner_ry) ** 2 > 1.0
    return x0, y0, mask


def line_pixels(lx0, ly0, lx1, ly1, width, height):
    """Bresenham walk between rounded endpoints, clipped to the raster."""
    x, y = int(round(lx0)), int(round(ly0))
    x1, y1 = int(round(lx1)), int(round(ly1))
    dx, dy = abs(x1 - x), abs(y1 - y)
    sx = 1 if x < x1 else -1
    sy = 1 if y < y1 else -1
    err = dx - dy
    pts = []
    while True:
        if 0 <= x < width and 0 <= y < height:
            pts.append((x, y))
        if x == x1 and y == y1:
            break
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy
    return pts


def _thick_line_polygon(lx0, ly0, lx1, ly1, line_width):
    dx, dy = lx1 - lx0, ly1 - ly0
    length = math.hypot(dx, dy)
    if length == 0:
        length = 1.0
        dx, dy = 1.0, 0.0
    ox = -dy / length * line_width / 2.0
    oy = dx / length * line_width / 2.0
    return ((lx0 + ox, ly0 + oy), (lx1 + ox, ly1 + oy),
            (lx1 - ox, ly1 - oy), (lx0 - ox, ly0 - oy))


class _Surface:
    """Direct uint8 blending target."""

    def __init__(self, raster: np.ndarray):
        self.raster = raster
        self.width = raster.shape[1]
        self.height = raster.shape[0]

    def blend(self, placed_mask, rgb, opacity):
        x0, y0, mask = placed_mask
        blend_mask(self.raster, x0, y0, mask, rgb, opacity)


class SoftLayer:
    """Premultiplied float RGBA accumulation layer for smoke/fire parts."""

    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.premultiplied = np.zeros((height, width, 3), dtype=np.float64)
        self.alpha = np.zeros((height, width), dtype=np.float64)
        self.touched = False

    def blend(self, placed_mask, rgb, opacity):
        x0, y0, mask = placed_mask
        if opacity <= 0.0 or not mask.any():
            return
        self.touched = True
        h, w = mask.shape
        prem = self.premultiplied[y0:y0 + h, x0:x0 + w]
        alpha = self.alpha[y0:y0 + h, x0:x0 + w]
        src = np.asarray(rgb, dtype=np.float64) * opacity
        prem[mask] = src + (1.0 - opacity) * prem[mask]
        alpha[mask] = opacity + (1.0 - opacity) * alpha[mask]

    def composite_over(self, raster: np.ndarray, sigma: float) -> np.ndarray:
        if not self.touched:
            return raster
        prem, alpha = self.premultiplied, self.alpha
        if sigma > 0:
            kernel = gaussian_kernel(sigma)
            prem = _convolve_clamp(prem, kernel)
            alpha = _convolve_clamp(alpha[:, :, None], kernel)[:, :, 0]
        out = prem + (1.0 - alpha)[:, :, None] * raster.astype(np.float64)
        return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def draw_primitive(target, primitive, style: Style) -> None:
    """Paint one primitive (fill, then outline) onto a surface or soft layer."""
    width, height = target.width, target.height
    fill = style.fill_rgb
    if fill is not None and style.opacity > 0:
        placed = _fill_mask(primitive, width, height)
        if placed is not None:
            target.blend(placed, fill, style.opacity)
    if style.outline_rgb is not None and style.opacity > 0:
        _draw_outline(target, primitive, style)


def _fill_mask(primitive, width, height):
    if isinstance(primitive, Polygon):
        return polygon_mask(primitive.points, width, height)
    if isinstance(primitive, Rectangle):
        return rectangle_mask(primitive.x0, primitive.y0,
                              primitive.x1, primitive.y1, width, height)
    if isinstance(primitive, Circle):
        return ellipse_mask(primitive.cx, primitive.cy, primitive.radius,
                            primitive.radius, 0.0, width, height)
    if isinstance(primitive, Ellipse):
        return ellipse_mask(primitive.cx, primitive.cy, primitive.rx,
                            primitive.ry, primitive.rotation_deg, width, height)
    if isinstance(primitive, Dot):
        x, y = int(math.floor(primitive.x)), int(math.floor(primitive.y))
        if not (0 <= x < width and 0 <= y < height):
            return None
        mask = np.ones((1, 1), dtype=bool)
        return x, y, mask
    if isinstance(primitive, Line):
        return _line_mask(primitive, width, height)
    raise TypeError(f"unknown primitive {type(primitive).__name__}")


def _line_mask(line: Line, width, height):
    if line.width <= 1.0:
        pts = line_pixels(line.x0, line.y0, line.x1, line.y1, width, height)
        if not pts:
            return None
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, y0 = min(xs), min(ys)
        mask = np.zeros((max(ys) - y0 + 1, max(xs) - x0 + 1), dtype=bool)
        for x, y in pts:
            mask[y - y0, x - x0] = True
        return x0, y0, mask
    quad = _thick_line_polygon(line.x0, line.y0, line.x1, line.y1, line.width)
    return polygon_mask(quad, width, height)


def _draw_outline(target, primitive, style):
    width, height = target.width, target.height
    rgb = style.outline_rgb
    ow = style.outline_width
    segments = None
    if isinstance(primitive, Polygon):
        segments = list(zip(primitive.points,
                            primitive.points[1:] + primitive.points[:1]))
    elif isinstance(primitive, Rectangle):
        corners = ((primitive.x0, primitive.y0), (primitive.x1, primitive.y0),
                   (primitive.x1, primitive.y1), (primitive.x0, primitive.y1))
        segments = list(zip(corners, corners[1:] + corners[:1]))
    elif isinstance(primitive, (Circle, Ellipse)):
        if isinstance(primitive, Circle):
            cx, cy, rx, ry, rot = (primitive.cx, primitive.cy, primitive.radius,
                                   primitive.radius, 0.0)
        else:
            cx, cy, rx, ry, rot = (primitive.cx, primitive.cy, primitive.rx,
                                   primitive.ry, primitive.rotation_deg)
        placed = ellipse_mask(cx, cy, rx, ry, rot, width, height,
                              inner_rx=max(rx - ow, 0.0), inner_ry=max(ry - ow, 0.0))
        if placed is not None:
            target.blend(placed, rgb, style.opacity)
        return
    elif isinstance(primitive, Line):
        placed = _line_mask(primitive, width, height)
        if placed is not None:
            target.blend(placed, rgb, style.opacity)
        return
    else:
        return
    for (sx0, sy0), (sx1, sy1) in segments:
        placed = _line_mask(Line(sx0, sy0, sx1, sy1, width=ow), width, height)
        if placed is not None:
            target.blend(placed, rgb, style.opacity)


# ---------------------------------------------------------------------------
# Filters


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 2D Gaussian product kernel truncated at radius ceil(3*sigma)."""
    radius = int(math.ceil(3.0 * sigma))
    ax = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-(ax ** 2) / (2.0 * sigma * sigma))
    kernel = np.outer(g, g)
    return kernel / kernel.sum()


_SMOOTH_KERNEL = np.full((3, 3), 1.0 / 9.0)
# Unsharp mask: identity + (identity - box3x3), i.e. (1/9) * [[-1..],[.. 17 ..]].
_EDGE_ENHANCE_KERNEL = np.array([[-1.0, -1.0, -1.0],
                                 [-1.0, 17.0, -1.0],
                                 [-1.0, -1.0, -1.0]]) / 9.0


def _convolve_clamp(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """2D convolution per channel, clamp-to-border, fixed accumulation order."""
    kh, kw = kernel.shape
    ry, rx = kh // 2, kw // 2
    h, w = img.shape[:2]
    padded = np.pad(img, ((ry, ry), (rx, rx), (0, 0)), mode="edge")
    out = np.zeros_like(img, dtype=np.float64)
    for dy in range(kh):
        for dx in range(kw):
            weight = kernel[dy, dx]
            if weight == 0.0:
                continue
            out += weight * padded[dy:dy + h, dx:dx + w]
    return out


def apply_filter(raster: np.ndarray, spec: FilterSpec) -> np.ndarray:
    """Apply one filter; returns a new raster (input untouched)."""
    if spec.kind == "gaussian_blur":
        if spec.sigma == 0:
            return raster.copy()
        kernel = gaussian_kernel(spec.sigma)
    elif spec.kind == "smooth":
        kernel = _SMOOTH_KERNEL
    elif spec.kind == "edge_enhance":
        kernel = _EDGE_ENHANCE_KERNEL
    else:
        raise ValueError(f"unknown filter kind {spec.kind!r}")
    out = _convolve_clamp(raster.astype(np.float64), kernel)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def composite_background(foreground: np.ndarray, fg_mask: np.ndarray,
                         background_photo: np.ndarray) -> np.ndarray:
    """Per-pixel source-over of foreground over a photo, mask as alpha."""
    if foreground.shape != background_photo.shape:
        raise ValueError("foreground and background dimensions must match")
    if fg_mask.shape != foreground.shape[:2]:
        raise ValueError("mask dimensions must match the rasters")
    a = np.rint(np.clip(fg_mask, 0.0, 1.0) * ALPHA_ONE).astype(np.int64)[:, :, None]
    t = a * foreground.astype(np.int64) + (ALPHA_ONE - a) * background_photo.astype(np.int64)
    return _blend_rounded(t).astype(np.uint8)


# ---------------------------------------------------------------------------
# Backgrounds

_PHOTO_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp")


def list_background_photos(directory: str) -> list[str]:
    try:
        names = sorted(os.listdir(directory))
    except OSError as exc:
        raise HybridSourceMissing(
            f"cannot read background directory {directory!r}: {exc}") from exc
    files = [os.path.join(directory, n) for n in names
             if n.lower().endswith(_PHOTO_EXTENSIONS)]
    if not files:
        raise HybridSourceMissing(
            f"background directory {directory!r} contains no usable photos")
    return files


def load_background_photo(path: str, width: int, height: int) -> np.ndarray:
    """Decode a photo and center-crop/rescale it (nearest neighbor) to size."""
    from PIL import Image

    try:
        with Image.open(path) as img:
            photo = np.asarray(img.convert("RGB"))
    except Exception as exc:
        raise HybridSourceMissing(f"cannot decode background photo {path!r}: {exc}") from exc
    ph, pw = photo.shape[:2]
    scale = max(width / pw, height / ph)
    win_w, win_h = width / scale, height / scale
    off_x, off_y = (pw - win_w) / 2.0, (ph - win_h) / 2.0
    src_x = np.clip(np.floor(off_x + (np.arange(width) + 0.5) * win_w / width),
                    0, pw - 1).astype(np.intp)
    src_y = np.clip(np.floor(off_y + (np.arange(height) + 0.5) * win_h / height),
                    0, ph - 1).astype(np.intp)
    return photo[src_y[:, None], src_x[None, :]]


def _paint_background(config: GeneratorConfig, image_seed: int) -> np.ndarray:
    bg = config.background
    w, h = config.image_width, config.image_height
    if bg.mode == "procedural":
        raster = new_raster(w, h, bg.base_rgb)
        if bg.noise_amplitude > 0:
            noise_seed = seeds.stream_seed(image_seed, "background")
            offsets = seeds.noise_offsets(noise_seed, w * h, bg.noise_amplitude)
            pixels = raster.astype(np.int16) + offsets.reshape(h, w)[:, :, None]
            raster = np.clip(pixels, 0, 255).astype(np.uint8)
        return raster
    files = list_background_photos(bg.directory)
    rng_draw = seeds.stream_seed(image_seed, "background")
    return load_background_photo(files[rng_draw % len(files)], w, h).copy()


# ---------------------------------------------------------------------------
# Scene rendering


def render_scene(scene, config: GeneratorConfig) -> np.ndarray:
    """Render a SceneGraph: background, objects in z-order, filter chain.

    Smoke/fire parts are accumulated on a softening overlay that is blurred
    by ``config.smoke_fire_blur_sigma`` and composited after the base
    objects (they are last in z-order for sampled scenes).
    """
    if (scene.image_width, scene.image_height) != (config.image_width,
                                                   config.image_height):
        raise ValueError("scene dimensions do not match config")
    raster = _paint_background(config, scene.image_seed)
    surface = _Surface(raster)
    soft = (SoftLayer(config.image_width, config.image_height)
            if config.smoke_fire_blur_sigma > 0 else None)
    for obj in scene.objects:
        target = soft if (soft is not None and obj.object_class in FIRE_CLASSES) else surface
        for part in obj.parts:
            draw_primitive(target, part.primitive, part.style)
    if soft is not None:
        raster = soft.composite_over(raster, config.smoke_fire_blur_sigma)
    for filt in config.filter_chain:
        raster = apply_filter(raster, filt)
    return raster
