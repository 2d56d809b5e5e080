"""Convex polygon math used for footprints, overlap checks, and boxes."""

from __future__ import annotations

import math

Point = tuple[float, float]
Polygon = tuple[Point, ...]


def rect_polygon(cx: float, cy: float, width: float, height: float,
                 rotation_deg: float = 0.0) -> Polygon:
    """Corners of a centered rectangle rotated counterclockwise, in order."""
    theta = math.radians(rotation_deg)
    c, s = math.cos(theta), math.sin(theta)
    hw, hh = width / 2.0, height / 2.0
    corners = ((-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh))
    return tuple((cx + x * c - y * s, cy + x * s + y * c) for x, y in corners)


def polygon_area(poly: Polygon) -> float:
    """Shoelace area (absolute)."""
    n = len(poly)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


def polygon_aabb(poly: Polygon) -> tuple[float, float, float, float]:
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    return (min(xs), min(ys), max(xs), max(ys))


def polygon_centroid(poly: Polygon) -> Point:
    """Area centroid; falls back to the vertex mean for degenerate polygons."""
    n = len(poly)
    acc = cx = cy = 0.0
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        cross = x0 * y1 - x1 * y0
        acc += cross
        cx += (x0 + x1) * cross
        cy += (y0 + y1) * cross
    if abs(acc) < 1e-12:
        return (sum(p[0] for p in poly) / n, sum(p[1] for p in poly) / n)
    return (cx / (3.0 * acc), cy / (3.0 * acc))


def clip_convex(subject: Polygon, clip: Polygon) -> Polygon:
    """Sutherland-Hodgman clip of a convex subject against a convex clip.

    The clip polygon may wind either way; it is normalized to CCW first.
    """
    clip = _ccw(clip)
    output = list(subject)
    for i in range(len(clip)):
        if not output:
            return ()
        ax, ay = clip[i]
        bx, by = clip[(i + 1) % len(clip)]
        ex, ey = bx - ax, by - ay
        input_pts = output
        output = []
        for j in range(len(input_pts)):
            px, py = input_pts[j]
            qx, qy = input_pts[(j - 1) % len(input_pts)]
            p_in = ex * (py - ay) - ey * (px - ax) >= 0.0
            q_in = ex * (qy - ay) - ey * (qx - ax) >= 0.0
            if p_in:
                if not q_in:
                    output.append(_intersect((qx, qy), (px, py), (ax, ay), (bx, by)))
                output.append((px, py))
            elif q_in:
                output.append(_intersect((qx, qy), (px, py), (ax, ay), (bx, by)))
    return tuple(output)


def iou(a: Polygon, b: Polygon) -> float:
    """Intersection-over-union of two convex polygons (AABB prefiltered)."""
    ax0, ay0, ax1, ay1 = polygon_aabb(a)
    bx0, by0, bx1, by1 = polygon_aabb(b)
    if ax1 <= bx0 or bx1 <= ax0 or ay1 <= by0 or by1 <= ay0:
        return 0.0
    inter = polygon_area(clip_convex(a, b))
    if inter <= 0.0:
        return 0.0
    union = polygon_area(a) + polygon_area(b) - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def _ccw(poly: Polygon) -> Polygon:
    acc = 0.0
    for i in range(len(poly)):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % len(poly)]
        acc += x0 * y1 - x1 * y0
    return poly if acc >= 0.0 else tuple(reversed(poly))


def _intersect(p: Point, q: Point, a: Point, b: Point) -> Point:
    x1, y1 = p
    x2, y2 = q
    x3, y3 = a
    x4, y4 = b
    denom = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    if denom == 0.0:
        return p
    t = ((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / denom
    return (x1 + t * (x2 - x1), y1 + t * (y2 - y1))
