"""Drawable primitive shapes and their paint style.

Shared vocabulary between the scene sampler (which emits parts) and the
rasterizer (which paints them).  Coordinates are in pixels; a pixel (x, y)
covers the unit square with center (x + 0.5, y + 0.5).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Dot:
    x: float
    y: float


@dataclass(frozen=True)
class Line:
    x0: float
    y0: float
    x1: float
    y1: float
    width: float = 1.0


@dataclass(frozen=True)
class Rectangle:
    x0: float
    y0: float
    x1: float
    y1: float


@dataclass(frozen=True)
class Polygon:
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    radius: float


@dataclass(frozen=True)
class Ellipse:
    cx: float
    cy: float
    rx: float
    ry: float
    rotation_deg: float = 0.0


Primitive = Dot | Line | Rectangle | Polygon | Circle | Ellipse


@dataclass(frozen=True)
class Style:
    fill_rgb: tuple[int, int, int] | None = None
    opacity: float = 1.0
    outline_rgb: tuple[int, int, int] | None = None
    outline_width: float = 1.0


@dataclass(frozen=True)
class Part:
    """One primitive of a placed object, with its own paint style."""
    primitive: Primitive
    style: Style
