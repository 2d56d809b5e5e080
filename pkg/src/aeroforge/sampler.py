"""Scene sampling: object counts, attributes, and rejection-sampled placement.

One RNG stream per image, forked per object class through stable named
salts, so adding a new distractor class never perturbs the draws of
existing classes.  Placement keeps footprints fully inside the image and
enforces per-class overlap policies; exhaustion is a hard error because
object counts are the training labels.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import geometry
from .config import (
    CLASS_Z_ORDER, FIRE_CLASSES, SCENARIO_COUNTING, SCENARIO_FIRE,
    DistributionSpec, GeneratorConfig, ObjectClassSpec,
)
from .errors import PlacementExhausted
from .primitives import Circle, Dot, Ellipse, Line, Part, Polygon, Rectangle, Style
from .seeds import stream_seed

PLACEMENT_ATTEMPTS = 1000


@dataclass(frozen=True)
class PlacedObject:
    object_class: str
    anchor: tuple[float, float]
    footprint: tuple[tuple[float, float], ...]
    rotation: float
    color: tuple[int, int, int]
    opacity: float
    parts: tuple[Part, ...]


@dataclass(frozen=True)
class SceneGraph:
    scenario: str
    image_width: int
    image_height: int
    image_seed: int
    objects: tuple[PlacedObject, ...]   # list order == z-order (painter's algorithm)
    sampled_house_count: int | None = None   # counting scenario
    contains_fire: bool | None = None        # classification scenario

    def house_tally(self) -> int:
        return sum(1 for o in self.objects if o.object_class == "house")


def sample_from(dist: DistributionSpec, rng: random.Random):
    """Draw one scalar.  Constant consumes no draws from the stream.

    Normal draws are truncated by resampling (up to 64 tries) and then
    clamped, so the result always lies in the declared support.
    """
    kind = dist.kind
    if kind == "constant":
        return dist.value
    if kind == "uniform_int":
        return rng.randint(int(dist.low), int(dist.high))
    if kind == "uniform_real":
        return dist.low + (dist.high - dist.low) * rng.random()
    if kind == "normal":
        lo = dist.low if dist.low is not None else -math.inf
        hi = dist.high if dist.high is not None else math.inf
        v = rng.gauss(dist.mean, dist.stddev)
        for _ in range(63):
            if lo <= v <= hi:
                return v
            v = rng.gauss(dist.mean, dist.stddev)
        return min(max(v, lo), hi)
    if kind == "categorical":
        total = sum(dist.weights)
        r = rng.random() * total
        acc = 0.0
        for value, weight in zip(dist.values, dist.weights):
            acc += weight
            if r < acc:
                return value
        return dist.values[-1]
    raise ValueError(f"unknown distribution kind {kind!r}")


def sample_scene(config: GeneratorConfig, image_seed: int,
                 force_fire: bool | None = None) -> SceneGraph:
    """Deterministically sample a SceneGraph from (config, image_seed).

    ``force_fire`` overrides the Bernoulli(fire_probability) draw; the
    balanced-quota generator uses it to hit exact class counts.  Classes
    with a constraining overlap policy are placed against the accumulated
    footprints of previously placed forbid-policy objects.
    """
    scenario_rng = random.Random(stream_seed(image_seed, "scenario"))
    house_count = None
    fire = None
    if config.scenario == SCENARIO_COUNTING:
        house_count = int(sample_from(config.count_distribution, scenario_rng))
    elif config.scenario == SCENARIO_FIRE:
        if force_fire is None:
            fire = scenario_rng.random() < config.fire_probability
        else:
            fire = bool(force_fire)

    objects: list[PlacedObject] = []
    solid_occupied: list[tuple] = []
    for object_class in CLASS_Z_ORDER:
        spec = config.spec_for(object_class)
        if spec is None:
            continue
        if config.scenario == SCENARIO_FIRE and object_class in FIRE_CLASSES and not fire:
            continue
        rng = random.Random(stream_seed(image_seed, "class." + object_class))
        if object_class == "house" and config.scenario == SCENARIO_COUNTING:
            count = house_count
        else:
            count = int(sample_from(spec.count, rng))
            if (config.scenario == SCENARIO_FIRE and fire
                    and object_class in FIRE_CLASSES):
                count = max(1, count)
        constrained = (spec.overlap.policy == "forbid"
                       or spec.overlap.max_iou < 1.0)
        occupied = solid_occupied if constrained else []
        placed = place_objects(count, spec, occupied, rng,
                               config.image_width, config.image_height)
        objects.extend(placed)
        if spec.overlap.policy == "forbid":
            solid_occupied.extend(o.footprint for o in placed)

    return SceneGraph(
        scenario=config.scenario,
        image_width=config.image_width,
        image_height=config.image_height,
        image_seed=image_seed,
        objects=tuple(objects),
        sampled_house_count=house_count,
        contains_fire=fire,
    )


def place_objects(count: int, spec: ObjectClassSpec, occupied,
                  rng: random.Random, image_width: int,
                  image_height: int) -> list[PlacedObject]:
    """Place ``count`` objects of one class under its overlap policy.

    Attributes are drawn once per object; positions are rejection-sampled
    with at most PLACEMENT_ATTEMPTS tries each.  Footprints stay fully
    inside the image so boundary objects remain countable.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    forbid = spec.overlap.policy == "forbid"
    max_iou = 0.0 if forbid else spec.overlap.max_iou
    check_overlap = forbid or max_iou < 1.0

    placed: list[PlacedObject] = []
    for k in range(count):
        width = float(sample_from(spec.width, rng))
        height = float(sample_from(spec.height, rng))
        rotation = float(sample_from(spec.rotation, rng))
        color = _pick_color(spec, rng)
        opacity = float(sample_from(spec.opacity, rng))
        hx, hy = _half_extents(width, height, rotation)

        placed_one = None
        for _ in range(PLACEMENT_ATTEMPTS):
            if 2 * hx > image_width or 2 * hy > image_height:
                continue    # cannot fit at any position; burn the attempt budget
            cx = rng.uniform(hx, image_width - hx)
            cy = rng.uniform(hy, image_height - hy)
            footprint = geometry.rect_polygon(cx, cy, width, height, rotation)
            if check_overlap and not _placement_ok(footprint, placed,
                                                   occupied, max_iou):
                continue
            parts = _build_parts(spec.object_class, rng, cx, cy,
                                 width, height, rotation, color, opacity)
            placed_one = PlacedObject(
                object_class=spec.object_class,
                anchor=(cx, cy),
                footprint=footprint,
                rotation=rotation,
                color=color,
                opacity=opacity,
                parts=parts,
            )
            break
        if placed_one is None:
            raise PlacementExhausted(spec.object_class, k, PLACEMENT_ATTEMPTS)
        placed.append(placed_one)
    return placed


def _placement_ok(footprint, placed, occupied, max_iou: float) -> bool:
    for other in placed:
        if geometry.iou(footprint, other.footprint) > max_iou:
            return False
    for fp in occupied:
        if geometry.iou(footprint, fp) > max_iou:
            return False
    return True


def _half_extents(width: float, height: float, rotation_deg: float):
    theta = math.radians(rotation_deg)
    c, s = abs(math.cos(theta)), abs(math.sin(theta))
    return ((width * c + height * s) / 2.0, (width * s + height * c) / 2.0)


def _pick_color(spec: ObjectClassSpec, rng: random.Random):
    base = spec.palette[rng.randrange(len(spec.palette))]
    if spec.color_jitter == 0:
        return tuple(base)
    j = spec.color_jitter
    return tuple(_clamp8(c + rng.randint(-j, j)) for c in base)


def _clamp8(v) -> int:
    return max(0, min(255, int(v)))


def _shade(rgb, delta: int):
    return tuple(_clamp8(c + delta) for c in rgb)


# ---------------------------------------------------------------------------
# Per-class part builders.  The paper-style composites are concretized here:
# a house is a ridged two-face roof, smoke is a stack of drifting translucent
# ellipses, fire is a few layered warm-colored blobs.


def _build_parts(object_class, rng, cx, cy, w, h, rot, color, opacity):
    builder = _BUILDERS[object_class]
    return tuple(builder(rng, cx, cy, w, h, rot, color, opacity))


def _local_to_world(points, cx, cy, rot_deg):
    theta = math.radians(rot_deg)
    c, s = math.cos(theta), math.sin(theta)
    return tuple((cx + x * c - y * s, cy + x * s + y * c) for x, y in points)


def _build_house(rng, cx, cy, w, h, rot, color, opacity):
    hw, hh = w / 2.0, h / 2.0
    # Ridge runs along the long axis; the two roof faces get opposite shading.
    if w >= h:
        face_a = ((-hw, -hh), (hw, -hh), (hw, 0.0), (-hw, 0.0))
        face_b = ((-hw, 0.0), (hw, 0.0), (hw, hh), (-hw, hh))
        ridge = ((-hw, 0.0), (hw, 0.0))
    else:
        face_a = ((-hw, -hh), (0.0, -hh), (0.0, hh), (-hw, hh))
        face_b = ((0.0, -hh), (hw, -hh), (hw, hh), (0.0, hh))
        ridge = ((0.0, -hh), (0.0, hh))
    lit, shaded = _shade(color, 22), _shade(color, -22)
    edge = _shade(color, -70)
    (rx0, ry0), (rx1, ry1) = _local_to_world(ridge, cx, cy, rot)
    yield Part(Polygon(_local_to_world(face_a, cx, cy, rot)),
               Style(fill_rgb=lit, opacity=opacity))
    yield Part(Polygon(_local_to_world(face_b, cx, cy, rot)),
               Style(fill_rgb=shaded, opacity=opacity))
    yield Part(Line(rx0, ry0, rx1, ry1, width=1.0),
               Style(fill_rgb=edge, opacity=opacity))
    yield Part(Polygon(geometry.rect_polygon(cx, cy, w, h, rot)),
               Style(fill_rgb=None, opacity=opacity,
                     outline_rgb=edge, outline_width=1.0))


def _build_tree(rng, cx, cy, w, h, rot, color, opacity):
    r = min(w, h) / 2.0
    yield Part(Circle(cx, cy, r), Style(fill_rgb=color, opacity=opacity))
    yield Part(Circle(cx - r * 0.25, cy - r * 0.25, r * 0.55),
               Style(fill_rgb=_shade(color, 20), opacity=opacity))


def _build_fence(rng, cx, cy, w, h, rot, color, opacity):
    theta = math.radians(rot)
    dx, dy = math.cos(theta) * w / 2.0, math.sin(theta) * w / 2.0
    yield Part(Line(cx - dx, cy - dy, cx + dx, cy + dy, width=max(1.0, h)),
               Style(fill_rgb=color, opacity=opacity))
    n_posts = max(2, int(w // 6))
    post = _shade(color, -35)
    for i in range(n_posts):
        t = -1.0 + 2.0 * i / (n_posts - 1) if n_posts > 1 else 0.0
        yield Part(Dot(cx + dx * t, cy + dy * t),
                   Style(fill_rgb=post, opacity=opacity))


def _build_garden(rng, cx, cy, w, h, rot, color, opacity):
    if abs(math.sin(math.radians(rot))) < 1e-9:
        yield Part(Rectangle(cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0),
                   Style(fill_rgb=color, opacity=opacity))
    else:
        yield Part(Polygon(geometry.rect_polygon(cx, cy, w, h, rot)),
                   Style(fill_rgb=color, opacity=opacity))
    furrow = _shade(color, -28)
    n_rows = max(2, int(h // 4))
    hw, hh = w / 2.0, h / 2.0
    for i in range(n_rows):
        y = -hh + (i + 0.5) * h / n_rows
        (x0, y0), (x1, y1) = _local_to_world(
            ((-hw * 0.85, y), (hw * 0.85, y)), cx, cy, rot)
        yield Part(Line(x0, y0, x1, y1, width=1.0),
                   Style(fill_rgb=furrow, opacity=opacity))


def _build_pool(rng, cx, cy, w, h, rot, color, opacity):
    yield Part(Ellipse(cx, cy, w / 2.0, h / 2.0, rot),
               Style(fill_rgb=color, opacity=opacity))
    yield Part(Ellipse(cx, cy, w * 0.3, h * 0.3, rot),
               Style(fill_rgb=_shade(color, 30), opacity=opacity))


def _build_grass(rng, cx, cy, w, h, rot, color, opacity):
    yield Part(Ellipse(cx, cy, w / 2.0, h / 2.0, rot),
               Style(fill_rgb=color, opacity=opacity))
    speckle = _shade(color, -18)
    n_dots = min(40, max(3, int(w * h / 14.0)))
    for _ in range(n_dots):
        # Uniform point inside the ellipse via polar sampling.
        r = math.sqrt(rng.random())
        ang = rng.random() * 2.0 * math.pi
        yield Part(Dot(cx + r * math.cos(ang) * w / 2.0,
                       cy + r * math.sin(ang) * h / 2.0),
                   Style(fill_rgb=speckle, opacity=opacity))


def _build_smoke(rng, cx, cy, w, h, rot, color, opacity):
    hw, hh = w / 2.0, h / 2.0
    n_puffs = rng.randint(5, 12)
    drift = rng.uniform(-hw * 0.5, hw * 0.5)
    base_r = max(1.0, hw * 0.45)
    for i in range(n_puffs):
        t = i / (n_puffs - 1) if n_puffs > 1 else 0.0
        r = base_r * (0.55 + 0.75 * t)
        x = cx + drift * t + rng.uniform(-hw * 0.15, hw * 0.15)
        y = cy + hh - t * 2.0 * hh
        x = min(max(x, cx - hw + r), cx + hw - r)
        y = min(max(y, cy - hh + r * 0.8), cy + hh - r * 0.8)
        yield Part(Ellipse(x, y, r, r * 0.8),
                   Style(fill_rgb=_shade(color, int(45 * t)),
                         opacity=opacity * (1.0 - 0.45 * t)))


_FIRE_RAMP = ((244, 120, 26), (252, 196, 48), (255, 242, 150))


def _build_fire(rng, cx, cy, w, h, rot, color, opacity):
    hw, hh = w / 2.0, h / 2.0
    n_layers = rng.randint(2, 6)
    for i in range(n_layers):
        scale = max(0.18, 1.0 - 0.26 * i)
        layer_color = color if i == 0 else _FIRE_RAMP[min(i - 1, len(_FIRE_RAMP) - 1)]
        n_verts = rng.randint(9, 13)
        pts = []
        for j in range(n_verts):
            ang = 2.0 * math.pi * j / n_verts
            wob = 0.62 + 0.38 * rng.random()
            pts.append((cx + math.cos(ang) * hw * scale * wob,
                        cy + math.sin(ang) * hh * scale * wob))
        yield Part(Polygon(tuple(pts)),
                   Style(fill_rgb=layer_color,
                         opacity=min(1.0, opacity * (0.85 + 0.06 * i))))


_BUILDERS = {
    "house": _build_house,
    "tree": _build_tree,
    "fence": _build_fence,
    "garden": _build_garden,
    "pool": _build_pool,
    "grass": _build_grass,
    "smoke_plume": _build_smoke,
    "fire_blob": _build_fire,
}
