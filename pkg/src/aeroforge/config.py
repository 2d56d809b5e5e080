"""Configuration schema: scenario, distributions, object classes, filters.

All types are frozen dataclasses (safe to share across threads) with a JSON
round-trip (``to_dict`` / ``from_dict``) and a canonical serialization used
for lineage hashing.  The full file schema lives in docs/config-schema.md.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

from .errors import ConfigValidationError

SCENARIO_FIRE = "fire_classification"
SCENARIO_COUNTING = "house_counting"
SCENARIOS = (SCENARIO_FIRE, SCENARIO_COUNTING)

OBJECT_CLASSES = (
    "house", "tree", "fence", "garden", "pool", "grass",
    "smoke_plume", "fire_blob",
)

# Paint order (painter's algorithm): flora first, solid structures, then
# smoke and fire on top, matching top-down occlusion.
CLASS_Z_ORDER = (
    "grass", "tree", "fence", "garden", "pool", "house",
    "smoke_plume", "fire_blob",
)

FIRE_CLASSES = ("smoke_plume", "fire_blob")

DISTRIBUTION_KINDS = ("constant", "uniform_int", "uniform_real", "normal", "categorical")
FILTER_KINDS = ("gaussian_blur", "smooth", "edge_enhance")
BACKGROUND_MODES = ("procedural", "hybrid")


@dataclass(frozen=True)
class DistributionSpec:
    """One scalar sampling law.  Unused fields stay None for other kinds."""

    kind: str
    value: float | None = None            # constant
    low: float | None = None              # uniform_int / uniform_real / normal clamp
    high: float | None = None
    mean: float | None = None             # normal
    stddev: float | None = None
    values: tuple[float, ...] | None = None    # categorical
    weights: tuple[float, ...] | None = None

    def support(self) -> tuple[float, float]:
        """Closed interval guaranteed to contain every sample."""
        if self.kind == "constant":
            return (self.value, self.value)
        if self.kind in ("uniform_int", "uniform_real"):
            return (self.low, self.high)
        if self.kind == "normal":
            lo = self.low if self.low is not None else -math.inf
            hi = self.high if self.high is not None else math.inf
            return (lo, hi)
        if self.kind == "categorical":
            return (min(self.values), max(self.values))
        raise ValueError(f"unknown distribution kind {self.kind!r}")

    def integer_valued(self) -> bool:
        if self.kind == "constant":
            return float(self.value).is_integer()
        if self.kind == "uniform_int":
            return True
        if self.kind == "categorical":
            return all(float(v).is_integer() for v in self.values)
        return False

    def validate(self, path: str, problems: list[str]) -> None:
        if self.kind not in DISTRIBUTION_KINDS:
            problems.append(f"{path}.kind: unknown kind {self.kind!r}")
            return
        if self.kind == "constant":
            if self.value is None or not math.isfinite(self.value):
                problems.append(f"{path}.value: constant requires a finite value")
        elif self.kind in ("uniform_int", "uniform_real"):
            if self.low is None or self.high is None:
                problems.append(f"{path}: uniform requires low and high")
            elif not (math.isfinite(self.low) and math.isfinite(self.high)):
                problems.append(f"{path}: bounds must be finite")
            elif self.low > self.high:
                problems.append(f"{path}: low {self.low} > high {self.high}")
            elif self.kind == "uniform_int" and not (
                    float(self.low).is_integer() and float(self.high).is_integer()):
                problems.append(f"{path}: uniform_int bounds must be integers")
        elif self.kind == "normal":
            if self.mean is None or self.stddev is None:
                problems.append(f"{path}: normal requires mean and stddev")
            elif self.stddev < 0:
                problems.append(f"{path}.stddev: must be >= 0, got {self.stddev}")
            if (self.low is not None and self.high is not None
                    and self.low > self.high):
                problems.append(f"{path}: clamp low {self.low} > high {self.high}")
        elif self.kind == "categorical":
            if not self.values or not self.weights:
                problems.append(f"{path}: categorical requires values and weights")
            elif len(self.values) != len(self.weights):
                problems.append(f"{path}: values/weights length mismatch")
            elif any(w < 0 for w in self.weights):
                problems.append(f"{path}.weights: must be non-negative")
            elif sum(self.weights) <= 0:
                problems.append(f"{path}.weights: must sum to > 0")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for key in ("value", "low", "high", "mean", "stddev"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.values is not None:
            out["values"] = list(self.values)
        if self.weights is not None:
            out["weights"] = list(self.weights)
        return out

    @classmethod
    def from_dict(cls, data: dict, path: str = "distribution") -> "DistributionSpec":
        _require_mapping(data, path)
        _reject_unknown(data, {"kind", "value", "low", "high", "mean",
                               "stddev", "values", "weights"}, path)
        return cls(
            kind=data.get("kind", ""),
            value=data.get("value"),
            low=data.get("low"),
            high=data.get("high"),
            mean=data.get("mean"),
            stddev=data.get("stddev"),
            values=tuple(data["values"]) if "values" in data else None,
            weights=tuple(data["weights"]) if "weights" in data else None,
        )


def constant(v: float) -> DistributionSpec:
    return DistributionSpec(kind="constant", value=v)


def uniform_int(low: int, high: int) -> DistributionSpec:
    return DistributionSpec(kind="uniform_int", low=low, high=high)


def uniform_real(low: float, high: float) -> DistributionSpec:
    return DistributionSpec(kind="uniform_real", low=low, high=high)


def normal(mean: float, stddev: float, low: float | None = None,
           high: float | None = None) -> DistributionSpec:
    return DistributionSpec(kind="normal", mean=mean, stddev=stddev, low=low, high=high)


def categorical(values, weights) -> DistributionSpec:
    return DistributionSpec(kind="categorical", values=tuple(values),
                            weights=tuple(weights))


@dataclass(frozen=True)
class FilterSpec:
    kind: str
    sigma: float = 0.0     # gaussian_blur only

    def validate(self, path: str, problems: list[str]) -> None:
        if self.kind not in FILTER_KINDS:
            problems.append(f"{path}.kind: unknown filter {self.kind!r}")
        if self.kind == "gaussian_blur":
            if not math.isfinite(self.sigma) or self.sigma < 0:
                problems.append(f"{path}.sigma: must be finite and >= 0, got {self.sigma}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "gaussian_blur":
            out["sigma"] = self.sigma
        return out

    @classmethod
    def from_dict(cls, data: dict, path: str = "filter") -> "FilterSpec":
        _require_mapping(data, path)
        _reject_unknown(data, {"kind", "sigma"}, path)
        return cls(kind=data.get("kind", ""), sigma=data.get("sigma", 0.0))


@dataclass(frozen=True)
class BackgroundSpec:
    mode: str = "procedural"
    base_rgb: tuple[int, int, int] = (34, 85, 34)
    noise_amplitude: int = 0
    directory: str | None = None     # hybrid: real background photos

    def validate(self, path: str, problems: list[str]) -> None:
        if self.mode not in BACKGROUND_MODES:
            problems.append(f"{path}.mode: unknown mode {self.mode!r}")
            return
        if self.mode == "procedural":
            if len(self.base_rgb) != 3 or any(
                    not (0 <= c <= 255) for c in self.base_rgb):
                problems.append(f"{path}.base_rgb: channels must be in [0,255]")
            if self.noise_amplitude < 0 or self.noise_amplitude > 127:
                problems.append(f"{path}.noise_amplitude: must be in [0,127]")
        else:
            if not self.directory:
                problems.append(f"{path}.directory: hybrid mode requires a directory")

    def to_dict(self) -> dict:
        if self.mode == "hybrid":
            return {"mode": self.mode, "directory": self.directory}
        return {"mode": self.mode, "base_rgb": list(self.base_rgb),
                "noise_amplitude": self.noise_amplitude}

    @classmethod
    def from_dict(cls, data: dict, path: str = "background") -> "BackgroundSpec":
        _require_mapping(data, path)
        _reject_unknown(data, {"mode", "base_rgb", "noise_amplitude", "directory"}, path)
        return cls(
            mode=data.get("mode", "procedural"),
            base_rgb=tuple(data.get("base_rgb", (34, 85, 34))),
            noise_amplitude=data.get("noise_amplitude", 0),
            directory=data.get("directory"),
        )


@dataclass(frozen=True)
class OverlapPolicy:
    policy: str = "forbid"           # "forbid" | "allow_within"
    max_iou: float = 1.0             # allow_within only

    def validate(self, path: str, problems: list[str]) -> None:
        if self.policy not in ("forbid", "allow_within"):
            problems.append(f"{path}.policy: unknown policy {self.policy!r}")
        elif self.policy == "allow_within" and not (0.0 <= self.max_iou <= 1.0):
            problems.append(f"{path}.max_iou: must be in [0,1], got {self.max_iou}")

    def to_dict(self) -> dict:
        if self.policy == "forbid":
            return {"policy": "forbid"}
        return {"policy": "allow_within", "max_iou": self.max_iou}

    @classmethod
    def from_dict(cls, data: dict, path: str = "overlap") -> "OverlapPolicy":
        _require_mapping(data, path)
        _reject_unknown(data, {"policy", "max_iou"}, path)
        return cls(policy=data.get("policy", "forbid"),
                   max_iou=data.get("max_iou", 1.0))


@dataclass(frozen=True)
class ObjectClassSpec:
    object_class: str
    width: DistributionSpec
    height: DistributionSpec
    rotation: DistributionSpec = field(default_factory=lambda: constant(0.0))
    palette: tuple[tuple[int, int, int], ...] = ((128, 128, 128),)
    color_jitter: int = 0            # per-channel +-jitter applied to palette picks
    opacity: DistributionSpec = field(default_factory=lambda: constant(1.0))
    count: DistributionSpec = field(default_factory=lambda: constant(0))
    overlap: OverlapPolicy = field(default_factory=OverlapPolicy)

    def validate(self, path: str, problems: list[str],
                 image_width: int, image_height: int) -> None:
        if self.object_class not in OBJECT_CLASSES:
            problems.append(f"{path}.class: unknown class {self.object_class!r}")
        for name, dist in (("width", self.width), ("height", self.height),
                           ("rotation", self.rotation), ("opacity", self.opacity),
                           ("count", self.count)):
            dist.validate(f"{path}.{name}", problems)
        wlo, whi = _safe_support(self.width)
        hlo, hhi = _safe_support(self.height)
        if wlo is not None and (wlo <= 0 or whi > image_width):
            problems.append(
                f"{path}.width: support [{wlo},{whi}] must be positive and "
                f"<= image_width {image_width}")
        if hlo is not None and (hlo <= 0 or hhi > image_height):
            problems.append(
                f"{path}.height: support [{hlo},{hhi}] must be positive and "
                f"<= image_height {image_height}")
        olo, ohi = _safe_support(self.opacity)
        if olo is not None and (olo < 0.0 or ohi > 1.0):
            problems.append(f"{path}.opacity: support [{olo},{ohi}] must be within [0,1]")
        clo, chi = _safe_support(self.count)
        if clo is not None and clo < 0:
            problems.append(f"{path}.count: support must be non-negative")
        if not self.count.integer_valued():
            problems.append(f"{path}.count: must be an integer-valued distribution")
        if not self.palette:
            problems.append(f"{path}.palette: must contain at least one color")
        for i, rgb in enumerate(self.palette):
            if len(rgb) != 3 or any(not (0 <= c <= 255) for c in rgb):
                problems.append(f"{path}.palette[{i}]: channels must be in [0,255]")
        if self.color_jitter < 0:
            problems.append(f"{path}.color_jitter: must be >= 0")
        self.overlap.validate(f"{path}.overlap", problems)

    def to_dict(self) -> dict:
        return {
            "class": self.object_class,
            "width": self.width.to_dict(),
            "height": self.height.to_dict(),
            "rotation": self.rotation.to_dict(),
            "palette": [list(rgb) for rgb in self.palette],
            "color_jitter": self.color_jitter,
            "opacity": self.opacity.to_dict(),
            "count": self.count.to_dict(),
            "overlap": self.overlap.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "object_spec") -> "ObjectClassSpec":
        _require_mapping(data, path)
        _reject_unknown(data, {"class", "width", "height", "rotation", "palette",
                               "color_jitter", "opacity", "count", "overlap"}, path)
        def dist(key, default=None):
            if key in data:
                return DistributionSpec.from_dict(data[key], f"{path}.{key}")
            return default
        return cls(
            object_class=data.get("class", ""),
            width=dist("width", constant(1.0)),
            height=dist("height", constant(1.0)),
            rotation=dist("rotation", constant(0.0)),
            palette=tuple(tuple(rgb) for rgb in data.get("palette", [[128, 128, 128]])),
            color_jitter=data.get("color_jitter", 0),
            opacity=dist("opacity", constant(1.0)),
            count=dist("count", constant(0)),
            overlap=OverlapPolicy.from_dict(data["overlap"], f"{path}.overlap")
            if "overlap" in data else OverlapPolicy(),
        )


@dataclass(frozen=True)
class GeneratorConfig:
    scenario: str
    image_width: int = 100
    image_height: int = 100
    master_seed: int = 0
    object_specs: tuple[ObjectClassSpec, ...] = ()
    filter_chain: tuple[FilterSpec, ...] = ()
    background: BackgroundSpec = field(default_factory=BackgroundSpec)
    count_distribution: DistributionSpec | None = None   # counting scenario
    fire_probability: float = 0.5                        # classification scenario
    max_count: int = 38
    smoke_fire_blur_sigma: float = 1.5   # softening blur on the smoke/fire layer
    density_sigma: float = 3.0           # ground-truth density kernel width
    detail_version: str = ""             # free-text lineage tag

    def spec_for(self, object_class: str) -> ObjectClassSpec | None:
        for spec in self.object_specs:
            if spec.object_class == object_class:
                return spec
        return None

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario,
            "image_width": self.image_width,
            "image_height": self.image_height,
            "master_seed": self.master_seed,
            "object_specs": [s.to_dict() for s in self.object_specs],
            "filter_chain": [f.to_dict() for f in self.filter_chain],
            "background": self.background.to_dict(),
            "fire_probability": self.fire_probability,
            "max_count": self.max_count,
            "smoke_fire_blur_sigma": self.smoke_fire_blur_sigma,
            "density_sigma": self.density_sigma,
            "detail_version": self.detail_version,
        }
        if self.count_distribution is not None:
            out["count_distribution"] = self.count_distribution.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorConfig":
        _require_mapping(data, "config")
        _reject_unknown(data, {
            "scenario", "image_width", "image_height", "master_seed",
            "object_specs", "filter_chain", "background", "count_distribution",
            "fire_probability", "max_count", "smoke_fire_blur_sigma",
            "density_sigma", "detail_version"}, "config")
        return cls(
            scenario=data.get("scenario", ""),
            image_width=data.get("image_width", 100),
            image_height=data.get("image_height", 100),
            master_seed=data.get("master_seed", 0),
            object_specs=tuple(
                ObjectClassSpec.from_dict(s, f"object_specs[{i}]")
                for i, s in enumerate(data.get("object_specs", []))),
            filter_chain=tuple(
                FilterSpec.from_dict(f, f"filter_chain[{i}]")
                for i, f in enumerate(data.get("filter_chain", []))),
            background=BackgroundSpec.from_dict(data["background"])
            if "background" in data else BackgroundSpec(),
            count_distribution=DistributionSpec.from_dict(
                data["count_distribution"], "count_distribution")
            if "count_distribution" in data else None,
            fire_probability=data.get("fire_probability", 0.5),
            max_count=data.get("max_count", 38),
            smoke_fire_blur_sigma=data.get("smoke_fire_blur_sigma", 1.5),
            density_sigma=data.get("density_sigma", 3.0),
            detail_version=data.get("detail_version", ""),
        )


def validate_config(config: GeneratorConfig) -> None:
    """Raise ConfigValidationError listing every violated field."""
    problems: list[str] = []
    if config.scenario not in SCENARIOS:
        problems.append(f"scenario: must be one of {SCENARIOS}, got {config.scenario!r}")
    if config.image_width < 16:
        problems.append(f"image_width: must be >= 16, got {config.image_width}")
    if config.image_height < 16:
        problems.append(f"image_height: must be >= 16, got {config.image_height}")
    if not (0 <= config.master_seed <= seeds_mask()):
        problems.append("master_seed: must fit in 64 bits unsigned")
    if not (0.0 <= config.fire_probability <= 1.0):
        problems.append(
            f"fire_probability: must be in [0,1], got {config.fire_probability}")
    if config.max_count < 0:
        problems.append(f"max_count: must be >= 0, got {config.max_count}")
    if config.smoke_fire_blur_sigma < 0 or not math.isfinite(config.smoke_fire_blur_sigma):
        problems.append("smoke_fire_blur_sigma: must be finite and >= 0")
    if config.density_sigma <= 0 or not math.isfinite(config.density_sigma):
        problems.append("density_sigma: must be finite and > 0")

    if config.scenario == SCENARIO_COUNTING:
        if config.count_distribution is None:
            problems.append("count_distribution: required for the counting scenario")
        else:
            config.count_distribution.validate("count_distribution", problems)
            if not config.count_distribution.integer_valued():
                problems.append("count_distribution: must be integer-valued")
            lo, hi = _safe_support(config.count_distribution)
            if lo is not None and (lo < 0 or hi > config.max_count):
                problems.append(
                    f"count_distribution: support [{lo},{hi}] must lie within "
                    f"[0,{config.max_count}]")
        if config.spec_for("house") is None:
            problems.append("object_specs: counting scenario requires a 'house' spec")
    elif config.scenario == SCENARIO_FIRE:
        for needed in FIRE_CLASSES:
            if config.spec_for(needed) is None:
                problems.append(
                    f"object_specs: fire scenario requires a {needed!r} spec")

    seen = set()
    for i, spec in enumerate(config.object_specs):
        if spec.object_class in seen:
            problems.append(f"object_specs[{i}]: duplicate class {spec.object_class!r}")
        seen.add(spec.object_class)
        spec.validate(f"object_specs[{i}]", problems,
                      config.image_width, config.image_height)
    for i, filt in enumerate(config.filter_chain):
        filt.validate(f"filter_chain[{i}]", problems)
    config.background.validate("background", problems)

    if problems:
        raise ConfigValidationError(problems)


def canonical_json(config: GeneratorConfig) -> str:
    """Canonical serialization: sorted keys, no insignificant whitespace."""
    return json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))


def config_hash(config: GeneratorConfig) -> str:
    """sha256 hex digest over the canonical serialization of a valid config."""
    validate_config(config)
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def load_config(path) -> GeneratorConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    config = GeneratorConfig.from_dict(data)
    validate_config(config)
    return config


def save_config(config: GeneratorConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def seeds_mask() -> int:
    return (1 << 64) - 1


def _safe_support(dist: DistributionSpec):
    try:
        return dist.support()
    except (TypeError, ValueError):
        return (None, None)


def _require_mapping(data, path: str) -> None:
    if not isinstance(data, dict):
        raise ConfigValidationError([f"{path}: expected an object, got {type(data).__name__}"])


def _reject_unknown(data: dict, allowed: set, path: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigValidationError(
            [f"{path}: unknown field {name!r}" for name in unknown])
