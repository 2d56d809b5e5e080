"""Built-in generator configs for the two stock scenarios.

Usable directly from Python or dumped as a starting config file:

    python -m aeroforge.presets counting > counting.json
    python -m aeroforge.presets fire > fire.json
"""

from __future__ import annotations

import json
import sys

from .config import (
    BackgroundSpec, GeneratorConfig, ObjectClassSpec, OverlapPolicy,
    SCENARIO_COUNTING, SCENARIO_FIRE, constant, uniform_int, uniform_real,
)


def _house_spec() -> ObjectClassSpec:
    return ObjectClassSpec(
        object_class="house",
        width=uniform_real(6.0, 12.0),
        height=uniform_real(5.0, 9.0),
        rotation=uniform_real(0.0, 360.0),
        palette=((172, 63, 52), (150, 82, 60), (124, 124, 128),
                 (96, 78, 66), (186, 142, 92), (205, 203, 192)),
        color_jitter=12,
        opacity=constant(1.0),
        overlap=OverlapPolicy(policy="forbid"),
    )


def default_counting_config(master_seed: int = 0,
                            detail_version: str = "counting-v1") -> GeneratorConfig:
    """Urban top-down scenes: houses to count plus suburban distractors."""
    return GeneratorConfig(
        scenario=SCENARIO_COUNTING,
        master_seed=master_seed,
        count_distribution=uniform_int(0, 38),
        background=BackgroundSpec(mode="procedural", base_rgb=(112, 118, 96),
                                  noise_amplitude=10),
        smoke_fire_blur_sigma=0.0,
        detail_version=detail_version,
        object_specs=(
            _house_spec(),
            ObjectClassSpec(
                object_class="grass",
                width=uniform_real(10.0, 26.0),
                height=uniform_real(8.0, 20.0),
                count=uniform_int(2, 7),
                palette=((74, 108, 52), (64, 102, 48), (88, 112, 56)),
                color_jitter=10,
                opacity=uniform_real(0.3, 0.55),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
            ObjectClassSpec(
                object_class="tree",
                width=uniform_real(4.0, 9.0),
                height=uniform_real(4.0, 9.0),
                count=uniform_int(0, 10),
                palette=((34, 84, 34), (44, 100, 42), (26, 72, 30)),
                color_jitter=14,
                opacity=uniform_real(0.85, 1.0),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
            ObjectClassSpec(
                object_class="fence",
                width=uniform_real(14.0, 42.0),
                height=uniform_real(1.0, 2.0),
                rotation=uniform_real(0.0, 180.0),
                count=uniform_int(0, 3),
                palette=((96, 76, 56), (128, 126, 122)),
                color_jitter=8,
                opacity=constant(1.0),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
            ObjectClassSpec(
                object_class="garden",
                width=uniform_real(8.0, 17.0),
                height=uniform_real(6.0, 13.0),
                count=uniform_int(0, 4),
                palette=((94, 86, 48), (70, 96, 44), (108, 88, 56)),
                color_jitter=10,
                opacity=uniform_real(0.6, 0.9),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
            ObjectClassSpec(
                object_class="pool",
                width=uniform_real(4.0, 8.0),
                height=uniform_real(3.0, 6.0),
                rotation=uniform_real(0.0, 180.0),
                count=uniform_int(0, 2),
                palette=((56, 126, 196), (66, 142, 208)),
                color_jitter=8,
                opacity=constant(1.0),
                overlap=OverlapPolicy(policy="forbid"),
            ),
        ),
    )


def default_fire_config(master_seed: int = 0,
                        detail_version: str = "fire-v1") -> GeneratorConfig:
    """Forest scenes, half of which carry smoke plumes and fire blobs."""
    return GeneratorConfig(
        scenario=SCENARIO_FIRE,
        master_seed=master_seed,
        fire_probability=0.5,
        background=BackgroundSpec(mode="procedural", base_rgb=(34, 85, 34),
                                  noise_amplitude=14),
        smoke_fire_blur_sigma=1.5,
        detail_version=detail_version,
        object_specs=(
            ObjectClassSpec(
                object_class="grass",
                width=uniform_real(12.0, 30.0),
                height=uniform_real(10.0, 24.0),
                count=uniform_int(2, 8),
                palette=((52, 96, 40), (68, 110, 44), (40, 88, 36)),
                color_jitter=12,
                opacity=uniform_real(0.25, 0.5),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
            ObjectClassSpec(
                object_class="tree",
                width=uniform_real(5.0, 12.0),
                height=uniform_real(5.0, 12.0),
                count=uniform_int(14, 38),
                palette=((26, 72, 28), (36, 92, 36), (20, 62, 24), (48, 104, 40)),
                color_jitter=16,
                opacity=uniform_real(0.75, 1.0),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
            ObjectClassSpec(
                object_class="fire_blob",
                width=uniform_real(8.0, 18.0),
                height=uniform_real(7.0, 16.0),
                count=uniform_int(1, 3),
                palette=((214, 42, 12), (228, 64, 14), (200, 32, 8)),
                color_jitter=10,
                opacity=uniform_real(0.75, 0.95),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
            ObjectClassSpec(
                object_class="smoke_plume",
                width=uniform_real(12.0, 26.0),
                height=uniform_real(16.0, 34.0),
                count=uniform_int(1, 2),
                palette=((118, 118, 120), (150, 150, 152), (96, 96, 100)),
                color_jitter=8,
                opacity=uniform_real(0.4, 0.65),
                overlap=OverlapPolicy(policy="allow_within", max_iou=1.0),
            ),
        ),
    )


PRESETS = {
    "counting": default_counting_config,
    "fire": default_fire_config,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if len(argv) != 1 or argv[0] not in PRESETS:
        print(f"usage: python -m aeroforge.presets {{{'|'.join(PRESETS)}}}",
              file=sys.stderr)
        return 2
    json.dump(PRESETS[argv[0]]().to_dict(), sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
