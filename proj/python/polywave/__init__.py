"""Time-domain wave surrogates for polygonal scenes."""

from ._core import (
    SceneError,
    Scene,
    Surrogate,
    build,
    compare,
    diffraction_coefficient,
    fresnel_transition,
    load_scene,
    load_surrogate,
    parse_scene,
    save_surrogate,
    shadow_boundaries,
    wedge_index,
)

__all__ = [
    "SceneError",
    "Scene",
    "Surrogate",
    "build",
    "compare",
    "diffraction_coefficient",
    "fresnel_transition",
    "load_scene",
    "load_surrogate",
    "parse_scene",
    "save_surrogate",
    "shadow_boundaries",
    "wedge_index",
]
