"""Central configuration helpers for the engine."""
from __future__ import annotations

import os
from dataclasses import dataclass


def _float_from_env(name: str, default: str) -> float:
    return float(os.environ.get(name, default))


def _int_from_env(name: str, default: str) -> int:
    return int(os.environ.get(name, default))


@dataclass(frozen=True)
class EngineConfig:
    tol_geom: float
    tol_angle: float
    tol_side: float
    cusp_offset: float
    tol_root: float
    tol_multiplicity: float
    tol_event: float
    min_delta: float
    attribution_margin: float
    bitangent_samples: int
    workers: int
    angle_digits: int

    @classmethod
    def load(cls) -> "EngineConfig":
        return cls(
            tol_geom=_float_from_env("GRAPHIC_TOL_GEOM", "1e-9"),
            tol_angle=_float_from_env("GRAPHIC_TOL_ANGLE", "1e-9"),
            tol_side=_float_from_env("GRAPHIC_TOL_SIDE", "1e-7"),
            cusp_offset=_float_from_env("GRAPHIC_CUSP_OFFSET", "1e-3"),
            tol_root=_float_from_env("GRAPHIC_TOL_ROOT", "1e-12"),
            tol_multiplicity=_float_from_env("GRAPHIC_TOL_MULTIPLICITY", "1e-9"),
            tol_event=_float_from_env("GRAPHIC_TOL_EVENT", "1e-8"),
            min_delta=_float_from_env("GRAPHIC_MIN_DELTA", "1e-6"),
            attribution_margin=_float_from_env("GRAPHIC_ATTRIBUTION_MARGIN", "1e-10"),
            bitangent_samples=_int_from_env("GRAPHIC_BITANGENT_SAMPLES", "256"),
            workers=_int_from_env("GRAPHIC_WORKERS", "1"),
            angle_digits=_int_from_env("GRAPHIC_ANGLE_DIGITS", "12"),
        )


CONFIG = EngineConfig.load()
