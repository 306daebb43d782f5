"""
Loading and saving graphic documents.

The on-disk format is UTF-8 JSON:

    {"components": [{"segments": [{"bezier": [[x, y], ...4], "fold": ..., "sheet": ...}],
                     "vertices": [{"kind": "smooth" | "cusp"}]}],
     "crossings": [{"tag": "entangled" | "unentangled"}]}

vertices[i] joins segments[i] to segments[(i + 1) mod n].
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np

from models.errors import ChainError, SchemaError
from models.graphic import (
    Component,
    CrossingTag,
    FoldType,
    Graphic,
    Segment,
    SheetSide,
    VertexKind,
)
from services.config_service import CONFIG

LOGGER = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _require(mapping: Any, key: str, where: str) -> Any:
    if not isinstance(mapping, dict):
        raise SchemaError(f"{where}: expected an object, got {type(mapping).__name__}")
    if key not in mapping:
        raise SchemaError(f"{where}: missing key '{key}'")
    return mapping[key]


def _enum(kind, value: Any, where: str):
    try:
        return kind(value)
    except ValueError as exc:
        allowed = ", ".join(member.value for member in kind)
        raise SchemaError(f"{where}: '{value}' is not one of {allowed}") from exc


def _point(raw: Any, where: str):
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise SchemaError(f"{where}: a point is a pair [x, y]")
    try:
        x, y = float(raw[0]), float(raw[1])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where}: coordinates must be numbers") from exc
    if not (np.isfinite(x) and np.isfinite(y)):
        raise SchemaError(f"{where}: coordinates must be finite")
    return (x, y)


def _parse_segment(raw: Any, where: str) -> Segment:
    bezier = _require(raw, "bezier", where)
    if not isinstance(bezier, list) or len(bezier) != 4:
        raise SchemaError(f"{where}: 'bezier' needs exactly four control points")
    control = tuple(_point(p, f"{where}.bezier[{i}]") for i, p in enumerate(bezier))
    fold = _enum(FoldType, _require(raw, "fold", where), f"{where}.fold")
    sheet = _enum(SheetSide, _require(raw, "sheet", where), f"{where}.sheet")
    return Segment(control, fold, sheet)


def _check_chain(segments: List[Segment], where: str) -> None:
    scale = max(1.0, max(np.max(np.abs(seg.control)) for seg in segments))
    tol = CONFIG.tol_geom * scale
    for i, seg in enumerate(segments):
        following = segments[(i + 1) % len(segments)]
        gap = float(np.hypot(seg.end[0] - following.start[0], seg.end[1] - following.start[1]))
        if gap > tol:
            raise ChainError(
                f"{where}: segment {i} ends at {seg.end} but segment "
                f"{(i + 1) % len(segments)} starts at {following.start} (gap {gap:.3g})"
            )


def _parse_component(raw: Any, where: str) -> Component:
    raw_segments = _require(raw, "segments", where)
    raw_vertices = _require(raw, "vertices", where)
    if not isinstance(raw_segments, list) or not raw_segments:
        raise SchemaError(f"{where}: 'segments' must be a non-empty list")
    if not isinstance(raw_vertices, list) or len(raw_vertices) != len(raw_segments):
        raise SchemaError(f"{where}: need exactly one vertex per segment")
    segments = [_parse_segment(s, f"{where}.segments[{i}]") for i, s in enumerate(raw_segments)]
    kinds = [
        _enum(VertexKind, _require(v, "kind", f"{where}.vertices[{i}]"), f"{where}.vertices[{i}].kind")
        for i, v in enumerate(raw_vertices)
    ]
    _check_chain(segments, where)
    return Component.from_segments(segments, kinds)


def from_document(document: Any) -> Graphic:
    """Build a Graphic from an already-decoded JSON document."""
    raw_components = _require(document, "components", "graphic")
    if not isinstance(raw_components, list):
        raise SchemaError("graphic: 'components' must be a list")
    components = tuple(_parse_component(c, f"components[{i}]") for i, c in enumerate(raw_components))

    crossings = None
    if "crossings" in document:
        raw_crossings = document["crossings"]
        if not isinstance(raw_crossings, list):
            raise SchemaError("graphic: 'crossings' must be a list")
        crossings = tuple(
            _enum(CrossingTag, _require(c, "tag", f"crossings[{i}]"), f"crossings[{i}].tag")
            for i, c in enumerate(raw_crossings)
        )
    return Graphic(components, crossings)


def parse_graphic(text: str) -> Graphic:
    """
    Parse a graphic document.

    Raises:
        SchemaError: malformed JSON or schema violation
        ChainError: a component does not close up
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"Invalid JSON: {exc}") from exc
    return from_document(document)


def _number(value: float) -> float:
    # Round-trip through 17 significant digits.
    return float(f"{value:.17g}")


def to_document(g: Graphic) -> Dict[str, Any]:
    document: Dict[str, Any] = {
        "components": [
            {
                "segments": [
                    {
                        "bezier": [[_number(x), _number(y)] for x, y in seg.control],
                        "fold": seg.fold.value,
                        "sheet": seg.sheet.value,
                    }
                    for seg in component.segments
                ],
                "vertices": [{"kind": v.kind.value} for v in component.vertices],
            }
            for component in g.components
        ]
    }
    if g.crossings is not None:
        document["crossings"] = [{"tag": tag.value} for tag in g.crossings]
    return document


def serialize(g: Graphic) -> str:
    return json.dumps(to_document(g), indent=2) + "\n"


def load_graphic(path: PathLike) -> Graphic:
    text = Path(path).read_text(encoding="utf-8")
    g = parse_graphic(text)
    LOGGER.info("Loaded %s: %d component(s), %d segment(s)",
                path, len(g.components), sum(len(c.segments) for c in g.components))
    return g


def save_graphic(g: Graphic, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(serialize(g), encoding="utf-8")
    LOGGER.info("Wrote %s", target)
    return target
