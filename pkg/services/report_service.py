"""Report documents (JSON schema 1) and aligned text rendering."""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from typing import Any, Dict, List

import pandas as pd

from models.graphic import Graphic

from .config_service import CONFIG
from .slice_service import SliceCensus, SliceProfile, slice_euler
from .sweep_service import SweepService
from .validation_service import ValidationReport

LOGGER = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _num(value: float) -> float:
    return float(f"{value:.{CONFIG.angle_digits}g}")


def _rational(value: Fraction):
    return value.numerator if value.denominator == 1 else str(value)


def validation_report(report: ValidationReport) -> Dict[str, Any]:
    return {"schema": SCHEMA_VERSION, "command": "validate", **report.to_dict()}


def sweep_report(service: SweepService) -> Dict[str, Any]:
    events = service.event_schedule()
    trajectory = service.genus_trajectory()
    stable = service.stable_genus_report()
    intervals = []
    for t, genus, census in zip(trajectory.midpoints, trajectory.genera, trajectory.censuses):
        levels = service.level_sets(t)
        intervals.append({
            "midpoint": _num(t),
            "genus": genus,
            "census": list(census.as_tuple()),
            "heegaard_level": None if levels.separating_level is None else _num(levels.separating_level),
        })
    return {
        "schema": SCHEMA_VERSION,
        "command": "sweep",
        "events": [e.to_dict(CONFIG.angle_digits) for e in events],
        "trajectory": {
            "breakpoints": [_num(b) for b in trajectory.breakpoints],
            "genera": list(trajectory.genera),
            "intervals": intervals,
        },
        "p": trajectory.p,
        "q": trajectory.q,
        "c": stable.c,
        "bound": _rational(stable.bound),
        "stable_genus": stable.to_dict(),
    }


def slice_report(census: SliceCensus) -> Dict[str, Any]:
    euler = slice_euler(census)
    return {
        "schema": SCHEMA_VERSION,
        "command": "slice",
        "angle": _num(census.angle),
        "level": _num(census.level),
        "n_def": census.n_def,
        "m_indef": census.m_indef,
        "chi_r": _rational(euler.chi_r),
        "chi_sigma": euler.chi_sigma,
        "vertices": euler.vertices,
        "edges": _rational(euler.edges),
    }


def profile_report(profile: SliceProfile) -> Dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "command": "profile",
        "angle": _num(profile.angle),
        "breakpoints": [
            {"height": _num(b.height), "kind": b.kind, "index": b.index} for b in profile.breakpoints
        ],
        "censuses": [[c.n_def, c.m_indef] for c in profile.censuses],
    }


def to_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _table(rows: List[Dict[str, Any]], columns: List[str]) -> str:
    if not rows:
        return "(none)"
    return pd.DataFrame(rows, columns=columns).to_string(index=False)


def to_text(report: Dict[str, Any]) -> str:
    command = report.get("command")
    lines: List[str] = []
    if command == "validate":
        lines.append("PASS" if report["passed"] else f"FAIL: {len(report['violations'])} violation(s)")
        if report["violations"]:
            lines.append(_table(report["violations"], ["code", "location", "message"]))
    elif command == "sweep":
        lines.append("Events")
        lines.append(_table(report["events"], ["angle", "kind", "location", "genus_delta"]))
        lines.append("")
        lines.append("Trajectory")
        rows = [
            {"midpoint": i["midpoint"], "genus": i["genus"], "census": tuple(i["census"]),
             "heegaard_level": i["heegaard_level"]}
            for i in report["trajectory"]["intervals"]
        ]
        lines.append(_table(rows, ["midpoint", "genus", "census", "heegaard_level"]))
        lines.append("")
        stable = report["stable_genus"]
        lines.append(f"p = {report['p']}  q = {report['q']}  c = {report['c']}  bound = {report['bound']}")
        lines.append(f"moves = {stable['moves']}  reduced = {stable['reduced_moves']}  "
                     f"peak = {stable['reduced_peak']}  trajectory peak = {stable['trajectory_peak']}")
    elif command == "slice":
        lines.append(_table([report], ["angle", "level", "n_def", "m_indef", "chi_r", "chi_sigma", "vertices", "edges"]))
    elif command == "profile":
        lines.append(_table(report["breakpoints"], ["height", "kind", "index"]))
        lines.append("censuses: " + " -> ".join(f"({n},{m})" for n, m in report["censuses"]))
    else:
        raise ValueError(f"Unknown report command: {command}")
    return "\n".join(lines) + "\n"


def render(report: Dict[str, Any], fmt: str = "text") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"Unknown format: {fmt}")


def build_sweep_report(g: Graphic) -> Dict[str, Any]:
    return sweep_report(SweepService(g))
