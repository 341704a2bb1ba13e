"""Scenario files: JSON descriptions of a torus quotient plus golden data."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Optional

from .git import Presentation, PresentationError, consistency_check


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    coordinates: tuple[str, ...]
    weights: tuple[tuple[int, ...], ...]
    character: Optional[tuple[int, ...]] = None
    excised: Optional[tuple[tuple[str, ...], ...]] = None
    max_degree: Optional[int] = None
    presentation_data: Optional[dict] = None
    assumptions: tuple[str, ...] = ()
    expected: dict = field(default_factory=dict, compare=False)

    def presentation(self) -> Presentation:
        excised = None
        if self.excised is not None:
            excised = [frozenset(self.coordinates.index(x) for x in s) for s in self.excised]
        return Presentation(self.coordinates, self.weights, self.character, excised)

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "coordinates": list(self.coordinates),
            "weights": [list(r) for r in self.weights],
        }
        if self.character is not None:
            out["character"] = list(self.character)
        if self.excised is not None:
            out["excised"] = [list(s) for s in self.excised]
        if self.max_degree is not None:
            out["max_degree"] = self.max_degree
        if self.presentation_data is not None:
            out["presentation"] = self.presentation_data
        if self.assumptions:
            out["assumptions"] = list(self.assumptions)
        return out


def _int_list(x, where: str) -> tuple[int, ...]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise ScenarioError(f"{where}: expected a list of integers")
    return tuple(x)


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    for key in ("name", "coordinates", "weights"):
        if key not in data:
            raise ScenarioError(f"missing key {key!r}")
    coords = data["coordinates"]
    if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
        raise ScenarioError("coordinates: expected a list of names")
    if len(set(coords)) != len(coords):
        dup = sorted({c for c in coords if coords.count(c) > 1})
        raise ScenarioError(f"coordinates: duplicate names {dup}")
    if not isinstance(data["weights"], list) or not data["weights"]:
        raise ScenarioError("weights: expected a non-empty list of rows")
    weights = []
    for i, row in enumerate(data["weights"]):
        row = _int_list(row, f"weights row {i}")
        if len(row) != len(coords):
            raise ScenarioError(f"weights row {i}: length {len(row)}, expected {len(coords)}")
        weights.append(row)
    chi = None
    if data.get("character") is not None:
        chi = _int_list(data["character"], "character")
        if len(chi) != len(weights):
            raise ScenarioError(f"character: length {len(chi)}, expected {len(weights)}")
    excised = None
    if data.get("excised") is not None:
        excised = []
        for i, s in enumerate(data["excised"]):
            if not isinstance(s, list):
                raise ScenarioError(f"excised entry {i}: expected a list of names")
            for x in s:
                if x not in coords:
                    raise ScenarioError(f"excised entry {i}: unknown coordinate {x!r}")
            excised.append(tuple(s))
        excised = tuple(excised)
    if chi is None and excised is None:
        raise ScenarioError("need a character or an excised list")
    md = data.get("max_degree")
    if md is not None and (not isinstance(md, int) or md < 0):
        raise ScenarioError("max_degree: expected a non-negative integer")
    sc = Scenario(
        name=str(data["name"]),
        coordinates=tuple(coords),
        weights=tuple(weights),
        character=chi,
        excised=excised,
        max_degree=md,
        presentation_data=data.get("presentation"),
        assumptions=tuple(data.get("assumptions", ())),
        expected=data.get("expected", {}),
    )
    try:
        p = sc.presentation()
    except PresentationError as e:
        raise ScenarioError(str(e)) from None
    if chi is not None and excised is not None:
        ok, bad = consistency_check(p)
        if not ok:
            raise ScenarioError(f"character and excised list disagree on supports {bad}")
    return sc


def parse_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    return scenario_from_dict(data)


def fixture_names() -> list[str]:
    files = resources.files("strongchow").joinpath("fixtures")
    return sorted(f.name[:-5] for f in files.iterdir() if f.name.endswith(".json"))


def fixture_text(name: str) -> str:
    if name not in fixture_names():
        raise ScenarioError(f"unknown fixture {name!r}; available: {fixture_names()}")
    return resources.files("strongchow").joinpath("fixtures", f"{name}.json").read_text()


def load_fixture(name: str) -> Scenario:
    return parse_scenario(fixture_text(name))
