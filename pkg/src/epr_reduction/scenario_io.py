"""Scenario files: JSON (UTF-8) with an explicit ``"schema": 1`` version field.

Layout::

    {
      "schema": 1,
      "description": "optional free text",
      "particles": [{"name": "e", "species": "electron", "charge": -1}, ...],
      "source": {"label": "O", "t": 0, "x": 0, "y": 0, "z": 0},
      "events": [{"label": "A", "t": 1.0, "x": -0.9, "y": 0, "z": 0}, ...],
      "initial_state": "singlet" | {"amplitudes": [[re, im], ...], "order": ["e", "p"]},
      "tests": [{"label": "A", "particle": "e", "axis": [0, 0, 1], "event": "A"}, ...],
      "queries": [{"given": [{"test": "A", "outcome": "+"}], "target": {"test": "E", "outcome": "+"}}]
    }

Dangling references (unknown particles, events, tests) are not load errors;
they are reported by :func:`epr_reduction.causal.validate`.
"""
from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Union

import numpy as np

from .causal import SPECIES_CHARGE, Particle, Query, Scenario
from .errors import DegenerateStateError, DuplicateLabelError, NormError, ParseError, SchemaError, ZeroAxisError
from .reduction import Outcome, Test
from .spacetime import Event
from .spin import Axis, JointState

SCHEMA_VERSION = 1
LOAD_NORM_TOL = 1e-6

PathLike = Union[str, Path]


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``fixture_path("paper_fig1.json")``."""
    return Path(str(resources.files("epr_reduction") / "fixtures" / name))


def load_scenario(path: PathLike) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not UTF-8 ({exc})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from exc
    return parse_scenario(data)


def _get(obj: dict, key: str, path: str, kind, optional=False, default=None):
    if key not in obj:
        if optional:
            return default
        raise SchemaError(f"{path}.{key}" if path else key, "missing field")
    value = obj[key]
    where = f"{path}.{key}" if path else key
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(where, f"expected a number, got {type(value).__name__}")
        if not math.isfinite(value):
            raise SchemaError(where, "number must be finite")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(where, f"expected an integer, got {type(value).__name__}")
        return value
    if not isinstance(value, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(where, f"expected {names}, got {type(value).__name__}")
    return value


def _event(obj: Any, path: str) -> Event:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    label = _get(obj, "label", path, str)
    coords = [_get(obj, k, path, float) for k in ("t", "x", "y", "z")]
    return Event(label, *coords)


def _vector(value: Any, path: str, length: int) -> list[float]:
    if not isinstance(value, list) or len(value) != length:
        raise SchemaError(path, f"expected a list of {length} numbers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise SchemaError(f"{path}[{i}]", "expected a finite number")
        out.append(float(v))
    return out


def _outcome(value: Any, path: str) -> Outcome:
    if value not in ("+", "-"):
        raise SchemaError(path, f"outcome must be '+' or '-', got {value!r}")
    return Outcome.coerce(value)


def _initial_state(value: Any, particles: list[Particle]):
    if value == "singlet":
        if len(particles) != 2:
            raise SchemaError("initial_state", f"'singlet' needs exactly two particles, found {len(particles)}")
        return "singlet"
    if isinstance(value, str):
        raise SchemaError("initial_state", f"unknown state token {value!r}")
    if not isinstance(value, dict):
        raise SchemaError("initial_state", "expected 'singlet' or an object")
    order = _get(value, "order", "initial_state", list)
    for i, name in enumerate(order):
        if not isinstance(name, str):
            raise SchemaError(f"initial_state.order[{i}]", "expected a particle name")
    raw = _get(value, "amplitudes", "initial_state", list)
    if len(raw) != 2 ** len(order):
        raise SchemaError(
            "initial_state.amplitudes", f"{len(order)} particles need {2 ** len(order)} amplitudes, got {len(raw)}"
        )
    amps = np.array(
        [complex(*_vector(a, f"initial_state.amplitudes[{i}]", 2)) for i, a in enumerate(raw)], dtype=complex
    )
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > LOAD_NORM_TOL:
        raise NormError(f"initial_state.amplitudes: norm {norm!r} is not within {LOAD_NORM_TOL} of 1")
    try:
        return JointState(tuple(order), amps / norm)
    except (DuplicateLabelError, DegenerateStateError) as exc:
        raise SchemaError("initial_state", str(exc)) from exc


def parse_scenario(data: Any) -> Scenario:
    """Build a :class:`Scenario` from already-decoded JSON."""
    if not isinstance(data, dict):
        raise SchemaError("$", "top level must be an object")
    version = _get(data, "schema", "", int)
    if version != SCHEMA_VERSION:
        raise SchemaError("schema", f"unsupported schema version {version}")

    particles = []
    for i, obj in enumerate(_get(data, "particles", "", list)):
        path = f"particles[{i}]"
        if not isinstance(obj, dict):
            raise SchemaError(path, "expected an object")
        name = _get(obj, "name", path, str)
        species = _get(obj, "species", path, str)
        charge = _get(obj, "charge", path, int)
        if charge not in (-1, 0, 1):
            raise SchemaError(f"{path}.charge", f"unsupported charge {charge}")
        if species in SPECIES_CHARGE and SPECIES_CHARGE[species] != charge:
            raise SchemaError(f"{path}.charge", f"{species} has charge {SPECIES_CHARGE[species]}, not {charge}")
        particles.append(Particle(name, species, charge))

    source = _event(_get(data, "source", "", dict), "source")
    events = [_event(obj, f"events[{i}]") for i, obj in enumerate(_get(data, "events", "", list))]

    tests = []
    for i, obj in enumerate(_get(data, "tests", "", list)):
        path = f"tests[{i}]"
        if not isinstance(obj, dict):
            raise SchemaError(path, "expected an object")
        vec = _vector(_get(obj, "axis", path, list), f"{path}.axis", 3)
        try:
            axis = Axis(*vec)
        except ZeroAxisError as exc:
            raise SchemaError(f"{path}.axis", str(exc)) from exc
        tests.append(
            Test(
                label=_get(obj, "label", path, str),
                particle=_get(obj, "particle", path, str),
                axis=axis,
                event=_get(obj, "event", path, str),
            )
        )

    queries = []
    for i, obj in enumerate(_get(data, "queries", "", list, optional=True, default=[])):
        path = f"queries[{i}]"
        if not isinstance(obj, dict):
            raise SchemaError(path, "expected an object")
        given = []
        for j, g in enumerate(_get(obj, "given", path, list)):
            gp = f"{path}.given[{j}]"
            if not isinstance(g, dict):
                raise SchemaError(gp, "expected an object")
            given.append((_get(g, "test", gp, str), _outcome(_get(g, "outcome", gp, str), f"{gp}.outcome")))
        tgt = _get(obj, "target", path, dict)
        tp = f"{path}.target"
        target = (_get(tgt, "test", tp, str), _outcome(_get(tgt, "outcome", tp, str), f"{tp}.outcome"))
        queries.append(Query(tuple(given), target))

    if "initial_state" not in data:
        raise SchemaError("initial_state", "missing field")
    state = _initial_state(data["initial_state"], particles)

    return Scenario(
        particles=tuple(particles),
        source=source,
        events=tuple(events),
        tests=tuple(tests),
        initial_state=state,
        queries=tuple(queries),
        description=_get(data, "description", "", str, optional=True, default=""),
    )


def event_to_dict(e: Event) -> dict:
    return {"label": e.label, "t": e.t, "x": e.x, "y": e.y, "z": e.z}


def dump_scenario(s: Scenario) -> dict:
    """Inverse of :func:`parse_scenario`."""
    if isinstance(s.initial_state, JointState):
        state: Any = {
            "amplitudes": [[float(a.real), float(a.imag)] for a in s.initial_state.amplitudes],
            "order": list(s.initial_state.particles),
        }
    else:
        state = s.initial_state
    out = {"schema": SCHEMA_VERSION}
    if s.description:
        out["description"] = s.description
    out.update(
        {
            "particles": [{"name": p.name, "species": p.species, "charge": p.charge} for p in s.particles],
            "source": event_to_dict(s.source),
            "events": [event_to_dict(e) for e in s.events],
            "initial_state": state,
            "tests": [
                {"label": t.label, "particle": t.particle, "axis": list(t.axis), "event": t.event} for t in s.tests
            ],
            "queries": [
                {
                    "given": [{"test": lbl, "outcome": o.symbol} for lbl, o in q.given],
                    "target": {"test": q.target[0], "outcome": q.target[1].symbol},
                }
                for q in s.queries
            ],
        }
    )
    return out
