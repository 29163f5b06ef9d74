"""Physical admissibility of scenarios and their causally consistent test orders.

Charge conservation is enforced geometrically: all tests on one particle must
lie on a single causal worldline, i.e. be pairwise lightcone-comparable.  A
particle created at the source event cannot be tested outside the source's
forward lightcone.  Conditioning on an outcome outside the target's past
lightcone is allowed but produces a warning.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from typing import Union

from . import spin
from .errors import NotValidatedError, UnknownReferenceError
from .reduction import Outcome, Test
from .spacetime import Event, in_forward_lightcone, interval_squared, LIGHTLIKE_TOL
from .spin import JointState

MAX_EXTENSIONS = 10_000

SPECIES_CHARGE = {"electron": -1, "positron": +1}


class ViolationKind(str, enum.Enum):
    CHARGE_CONSERVATION = "ChargeConservationViolation"
    SOURCE_CAUSALITY = "SourceCausalityViolation"
    UNKNOWN_REFERENCE = "UnknownReference"
    DUPLICATE_LABEL = "DuplicateLabel"

    def __str__(self) -> str:
        return self.value


INACCESSIBLE_CONDITION = "CausallyInaccessibleCondition"


@dataclass(frozen=True)
class Particle:
    name: str
    species: str
    charge: int


@dataclass(frozen=True)
class Query:
    """P(target | given); outcomes are attached to test labels."""

    given: tuple[tuple[str, Outcome], ...]
    target: tuple[str, Outcome]

    def __post_init__(self):
        given = tuple((str(lbl), Outcome.coerce(o)) for lbl, o in self.given)
        object.__setattr__(self, "given", given)
        object.__setattr__(self, "target", (str(self.target[0]), Outcome.coerce(self.target[1])))

    def labels(self) -> list[str]:
        return [lbl for lbl, _ in self.given] + [self.target[0]]

    def describe(self) -> str:
        lbl, out = self.target
        cond = ", ".join(f"{g}={o.symbol}" for g, o in self.given)
        return f"P({lbl}={out.symbol} | {cond})" if cond else f"P({lbl}={out.symbol})"


@dataclass(frozen=True)
class Scenario:
    particles: tuple[Particle, ...]
    source: Event
    events: tuple[Event, ...]
    tests: tuple[Test, ...]
    initial_state: Union[JointState, str] = "singlet"
    queries: tuple[Query, ...] = ()
    description: str = ""

    def __post_init__(self):
        for name in ("particles", "events", "tests", "queries"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def all_events(self) -> dict[str, Event]:
        """Source and declared events by label (first occurrence wins)."""
        out: dict[str, Event] = {}
        for e in (self.source, *self.events):
            out.setdefault(e.label, e)
        return out

    def event_of(self, test: Union[Test, str]) -> Event:
        if isinstance(test, str):
            test = self.test(test)
        try:
            return self.all_events()[test.event]
        except KeyError:
            raise UnknownReferenceError(f"test {test.label!r}: unknown event {test.event!r}") from None

    def test(self, label: str) -> Test:
        for t in self.tests:
            if t.label == label:
                return t
        raise UnknownReferenceError(f"unknown test {label!r}")

    def state(self) -> JointState:
        if isinstance(self.initial_state, JointState):
            return self.initial_state
        if self.initial_state != "singlet":
            raise ValueError(f"unknown initial state token {self.initial_state!r}")
        if len(self.particles) != 2:
            raise ValueError("the singlet needs exactly two particles")
        return spin.singlet(self.particles[0].name, self.particles[1].name)

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    detail: str
    labels: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "detail": self.detail, "labels": list(self.labels)}


@dataclass(frozen=True)
class AccessibilityWarning:
    condition: str
    target: str
    detail: str
    kind: str = INACCESSIBLE_CONDITION

    def to_dict(self) -> dict:
        return {"kind": self.kind, "condition": self.condition, "target": self.target, "detail": self.detail}


class Orderings(list):
    """List of test-label orders with a flag set when enumeration hit the cap."""

    def __init__(self, orders=(), truncated: bool = False):
        super().__init__(orders)
        self.truncated = truncated


def _duplicates(labels) -> list[str]:
    seen, dups = set(), []
    for lbl in labels:
        if lbl in seen and lbl not in dups:
            dups.append(lbl)
        seen.add(lbl)
    return dups


def validate(s: Scenario) -> list[Violation]:
    """Every admissibility violation in ``s``; an empty list means valid."""
    out: list[Violation] = []

    def add(kind, detail, *labels):
        out.append(Violation(kind, detail, tuple(labels)))

    dup = ViolationKind.DUPLICATE_LABEL
    for name in _duplicates(p.name for p in s.particles):
        add(dup, f"particle name {name!r} declared more than once", name)
    for lbl in _duplicates(e.label for e in (s.source, *s.events)):
        add(dup, f"event label {lbl!r} declared more than once", lbl)
    for lbl in _duplicates(t.label for t in s.tests):
        add(dup, f"test label {lbl!r} declared more than once", lbl)
    by_slot: dict[tuple[str, str], list[str]] = {}
    for t in s.tests:
        by_slot.setdefault((t.particle, t.event), []).append(t.label)
    for (particle, event), labels in sorted(by_slot.items()):
        if len(labels) > 1:
            labels = sorted(labels)
            add(dup, f"tests {', '.join(labels)} all test particle {particle!r} at event {event!r}", *labels, event)

    unknown = ViolationKind.UNKNOWN_REFERENCE
    names = {p.name for p in s.particles}
    events = s.all_events()
    test_labels = {t.label for t in s.tests}
    for t in s.tests:
        if t.particle not in names:
            add(unknown, f"test {t.label!r} refers to unknown particle {t.particle!r}", t.label)
        if t.event not in events:
            add(unknown, f"test {t.label!r} refers to unknown event {t.event!r}", t.label)
    for q in s.queries:
        for lbl in q.labels():
            if lbl not in test_labels:
                add(unknown, f"query {q.describe()} refers to unknown test {lbl!r}", lbl)
    if isinstance(s.initial_state, JointState):
        if set(s.initial_state.particles) != names:
            missing = sorted(names.symmetric_difference(s.initial_state.particles))
            add(unknown, f"initial state particles {list(s.initial_state.particles)} do not match declared particles", *missing)

    located = [t for t in s.tests if t.event in events]
    for t in located:
        if not in_forward_lightcone(s.source, events[t.event]):
            add(
                ViolationKind.SOURCE_CAUSALITY,
                f"test {t.label!r} at event {t.event!r} lies outside the forward lightcone of source {s.source.label!r}",
                t.label,
                t.event,
            )

    for particle in sorted(names):
        mine = sorted((t for t in located if t.particle == particle), key=lambda t: t.label)
        for a, b in itertools.combinations(mine, 2):
            ea, eb = events[a.event], events[b.event]
            if not (in_forward_lightcone(ea, eb) or in_forward_lightcone(eb, ea)):
                add(
                    ViolationKind.CHARGE_CONSERVATION,
                    f"tests {a.label!r} and {b.label!r} on particle {particle!r} are spacelike separated "
                    f"(events {a.event!r}, {b.event!r})",
                    a.label,
                    b.label,
                )

    return sorted(out, key=lambda v: (v.kind.value, v.labels, v.detail))


def is_valid(s: Scenario) -> bool:
    return not validate(s)


def boundary_cases(s: Scenario) -> list[tuple[str, str]]:
    """Source-to-test and same-particle test pairs sitting on the lightcone boundary."""
    events = s.all_events()
    located = [t for t in s.tests if t.event in events]
    flagged = []
    for t in located:
        if abs(interval_squared(s.source, events[t.event])) <= LIGHTLIKE_TOL and t.event != s.source.label:
            flagged.append((s.source.label, t.label))
    for a, b in itertools.combinations(sorted(located, key=lambda t: t.label), 2):
        if a.particle == b.particle and a.event != b.event:
            if abs(interval_squared(events[a.event], events[b.event])) <= LIGHTLIKE_TOL:
                flagged.append((a.label, b.label))
    return flagged


def precedes(s: Scenario, a: Test, b: Test) -> bool:
    """Strict causal precedence of test events (coincident events are unordered)."""
    ea, eb = s.event_of(a), s.event_of(b)
    return in_forward_lightcone(ea, eb) and not in_forward_lightcone(eb, ea)


def linear_extensions(s: Scenario, limit: int = MAX_EXTENSIONS) -> Orderings:
    """All total orders of the tests compatible with causal precedence.

    Free choices are taken in lexicographic label order, so the output order is
    deterministic.  At most ``limit`` orders are produced; ``truncated`` marks
    that more exist.
    """
    if validate(s):
        raise NotValidatedError("scenario has admissibility violations")
    tests = sorted(s.tests, key=lambda t: t.label)
    preds = {t.label: {u.label for u in tests if u is not t and precedes(s, u, t)} for t in tests}
    result = Orderings()
    current: list[str] = []
    placed: set[str] = set()

    def extend() -> bool:
        if len(current) == len(tests):
            if len(result) >= limit:
                result.truncated = True
                return False
            result.append(list(current))
            return True
        for t in tests:
            if t.label not in placed and preds[t.label] <= placed:
                current.append(t.label)
                placed.add(t.label)
                keep_going = extend()
                placed.discard(t.label)
                current.pop()
                if not keep_going:
                    return False
        return True

    extend()
    return result


def lab_order(s: Scenario) -> list[str]:
    """Test labels sorted by lab-frame time, ties broken by label."""
    return [t.label for t in sorted(s.tests, key=lambda t: (s.event_of(t).t, t.label))]


def accessibility_warnings(s: Scenario, query: Query) -> list[AccessibilityWarning]:
    """Warn for each condition whose event is outside the closed past cone of the target."""
    target = s.test(query.target[0])
    target_event = s.event_of(target)
    warnings = []
    for label, _ in query.given:
        cond = s.test(label)
        if not in_forward_lightcone(s.event_of(cond), target_event):
            warnings.append(
                AccessibilityWarning(
                    condition=label,
                    target=target.label,
                    detail=(
                        f"outcome of test {label!r} at event {cond.event!r} is causally inaccessible "
                        f"at test {target.label!r} (event {target.event!r})"
                    ),
                )
            )
    return warnings
