"""End-to-end scenario execution and report assembly."""
from __future__ import annotations

import itertools
import json
import math
from importlib import resources
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import causal, reduction, spin
from .causal import Query, Scenario
from .errors import NotValidatedError, ZeroConditionProbabilityError
from .reduction import OUTCOMES, Outcome, OutcomeDistribution, Test
from .scenario_io import SCHEMA_VERSION, dump_scenario, event_to_dict
from .spacetime import Velocity, boost, classify, IntervalClass, order_reversing_frame
from .spin import Axis

GENERATOR_NAME = "PCG64 (numpy.random.Generator over numpy.random.SeedSequence(seed)); u < P(+) selects +"
NOT_SINGLET = "NotSinglet"
MODES = ("exact", "montecarlo")


@dataclass(frozen=True)
class RunConfig:
    mode: str = "exact"
    samples: int = 100_000
    seed: int = 0
    frame: Optional[Velocity] = None
    output: str = "table"

    def __post_init__(self):
        mode = "montecarlo" if self.mode == "mc" else self.mode
        object.__setattr__(self, "mode", mode)
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.output not in ("json", "table"):
            raise ValueError(f"output must be 'json' or 'table', got {self.output!r}")


@dataclass
class Report:
    scenario: dict
    validation: dict
    mode: str
    orderings: list = field(default_factory=list)
    truncated: bool = False
    queries: list = field(default_factory=list)
    frame: Optional[dict] = None
    sampler: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.validation["ok"]

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 2

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "scenario": self.scenario,
            "validation": self.validation,
            "mode": self.mode,
            "orderings": self.orderings,
            "truncated": self.truncated,
            "queries": self.queries,
            "frame": self.frame,
            "sampler": self.sampler,
        }

    def to_json(self) -> str:
        return to_json(self.to_dict())

    def query(self, description: str) -> dict:
        for q in self.queries:
            if q["query"] == description:
                return q
        raise KeyError(description)


def report_schema() -> dict:
    """JSON Schema that every run report conforms to."""
    return json.loads((resources.files("epr_reduction") / "report.schema.json").read_text(encoding="utf-8"))


def to_json(data) -> str:
    # float repr is the shortest string that round-trips exactly
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def _outcomes(key: Sequence[Outcome]) -> list[str]:
    return [Outcome(o).symbol for o in key]


def distribution_to_dict(dist: OutcomeDistribution) -> dict:
    return {
        "order": list(dist.order),
        "distribution": [{"outcomes": _outcomes(k), "probability": p} for k, p in dist.table.items()],
    }


def validation_section(s: Scenario) -> dict:
    violations = causal.validate(s)
    return {
        "ok": not violations,
        "violations": [v.to_dict() for v in violations],
        "boundary_cases": [list(pair) for pair in causal.boundary_cases(s)] if not violations else [],
    }


def _tests_in(s: Scenario, order: Sequence[str]) -> list[Test]:
    return [s.test(lbl) for lbl in order]


def _answer(dist: OutcomeDistribution, q: Query) -> tuple[Optional[float], Optional[str]]:
    try:
        return reduction.conditional(dist, q.given, q.target), None
    except ZeroConditionProbabilityError as exc:
        return None, f"ZeroConditionProbability: {exc}"


def _query_entry(s: Scenario, q: Query, dists: Sequence[OutcomeDistribution]) -> dict:
    answers = [_answer(d, q) for d in dists]
    values = [a for a, _ in answers if a is not None]
    errors = [e for _, e in answers if e is not None]
    return {
        "query": q.describe(),
        "given": [{"test": lbl, "outcome": o.symbol} for lbl, o in q.given],
        "target": {"test": q.target[0], "outcome": q.target[1].symbol},
        "probability": values[0] if values and not errors else None,
        "per_ordering": [a for a, _ in answers],
        "max_spread": (max(values) - min(values)) if values else None,
        "error": errors[0] if errors else None,
        "warnings": [w.to_dict() for w in causal.accessibility_warnings(s, q)],
    }


def run(s: Scenario, cfg: RunConfig = RunConfig()) -> Report:
    """Validate ``s`` and, if admissible, compute everything ``cfg`` asks for."""
    report = Report(scenario=dump_scenario(s), validation=validation_section(s), mode=cfg.mode)
    if not report.ok:
        return report
    state = s.state()
    if cfg.mode == "exact":
        orders = causal.linear_extensions(s)
        report.truncated = orders.truncated
        dists = [reduction.run_chain(state, _tests_in(s, order)) for order in orders]
        report.orderings = [distribution_to_dict(d) for d in dists]
    else:
        sample = montecarlo_sample(s, causal.lab_order(s), cfg.samples, cfg.seed)
        report.sampler = sample
        empirical = OutcomeDistribution(tuple(sample["order"]))
        for row in sample["rows"]:
            empirical.table[tuple(Outcome.coerce(o) for o in row["outcomes"])] = row["frequency"]
        dists = [empirical]
    report.queries = [_query_entry(s, q, dists) for q in s.queries]
    if cfg.frame is not None:
        report.frame = frame_report(s, cfg.frame)
    return report


def _branch_plus_probabilities(state, tests) -> dict[tuple[int, ...], float]:
    """P(+) at every reachable node of the outcome tree, keyed by the bit prefix (0 = +, 1 = -)."""
    table: dict[tuple[int, ...], float] = {}

    def walk(st, depth, prefix):
        if depth == len(tests):
            return
        results = reduction.apply_test(st, tests[depth])
        plus, minus = results
        # pruned outcomes must stay unreachable
        table[prefix] = 1.0 if minus[2] is None else 0.0 if plus[2] is None else plus[1]
        for bit, (_, p, post) in enumerate(results):
            if post is not None:
                walk(post, depth + 1, prefix + (bit,))

    walk(state, 0, ())
    return table


def _check_extension(s: Scenario, order: Sequence[str]) -> None:
    if sorted(order) != sorted(t.label for t in s.tests):
        raise ValueError(f"order {list(order)} is not a permutation of the scenario tests")
    for i, j in itertools.combinations(range(len(order)), 2):
        if causal.precedes(s, s.test(order[j]), s.test(order[i])):
            raise ValueError(f"order {list(order)} puts {order[i]!r} before its causal predecessor {order[j]!r}")


def montecarlo_sample(s: Scenario, order: Sequence[str], samples: int, seed: int) -> dict:
    """Sample ``samples`` outcome chains along ``order`` and compare with the exact law.

    Outcomes are drawn test by test: one uniform variate per test and sample,
    plus when it falls below the branch's conditional P(+).
    """
    if causal.validate(s):
        raise NotValidatedError("scenario has admissibility violations")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    order = list(order)
    _check_extension(s, order)
    tests = _tests_in(s, order)
    state = s.state()
    k = len(tests)
    p_plus = _branch_plus_probabilities(state, tests)

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    u = rng.random((samples, k))
    index = np.zeros(samples, dtype=np.int64)
    for depth in range(k):
        nxt = np.empty_like(index)
        for prefix, p in p_plus.items():
            if len(prefix) != depth:
                continue
            code = sum(bit << (depth - 1 - i) for i, bit in enumerate(prefix))
            mask = index == code
            nxt[mask] = 2 * code + (u[mask, depth] >= p)
        index = nxt
    counts = np.bincount(index, minlength=2**k)

    exact = reduction.run_chain(state, tests)
    rows = []
    worst = 0.0
    for i, key in enumerate(itertools.product(OUTCOMES, repeat=k)):
        p = exact.table[key]
        freq = counts[i] / samples
        worst = max(worst, abs(freq - p))
        rows.append(
            {
                "outcomes": _outcomes(key),
                "count": int(counts[i]),
                "frequency": float(freq),
                "exact": p,
                "standard_error": math.sqrt(p * (1.0 - p) / samples),
            }
        )
    return {
        "generator": GENERATOR_NAME,
        "seed": int(seed),
        "samples": int(samples),
        "order": order,
        "rows": rows,
        "max_abs_deviation": worst,
    }


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


def frame_report(s: Scenario, v: Union[Velocity, Sequence[float]]) -> dict:
    """Event coordinates and test time order as seen from a frame moving at ``v``."""
    if not isinstance(v, Velocity):
        v = Velocity(*v)
    events = s.all_events()
    boosted = {lbl: boost(e, v) for lbl, e in events.items()}
    located = [t for t in s.tests if t.event in events]
    lab = sorted(located, key=lambda t: (events[t.event].t, t.label))
    moving = sorted(located, key=lambda t: (boosted[t.event].t, t.label))

    flipped, reversing = [], []
    for a, b in itertools.combinations(lab, 2):
        if a.event == b.event:
            continue
        lab_sign = _sign(events[b.event].t - events[a.event].t)
        new_sign = _sign(boosted[b.event].t - boosted[a.event].t)
        if lab_sign != new_sign:
            flipped.append([a.label, b.label])
        if classify(events[a.event], events[b.event]) is IntervalClass.SPACELIKE:
            w = order_reversing_frame(events[a.event], events[b.event])
            reversing.append({"pair": [a.label, b.label], "velocity": [w.vx, w.vy, w.vz]})

    return {
        "velocity": [v.vx, v.vy, v.vz],
        "speed": v.speed,
        "gamma": v.gamma,
        "events": [event_to_dict(e) for e in boosted.values()],
        "lab_order": [t.label for t in lab],
        "test_order": [t.label for t in moving],
        "test_times": {t.label: boosted[t.event].t for t in moving},
        "flipped_pairs": flipped,
        "reversing_frames": reversing,
    }


def sweep_plane_axis(a: Axis) -> Axis:
    """Fixed unit vector orthogonal to ``a``: the coordinate axis least aligned with it, orthogonalized."""
    vec = a.vector
    basis = np.eye(3)[int(np.argmin(np.abs(vec)))]
    return Axis(*(basis - (basis @ vec) * vec))


def correlation_sweep(s: Scenario, a: Axis, m: int) -> dict:
    """E(a, b_i) for b_i = a rotated by i*pi/(m-1) in a fixed plane containing ``a``."""
    if m < 2:
        raise ValueError("a sweep needs at least 2 steps")
    state = s.state()
    if state.n != 2:
        raise ValueError("correlation sweep needs a two-particle state")
    singlet = spin.is_singlet(state)
    u = sweep_plane_axis(a)
    rows = []
    for i in range(m):
        theta = i * math.pi / (m - 1)
        b = Axis(*(math.cos(theta) * a.vector + math.sin(theta) * u.vector))
        row = {"theta": theta, "correlation": reduction.correlation(state, a, b)}
        if singlet:
            row["reference"] = -math.cos(theta)
        rows.append(row)
    return {
        "schema": SCHEMA_VERSION,
        "axis": list(a),
        "plane_axis": list(u),
        "particles": list(state.particles),
        "rows": rows,
        "warnings": [] if singlet else [NOT_SINGLET],
    }
