"""Projective spin tests with von Neumann (Lüders) state reduction.

Chains of tests are enumerated exactly: every test splits a branch in two,
the post-measurement state is the renormalized projection, and branches whose
probability falls to ``PRUNE_TOL`` or below are kept as explicit zeros but not
expanded further.  Between tests the spin state does not evolve.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import spin
from .errors import (
    DegenerateStateError,
    OrderMismatchError,
    UnknownParticleError,
    UnknownTestError,
    ZeroConditionProbabilityError,
)
from .spin import Axis, JointState

PRUNE_TOL = 1e-14
ORDER_TOL = 1e-12

# (axis, sign) -> 2x2 projector; swappable so tests can check phase-convention independence
ProjectorFactory = Callable[[Axis, int], np.ndarray]


class Outcome(enum.IntEnum):
    PLUS = 1
    MINUS = -1

    @classmethod
    def coerce(cls, value) -> "Outcome":
        if isinstance(value, str):
            try:
                return {"+": cls.PLUS, "-": cls.MINUS, "+1": cls.PLUS, "-1": cls.MINUS}[value.strip()]
            except KeyError:
                raise ValueError(f"outcome must be '+' or '-', got {value!r}") from None
        return cls(int(value))

    @property
    def symbol(self) -> str:
        return "+" if self is Outcome.PLUS else "-"


OUTCOMES = (Outcome.PLUS, Outcome.MINUS)


@dataclass(frozen=True)
class Test:
    """One projective spin measurement of ``particle`` along ``axis`` at ``event``."""

    __test__ = False  # keep pytest from collecting this class

    label: str
    particle: str
    axis: Axis
    event: str = ""


@dataclass(frozen=True)
class Branch:
    history: tuple[tuple[str, Outcome], ...]
    probability: float
    state: Optional[JointState]


@dataclass
class OutcomeDistribution:
    order: tuple[str, ...]
    table: dict[tuple[Outcome, ...], float] = field(default_factory=dict)

    def position(self, label: str) -> int:
        try:
            return self.order.index(label)
        except ValueError:
            raise UnknownTestError(f"test {label!r} not in {self.order}") from None

    def probability(self, assignment: dict[str, Outcome]) -> float:
        """Total probability of all tuples agreeing with ``assignment``."""
        idx = [(self.position(lbl), Outcome.coerce(out)) for lbl, out in assignment.items()]
        return sum(p for key, p in self.table.items() if all(key[i] == o for i, o in idx))

    def by_label(self) -> dict[tuple[tuple[str, Outcome], ...], float]:
        """Table re-keyed by label-sorted (label, outcome) pairs, for order-independent comparison."""
        out = {}
        for key, p in self.table.items():
            out[tuple(sorted(zip(self.order, key)))] = p
        return out

    def total(self) -> float:
        return float(sum(self.table.values()))


def _born(state: JointState, test: Test, projector: ProjectorFactory):
    idx = state.index_of(test.particle)
    for outcome in OUTCOMES:
        proj = projector(test.axis, int(outcome))
        projected = spin.apply_local(proj, state.amplitudes, idx, state.n)
        # <psi|P|psi> is real for Hermitian P; clamp away rounding
        p = float(np.real(np.vdot(state.amplitudes, projected)))
        yield outcome, min(1.0, max(0.0, p)), projected


def apply_test(
    state: JointState, test: Test, *, projector: ProjectorFactory = spin.projector
) -> list[tuple[Outcome, float, Optional[JointState]]]:
    """Both outcomes of ``test`` with their probabilities and reduced states.

    Outcomes at or below ``PRUNE_TOL`` come back with probability 0 and no state.
    """
    if test.particle not in state.particles:
        raise UnknownParticleError(f"test {test.label!r}: no particle {test.particle!r} in state")
    norm = float(np.linalg.norm(state.amplitudes))
    if abs(norm - 1.0) > spin.NORM_TOL:
        raise DegenerateStateError(f"state norm {norm!r} deviates from 1")
    results = []
    for outcome, p, projected in _born(state, test, projector):
        if p <= PRUNE_TOL:
            results.append((outcome, 0.0, None))
        else:
            results.append((outcome, p, JointState(state.particles, projected / np.sqrt(p))))
    return results


def branches(
    state: JointState, tests: Sequence[Test], *, projector: ProjectorFactory = spin.projector
) -> list[Branch]:
    """Leaves of the outcome tree in depth-first order (+ before -), pruned leaves included."""
    leaves: list[Branch] = []

    def walk(st: Optional[JointState], depth: int, history, prob: float):
        if depth == len(tests):
            leaves.append(Branch(tuple(history), prob, st))
            return
        test = tests[depth]
        if st is None:
            for outcome in OUTCOMES:
                walk(None, depth + 1, history + [(test.label, outcome)], 0.0)
            return
        for outcome, p, post in apply_test(st, test, projector=projector):
            walk(post, depth + 1, history + [(test.label, outcome)], prob * p if post is not None else 0.0)

    walk(state, 0, [], 1.0)
    return leaves


def _check_labels(tests: Sequence[Test]) -> None:
    if not tests:
        raise ValueError("a chain needs at least one test")
    labels = [t.label for t in tests]
    if len(set(labels)) != len(labels):
        raise ValueError(f"test labels must be distinct: {labels}")


def run_chain(
    state: JointState, tests: Sequence[Test], *, projector: ProjectorFactory = spin.projector
) -> OutcomeDistribution:
    """Joint outcome law of ``tests`` applied to ``state`` in the given order."""
    tests = list(tests)
    _check_labels(tests)
    dist = OutcomeDistribution(tuple(t.label for t in tests))
    for leaf in branches(state, tests, projector=projector):
        dist.table[tuple(o for _, o in leaf.history)] = leaf.probability
    return dist


def conditional(
    dist: OutcomeDistribution,
    given: Iterable[tuple[str, Outcome]],
    target: tuple[str, Outcome],
) -> float:
    """P(target | given) by exact summation over the joint table."""
    given = {label: Outcome.coerce(o) for label, o in given}
    t_label, t_out = target[0], Outcome.coerce(target[1])
    dist.position(t_label)
    p_given = dist.probability(given)
    if p_given <= PRUNE_TOL:
        raise ZeroConditionProbabilityError(f"P({_fmt(given)}) = {p_given!r}")
    if t_label in given and given[t_label] != t_out:
        return 0.0
    joint = dist.probability({**given, t_label: t_out})
    return min(1.0, max(0.0, joint / p_given))


def _fmt(assignment: dict[str, Outcome]) -> str:
    return ", ".join(f"{k}={Outcome(v).symbol}" for k, v in assignment.items()) or "{}"


def marginal(dist: OutcomeDistribution, label: str) -> dict[Outcome, float]:
    i = dist.position(label)
    out = {o: 0.0 for o in OUTCOMES}
    for key, p in dist.table.items():
        out[key[i]] += p
    return out


def order_invariance(
    state: JointState,
    orders: Sequence[Sequence[Test]],
    *,
    projector: ProjectorFactory = spin.projector,
) -> tuple[bool, float]:
    """Run every order and report (agree within ORDER_TOL, max per-tuple deviation)."""
    if not orders:
        raise OrderMismatchError("no orders given")
    reference = sorted(orders[0], key=lambda t: t.label)
    for order in orders[1:]:
        if sorted(order, key=lambda t: t.label) != reference:
            raise OrderMismatchError("orders are not permutations of the same tests")
    tables = [run_chain(state, order, projector=projector).by_label() for order in orders]
    worst = 0.0
    for a, b in itertools.combinations(tables, 2):
        for key in a.keys() | b.keys():
            worst = max(worst, abs(a.get(key, 0.0) - b.get(key, 0.0)))
    return worst <= ORDER_TOL, worst


def correlation(
    state: JointState, a: Axis, b: Axis, *, projector: ProjectorFactory = spin.projector
) -> float:
    """Expectation of the product of outcomes for spin along ``a`` (first particle) and ``b`` (second)."""
    if state.n != 2:
        raise ValueError("correlation needs a two-particle state")
    first, second = state.particles
    dist = run_chain(state, [Test("a", first, a), Test("b", second, b)], projector=projector)
    return float(sum(int(x) * int(y) * p for (x, y), p in dist.table.items()))
