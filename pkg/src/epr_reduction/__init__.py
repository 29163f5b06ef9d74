"""Exact simulation of sequential projective spin tests on an entangled
electron-positron pair, with Minkowski causal admissibility checks."""

from .causal import Particle, Query, Scenario, Violation, ViolationKind, linear_extensions, validate
from .harness import Report, RunConfig, run
from .reduction import Outcome, OutcomeDistribution, Test, apply_test, conditional, marginal, run_chain
from .scenario_io import fixture_path, load_scenario
from .spacetime import Event, IntervalClass, Velocity
from .spin import I_HAT, J_HAT, K_HAT, Axis, JointState, singlet

__all__ = [
    "Axis", "Event", "I_HAT", "IntervalClass", "J_HAT", "JointState", "K_HAT", "Outcome",
    "OutcomeDistribution", "Particle", "Query", "Report", "RunConfig", "Scenario", "Test", "Velocity",
    "Violation", "ViolationKind", "apply_test", "conditional", "fixture_path", "linear_extensions",
    "load_scenario", "marginal", "run", "run_chain", "singlet", "validate",
]
