"""Spin-1/2 Hilbert space machinery.

Single-particle states are length-2 complex arrays in the z basis with spin
up (+1) first.  Joint states index amplitudes by outcome bit strings, with
the first listed particle as the most significant bit and bit 0 meaning +1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateStateError, DuplicateLabelError, UnknownParticleError, ZeroAxisError

NORM_TOL = 1e-8

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Axis:
    """Unit 3-vector.  Inputs are normalized on construction."""

    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        v = np.array([self.nx, self.ny, self.nz], dtype=float)
        if not np.all(np.isfinite(v)):
            raise ZeroAxisError(f"axis components must be finite, got {tuple(v)}")
        norm = float(np.linalg.norm(v))
        if norm < 1e-12:
            raise ZeroAxisError("axis must be a non-zero vector")
        v = v / norm
        for name, value in zip(("nx", "ny", "nz"), v):
            object.__setattr__(self, name, float(value))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def __neg__(self) -> "Axis":
        return Axis(-self.nx, -self.ny, -self.nz)

    def __iter__(self):
        return iter((self.nx, self.ny, self.nz))


I_HAT = Axis(1.0, 0.0, 0.0)
J_HAT = Axis(0.0, 1.0, 0.0)
K_HAT = Axis(0.0, 0.0, 1.0)


def spin_operator(n: Axis) -> np.ndarray:
    """Pauli operator sigma.n for spin measured along ``n``."""
    return np.array(
        [[n.nz, n.nx - 1j * n.ny], [n.nx + 1j * n.ny, -n.nz]],
        dtype=complex,
    )


def eigenbasis(n: Axis) -> tuple[np.ndarray, np.ndarray]:
    """(plus, minus) eigenvectors of ``spin_operator(n)`` in the spherical-angle phase convention."""
    theta = math.acos(max(-1.0, min(1.0, n.nz)))
    # + 0.0 folds -0.0 into 0.0 so the poles get phi = 0
    phi = math.atan2(n.ny + 0.0, n.nx + 0.0)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    plus = np.array([c, np.exp(1j * phi) * s], dtype=complex)
    minus = np.array([-np.exp(-1j * phi) * s, c], dtype=complex)
    return plus, minus


def projector(n: Axis, sign: int) -> np.ndarray:
    """Spectral projector (I + sign * sigma.n) / 2."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return (IDENTITY + sign * spin_operator(n)) / 2


@dataclass(frozen=True, eq=False)
class JointState:
    """Normalized pure state of several spin-1/2 particles.

    Construction rejects amplitude vectors whose norm is off by more than
    ``NORM_TOL`` and renormalizes the rest.  The stored array is read-only.
    """

    particles: tuple[str, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        particles = tuple(self.particles)
        if len(set(particles)) != len(particles):
            raise DuplicateLabelError(f"particle labels must be distinct: {particles}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (2 ** len(particles),):
            raise ValueError(
                f"{len(particles)} particles need {2 ** len(particles)} amplitudes, got {amps.size}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise DegenerateStateError(f"state norm {norm!r} deviates from 1")
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "particles", particles)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return len(self.particles)

    def index_of(self, particle: str) -> int:
        try:
            return self.particles.index(particle)
        except ValueError:
            raise UnknownParticleError(f"no particle {particle!r} in {self.particles}") from None

    def inner(self, other: "JointState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def close_to(self, other: "JointState", tol: float = 1e-10, up_to_phase: bool = True) -> bool:
        if self.particles != other.particles:
            return False
        if up_to_phase:
            return abs(abs(self.inner(other)) - 1.0) <= tol
        return bool(np.allclose(self.amplitudes, other.amplitudes, atol=tol, rtol=0))


def product_state(states: dict[str, np.ndarray]) -> JointState:
    """Tensor product of single-particle states, in dict order."""
    amps = np.array([1.0], dtype=complex)
    for vec in states.values():
        amps = np.kron(amps, np.asarray(vec, dtype=complex))
    return JointState(tuple(states), amps)


def singlet(electron: str = "e", positron: str = "p") -> JointState:
    """Normalized total-spin-zero state (|+-> - |-+>)/sqrt(2)."""
    return JointState((electron, positron), [0.0, _INV_SQRT2, -_INV_SQRT2, 0.0])


def singlet_in_basis(n: Axis) -> np.ndarray:
    """Singlet amplitudes in the product eigenbasis of spin along ``n``.

    Components are ordered (++, +-, -+, --).
    """
    plus, minus = eigenbasis(n)
    psi = singlet().amplitudes
    basis = (plus, minus)
    return np.array([np.vdot(np.kron(basis[a], basis[b]), psi) for a in (0, 1) for b in (0, 1)])


def align_global_phase(amps: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Multiply ``amps`` by the unit phase that best matches ``reference``."""
    overlap = np.vdot(amps, reference)
    if abs(overlap) == 0.0:
        return np.asarray(amps)
    return np.asarray(amps) * (overlap / abs(overlap))


def is_singlet(state: JointState, tol: float = 1e-10) -> bool:
    if state.n != 2:
        return False
    return abs(abs(np.vdot(singlet().amplitudes, state.amplitudes)) - 1.0) <= tol


Space = Union[JointState, Sequence[str]]


def embed(op: np.ndarray, particle: str, space: Space) -> np.ndarray:
    """Lift a single-particle operator to the joint space (identity on other factors)."""
    particles = space.particles if isinstance(space, JointState) else tuple(space)
    if particle not in particles:
        raise UnknownParticleError(f"no particle {particle!r} in {particles}")
    full = np.array([[1.0]], dtype=complex)
    for label in particles:
        full = np.kron(full, op if label == particle else IDENTITY)
    return full


def apply_local(op: np.ndarray, state_amps: np.ndarray, index: int, n: int) -> np.ndarray:
    """Apply a 2x2 ``op`` to factor ``index`` of an n-particle amplitude vector."""
    psi = np.asarray(state_amps).reshape((2,) * n)
    psi = np.tensordot(op, psi, axes=([1], [index]))
    return np.moveaxis(psi, 0, index).reshape(-1)
