import itertools
import math

import numpy as np
import pytest

from epr_reduction import reduction, spin
from epr_reduction.errors import (
    DegenerateStateError,
    OrderMismatchError,
    UnknownParticleError,
    UnknownTestError,
    ZeroConditionProbabilityError,
)
from epr_reduction.reduction import Outcome, Test, apply_test, conditional, marginal, order_invariance, run_chain
from epr_reduction.spin import J_HAT, K_HAT, Axis, JointState

from oracles import chain_probabilities, eigvec, random_axes, singlet_correlation

PLUS, MINUS = Outcome.PLUS, Outcome.MINUS

A = Test("A", "e", K_HAT, "A")
B = Test("B", "p", J_HAT, "B")
B2 = Test("B2", "p", K_HAT, "B2")
E = Test("E", "p", K_HAT, "E")


@pytest.fixture
def psi():
    return spin.singlet("e", "p")


def product(e_vec, p_vec):
    return spin.product_state({"e": e_vec, "p": p_vec})


def random_state(rng, n):
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return JointState(tuple(f"q{i}" for i in range(n)), amps / np.linalg.norm(amps))


def test_apply_test_on_singlet(psi):
    (o1, p1, s1), (o2, p2, s2) = apply_test(psi, A)
    assert (o1, o2) == (PLUS, MINUS)
    assert p1 == pytest.approx(0.5, abs=1e-15) and p2 == pytest.approx(0.5, abs=1e-15)
    up, down = spin.eigenbasis(K_HAT)
    assert s1.close_to(product(up, down))
    assert s2.close_to(product(down, up))


def test_apply_test_on_eigenstate_prunes_other_branch():
    up, down = spin.eigenbasis(K_HAT)
    st = product(up, down)
    (o1, p1, s1), (o2, p2, s2) = apply_test(st, A)
    assert p1 == 1.0 and s1.close_to(st, up_to_phase=False)
    assert p2 == 0.0 and s2 is None


def test_apply_test_mixed_axes():
    up_k = spin.eigenbasis(K_HAT)[0]
    up_j = spin.eigenbasis(J_HAT)[0]
    # oracle: |<k+|j+>|^2
    expected = abs(np.vdot(eigvec([0, 0, 1], 1), eigvec([0, 1, 0], 1))) ** 2
    assert expected == pytest.approx(0.5)
    (_, p_plus, _), _ = apply_test(product(up_k, up_j), B2)
    assert p_plus == pytest.approx(expected, abs=1e-12)


def test_apply_test_errors(psi):
    with pytest.raises(UnknownParticleError):
        apply_test(psi, Test("X", "mu", K_HAT))
    object.__setattr__(psi, "amplitudes", np.array([0, 1, 1, 0], dtype=complex))
    with pytest.raises(DegenerateStateError):
        apply_test(psi, A)


def test_apply_test_conserves_probability(rng):
    for n in (1, 2, 3):
        for _ in range(20):
            st = random_state(rng, n)
            axis = Axis(*random_axes(rng, 1)[0])
            res = apply_test(st, Test("t", f"q{rng.integers(n)}", axis))
            assert sum(p for _, p, _ in res) == pytest.approx(1, abs=1e-10)


def test_run_chain_single(psi):
    assert run_chain(psi, [A]).table == pytest.approx({(PLUS,): 0.5, (MINUS,): 0.5}, abs=1e-15)


def test_run_chain_anticorrelated(psi):
    dist = run_chain(psi, [A, B2])
    assert dist.table == pytest.approx(
        {(PLUS, PLUS): 0, (PLUS, MINUS): 0.5, (MINUS, PLUS): 0.5, (MINUS, MINUS): 0}, abs=1e-15
    )


def test_run_chain_fig1_order_is_uniform(psi):
    # each of the three splits is 1/2 by hand: B on the singlet, A on a j-eigenstate of e, E on a j-eigenstate of p
    dist = run_chain(psi, [B, A, E])
    assert dist.order == ("B", "A", "E")
    assert len(dist.table) == 8
    for p in dist.table.values():
        assert p == pytest.approx(0.125, abs=1e-15)


def test_run_chain_matches_projector_product_oracle(rng):
    for _ in range(30):
        n = int(rng.integers(1, 4))
        st = random_state(rng, n)
        k = int(rng.integers(1, 5))
        slots = rng.integers(0, n, size=k)
        axes = random_axes(rng, k)
        tests = [Test(f"t{i}", f"q{s}", Axis(*a)) for i, (s, a) in enumerate(zip(slots, axes))]
        dist = run_chain(st, tests)
        oracle = chain_probabilities(st.amplitudes, list(zip(slots, axes)))
        for key, p in dist.table.items():
            assert p == pytest.approx(oracle[tuple(int(o) for o in key)], abs=1e-12)
        assert dist.total() == pytest.approx(1, abs=1e-10)


def test_run_chain_keeps_pruned_branches_as_zeros():
    up, down = spin.eigenbasis(K_HAT)
    dist = run_chain(product(up, down), [A, B2, B])
    assert len(dist.table) == 8
    assert dist.table[(MINUS, PLUS, PLUS)] == 0.0
    assert dist.total() == pytest.approx(1)


def test_run_chain_rejects_bad_input(psi):
    with pytest.raises(ValueError):
        run_chain(psi, [])
    with pytest.raises(ValueError):
        run_chain(psi, [A, A])


def test_repeat_test_is_idempotent(rng):
    for a in random_axes(rng, 20):
        t1, t2 = Test("t1", "e", Axis(*a)), Test("t2", "e", Axis(*a))
        dist = run_chain(spin.singlet(), [B, t1, t2])
        for (b, x, y), p in dist.table.items():
            if x != y:
                assert p <= 1e-14


def test_conditional_examples(psi):
    with_b = run_chain(psi, [B, A, E])
    assert conditional(with_b, [("A", PLUS)], ("E", PLUS)) == pytest.approx(0.5, abs=1e-12)
    without_b = run_chain(psi, [A, E])
    assert conditional(without_b, [("A", PLUS)], ("E", PLUS)) == pytest.approx(0.0, abs=1e-12)

    up, down = spin.eigenbasis(K_HAT)
    down_state = run_chain(product(down, up), [A, E])
    with pytest.raises(ZeroConditionProbabilityError):
        conditional(down_state, [("A", PLUS)], ("E", PLUS))


def test_conditional_accepts_symbols_and_checks_labels(psi):
    dist = run_chain(psi, [A, B2])
    assert conditional(dist, [("A", "+")], ("B2", "-")) == pytest.approx(1.0)
    assert conditional(dist, [], ("B2", "+")) == pytest.approx(0.5)
    assert conditional(dist, [("A", "+")], ("A", "-")) == 0.0
    with pytest.raises(UnknownTestError):
        conditional(dist, [("Z", "+")], ("B2", "+"))


def test_marginal_examples(psi):
    assert marginal(run_chain(psi, [A, B]), "B") == pytest.approx({PLUS: 0.5, MINUS: 0.5}, abs=1e-15)
    assert marginal(run_chain(psi, [A]), "A") == pytest.approx({PLUS: 0.5, MINUS: 0.5}, abs=1e-15)
    assert marginal(run_chain(psi, [A, B2]), "B2") == pytest.approx({PLUS: 0.5, MINUS: 0.5}, abs=1e-15)
    with pytest.raises(UnknownTestError):
        marginal(run_chain(psi, [A]), "B")


def test_order_invariance_examples(psi):
    ok, dev = order_invariance(psi, [[A, B], [B, A]])
    assert ok and dev <= 1e-12
    assert order_invariance(psi, [[A], [A]]) == (True, 0.0)


def test_same_particle_orders_on_singlet_agree(psi):
    # the positron alone is maximally mixed, so P(x then y) = |<x|y>|^2 / 2 is symmetric in order
    t1 = chain_probabilities(psi.amplitudes, [(1, [0, 1, 0]), (1, [0, 0, 1])])
    t2 = chain_probabilities(psi.amplitudes, [(1, [0, 0, 1]), (1, [0, 1, 0])])
    expected = max(abs(t1[(b, e)] - t2[(e, b)]) for b, e in itertools.product((1, -1), repeat=2))
    assert expected <= 1e-15
    ok, dev = order_invariance(psi, [[B, E], [E, B]])
    assert ok and dev == pytest.approx(expected, abs=1e-12)


def test_same_particle_orders_differ_once_partner_is_tested(psi):
    # after A fixes the positron to a k eigenstate, j and k tests on it no longer commute
    ok, dev = order_invariance(psi, [[A, B, E], [A, E, B]])
    o1 = chain_probabilities(psi.amplitudes, [(0, [0, 0, 1]), (1, [0, 1, 0]), (1, [0, 0, 1])])
    o2 = chain_probabilities(psi.amplitudes, [(0, [0, 0, 1]), (1, [0, 0, 1]), (1, [0, 1, 0])])
    expected = max(abs(o1[(a, b, e)] - o2[(a, e, b)]) for a, b, e in itertools.product((1, -1), repeat=3))
    assert expected == pytest.approx(0.125, abs=1e-12)
    assert not ok
    assert dev == pytest.approx(expected, abs=1e-12)


def test_same_particle_orders_differ_on_pure_state():
    up = spin.eigenbasis(K_HAT)[0]
    st = product(up, up)
    ok, dev = order_invariance(st, [[B, E], [E, B]])
    # k-first: E=+ surely then B uniform (1/2 each); j-first: B uniform then E uniform (1/4 each)
    assert not ok and dev == pytest.approx(0.25, abs=1e-12)


def test_order_invariance_mismatch(psi):
    with pytest.raises(OrderMismatchError):
        order_invariance(psi, [[A, B], [A, E]])


def test_distinct_particle_tests_commute(rng):
    for _ in range(30):
        st = random_state(rng, 3)
        a, b, c = (Axis(*v) for v in random_axes(rng, 3))
        t1, t2, t3 = Test("t1", "q0", a), Test("t2", "q2", b), Test("t3", "q1", c)
        ok, dev = order_invariance(st, [list(p) for p in itertools.permutations([t1, t2, t3])])
        assert ok, dev


def test_no_signaling_sweep(psi, rng):
    base = marginal(run_chain(psi, [B]), "B")
    assert base == pytest.approx({PLUS: 0.5, MINUS: 0.5}, abs=1e-12)
    for a in random_axes(rng, 40):
        for order in ([Test("A", "e", Axis(*a)), B], [B, Test("A", "e", Axis(*a))]):
            assert marginal(run_chain(psi, order), "B") == pytest.approx({PLUS: 0.5, MINUS: 0.5}, abs=1e-12)


def _phased_projector(rng):
    def factory(axis, sign):
        plus, minus = spin.eigenbasis(axis)
        v = (plus if sign == 1 else minus) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        return np.outer(v, v.conj())

    return factory


def test_phase_convention_independence(psi, rng):
    factory = _phased_projector(rng)
    for _ in range(20):
        tests = [Test(f"t{i}", p, Axis(*a)) for i, (p, a) in enumerate(zip("epp", random_axes(rng, 3)))]
        ref = run_chain(psi, tests)
        alt = run_chain(psi, tests, projector=factory)
        for key in ref.table:
            assert abs(ref.table[key] - alt.table[key]) <= 1e-12


@pytest.mark.parametrize("a, b, expected", [(K_HAT, K_HAT, -1.0), (K_HAT, J_HAT, 0.0)])
def test_correlation_examples(psi, a, b, expected):
    assert reduction.correlation(psi, a, b) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 4, math.pi / 3])
def test_correlation_at_angles(psi, theta):
    b = [math.sin(theta), 0, math.cos(theta)]
    oracle = singlet_correlation([0, 0, 1], b)
    assert oracle == pytest.approx(-math.cos(theta), abs=1e-12)
    assert reduction.correlation(psi, K_HAT, Axis(*b)) == pytest.approx(oracle, abs=1e-9)


def test_correlation_law_random_pairs(psi, rng):
    for a, b in zip(random_axes(rng, 100), random_axes(rng, 100)):
        got = reduction.correlation(psi, Axis(*a), Axis(*b))
        assert got == pytest.approx(-float(a @ b), abs=1e-9)
        assert got == pytest.approx(singlet_correlation(a, b), abs=1e-9)


def test_correlation_needs_two_particles():
    with pytest.raises(ValueError):
        reduction.correlation(JointState(("a",), [1, 0]), K_HAT, K_HAT)


def test_outcome_coerce():
    assert Outcome.coerce("+") is PLUS and Outcome.coerce(-1) is MINUS
    with pytest.raises(ValueError):
        Outcome.coerce("up")
