import math

import cvxpy as cp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stateid import classical, ident, linmat
from stateid.ident import (
    DualCertificateSingle, IdentPair, IdentQuad, PredictorMeasurement, conditional_error,
    counterexample_quad, counterexample_states, d_eps_parity, d_eps_quad, d_eps_single,
    dual_lift, dual_single, helstrom, lifted_z, verify_lift_conditions,
)
from stateid.linmat import projector, random_density, random_pure

KET0, KET1 = projector([1, 0]), projector([0, 1])


def intro_states(a=0.5):
    v0 = np.array([math.sqrt(a), 0, math.sqrt(1 - a)])
    v1 = np.array([0, math.sqrt(a), math.sqrt(1 - a)])
    return projector(v0), projector(v1)


def cvxpy_quad(states, eps):
    d = states[0].shape[0]
    avg = sum(states) / 4
    Es = [cp.Variable((d, d), hermitian=True) for _ in range(4)]
    wrong = 0
    for k, E in enumerate(Es):
        wk = sum(s for j, s in enumerate(states) if j != k) / 4 - eps * avg
        wrong = wrong + cp.real(cp.trace(E @ wk))
    cons = [E >> 0 for E in Es] + [np.eye(d) - sum(Es) >> 0, wrong <= 0]
    prob = cp.Problem(cp.Maximize(cp.real(cp.trace(sum(Es) @ avg))), cons)
    prob.solve(solver=cp.CLARABEL)
    return prob.value


# -- types --------------------------------------------------------------------

def test_type_validation():
    with pytest.raises(ValueError):
        IdentPair(KET0, KET1, 0.5)
    with pytest.raises(ValueError):
        IdentPair(KET0, KET1, -0.1)
    with pytest.raises(linmat.DimensionError):
        IdentPair(KET0, np.eye(3) / 3, 0.1)
    with pytest.raises(linmat.InvalidStateError):
        IdentPair(KET0, np.diag([0.5, 0.6]), 0.1)


# -- conditional error and Helstrom -------------------------------------------

def test_conditional_error_examples():
    m = PredictorMeasurement({"0": KET0, "1": KET1})
    assert conditional_error(m, [KET0, KET1]) == 0.0
    r = np.eye(2) / 2
    half = PredictorMeasurement({"0": np.eye(2) / 2, "1": np.eye(2) / 2})
    assert abs(conditional_error(half, [r, r]) - 0.5) < 1e-15
    never = PredictorMeasurement({"0": np.zeros((2, 2)), "1": np.zeros((2, 2))})
    assert conditional_error(never, [KET0, KET1]) == 0.0
    with pytest.raises(linmat.DimensionError):
        conditional_error(m, [np.eye(3) / 3, np.eye(3) / 3])


def test_quarter_measurement_error():
    d = 0.01
    q = counterexample_quad(d, 0.251)
    assert abs(conditional_error(ident.quarter_measurement(d), q.states) - 0.25) < 0.01


def test_helstrom_examples(rng):
    s, _ = helstrom(KET0, KET1)
    assert abs(s - 1) < 1e-15
    r = random_density(3, rng)
    s, _ = helstrom(r, r)
    assert abs(s - 0.5) < 1e-15
    a0, a1 = random_density(3, rng), random_density(3, rng)
    s, m = helstrom(a0, a1)
    assert abs(ident.achieved_success(m, [a0, a1]) - s) < 1e-9
    assert m.is_valid()


# -- single register ------------------------------------------------------------

@pytest.mark.parametrize("eps", [0.0, 0.1, 0.49])
def test_d_eps_single_trivial(eps, rng):
    assert abs(d_eps_single(IdentPair(KET0, KET1, eps)).value - 1) < 1e-6
    r = random_density(2, rng)
    assert abs(d_eps_single(IdentPair(r, r, eps)).value) < 1e-6


def test_d_eps_single_intro_states():
    a0, a1 = intro_states()
    # lower bound: measuring in the computational basis never errs and answers w.p. a
    m = PredictorMeasurement({"0": projector([1, 0, 0]), "1": projector([0, 1, 0])})
    w, g = ident.guess_masses(m, [a0, a1])
    assert w == 0.0 and abs(g - 0.5) < 1e-15
    res = d_eps_single(IdentPair(a0, a1, 0.0))
    assert abs(res.value - 0.5) < 1e-6
    # upper bound: the returned certificate, re-checked by substitution
    assert min(ident.single_certificate_slacks(a0, a1, 0.0, res.certificate)) >= -1e-9
    assert abs(res.certificate.value - 0.5) < 1e-5


def test_small_delta_pair_is_perfectly_identifiable_at_eps_049():
    # Helstrom errs with probability (1 - delta)/2 = 0.45 <= 0.49, so answering
    # always is admissible and the value is 1 rather than order delta^2
    delta = 0.1
    v0, v1 = counterexample_states(delta)
    res = d_eps_single(IdentPair(projector(v0), projector(v1), 0.49))
    s, _ = helstrom(projector(v0), projector(v1))
    assert 1 - s <= 0.49
    assert abs(res.value - 1.0) < 1e-6
    assert abs(res.certificate.value - 1.0) < 1e-5


@pytest.mark.parametrize("eps", [0.0, 0.1, 0.25, 0.4])
def test_single_value_scales_as_delta_squared(eps):
    ratios = []
    for delta in (0.002, 0.004, 0.008):
        v0, v1 = counterexample_states(delta)
        ratios.append(d_eps_single(IdentPair(projector(v0), projector(v1), eps)).value / delta ** 2)
    assert max(ratios) / min(ratios) < 1.05


def test_single_certificate_properties(rng):
    for d in (2, 3, 4):
        a0, a1 = random_density(d, rng), random_density(d, rng)
        for eps in (0.0, 0.1, 0.25, 0.4):
            res = d_eps_single(IdentPair(a0, a1, eps))
            assert min(ident.single_certificate_slacks(a0, a1, eps, res.certificate)) >= -1e-9
            assert res.certificate.z_b >= 0
            assert abs(res.value - res.certificate.value) <= 1e-5
            assert res.measurement.is_valid(1e-9)
            assert conditional_error(res.measurement, [a0, a1]) <= eps + 1e-8


def test_monotone_in_eps(rng):
    a0, a1 = random_density(3, rng), random_density(3, rng)
    vals = [d_eps_single(IdentPair(a0, a1, e)).value for e in np.linspace(0, 0.45, 10)]
    assert all(b >= a - 1e-6 for a, b in zip(vals, vals[1:]))


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.integers(2, 3), st.sampled_from([0.0, 0.05, 0.2, 0.45]))
def test_pure_state_lower_bound(seed, d, eps):
    rng = np.random.default_rng(seed)
    u, v = random_pure(d, rng), random_pure(d, rng)
    val = d_eps_single(IdentPair(projector(u), projector(v), eps)).value
    assert val >= 0.5 * (1 - abs(np.vdot(u, v)) ** 2) - 1e-6


def test_certificate_soundness(rng):
    a0, a1 = random_density(3, rng, rank=1), random_density(3, rng, rank=2)
    for eps in (0.1, 0.3):
        res = d_eps_single(IdentPair(a0, a1, eps))
        checked = 0
        for lower in (0.5 * eps, 0.8 * eps, 0.95 * eps):
            # optima at a smaller eps leave room for random perturbations
            base = d_eps_single(IdentPair(a0, a1, lower)).measurement.elements
            for _ in range(60):
                t = rng.uniform(0, 0.2)
                elems = {k: (1 - t) * e + t * linmat.pos_part(linmat.random_hermitian(3, rng)) / 6
                         for k, e in base.items()}
                m = PredictorMeasurement(elems)
                if not m.is_valid(1e-12):
                    continue
                w, g = ident.guess_masses(m, [a0, a1])
                if w <= eps * g:
                    checked += 1
                    assert res.certificate.value >= g - 1e-9
        assert checked > 10


def test_classical_embedding(rng):
    for _ in range(10):
        n = int(rng.integers(2, 5))
        p, q = rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n))
        eps = float(rng.choice([0.0, 0.1, 0.3]))
        a, _ = classical.optimal_classical(classical.ClassicalPair(p, q, eps))
        assert abs(d_eps_single(IdentPair(np.diag(p), np.diag(q), eps)).value - a) < 1e-6


# -- dual certificates -----------------------------------------------------------

@pytest.mark.parametrize("eps", [0.0, 0.2, 0.45])
def test_dual_single_identical_states(eps, rng):
    b = random_density(3, rng)
    # X_1 = X_2 = (1 - z (1 - 2 eps)) b / 2 vanishes at z = 2 / (1 - 2 eps)
    cert = DualCertificateSingle(np.zeros((3, 3)), 2 / (1 - 2 * eps))
    assert min(ident.single_certificate_slacks(b, b, eps, cert)) >= -1e-12
    assert abs(dual_single(b, b, eps).value) < 1e-6


@pytest.mark.parametrize("eps", [0.0, 0.2, 0.45])
def test_zero_certificate_needs_large_multiplier(eps, rng):
    # with z = 1 / (1 - eps) the right-hand side is b / (2 (1 - eps)), so X = 0 is infeasible
    b = random_density(3, rng)
    cert = DualCertificateSingle(np.zeros((3, 3)), 1 / (1 - eps))
    x1, _ = ident.single_dual_terms(b, b, eps, cert.z_b)
    assert np.allclose(x1, b / (2 * (1 - eps)))
    assert min(ident.single_certificate_slacks(b, b, eps, cert)) < 0


def test_strictly_feasible_dual_point(rng):
    for d in (2, 3, 4):
        b0, b1 = random_density(d, rng), random_density(d, rng)
        for eps in (0.0, 0.25, 0.49):
            cert = DualCertificateSingle(2 * np.eye(d), 0.5)
            assert min(ident.single_certificate_slacks(b0, b1, eps, cert)) > 0


def test_lifted_z_examples():
    assert lifted_z(0.0, 0.0) == 4.0
    assert abs(lifted_z(0.25, 1.0) - (16 * 6 / 7 + 16 / 3)) < 1e-12
    assert abs(lifted_z(0.25, 1.0) - 19.047619047619) < 1e-9


def test_dual_lift_random(rng):
    for _ in range(12):
        u, v = random_pure(2, rng), random_pure(2, rng)
        d = int(rng.integers(2, 5))
        b0, b1 = random_density(d, rng), random_density(d, rng)
        eps = float(rng.choice([0.1, 0.25, 0.4]))
        cert = dual_single(b0, b1, eps)
        lift = dual_lift(u, v, b0, b1, eps, cert)
        assert min(lift.slack_min_eigs) >= -1e-8
        assert lift.value <= lift.trace_bound + 1e-8
        assert lift.z == lifted_z(eps, cert.z_b)


def test_dual_lift_degenerate(rng):
    b0, b1 = random_density(2, rng), random_density(2, rng)
    u = random_pure(2, rng)
    cert = dual_single(b0, b1, 0.2)
    lift = dual_lift(u, u, b0, b1, 0.2, cert)
    assert np.array_equal(lift.X, np.zeros((4, 4)))
    lift = dual_lift([1, 0], [0, 1], b0, b1, 0.2, cert)
    assert min(lift.slack_min_eigs) >= -1e-8


def test_dual_lift_rejects_bad_input(rng):
    b0, b1 = random_density(2, rng), random_density(2, rng)
    cert = dual_single(b0, b1, 0.2)
    with pytest.raises(linmat.InvalidStateError):
        dual_lift([1, 1], [1, 0], b0, b1, 0.2, cert)
    with pytest.raises(ValueError):
        dual_lift([1, 0], [0, 1], b0, b1, 0.2, DualCertificateSingle(np.zeros((2, 2)), 0.0))


def test_dual_lift_deterministic(rng):
    b0, b1 = random_density(3, rng), random_density(3, rng)
    u, v = random_pure(2, rng), random_pure(2, rng)
    cert = dual_single(b0, b1, 0.25)
    l1, l2 = dual_lift(u, v, b0, b1, 0.25, cert), dual_lift(u, v, b0, b1, 0.25, cert)
    assert np.array_equal(l1.X, l2.X) and l1.z == l2.z


# -- lift conditions --------------------------------------------------------------

def test_lift_conditions_examples(rng):
    s0, s1 = random_density(3, rng), random_density(3, rng)
    u = np.array([1.0, 0.0])
    rep = verify_lift_conditions(u, u, s0, s1, 0.1, 2.0)
    assert rep.delta == 0.0 and rep.passed
    v = np.array([math.sqrt(0.75), 0.5])
    rep = verify_lift_conditions(v, u, s0, s1, 0.25, 1.0)
    assert abs(rep.delta - 0.5) < 1e-12
    assert abs(rep.z - 19.047619047619) < 1e-9
    assert rep.passed
    _, first, _ = ident.lift_scalars(0.4, 0.0, 0.5)
    assert abs(first - (17 - 4 / 0.36)) < 1e-12
    assert abs(first - 5.888888) < 1e-5


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.floats(0, 0.499), st.floats(0, 100), st.integers(2, 3))
def test_lift_conditions_random(seed, eps, z_b, d):
    rng = np.random.default_rng(seed)
    rep = verify_lift_conditions(random_pure(2, rng), random_pure(2, rng),
                        random_density(d, rng), random_density(d, rng), eps, z_b)
    assert rep.passed


# -- two registers ---------------------------------------------------------------------

@pytest.mark.parametrize("eps", [0.0, 0.2])
def test_quad_trivial(eps, rng):
    assert abs(d_eps_quad(IdentQuad(KET0, KET1, KET0, KET1, eps)).value - 1) < 1e-6
    a, b = random_density(2, rng), random_density(2, rng)
    assert abs(d_eps_quad(IdentQuad(a, a, b, b, eps)).value) < 1e-6


def test_quad_against_cvxpy(rng):
    for _ in range(4):
        q = IdentQuad(*(random_density(2, rng) for _ in range(4)), 0.3)
        res = d_eps_quad(q)
        assert abs(res.value - cvxpy_quad(q.states, q.eps)) < 1e-5
        assert abs(res.value - res.certificate.value) <= 1e-5
        slacks = ident.certificate_slacks(q.states, ident.QUAD_LABELS, ident.QUAD_LABELS, q.eps,
                                          res.certificate.X, res.certificate.z)
        assert min(slacks) >= -1e-8


def test_quad_dual_terms_match_generic_slacks(rng):
    a0, a1 = projector(random_pure(2, rng)), projector(random_pure(2, rng))
    b0, b1 = random_density(2, rng), random_density(2, rng)
    q = IdentQuad(a0, a1, b0, b1, 0.2)
    avg, ws = ident.error_operators(q.states, ident.QUAD_LABELS, ident.QUAD_LABELS, 0.2)
    z = 3.7
    terms = ident.quad_dual_terms(a0, a1, b0, b1, 0.2, z)
    for t, w in zip(terms, ws):
        assert np.allclose(t, avg - z * w, atol=1e-13)


def test_parity_examples(rng):
    assert abs(d_eps_parity(IdentQuad(KET0, KET1, KET0, KET1, 0.1)).value - 1) < 1e-6
    r = random_density(2, rng)
    assert abs(d_eps_parity(IdentQuad(r, r, r, r, 0.1)).value) < 1e-6
    # identical second register: y is a fair coin independent of everything
    # observed, so x XOR y is unpredictable and nothing can be answered
    b = random_density(2, rng)
    assert abs(d_eps_parity(IdentQuad(KET0, KET1, b, b, 0.1)).value) < 1e-6


# -- direct product reports ------------------------------------------------------------

def test_direct_product_examples(rng):
    b = random_density(2, rng)
    rep = ident.check_direct_product_pure(IdentQuad(KET0, KET1, b, b, 0.2))
    assert abs(rep.b) < 1e-6 and abs(rep.p) < 1e-6 and abs(rep.bound) < 1e-5 and rep.satisfied
    b0, b1 = random_density(2, rng), random_density(2, rng)
    u = projector(random_pure(2, rng))
    rep = ident.check_direct_product_pure(IdentQuad(u, u, b0, b1, 0.3))
    assert rep.bound < 1e-9 and rep.p <= 1e-6 and rep.satisfied
    with pytest.raises(linmat.InvalidStateError):
        ident.check_direct_product_pure(IdentQuad(np.eye(2) / 2, u, b0, b1, 0.3))


def test_corollary_examples(rng):
    a = random_density(2, rng)
    b0, b1 = random_density(2, rng), random_density(2, rng)
    rep = ident.check_corollary_mixed(IdentQuad(a, a, b0, b1, 0.2))
    assert rep.a_lower < 1e-12 and rep.bound < 1e-9 and rep.p <= 1e-6
    for _ in range(5):
        u, v = projector(random_pure(2, rng)), projector(random_pure(2, rng))
        rep = ident.check_corollary_mixed(IdentQuad(u, v, b0, b1, 0.3))
        assert rep.extras["theorem_bound"] <= rep.bound + 1e-9
        assert rep.satisfied


# -- counterexamples -------------------------------------------------------------------------

@pytest.mark.parametrize("delta", [0.01, 0.05, 0.1, 0.3])
def test_parity_closed_forms(delta):
    q = counterexample_quad(delta, 0.49)
    m = ident.parity_measurement(delta)
    p00 = float(np.real(np.trace(m.elements["0"] @ q.states[0])))
    p01 = float(np.real(np.trace(m.elements["0"] @ q.states[1])))
    # independent evaluation from the vector amplitudes
    v = np.array([delta, -1.0, -1.0, 0.0]) / math.sqrt(2 + delta ** 2)
    a0, a1 = counterexample_states(delta)
    assert abs(p00 - abs(np.vdot(v, np.kron(a0, a0))) ** 2) < 1e-14
    c00, c01 = ident.parity_closed_forms(delta)
    assert abs(p00 - c00) <= 1e-12
    assert abs(p01 - c01) <= 1e-12


def test_parity_counterexample_values():
    delta = 0.05
    rep = ident.parity_counterexample(delta)
    assert rep.value >= delta ** 2 / 5
    assert rep.explicit_error <= 0.49
    assert abs(rep.explicit_mass - delta ** 2 / 4) < 0.05 * delta ** 2


def test_quarter_counterexample_values():
    delta = 0.01
    rep = ident.quarter_counterexample(delta)
    assert rep.value >= delta ** 2 / 3
    assert rep.explicit_error <= 0.251
    assert abs(rep.explicit_mass - 3 * delta ** 2 / 8) < 0.01 * delta ** 2
