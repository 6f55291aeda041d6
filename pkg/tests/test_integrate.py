import io
import math

import numpy as np
import pytest

from stabadams.exceptions import ReferenceUnavailable
from stabadams.integrate import (
    DIVERGED,
    OK,
    converge_study,
    fit_order,
    run_fixed,
    step_history_init,
    steps_for,
)
from stabadams.problems import OdeProblem, hires, linear_scalar
from stabadams.synth import MethodSpec, first_order

from conftest import method

EULER = MethodSpec(k=1, p=1, beta=[1.0], ell=2.0, error_const=0.5)


def test_euler_closed_form():
    run = run_fixed(linear_scalar(-1.0), EULER, 0.1)
    assert run.status == OK
    assert run.steps == 10
    assert run.endpoint[0] == pytest.approx(0.9**10, abs=1e-15)
    assert run.endpoint[0] == pytest.approx(0.3486784401, abs=1e-10)


def test_history_is_exact_solution():
    states, fvals = step_history_init(linear_scalar(-2.0), first_order(4), 0.05)
    assert len(states) == len(fvals) == 4
    for j, (y, f) in enumerate(zip(states, fvals)):
        assert y[0] == pytest.approx(math.exp(-2.0 * 0.05 * j), rel=1e-15)
        assert f[0] == pytest.approx(-2.0 * y[0], rel=1e-15)


def test_history_single_step():
    states, fvals = step_history_init(linear_scalar(-1.0), EULER, 0.1)
    assert len(states) == 1 and states[0][0] == 1.0 and fvals[0][0] == -1.0


@pytest.mark.slow
def test_hires_history_within_reference_accuracy():
    prob = hires()
    states, _ = step_history_init(prob, method(6, 3), 0.01)
    assert len(states) == 6
    fine = prob.reference.halved()
    for j, y in enumerate(states):
        assert np.max(np.abs(y - fine(0.01 * j))) <= 1e-10


def test_missing_reference():
    prob = OdeProblem("bare", 0.0, 1.0, np.array([1.0]), lambda t, y: -y)
    with pytest.raises(ReferenceUnavailable):
        step_history_init(prob, EULER, 0.1)


def test_step_size_must_divide_interval():
    with pytest.raises(ValueError):
        steps_for(linear_scalar(-1.0), 0.3)
    assert steps_for(linear_scalar(-1.0), 1 / 64) == 64
    with pytest.raises(ValueError):
        run_fixed(linear_scalar(-1.0), EULER, -0.1)


@pytest.mark.parametrize("k, p", [(1, 1), (3, 1), (5, 4), (6, 3)])
def test_one_evaluation_per_step(k, p):
    calls = []
    base = linear_scalar(-1.0)

    def rhs(t, y):
        calls.append(t)
        return base.rhs(t, y)

    prob = OdeProblem("counted", 0.0, 1.0, base.y0, rhs, base.reference, base.reference_accuracy)
    run = run_fixed(prob, method(k, p), 1 / 64)
    assert run.f_evals == run.steps == 64 - k + 1
    assert len(calls) == run.f_evals + run.starter_evals
    assert run.starter_evals == k


@pytest.mark.parametrize("k, p", [(2, 1), (4, 3), (5, 4), (6, 2)])
def test_companion_recurrence_equivalence(k, p):
    # y'=lam*y: each step is y_new = y_last + z * sum(beta_j y_j)
    m = method(k, p)
    lam, tau = -3.0, 0.01
    z = lam * tau
    C = np.zeros((k, k))
    C[:-1, 1:] = np.eye(k - 1)
    C[-1] = z * m.beta.beta
    C[-1, -1] += 1.0
    v = np.exp(lam * tau * np.arange(k))
    for _ in range(100):
        v = C @ v
    prob = linear_scalar(lam, t_end=(100 + k - 1) * tau)
    run = run_fixed(prob, m, tau)
    assert run.steps == 100
    assert run.endpoint[0] == pytest.approx(v[-1], rel=1e-10)


@pytest.mark.parametrize("k", [1, 3, 5, 8])
def test_threshold_first_order(k):
    m = first_order(k)
    tau = 1e-3
    inside = linear_scalar(-0.98 * m.ell / tau, t_end=1e4 * tau)
    outside = linear_scalar(-1.10 * m.ell / tau, t_end=1e4 * tau)
    run_in = run_fixed(inside, m, tau)
    assert run_in.bounded
    assert run_fixed(outside, m, tau).status == DIVERGED
    states, _ = step_history_init(inside, m, tau)
    assert abs(run_in.endpoint[0]) <= max(abs(s[0]) for s in states)


def test_divergence_keeps_partial_trace():
    run = run_fixed(linear_scalar(-50.0, t_end=10.0), EULER, 0.1)
    assert run.diverged
    assert 0 < run.steps < 100
    assert run.f_evals == run.steps - 1
    assert run.max_norm <= 1e10 * run.start_norm


def test_fit_order_exact_power_law():
    taus = [0.1, 0.05, 0.025]
    assert fit_order(taus, [3 * t**2 for t in taus]) == pytest.approx(2.0)


def test_converge_first_order():
    taus = [1 / 16, 1 / 32, 1 / 64, 1 / 128, 1 / 256]
    rep = converge_study(linear_scalar(-1.0), first_order(3), taus)
    assert 0.8 <= rep.observed_order <= 1.2
    assert all(s == OK for s in rep.statuses)
    assert all(a > b for a, b in zip(rep.errors, rep.errors[1:]))


def test_converge_fourth_order():
    taus = [2.0**-i for i in range(4, 9)]
    rep = converge_study(linear_scalar(-1.0), method(5, 4), taus)
    assert 3.7 <= rep.observed_order <= 4.3


def test_converge_all_diverged():
    # lam*tau = -50*tau stays far beyond ell = 2 for these steps
    taus = [1.0, 0.5, 0.25]
    rep = converge_study(linear_scalar(-50.0, t_end=50.0), EULER, taus)
    assert rep.all_diverged
    assert math.isnan(rep.observed_order)
    assert all(math.isinf(e) for e in rep.errors)


def test_converge_rejects_increasing_taus():
    with pytest.raises(ValueError):
        converge_study(linear_scalar(-1.0), EULER, [0.1, 0.2])


def test_convergence_csv():
    rep = converge_study(linear_scalar(-1.0), EULER, [0.5, 0.25, 0.125])
    buf = io.StringIO()
    rep.write_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "tau,error,status"
    assert [float(l.split(",")[0]) for l in lines[1:]] == [0.5, 0.25, 0.125]
    assert all(l.endswith(",OK") for l in lines[1:])
