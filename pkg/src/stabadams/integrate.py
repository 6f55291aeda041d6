"""Fixed-step integration with explicit Adams-type methods."""

from dataclasses import dataclass
import csv
import math

import numpy as np

from .exceptions import ReferenceUnavailable

__all__ = [
    "OK",
    "DIVERGED",
    "IntegrationRun",
    "ConvergenceReport",
    "step_history_init",
    "run_fixed",
    "converge_study",
    "fit_order",
    "steps_for",
]

OK = "OK"
DIVERGED = "DIVERGED"

# a run counts as diverged once the state norm exceeds this multiple of the
# starting norm
GROWTH_LIMIT = 1e10
# transient growth allowed by `IntegrationRun.bounded`
BOUNDED_FACTOR = 10.0


@dataclass(frozen=True, eq=False)
class IntegrationRun:
    """Outcome of one fixed-step run.

    ``f_evals`` counts right-hand-side evaluations made by the multistep
    recurrence (one per step); the ``starter_evals`` spent on the k starting
    values are reported separately.  On divergence ``endpoint`` holds the
    last state reached and ``steps`` the steps completed.
    """

    method: object
    tau: float
    steps: int
    endpoint: np.ndarray
    f_evals: int
    starter_evals: int
    status: str
    start_norm: float
    max_norm: float

    @property
    def diverged(self):
        return self.status == DIVERGED

    @property
    def bounded(self):
        return not self.diverged and self.max_norm <= BOUNDED_FACTOR * self.start_norm


def steps_for(problem, tau):
    """Number of steps of size ``tau`` spanning the problem interval.

    Raises ValueError unless ``tau`` divides the interval to 1e-12 relative.
    """
    span = problem.t_end - problem.t0
    n = round(span / tau)
    if n < 1 or abs(n * tau - span) > 1e-12 * span:
        raise ValueError(f"tau={tau!r} does not divide the interval length {span!r}")
    return n


def step_history_init(problem, method, tau):
    """Starting states at ``t0 + j*tau`` (j < k) and their f-values."""
    if problem.reference is None:
        raise ReferenceUnavailable(f"problem {problem.name!r} has no reference solution")
    k = method.k
    if tau * (k - 1) >= problem.t_end - problem.t0 and k > 1:
        raise ValueError("starting values would not fit in the integration interval")
    states = [np.array(problem.y0, dtype=float)]
    states += [np.asarray(problem.reference(problem.t0 + j * tau), dtype=float) for j in range(1, k)]
    fvals = [np.asarray(problem.rhs(problem.t0 + j * tau, y), dtype=float) for j, y in enumerate(states)]
    return states, fvals


def run_fixed(problem, method, tau):
    """Integrate ``problem`` with constant step ``tau``.

    Divergence (a non-finite component, or norm above ``GROWTH_LIMIT`` times
    the starting norm) stops the run and is reported through ``status``.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    n_total = steps_for(problem, tau)
    beta = method.beta.beta
    k = beta.size
    states, fvals = step_history_init(problem, method, tau)

    # every f-value is stored twice so that buf[h:h+k] is always the window
    # f_m..f_{m+k-1}, oldest first, without copying
    buf = np.empty((2 * k, problem.dim))
    for j, f in enumerate(fvals):
        buf[j] = buf[j + k] = f
    y = states[-1].copy()
    start_norm = max(float(np.max(np.abs(s))) for s in states) or 1.0
    limit = GROWTH_LIMIT * start_norm
    max_norm = start_norm
    status = OK
    steps = 0
    f_evals = 0
    rhs = problem.rhs
    t0 = problem.t0
    head = 0
    for m in range(n_total - k + 1):
        y = y + tau * (beta @ buf[head:head + k])
        norm = float(np.max(np.abs(y)))
        steps += 1
        if not norm <= limit:
            status = DIVERGED
            break
        if norm > max_norm:
            max_norm = norm
        f = rhs(t0 + (m + k) * tau, y)
        f_evals += 1
        buf[head] = buf[head + k] = f
        head = (head + 1) % k
    return IntegrationRun(
        method=method,
        tau=float(tau),
        steps=steps,
        endpoint=y,
        f_evals=f_evals,
        starter_evals=k,
        status=status,
        start_norm=start_norm,
        max_norm=max_norm,
    )


def fit_order(taus, errors):
    """Least-squares slope of log(error) against log(tau)."""
    x = np.log(np.asarray(taus, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    taus: list
    errors: list
    statuses: list
    observed_order: float

    def rows(self):
        return zip(self.taus, self.errors, self.statuses)

    def write_csv(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["tau", "error", "status"])
        for tau, err, st in self.rows():
            writer.writerow([f"{tau:.17g}", f"{err:.17g}", st])

    @property
    def all_diverged(self):
        return all(s == DIVERGED for s in self.statuses)


def converge_study(problem, method, taus, min_points=3):
    """Endpoint max-norm errors for decreasing step sizes.

    ``observed_order`` is fitted over the contiguous run of OK points ending
    at the smallest step, after dropping points below the noise floor
    (100 times the reference accuracy).  It is NaN when fewer than
    ``min_points`` remain.
    """
    taus = [float(t) for t in taus]
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise ValueError("taus must be strictly decreasing")
    exact = np.asarray(problem.reference(problem.t_end), dtype=float)
    errors, statuses = [], []
    for tau in taus:
        run = run_fixed(problem, method, tau)
        if run.diverged:
            errors.append(math.inf)
        else:
            errors.append(float(np.max(np.abs(run.endpoint - exact))))
        statuses.append(run.status)

    floor = 100.0 * problem.reference_accuracy
    tail = []
    for tau, err, st in reversed(list(zip(taus, errors, statuses))):
        if st != OK or not math.isfinite(err):
            break
        if err >= floor:
            tail.append((tau, err))
    order = fit_order(*zip(*tail)) if len(tail) >= min_points else math.nan
    return ConvergenceReport(taus=taus, errors=errors, statuses=statuses, observed_order=order)
