"""Synthesis of stabilized explicit Adams-type methods.

The feasible coefficient set (root-locus curve stays in the closed upper
half-plane for phi in (0, pi)) is parameterized by a vector ``b`` through a
quadratic map ``beta = T(b)``.  In these variables the stability-interval
length is ``1 / sum(b**2)`` up to a factor of two, so the longest interval
for a given order is the minimum-norm ``b`` satisfying the (now quadratic)
order conditions.
"""

from dataclasses import dataclass
from fractions import Fraction
import json
import math

import numpy as np

from .exceptions import NotConverged, OrderViolation
from .polycore import AdamsCoefficients, eval_nu, order_system
from .stability import error_constant, interval_formula, measure_interval

__all__ = [
    "MethodSpec",
    "OptimizationResult",
    "map_T",
    "order_residuals",
    "first_order",
    "damping_deltas",
    "damping_increments",
    "apply_damping",
    "damped_interval",
    "solve_kkt",
    "optimize",
    "classical_adams",
    "synthesize",
]

FEASIBILITY_GRID = 2048
FEASIBILITY_TOL = 1e-9
CONSTRAINT_TOL = 1e-10
KKT_TOL = 1e-9


@dataclass(frozen=True)
class MethodSpec:
    """A synthesized k-step method of order p.

    ``ell`` is the stability-interval length and ``error_const`` the error
    constant ``C_{p+1}/sigma(1)``.  ``epsilon`` is the damping parameter,
    0 for undamped methods.
    """

    k: int
    p: int
    beta: AdamsCoefficients
    ell: float
    error_const: float
    epsilon: float = 0.0

    def __post_init__(self):
        if not isinstance(self.beta, AdamsCoefficients):
            object.__setattr__(self, "beta", AdamsCoefficients(self.beta))
        if self.beta.k != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {self.beta.k}")
        if not 1 <= self.p <= self.k:
            raise ValueError(f"order must satisfy 1 <= p <= k, got p={self.p}, k={self.k}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")

    def to_json(self):
        """Serialize with fixed field order and 17 significant digits."""
        num = lambda x: f"{float(x):.17g}"
        beta = ", ".join(num(b) for b in self.beta.beta)
        return (
            f'{{"k": {self.k}, "p": {self.p}, "epsilon": {num(self.epsilon)}, '
            f'"beta": [{beta}], "ell": {num(self.ell)}, '
            f'"error_const": {num(self.error_const)}}}\n'
        )

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(
            k=int(d["k"]),
            p=int(d["p"]),
            beta=AdamsCoefficients(d["beta"]),
            ell=float(d["ell"]),
            error_const=float(d["error_const"]),
            epsilon=float(d.get("epsilon", 0.0)),
        )

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())


# --- the b -> beta map ------------------------------------------------------


def _a_tilde(b):
    # a~_j = 2 sum_l b_l b_{l+d} with lag d = k-1-j; the zero lag is not doubled
    k = b.size
    out = np.empty(k)
    for j in range(k - 1):
        d = k - 1 - j
        out[j] = 2.0 * np.dot(b[: k - d], b[d:])
    out[k - 1] = np.dot(b, b)
    return out


def _a_to_beta(a):
    k = a.size
    beta = np.empty(k)
    prev = 0.0
    for j in range(k - 1):
        beta[j] = 0.5 * (prev + a[j])
        prev = a[j]
    beta[k - 1] = a[k - 1] + 0.5 * prev
    return beta


def map_T(b):
    """Map parameterization variables ``b`` to method coefficients."""
    b = np.asarray(b, dtype=float).reshape(-1)
    if b.size < 1:
        raise ValueError("b must have at least one entry")
    return AdamsCoefficients(_a_to_beta(_a_tilde(b)))


def _quadratic_forms(k):
    """Symmetric B_j with ``beta_j = b @ B_j @ b`` for every b."""
    lag = np.empty((k, k, k))
    for j in range(k):
        d = k - 1 - j
        lag[j] = np.eye(k, k=d) + np.eye(k, k=-d) if d else np.eye(k)
    forms = np.empty((k, k, k))
    for j in range(k - 1):
        forms[j] = 0.5 * (lag[j - 1] + lag[j]) if j else 0.5 * lag[j]
    forms[k - 1] = lag[k - 1] + (0.5 * lag[k - 2] if k > 1 else 0.0)
    return forms


def order_residuals(coeffs, p):
    """``(G_1(beta), ..., G_p(beta))``; all zero iff the method has order >= p."""
    coeffs = coeffs if isinstance(coeffs, AdamsCoefficients) else AdamsCoefficients(coeffs)
    W, c = order_system(coeffs.k, p)
    beta = coeffs.beta.tolist()
    return np.array([math.fsum(w * b for w, b in zip(row, beta)) - cq for row, cq in zip(W.tolist(), c)])


# --- first-order family and damping -----------------------------------------


def first_order(k):
    """The k-step first-order method with stability interval of length 2k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    beta = [float(Fraction(2 * j + 1, k * k)) for j in range(k)]
    c = Fraction(k, 3) + Fraction(1, 6 * k)
    return MethodSpec(k=k, p=1, beta=AdamsCoefficients(beta), ell=float(2 * k), error_const=float(c))


def damping_deltas(coeffs):
    """Cosine coefficients of ``|sigma(e^{i phi})|**2``."""
    coeffs = coeffs if isinstance(coeffs, AdamsCoefficients) else AdamsCoefficients(coeffs)
    beta = coeffs.beta
    k = coeffs.k
    delta = np.empty(k)
    delta[0] = np.dot(beta, beta)
    for j in range(1, k):
        delta[j] = 2.0 * np.dot(beta[: k - j], beta[j:])
    return delta


def damping_increments(coeffs):
    """Per-coefficient damping directions Delta_j (they sum to sum(delta))."""
    delta = damping_deltas(coeffs)
    k = delta.size
    if k == 1:
        return delta.copy()
    padded = np.append(delta, 0.0)
    inc = np.empty(k)
    for j in range(k - 1):
        inc[j] = 0.5 * (padded[k - j] + padded[k - j - 1])
    inc[k - 1] = 0.5 * delta[1] + delta[0]
    return inc


def apply_damping(coeffs, epsilon):
    """Damped first-order method ``(beta + eps*Delta) / (1 + eps)``.

    Raises
    ------
    OrderViolation
        If the input is not consistent (sum(beta) != 1 beyond 1e-10).
    """
    if isinstance(coeffs, MethodSpec):
        coeffs = coeffs.beta
    coeffs = coeffs if isinstance(coeffs, AdamsCoefficients) else AdamsCoefficients(coeffs)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if abs(math.fsum(coeffs.beta.tolist()) - 1.0) > 1e-10:
        raise OrderViolation("damping requires a consistent method (sum of beta equal to 1)")
    if epsilon == 0:
        damped = coeffs
    else:
        damped = AdamsCoefficients((coeffs.beta + epsilon * damping_increments(coeffs)) / (1.0 + epsilon))
    return MethodSpec(
        k=damped.k,
        p=1,
        beta=damped,
        ell=interval_formula(damped),
        error_const=error_constant(damped, 1),
        epsilon=float(epsilon),
    )


def damped_interval(k, epsilon):
    """Closed-form interval length of the damped k-step first-order method."""
    return 6.0 * (1.0 + epsilon) * k**3 / (epsilon * (4 * k * k - 1) + 3 * k * k)


# --- constrained minimization ------------------------------------------------


@dataclass(frozen=True)
class OptimizationResult:
    b: np.ndarray
    multipliers: np.ndarray
    objective: float
    constraint_residual: float
    kkt_residual: float
    attempt: int


class _Problem:
    """min b.b  s.t.  b @ M_q @ b = c_q,  q = 1..p."""

    def __init__(self, k, p):
        W, c = order_system(k, p)
        self.k, self.p = k, p
        self.M = np.einsum("qj,jrs->qrs", W, _quadratic_forms(k))
        self.c = c

    def constraints(self, b):
        return np.einsum("r,qrs,s->q", b, self.M, b) - self.c

    def jacobian(self, b):
        return 2.0 * np.einsum("qrs,s->qr", self.M, b)

    def kkt(self, b, lam):
        J = self.jacobian(b)
        return np.concatenate([2.0 * b + J.T @ lam, self.constraints(b)]), J


def _project(prob, b, max_iter):
    # Gauss-Newton with minimum-norm steps onto the constraint manifold
    for _ in range(max_iter):
        g = prob.constraints(b)
        if np.max(np.abs(g)) <= 1e-12:
            return b
        step = np.linalg.lstsq(prob.jacobian(b), -g, rcond=None)[0]
        b = b + step
        if not np.all(np.isfinite(b)) or np.max(np.abs(b)) > 1e8:
            return None
    return b


def _lagrange_newton(prob, b, max_iter):
    k, p = prob.k, prob.p
    lam = np.linalg.lstsq(prob.jacobian(b).T, -2.0 * b, rcond=None)[0]
    for _ in range(max_iter):
        F, J = prob.kkt(b, lam)
        if np.max(np.abs(F)) <= 1e-14 * (1.0 + np.max(np.abs(lam))):
            break
        H = 2.0 * (np.eye(k) + np.einsum("q,qrs->rs", lam, prob.M))
        K = np.block([[H, J.T], [J, np.zeros((p, p))]])
        try:
            d = np.linalg.solve(K, -F)
        except np.linalg.LinAlgError:
            return None
        b = b + d[:k]
        lam = lam + d[k:]
        if not np.all(np.isfinite(d)):
            return None
        if np.max(np.abs(d)) <= 1e-16 * (1.0 + np.max(np.abs(b))):
            break
    return b, lam


def solve_kkt(k, p, attempts=64, seed=0, max_iter=200, spread=0.5):
    """Run every multi-start attempt and return the converged KKT points.

    Attempt 0 starts from ``b_j = 1/k``; attempt ``i > 0`` adds Gaussian
    noise of standard deviation ``spread`` drawn from a generator seeded by
    ``(seed, i)``, so attempts are independent of each other.  Results are
    listed in attempt order.
    """
    if not 1 <= p <= k:
        raise ValueError(f"order must satisfy 1 <= p <= k, got p={p}, k={k}")
    prob = _Problem(k, p)
    found = []
    for i in range(attempts):
        b0 = np.full(k, 1.0 / k)
        if i:
            b0 = b0 + np.random.default_rng([seed, i]).normal(scale=spread, size=k)
        b = _project(prob, b0, max_iter)
        if b is None:
            continue
        out = _lagrange_newton(prob, b, max_iter)
        if out is None:
            continue
        b, lam = out
        if b.sum() < 0:
            b = -b
        F, _ = prob.kkt(b, lam)
        cres = float(np.max(np.abs(F[k:])))
        kres = float(np.max(np.abs(F[:k])))
        if cres <= CONSTRAINT_TOL and kres <= KKT_TOL:
            found.append(OptimizationResult(b, lam, float(b @ b), cres, kres, i))
    return found


def _feasible(beta):
    phi = np.pi * np.arange(1, FEASIBILITY_GRID + 1) / (FEASIBILITY_GRID + 1)
    return bool(np.min(eval_nu(beta, phi)) >= -FEASIBILITY_TOL)


def _select(candidates):
    best = min(c.objective for c in candidates)
    tied = [c for c in candidates if c.objective - best <= 1e-12]
    distinct = []
    for c in tied:
        beta = map_T(c.b).beta
        if not any(np.max(np.abs(beta - map_T(d.b).beta)) <= 1e-9 for d in distinct):
            distinct.append(c)
    if len(distinct) == 1:
        return distinct[0]

    def discrepancy(c):
        r = measure_interval(map_T(c.b))
        return abs(r.ell_formula - r.ell_oracle)

    return min(distinct, key=discrepancy)


def optimize(k, p, attempts=64, seed=0, max_iter=200):
    """Order-p, k-step method with the longest stability interval found.

    Raises
    ------
    NotConverged
        When no attempt reaches a feasible KKT point.
    """
    found = solve_kkt(k, p, attempts=attempts, seed=seed, max_iter=max_iter)
    good = [r for r in found if _feasible(map_T(r.b)) and np.max(np.abs(order_residuals(map_T(r.b), p))) <= CONSTRAINT_TOL]
    if not good:
        best = min((r.constraint_residual for r in found), default=math.inf)
        raise NotConverged(k, p, attempts, best)
    beta = map_T(_select(good).b)
    return MethodSpec(k=k, p=p, beta=beta, ell=interval_formula(beta), error_const=error_constant(beta, p))


# --- classical Adams-Bashforth ----------------------------------------------


def _ab_fractions(k):
    # Gauss-Jordan in exact arithmetic on sum_j (1-k+j)**q beta_j = 1/(q+1)
    rows = [[Fraction(1 - k + j) ** q for j in range(k)] + [Fraction(1, q + 1)] for q in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(k):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[j][k] for j in range(k)]


def _exact_error_constant(beta, p):
    k = len(beta)
    s = Fraction(k) ** (p + 1) - Fraction(k - 1) ** (p + 1)
    s -= sum((p + 1) * b * Fraction(j) ** p for j, b in enumerate(beta))
    return s / math.factorial(p + 1) / sum(beta)


def classical_adams(k):
    """The k-step Adams-Bashforth method (order k); ``ell`` is measured."""
    if k < 1:
        raise ValueError("k must be >= 1")
    exact = _ab_fractions(k)
    beta = AdamsCoefficients([float(x) for x in exact])
    ell = measure_interval(beta).ell_oracle
    return MethodSpec(k=k, p=k, beta=beta, ell=ell, error_const=float(_exact_error_constant(exact, k)))


def synthesize(k, p, epsilon=0.0, attempts=64, seed=0):
    """Dispatch to the right constructor for a (k, p, epsilon) request.

    p == 1 uses the closed-form family (damped when epsilon > 0), p == k the
    classical Adams-Bashforth method, anything else the optimizer.
    """
    if epsilon and p != 1:
        raise ValueError("damping is only defined for first-order methods")
    if p == 1:
        m = first_order(k)
        return apply_damping(m.beta, epsilon) if epsilon else m
    if p == k:
        return classical_adams(k)
    return optimize(k, p, attempts=attempts, seed=seed)
