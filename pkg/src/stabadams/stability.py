"""Stability analysis: root-locus curves, stability intervals, error constants."""

from dataclasses import dataclass
import csv
import math

import numpy as np

from .exceptions import OrderViolation
from .polycore import (
    AdamsCoefficients,
    alternating_sum,
    char_roots,
    eval_mu,
    order_system,
)

__all__ = [
    "LocusCurve",
    "IntervalResult",
    "trace_locus",
    "stable_at",
    "interval_formula",
    "measure_interval",
    "error_constant",
]


@dataclass(frozen=True, eq=False)
class LocusCurve:
    """Boundary-locus samples ``mu(e^{i phi})`` for increasing ``phi``."""

    phi: np.ndarray
    mu: np.ndarray
    k: int

    def __len__(self):
        return self.phi.size

    def rows(self):
        for phi, mu in zip(self.phi.tolist(), self.mu.tolist()):
            yield phi, mu.real, mu.imag

    def write_csv(self, fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["phi", "re", "im"])
        for row in self.rows():
            writer.writerow([f"{v:.17g}" for v in row])


@dataclass(frozen=True)
class IntervalResult:
    ell_formula: float
    ell_oracle: float

    @property
    def agree(self):
        return abs(self.ell_formula - self.ell_oracle) <= 1e-6 * (1.0 + self.ell_formula)


def trace_locus(coeffs, n_points=512):
    """Sample the root-locus curve at ``phi_i = 2*pi*i/n_points``."""
    if n_points < 8:
        raise ValueError("n_points must be at least 8")
    coeffs = coeffs if isinstance(coeffs, AdamsCoefficients) else AdamsCoefficients(coeffs)
    phi = 2.0 * np.pi * np.arange(n_points) / n_points
    zeta = np.exp(1j * phi)
    zeta[0] = 1.0
    mu = eval_mu(coeffs, zeta)
    return LocusCurve(phi=phi, mu=np.asarray(mu), k=coeffs.k)


def stable_at(coeffs, mu, radius_tol=1e-9, sep_tol=1e-7):
    """Root condition for ``lambda*tau = mu``.

    All roots must satisfy ``|z| <= 1 + radius_tol``; roots with
    ``|z| >= 1 - sep_tol`` must be pairwise at least ``sep_tol`` apart.
    """
    roots = char_roots(coeffs, mu)
    mod = np.abs(roots)
    if np.any(mod > 1.0 + radius_tol):
        return False
    outer = roots[mod >= 1.0 - sep_tol]
    for i in range(outer.size):
        for j in range(i + 1, outer.size):
            if abs(outer[i] - outer[j]) < sep_tol:
                return False
    return True


def interval_formula(coeffs):
    """``-mu(-1) = 2 (-1)**(k+1) / sum_j (-1)**j beta[j]``, clipped at zero."""
    coeffs = coeffs if isinstance(coeffs, AdamsCoefficients) else AdamsCoefficients(coeffs)
    alt = alternating_sum(coeffs)
    if alt == 0.0:
        return math.inf
    ell = -2.0 * (-1) ** coeffs.k / alt
    return max(ell, 0.0)


def _scan_stable(coeffs, xs, radius_tol, sep_tol=1e-7):
    """Vectorized ``stable_at(coeffs, -x)`` over an array of ``x``."""
    k = coeffs.k
    if k == 1:
        return np.abs(1.0 - xs * coeffs.beta[0]) <= 1.0 + radius_tol
    comp = np.zeros((xs.size, k, k))
    comp[:, 1:, :-1] = np.eye(k - 1)
    c = np.outer(xs, coeffs.beta)  # rho - mu*sigma with mu = -x
    c[:, k - 1] -= 1.0
    comp[:, :, -1] = -c
    roots = np.linalg.eigvals(comp)
    mod = np.abs(roots)
    ok = np.all(mod <= 1.0 + radius_tol, axis=1)
    # rows with several roots near the unit circle need the exact
    # separation test, which goes through the scalar path
    crowded = ok & (np.sum(mod >= 1.0 - sep_tol, axis=1) >= 2)
    for i in np.flatnonzero(crowded):
        ok[i] = stable_at(coeffs, -xs[i], radius_tol=radius_tol, sep_tol=sep_tol)
    return ok


def _oracle(coeffs, ell_hint, tol, radius_tol, max_scan):
    h = ell_hint / 1000.0 if 0.0 < ell_hint < math.inf else 1e-3
    lo = 0.0
    hi = None
    chunk = 1024
    for start in range(1, max_scan + 1, chunk):
        idx = np.arange(start, min(start + chunk, max_scan + 1))
        ok = _scan_stable(coeffs, idx * h, 1e-9)
        bad = np.flatnonzero(~ok)
        if bad.size:
            first = bad[0]
            hi = idx[first] * h
            lo = idx[first - 1] * h if first else (start - 1) * h
            break
    if hi is None:
        return math.inf
    # shrink the bracket with the tight radius tolerance; the scan grid only
    # decides where the first instability lives
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if stable_at(coeffs, -mid, radius_tol=radius_tol):
            lo = mid
        else:
            hi = mid
    return lo


def measure_interval(coeffs, tol=1e-10, radius_tol=1e-12, max_scan=200_000):
    """Stability-interval length by closed form and by a root-condition oracle.

    The oracle scans the negative real axis with step ``ell_formula/1000``
    until the first unstable point, then bisects the last stable/unstable
    bracket down to ``tol``.
    """
    coeffs = coeffs if isinstance(coeffs, AdamsCoefficients) else AdamsCoefficients(coeffs)
    ell_f = interval_formula(coeffs)
    ell_o = _oracle(coeffs, ell_f, tol, radius_tol, max_scan)
    return IntervalResult(ell_formula=ell_f, ell_oracle=ell_o)


def error_constant(coeffs, p):
    """Error constant ``C_{p+1} / sigma(1)`` of an order-``p`` method.

    Uses alpha_k = 1, alpha_{k-1} = -1 and beta_k = 0.

    Raises
    ------
    OrderViolation
        If any order residual G_1..G_p exceeds 1e-8 (or, for rows with
        large node powers, the rounding level of that row).
    """
    coeffs = coeffs if isinstance(coeffs, AdamsCoefficients) else AdamsCoefficients(coeffs)
    k = coeffs.k
    W, c = order_system(k, p)
    beta = coeffs.beta.tolist()
    res = np.array([abs(math.fsum(w * b for w, b in zip(row, beta)) - cq) for row, cq in zip(W.tolist(), c)])
    # rows grow like (k-1)**(q-1); beyond 1e-8 only rounding at that scale is tolerated
    allowed = np.maximum(1e-8, 1e-14 * (np.abs(W) @ np.abs(coeffs.beta)))
    if np.any(res > allowed):
        raise OrderViolation(f"method does not have order {p} (max residual {np.max(res):.3g})")
    beta = coeffs.beta.tolist()
    terms = [float(k) ** (p + 1), -float(k - 1) ** (p + 1)]
    terms += [-(p + 1) * b * float(j) ** p for j, b in enumerate(beta)]
    c_next = math.fsum(terms) / math.factorial(p + 1)
    return c_next / math.fsum(beta)
