"""Generating polynomials of explicit Adams-type methods.

An explicit k-step Adams-type method

    y[m+k] = y[m+k-1] + tau * (beta[0] f[m] + ... + beta[k-1] f[m+k-1])

has the generating polynomials ``rho(z) = z**k - z**(k-1)`` and
``sigma(z) = sum_j beta[j] z**j``.  Everything that touches stability goes
through the rational map ``mu(z) = rho(z) / sigma(z)`` or through the roots of
``rho(z) - mu * sigma(z)``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .exceptions import DegenerateError, PoleError

__all__ = [
    "AdamsCoefficients",
    "eval_rho",
    "eval_sigma",
    "eval_mu",
    "char_poly",
    "char_roots",
    "eval_nu",
    "order_system",
]

_POLE_TOL = 1e-300


@dataclass(frozen=True, eq=False)
class AdamsCoefficients:
    """Weights beta[0..k-1] of an explicit Adams-type method.

    ``beta[k-1]`` multiplies the newest f-value.  The array is stored
    read-only so instances can be shared freely.
    """

    beta: np.ndarray

    def __post_init__(self):
        beta = np.array(self.beta, dtype=float).reshape(-1)
        if beta.size < 1:
            raise ValueError("need at least one coefficient (k >= 1)")
        if not np.all(np.isfinite(beta)):
            raise ValueError("coefficients must be finite")
        beta.flags.writeable = False
        object.__setattr__(self, "beta", beta)

    @property
    def k(self):
        return self.beta.size

    def padded(self, j):
        """beta[j], with the convention beta[j] = 0 outside 0..k-1."""
        return float(self.beta[j]) if 0 <= j < self.k else 0.0

    def __len__(self):
        return self.k

    def __eq__(self, other):
        if not isinstance(other, AdamsCoefficients):
            return NotImplemented
        return np.array_equal(self.beta, other.beta)

    def __hash__(self):
        return hash(self.beta.tobytes())

    def __repr__(self):
        return f"AdamsCoefficients(beta={self.beta.tolist()!r})"


def _as_coeffs(coeffs):
    if isinstance(coeffs, AdamsCoefficients):
        return coeffs
    return AdamsCoefficients(coeffs)


def eval_rho(k, zeta):
    zeta = np.asarray(zeta, dtype=complex)
    return zeta ** (k - 1) * (zeta - 1.0)


def eval_sigma(coeffs, zeta):
    """sigma(zeta) by Horner's rule; broadcasts over array ``zeta``."""
    coeffs = _as_coeffs(coeffs)
    zeta = np.asarray(zeta, dtype=complex)
    acc = np.zeros_like(zeta)
    for b in coeffs.beta[::-1]:
        acc = acc * zeta + b
    return acc


def eval_mu(coeffs, zeta):
    """The value of lambda*tau for which ``zeta`` is a characteristic root.

    Returns a Python ``complex`` for scalar input and a complex array
    otherwise.

    Raises
    ------
    PoleError
        If ``|sigma(zeta)|`` underflows at any requested point.
    """
    coeffs = _as_coeffs(coeffs)
    scalar = np.ndim(zeta) == 0
    zeta = np.asarray(zeta, dtype=complex)
    sig = eval_sigma(coeffs, zeta)
    if np.any(np.abs(sig) <= _POLE_TOL):
        raise PoleError(f"sigma vanishes at zeta = {zeta[np.abs(sig) <= _POLE_TOL].ravel()[0]}")
    mu = eval_rho(coeffs.k, zeta) / sig
    return complex(mu) if scalar else mu


def char_poly(coeffs, mu):
    """Coefficients of ``rho(z) - mu*sigma(z)``, lowest degree first."""
    coeffs = _as_coeffs(coeffs)
    k = coeffs.k
    c = np.zeros(k + 1, dtype=complex)
    c[k] = 1.0
    c[k - 1] = -1.0
    c[:k] -= complex(mu) * coeffs.beta
    return c


def _merge_clusters(roots, tol):
    # eigenvalues of an m-fold root scatter by ~eps**(1/m) around it while
    # their mean stays accurate; replace each tight cluster by its centroid
    n = roots.size
    label = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < tol * (1.0 + abs(roots[i])):
                old, new = label[j], label[i]
                label = [new if x == old else x for x in label]
    out = roots.copy()
    for g in set(label):
        idx = [i for i in range(n) if label[i] == g]
        if len(idx) > 1:
            out[idx] = roots[idx].mean()
    return out


def char_roots(coeffs, mu, cluster_tol=1e-7):
    """All k roots of the characteristic polynomial at ``lambda*tau = mu``.

    Roots are the eigenvalues of the companion matrix of the monic
    polynomial ``rho(z) - mu*sigma(z)``.  Roots closer than ``cluster_tol``
    (relative) are treated as one multiple root and replaced by their mean.
    """
    c = char_poly(coeffs, mu)
    lead = c[-1]
    if abs(lead) == 0.0 or not np.isfinite(lead):
        raise DegenerateError("leading coefficient of the characteristic polynomial vanished")
    k = c.size - 1
    if k == 1:
        return np.array([-c[0] / lead])
    companion = np.zeros((k, k), dtype=complex)
    companion[1:, :-1] = np.eye(k - 1)
    companion[:, -1] = -c[:-1] / lead
    return _merge_clusters(np.linalg.eigvals(companion), cluster_tol)


def eval_nu(coeffs, phi):
    """``Im rho(e^{i phi}) conj(sigma(e^{i phi}))`` as a sine series.

    nu(phi) = sum_{j=1..k} (beta[k-j] - beta[k-j-1]) sin(j phi)

    The sign of nu on (0, pi) equals the sign of Im mu(e^{i phi}).
    """
    coeffs = _as_coeffs(coeffs)
    k = coeffs.k
    phi = np.asarray(phi, dtype=float)
    out = np.zeros_like(phi)
    for j in range(1, k + 1):
        w = coeffs.padded(k - j) - coeffs.padded(k - j - 1)
        if w:
            out = out + w * np.sin(j * phi)
    return float(out) if out.ndim == 0 else out


def order_system(k, p):
    """Linear order conditions as a pair ``(W, c)`` with ``G(beta) = W @ beta - c``.

    Row q-1 encodes G_q: ``sum_j (1-k+j)**(q-1) beta[j] - 1/q``.
    """
    if not 1 <= p:
        raise ValueError("order must be >= 1")
    nodes = np.arange(k, dtype=float) + 1.0 - k
    W = np.vstack([nodes**q for q in range(p)])
    c = np.array([1.0 / q for q in range(1, p + 1)])
    return W, c


def alternating_sum(coeffs):
    """``sum_j (-1)**j beta[j]``, accumulated with :func:`math.fsum`."""
    coeffs = _as_coeffs(coeffs)
    return math.fsum((-1) ** j * b for j, b in enumerate(coeffs.beta.tolist()))
