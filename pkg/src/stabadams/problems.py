"""Test problems with reference-solution providers."""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional
import math

import numpy as np

from . import hires_data as H

__all__ = [
    "OdeProblem",
    "RK4Reference",
    "linear_scalar",
    "hires",
    "burgers_mol",
    "get_problem",
    "PROBLEMS",
]


class RK4Reference:
    """Reference solution by classical fourth-order Runge-Kutta.

    ``ref(t)`` integrates from ``t0`` to ``t`` with the smallest number of
    equal steps not exceeding ``h``.  Results are memoized per ``t``.
    """

    def __init__(self, rhs, t0, y0, h):
        self.rhs = rhs
        self.t0 = float(t0)
        self.y0 = np.array(y0, dtype=float)
        self.h = float(h)
        self._cache = {}

    def halved(self):
        return RK4Reference(self.rhs, self.t0, self.y0, self.h / 2)

    def __call__(self, t):
        t = float(t)
        if t not in self._cache:
            self._cache[t] = self._integrate(t)
        return self._cache[t].copy()

    def _integrate(self, t):
        span = t - self.t0
        n = max(1, math.ceil(span / self.h - 1e-9)) if span > 0 else 0
        y = self.y0.copy()
        if n == 0:
            return y
        h = span / n
        f = self.rhs
        for i in range(n):
            ti = self.t0 + i * h
            k1 = f(ti, y)
            k2 = f(ti + 0.5 * h, y + 0.5 * h * k1)
            k3 = f(ti + 0.5 * h, y + 0.5 * h * k2)
            k4 = f(ti + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return y


@dataclass(frozen=True, eq=False)
class OdeProblem:
    """``y' = rhs(t, y)`` on ``[t0, t_end]`` with ``y(t0) = y0``.

    ``reference`` maps ``t`` to the reference state; ``reference_accuracy``
    is its claimed max-norm accuracy.
    """

    name: str
    t0: float
    t_end: float
    y0: np.ndarray
    rhs: Callable
    reference: Optional[Callable] = None
    reference_accuracy: float = 1e-10
    params: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.y0.size


def linear_scalar(lam, t_end=1.0, t0=0.0):
    """``y' = lam*y``, ``y(t0) = 1``, with the exact solution as reference."""
    lam = float(lam)
    return OdeProblem(
        name="linear",
        t0=float(t0),
        t_end=float(t_end),
        y0=np.array([1.0]),
        rhs=lambda t, y: lam * y,
        reference=lambda t: np.array([math.exp(lam * (t - t0))]),
        reference_accuracy=1e-16,
        params={"lambda": lam},
    )


def _hires_rhs(t, y):
    y1, y2, y3, y4, y5, y6, y7, y8 = y
    r = H.K_NONLINEAR * y6 * y8
    return np.array([
        -H.K1 * y1 + H.K2 * y2 + H.K3 * y3 + H.K4,
        H.K1 * y1 - H.K5 * y2,
        -H.K6 * y3 + H.K2 * y4 + H.K7 * y5,
        H.K3 * y2 + H.K1 * y3 - H.K8 * y4,
        -H.K9 * y5 + H.K2 * y6 + H.K2 * y7,
        -r + H.K10 * y4 + H.K1 * y5 - H.K2 * y6 + H.K10 * y7,
        r - H.K11 * y7,
        -r + H.K11 * y7,
    ])


@lru_cache(maxsize=None)
def hires(ref_step=1e-3):
    """The 8-dimensional HIRES chemical kinetics system on [0, 40]."""
    t0, t_end = H.T_SPAN
    return OdeProblem(
        name="hires",
        t0=t0,
        t_end=t_end,
        y0=H.Y0.copy(),
        rhs=_hires_rhs,
        reference=RK4Reference(_hires_rhs, t0, H.Y0, ref_step),
        reference_accuracy=1e-10,
    )


def _burgers_rhs(mu, n, advection):
    dx = 1.0 / (n + 1)
    diff = mu / dx**2
    adv = 1.0 / (4.0 * dx) if advection else 0.0
    ext = np.zeros(n + 2)

    def rhs(t, u):
        # u_0 = u_{n+1} = 0 (Dirichlet); a fresh buffer keeps rhs re-entrant
        ue = ext.copy()
        ue[1:-1] = u
        left, right = ue[:-2], ue[2:]
        out = diff * (right - 2.0 * u + left)
        if adv:
            out -= adv * (right * right - left * left)
        return out

    return rhs


@lru_cache(maxsize=None)
def burgers_mol(mu=0.005, n_interior=500, advection=True, ref_step=1e-4):
    """Central-difference method-of-lines Burgers equation on [0, 1] x [0, 2.5].

    ``u(x, 0) = 1.5 x (1-x)**2`` on the interior nodes ``x_i = i/(n+1)``.
    With ``advection=False`` only the diffusion term is kept.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if n_interior < 1:
        raise ValueError("n_interior must be positive")
    x = np.arange(1, n_interior + 1) / (n_interior + 1)
    u0 = 1.5 * x * (1.0 - x) ** 2
    rhs = _burgers_rhs(mu, n_interior, advection)
    return OdeProblem(
        name="burgers",
        t0=0.0,
        t_end=2.5,
        y0=u0,
        rhs=rhs,
        reference=RK4Reference(rhs, 0.0, u0, ref_step),
        reference_accuracy=1e-10,
        params={"mu": mu, "n": n_interior, "advection": advection},
    )


PROBLEMS = {
    "linear": linear_scalar,
    "hires": hires,
    "burgers": burgers_mol,
}


def get_problem(name, **kwargs):
    """Look up a problem constructor by name and call it with ``kwargs``."""
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
    return factory(**kwargs)
