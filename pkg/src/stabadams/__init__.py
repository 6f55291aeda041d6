"""Stabilized explicit Adams-type linear multistep methods.

Synthesis of k-step methods with long real stability intervals, their
stability analysis, and fixed-step integration drivers.
"""

from .exceptions import (
    DegenerateError,
    NotConverged,
    OrderViolation,
    PoleError,
    ReferenceUnavailable,
)
from .integrate import ConvergenceReport, IntegrationRun, converge_study, run_fixed, step_history_init
from .polycore import AdamsCoefficients, char_roots, eval_mu, eval_nu
from .problems import OdeProblem, burgers_mol, hires, linear_scalar
from .stability import IntervalResult, LocusCurve, error_constant, measure_interval, stable_at, trace_locus
from .synth import (
    MethodSpec,
    apply_damping,
    classical_adams,
    damping_deltas,
    damping_increments,
    first_order,
    map_T,
    optimize,
    order_residuals,
    synthesize,
)

__version__ = "0.1.0"
