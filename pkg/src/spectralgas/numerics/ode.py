"""Adaptive embedded Runge-Kutta integration (DOP853 stepper from scipy)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import DOP853
from scipy.integrate import OdeSolution

from ..errors import StepUnderflow

MIN_STEP_FRACTION = 1e-14


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray  # accepted step times
    y: np.ndarray  # states, shape (k, len(t))
    sol: OdeSolution  # dense interpolant over the span
    t_eval: np.ndarray | None = None
    y_eval: np.ndarray | None = None

    @property
    def final(self) -> np.ndarray:
        return self.y[:, -1]

    def __call__(self, t):
        return self.sol(t)


def integrate_ode(rhs, y0, span, tol: float = 1e-12, t_eval=None, atol=None) -> Trajectory:
    """Integrate y' = rhs(t, y) over ``span``.

    Steps are controlled to local error ``tol`` (relative, and absolute unless
    ``atol`` is given). A step smaller than 1e-14 of the span length, or a
    non-finite state, raises StepUnderflow carrying the time reached.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    t0, t1 = float(span[0]), float(span[1])
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    floor = MIN_STEP_FRACTION * abs(t1 - t0)
    solver = DOP853(rhs, t0, y0, t1, rtol=tol, atol=tol if atol is None else atol)
    ts, ys, interps = [t0], [y0.copy()], []
    while solver.status == "running":
        msg = solver.step()
        if solver.status == "failed":
            raise StepUnderflow(f"integrator failed at t={solver.t}: {msg}", t=solver.t)
        if not np.all(np.isfinite(solver.y)):
            raise StepUnderflow(f"solution blew up near t={solver.t}", t=solver.t)
        if solver.status == "running" and solver.step_size < floor:
            raise StepUnderflow(f"step size {solver.step_size:.3g} below floor near t={solver.t}", t=solver.t)
        ts.append(solver.t)
        ys.append(solver.y.copy())
        interps.append(solver.dense_output())
    ts = np.array(ts)
    sol = OdeSolution(ts, interps)
    y_eval = None
    if t_eval is not None:
        t_eval = np.asarray(t_eval, dtype=float)
        y_eval = sol(t_eval)
    return Trajectory(ts, np.array(ys).T, sol, t_eval, y_eval)
