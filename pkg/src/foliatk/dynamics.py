"""Floating-point Hamiltonian flows with ideal-preservation monitors.

Symbolic partial derivatives are taken once and compiled to plain float
evaluators; integration is fixed-step (reproducible monitor values), rk4 by
default with a leapfrog option for separable Hamiltonians.  Monitors sample
every step for the reported maxima and store a decimated trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import FlowDivergedError, PreconditionError, VariableSetError
from .geometry import MetricData, cotangent_lift, hamiltonian
from .ipoisson import IdealPresentation
from .poly import Polynomial, VariableSet


@dataclass(frozen=True)
class FlowState:
    q: tuple[float, ...]
    p: tuple[float, ...]
    t: float

    def vector(self) -> list[float]:
        return list(self.q) + list(self.p)


@dataclass(frozen=True)
class MonitorReport:
    """Decimated trace plus worst-case generator value and energy drift."""

    samples: tuple[tuple[float, tuple[float, ...], float], ...]
    max_abs_generator: float
    energy_drift: float


def compile_evaluator(poly: Polynomial) -> Callable[[Sequence[float]], float]:
    """Closure evaluating the polynomial on a float vector in variable order."""
    terms = [
        (float(c), tuple((i, k) for i, k in enumerate(e) if k))
        for e, c in poly.terms.items()
    ]

    def evaluate(vals: Sequence[float]) -> float:
        acc = 0.0
        for coeff, powers in terms:
            term = coeff
            for i, k in powers:
                term *= vals[i] ** k
            acc += term
        return acc

    return evaluate


def hamiltonian_rhs(h: Polynomial) -> Callable[[Sequence[float]], list[float]]:
    """dq^i/dt = dH/dp_i, dp_i/dt = -dH/dq^i, compiled once."""
    varset = h.varset
    if not varset.has_fiber:
        raise VariableSetError("Hamiltonian must live on a cotangent chart")
    dq = [compile_evaluator(h.diff(p_name)) for p_name in varset.fiber]
    dp = [compile_evaluator(h.diff(q_name)) for q_name in varset.base]

    def rhs(state: Sequence[float]) -> list[float]:
        return [f(state) for f in dq] + [-f(state) for f in dp]

    return rhs


def _is_separable(h: Polynomial) -> bool:
    n = h.varset.dimension
    for e in h.terms:
        if any(e[:n]) and any(e[n:]):
            return False
    return True


def integrate_flow(
    h: Polynomial,
    start: FlowState,
    t_end: float,
    dt: float,
    method: str = "rk4",
) -> list[FlowState]:
    """Fixed-step trajectory of the Hamiltonian flow; aborts on non-finite state.

    The horizon is hit exactly: the step count is the nearest integer to
    ``t_end/dt`` and the uniform step is ``t_end`` divided by it, so a
    commensurable ``dt`` is used verbatim.
    """
    if dt <= 0:
        raise PreconditionError("dt must be positive")
    if t_end < 0:
        raise PreconditionError("t_end must be nonnegative")
    varset = h.varset
    n = varset.dimension
    if len(start.q) != n or len(start.p) != n:
        raise PreconditionError("start state has the wrong dimension")

    steps = max(1, int(round(t_end / dt))) if t_end > 0 else 0
    dt = t_end / steps if steps else dt
    states = [FlowState(tuple(start.q), tuple(start.p), 0.0)]

    if method == "rk4":
        rhs = hamiltonian_rhs(h)

        def step(vec: list[float], t: float) -> list[float]:
            k1 = rhs(vec)
            k2 = rhs([v + 0.5 * dt * d for v, d in zip(vec, k1)])
            k3 = rhs([v + 0.5 * dt * d for v, d in zip(vec, k2)])
            k4 = rhs([v + dt * d for v, d in zip(vec, k3)])
            return [
                v + dt * (a + 2 * b + 2 * c + d) / 6.0
                for v, a, b, c, d in zip(vec, k1, k2, k3, k4)
            ]

    elif method == "leapfrog":
        if not _is_separable(h):
            raise PreconditionError(
                "leapfrog needs a separable Hamiltonian T(p) + V(q)"
            )
        dT = [compile_evaluator(h.diff(p_name)) for p_name in varset.fiber]
        dV = [compile_evaluator(h.diff(q_name)) for q_name in varset.base]

        def step(vec: list[float], t: float) -> list[float]:
            q, p = vec[:n], vec[n:]
            p_half = [pi - 0.5 * dt * f(q + p) for pi, f in zip(p, dV)]
            mid = q + p_half
            q_new = [qi + dt * f(mid) for qi, f in zip(q, dT)]
            state_new = q_new + p_half
            p_new = [pi - 0.5 * dt * f(state_new) for pi, f in zip(p_half, dV)]
            return q_new + p_new

    else:
        raise PreconditionError(f"unknown integration method {method!r}")

    vec = states[0].vector()
    for i in range(steps):
        try:
            vec = step(vec, i * dt)
        except OverflowError:
            raise FlowDivergedError(
                f"state overflowed near t={(i + 1) * dt:.6g}"
            ) from None
        if not all(math.isfinite(v) for v in vec):
            raise FlowDivergedError(
                f"non-finite state at t={(i + 1) * dt:.6g}: {vec}"
            )
        states.append(FlowState(tuple(vec[:n]), tuple(vec[n:]), (i + 1) * dt))
    return states


def _monitor(
    generators: Sequence[Polynomial],
    h: Polynomial,
    start: FlowState,
    t_end: float,
    dt: float,
    start_tol: float,
    store_every: int,
    precondition_label: str,
) -> MonitorReport:
    gen_evals = [compile_evaluator(g) for g in generators]
    h_eval = compile_evaluator(h)
    vec0 = start.vector()
    initial = [abs(f(vec0)) for f in gen_evals]
    if any(v > start_tol for v in initial):
        raise PreconditionError(
            f"{precondition_label}: generator values at start are {initial}"
        )
    trajectory = integrate_flow(h, start, t_end, dt)
    e0 = h_eval(vec0)
    max_gen = 0.0
    drift = 0.0
    samples = []
    last = len(trajectory) - 1
    for idx, state in enumerate(trajectory):
        vec = state.vector()
        values = tuple(f(vec) for f in gen_evals)
        energy = h_eval(vec)
        max_gen = max(max_gen, max((abs(v) for v in values), default=0.0))
        drift = max(drift, abs(energy - e0))
        if idx % store_every == 0 or idx == last:
            samples.append((state.t, values, energy))
    return MonitorReport(tuple(samples), max_gen, drift)


def monitor_ideal_preservation(
    ideal: IdealPresentation,
    h: Polynomial,
    start: FlowState,
    t_end: float,
    dt: float,
    *,
    start_tol: float = 1e-12,
    store_every: int = 10,
) -> MonitorReport:
    """Track the ideal's generators along the flow of H from a zero-set point."""
    if h.varset != ideal.chart:
        raise VariableSetError("Hamiltonian and ideal on different charts")
    return _monitor(
        ideal.generators, h, start, t_end, dt, start_tol, store_every,
        "start is not on the zero set",
    )


def geodesic_orthogonality_check(
    fol,
    metric: MetricData,
    start: FlowState,
    t_end: float,
    dt: float,
    *,
    start_tol: float = 1e-12,
    store_every: int = 10,
) -> MonitorReport:
    """Track the lifted generators along the geodesic flow from an orthogonal start."""
    cot = fol.chart.cotangent()
    lifts = [cotangent_lift(g, cot) for g in fol.generators]
    h = hamiltonian(metric, cot)
    return _monitor(
        lifts, h, start, t_end, dt, start_tol, store_every,
        "start covector is not orthogonal to the leaf",
    )
