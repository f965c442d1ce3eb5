"""Closed-loop rollout: plant plus synthesized feedback, with event-accurate stops.

The loop is sampled-data: the feedback law is re-evaluated every step and held
constant across it, integrated with fixed-step RK4.  Two kinds of events are
localized by bisection inside a step rather than left to the grid:

  * target crossings, on the signed distance (circle: |x| - l; square:
    max(|x1|, |x2|) - 1), to |distance| <= 1e-10, so the realized final time
    is bit-stable for the acceptance checks;
  * switching-curve crossings, on the feedback sign, so the control flips at
    the crossing instead of mid-step.

A tangential graze of the manifold produces no sign change of the distance,
so touch-and-go passes correctly do not terminate the rollout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .manifold import (
    BoundaryPoint,
    Circle,
    CircleTheta,
    Manifold,
    SquareCorner,
    SquareSide,
    signed_distance,
)
from .model import DomainError, InsideTarget, Params, State
from .synthesis import feedback, locus_distance, value

_EVENT_TOL = 1e-10
_ON_MANIFOLD_TOL = 1e-12
_CORNER_TOL = 1e-7
_PARAM_EPS = 1e-12


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    x1: float
    x2: float
    u: float


@dataclass(frozen=True)
class Termination:
    """Either ("reached", boundary point, t_f) or ("max_time", None, None)."""

    status: str
    boundary: BoundaryPoint | None
    t_f: float | None


@dataclass(frozen=True)
class Trajectory:
    samples: tuple[TrajectorySample, ...]
    termination: Termination
    dt: float

    @property
    def n_switches(self) -> int:
        flips = 0
        for a, b in zip(self.samples, self.samples[1:]):
            if b.u != a.u:
                flips += 1
        return flips


@dataclass(frozen=True)
class RolloutReport:
    """Audit of value-function consistency along a finished rollout."""

    max_abs_deviation: float
    threshold: float
    flagged: bool
    n_checked: int


def _rk4_forward(s: State, accel: float, h: float) -> State:
    # (dx1/dt, dx2/dt) = (x2, accel); RK4 is exact for this RHS.
    k1 = s.x2
    k2 = s.x2 + 0.5 * h * accel
    k4 = s.x2 + h * accel
    return State(s.x1 + (h / 6.0) * (k1 + 4.0 * k2 + k4), s.x2 + h * accel)


def boundary_point_of_state(m: Manifold, s: State) -> BoundaryPoint:
    """Boundary point of a state on (or within event tolerance of) the manifold."""
    if isinstance(m, Circle):
        theta = math.atan2(s.x2, s.x1) % (2.0 * math.pi)
        return CircleTheta(theta)
    near_x1 = abs(abs(s.x1) - 1.0)
    near_x2 = abs(abs(s.x2) - 1.0)
    if near_x1 < _CORNER_TOL and near_x2 < _CORNER_TOL:
        if s.x1 < 0.0 and s.x2 > 0.0:
            return SquareCorner("A", 0.75 * math.pi)
        if s.x1 > 0.0 and s.x2 < 0.0:
            return SquareCorner("C", 1.75 * math.pi)
        # B and D carry no boundary point; report the adjoining usable side.
        if s.x2 < 0.0:
            return SquareSide("BC", -1.0 + _PARAM_EPS)
        return SquareSide("AD", 1.0 - _PARAM_EPS)
    if near_x1 <= near_x2:
        side = "AB" if s.x1 < 0.0 else "CD"
        if side == "AB":
            return SquareSide("AB", min(max(s.x2, _PARAM_EPS), 1.0))
        return SquareSide("CD", min(max(s.x2, -1.0), -_PARAM_EPS))
    side = "BC" if s.x2 < 0.0 else "AD"
    if side == "BC":
        return SquareSide("BC", min(max(s.x1, -1.0 + _PARAM_EPS), 1.0))
    return SquareSide("AD", min(max(s.x1, -1.0), 1.0 - _PARAM_EPS))


def simulate(m: Manifold, params: Params, s0: State, dt: float, t_max: float) -> Trajectory:
    """Roll the closed loop forward from s0 until the manifold is reached."""
    if dt <= 0.0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    if t_max <= 0.0:
        raise DomainError(f"t_max must be > 0, got {t_max!r}")
    d0 = signed_distance(m, s0)
    if d0 < -_ON_MANIFOLD_TOL:
        raise InsideTarget(f"{s0!r} starts inside the target")
    if abs(d0) <= _ON_MANIFOLD_TOL:
        u0 = feedback(m, params, s0).u
        sample = TrajectorySample(0.0, s0.x1, s0.x2, u0)
        return Trajectory((sample,), Termination("reached", boundary_point_of_state(m, s0), 0.0), dt)

    t = 0.0
    s = s0
    u = feedback(m, params, s).u
    samples = [TrajectorySample(0.0, s.x1, s.x2, u)]
    while t < t_max:
        accel = params.alpha * u
        trial = _rk4_forward(s, accel, dt)
        if signed_distance(m, trial) <= 0.0:
            h = _bisect_event(m, s, accel, dt)
            final = _rk4_forward(s, accel, h)
            t += h
            samples.append(TrajectorySample(t, final.x1, final.x2, u))
            return Trajectory(
                tuple(samples), Termination("reached", boundary_point_of_state(m, final), t), dt
            )
        u_next = feedback(m, params, trial).u
        if u_next != u:
            h = _bisect_switch(m, params, s, accel, dt, u)
            s = _rk4_forward(s, accel, h)
            t += h
            u = feedback(m, params, s).u
            samples.append(TrajectorySample(t, s.x1, s.x2, u))
            continue
        s = trial
        t += dt
        samples.append(TrajectorySample(t, s.x1, s.x2, u))
    return Trajectory(tuple(samples), Termination("max_time", None, None), dt)


def _bisect_event(m: Manifold, s: State, accel: float, dt: float) -> float:
    lo, hi = 0.0, dt
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        d = signed_distance(m, _rk4_forward(s, accel, mid))
        if abs(d) <= _EVENT_TOL:
            return mid
        if d > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _bisect_switch(m: Manifold, params: Params, s: State, accel: float, dt: float, u: float) -> float:
    lo, hi = 0.0, dt
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if feedback(m, params, _rk4_forward(s, accel, mid)).u == u:
            lo = mid
        else:
            hi = mid
    return hi


def verify_rollout(traj: Trajectory, m: Manifold, params: Params) -> RolloutReport:
    """Check value(sample) tracks the remaining time t_f - t along the rollout.

    Samples within a small band of a value-jump locus are skipped; deviations
    beyond 5*dt are flagged.
    """
    if traj.termination.status != "reached":
        raise DomainError("verify_rollout needs a trajectory that reached the manifold")
    t_f = traj.termination.t_f
    threshold = 5.0 * traj.dt
    worst = 0.0
    checked = 0
    for smp in traj.samples:
        st = State(smp.x1, smp.x2)
        if locus_distance(m, params, st) < threshold:
            continue
        if signed_distance(m, st) < -_ON_MANIFOLD_TOL:
            continue
        worst = max(worst, abs(value(m, params, st) - (t_f - smp.t)))
        checked += 1
    return RolloutReport(worst, threshold, worst > threshold, checked)
