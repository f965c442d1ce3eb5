"""State-feedback law, time-to-go, switching curves, and value-jump loci.

The characteristic families fill the exterior of the target, so feedback is
synthesized by inversion: given a query state, solve each family's parabola
relations for its boundary parameter and retrograde time, keep the feasible
solutions, and return the one with minimal time-to-go.  Each constant-control
arc obeys x1 = u*x2^2/2 + const (alpha = 1), so the inversions reduce to
quadratics in cos(theta) or the side parameters, plus one monotone scalar
solve for the post-switch circle families.

Switching curves
----------------
Circle: the switch points of the upper family trace

    x1 = l/cos th - tan^2 th / 2,   x2 = l sin th - tan th,   th in (pi/2, pi],

anchored at (-l, 0); the lower branch mirrors it, anchored at (l, 0).  In
explicit form the upper branch is

    x2(x1) = sqrt(2) * sqrt(l^2+1-2x1) / (sqrt(l^2+1-2x1) - l)
             * sqrt(l^2 - x1 - l*sqrt(l^2+1-2x1)),    x1 <= -l.

Square: the corner families ride the parabolas

    x1 = -x2^2/2 - 1/2 (x2 >= 1, into A),   x1 = x2^2/2 + 1/2 (x2 <= -1, into C).

Value-jump loci
---------------
The time-to-go degenerates across two centrally symmetric half-parabolas
where the short direct-entry family abuts the long go-around family:

    circle, l <= 1:  x1 = -x2^2/2 + l,            x2 >= 0, and its mirror;
    circle, l >  1:  x1 = -x2^2/2 + (l^2+1)/2,    x2 >= sqrt(l^2-1), and mirror
                     (the parabola grazing the manifold at thbar);
    square:          x1 = -x2^2/2 + 3/2,          x2 >= 1 (through D), and the
                     mirror through B.

For the square and for l/alpha > 1 the value genuinely jumps there: the long
side must detour around a corner or the non-usable arc.  For the circle with
l/alpha <= 1 both adjoining families approach the same grazing trajectory
through the boundary point (l, 0), so the value is continuous across the
curve but its gradient blows up (a root-type cusp); the curve is still where
the synthesis ceases to be smooth, and finite-offset differences across it
remain large.  These closed forms are the limiting characteristics of the
adjoining families; discontinuity_loci() locates the same curves
independently by scanning the value function and bisecting on jump/cusp
spikes, and the two constructions are cross-checked in the tests.

Queries strictly inside the target are rejected rather than assigned zero
time: the value function is zero only on the usable part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .manifold import (
    BoundaryPoint,
    Circle,
    CircleTheta,
    Manifold,
    Square,
    SquareCorner,
    SquareSide,
    contains,
)
from .model import DomainError, InsideTarget, Params, State

_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi

_Q_TOL = 1e-12        # closure tolerance on cos(theta) roots at excluded endpoints
_PARAM_TOL = 1e-9     # closure tolerance on square side parameters
_PARAM_EPS = 1e-12    # nudge applied when clamping a parameter into its open range
_TAU_TOL = 1e-9       # slack on time-to-go feasibility checks
_TIE_TOL = 1e-9       # relative width of a time-to-go tie between families
_ONCURVE_TOL = 1e-9   # membership band for riding a square switching curve
_LOCUS_FLAG_TOL = 1e-9  # distance band reported as "on a value-jump locus"
_INTERIOR_TOL = 1e-12   # states this deep inside the target are rejected


# ── Result types ───────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class SynthesisResult:
    """Feedback answer at one state.

    u: current optimal control; time_to_go: minimal time to the usable part;
    terminal_point: where the optimal trajectory terminates; switch_state:
    the upcoming switching-curve crossing, if any; discontinuity_flag: the
    query sits within a hair of a value-jump locus, and the smaller-time side
    is reported.
    """

    u: float
    time_to_go: float
    terminal_point: BoundaryPoint
    switch_state: State | None
    discontinuity_flag: bool


@dataclass(frozen=True)
class _Candidate:
    tau: float
    u: float
    terminal: BoundaryPoint
    switch_state: State | None
    switch_ahead: bool
    family: str


# ── Switching curves ───────────────────────────────────────────────────────────


@dataclass(frozen=True)
class SwitchingCurve:
    """Locus where the closed-loop control flips sign.

    Circle branches ("upper", "lower") are parameterized by the anchor angle;
    square branches ("A", "C") are explicit parabolas in x2.
    """

    target: str
    branch: str
    anchor_state: State
    l: float = 1.0

    def point(self, theta: float) -> State:
        """Circle branch point at anchor angle theta (closed at the anchor end)."""
        if self.target != "circle":
            raise DomainError("point(theta) applies to circle branches")
        if self.branch == "upper":
            if not _HALF_PI < theta <= math.pi:
                raise DomainError(f"upper branch needs theta in (pi/2, pi], got {theta!r}")
        elif not 1.5 * math.pi < theta <= _TWO_PI:
            raise DomainError(f"lower branch needs theta in (3*pi/2, 2*pi], got {theta!r}")
        tt = math.tan(theta)
        sign = -1.0 if self.branch == "upper" else 1.0
        return State(
            self.l / math.cos(theta) + sign * 0.5 * tt * tt,
            self.l * math.sin(theta) + sign * tt,
        )

    def x2_of_x1(self, x1: float) -> float:
        """Circle branches in explicit form; defined for |x1| >= l on the branch side."""
        if self.target != "circle":
            raise DomainError("x2_of_x1 applies to circle branches")
        l = self.l
        if self.branch == "upper":
            if x1 > -l:
                raise DomainError(f"upper branch needs x1 <= -l, got {x1!r}")
            root = math.sqrt(l * l + 1.0 - 2.0 * x1)
            inner = max(0.0, l * l - x1 - l * root)
            return math.sqrt(2.0) * root / (root - l) * math.sqrt(inner)
        if x1 < l:
            raise DomainError(f"lower branch needs x1 >= l, got {x1!r}")
        root = math.sqrt(l * l + 1.0 + 2.0 * x1)
        inner = max(0.0, l * l + x1 - l * root)
        return -math.sqrt(2.0) * root / (root - l) * math.sqrt(inner)

    def x1_of_x2(self, x2: float) -> float:
        """Square branches: x1 = -+(x2^2 + 1)/2 with the stated x2 domain."""
        if self.target != "square":
            raise DomainError("x1_of_x2 applies to square branches")
        if self.branch == "A":
            if x2 < 1.0:
                raise DomainError(f"branch A needs x2 >= 1, got {x2!r}")
            return -0.5 * (x2 * x2 + 1.0)
        if x2 > -1.0:
            raise DomainError(f"branch C needs x2 <= -1, got {x2!r}")
        return 0.5 * (x2 * x2 + 1.0)

    def sample(self, n: int, x2_max: float = 5.0) -> list[State]:
        """n curve points at uniform |x2| from the anchor outward."""
        if n < 2:
            raise DomainError(f"need n >= 2 sample points, got {n}")
        out = []
        if self.target == "square":
            sgn = 1.0 if self.branch == "A" else -1.0
            for j in range(n):
                x2 = sgn * (1.0 + j * (x2_max - 1.0) / (n - 1))
                out.append(State(self.x1_of_x2(x2), x2))
            return out
        sgn = 1.0 if self.branch == "upper" else -1.0
        for j in range(n):
            x2 = sgn * j * x2_max / (n - 1)
            out.append(self.point(self._theta_of_x2(x2)))
        return out

    def _theta_of_x2(self, x2: float) -> float:
        # |x2| is monotone along each branch from 0 at the anchor; bisect.
        if self.branch == "upper":
            lo, hi = _HALF_PI + 1e-9, math.pi  # x2: huge .. 0
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if self.point(mid).x2 > x2:
                    lo = mid
                else:
                    hi = mid
                if hi - lo < 1e-14:
                    break
            return hi
        lo, hi = 1.5 * math.pi + 1e-9, _TWO_PI  # x2: -huge .. 0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.point(mid).x2 < x2:
                lo = mid
            else:
                hi = mid
            if hi - lo < 1e-14:
                break
        return hi


def switching_curve_circle(params: Params, branch: str) -> SwitchingCurve:
    """Circle switching curve, branch "upper" (anchored at (-l, 0)) or "lower"."""
    if params.alpha != 1.0:
        raise DomainError("switching curves are available in closed form for alpha = 1")
    if branch not in ("upper", "lower"):
        raise DomainError(f'circle branch must be "upper" or "lower", got {branch!r}')
    anchor = State(-params.l, 0.0) if branch == "upper" else State(params.l, 0.0)
    return SwitchingCurve("circle", branch, anchor, params.l)


def switching_curve_square(branch: str) -> SwitchingCurve:
    """Square switching curve into corner A or C."""
    if branch not in ("A", "C"):
        raise DomainError(f'square branch must be "A" or "C", got {branch!r}')
    anchor = State(-1.0, 1.0) if branch == "A" else State(1.0, -1.0)
    return SwitchingCurve("square", branch, anchor)


# ── Touch-and-go curves ────────────────────────────────────────────────────────


@dataclass(frozen=True)
class TouchAndGoCurve:
    """Optimal trajectory grazing the manifold without terminating there.

    The grazing arc is the parabola x1 = control*x2^2/2 + c; the trajectory
    continues past graze_state, switches at switch_state (if any), and
    terminates at terminal_point on the usable part.
    """

    graze_state: State
    control: float
    c: float
    terminal_point: BoundaryPoint
    switch_state: State | None

    def x1_of_x2(self, x2: float) -> float:
        return self.control * 0.5 * x2 * x2 + self.c


def touch_and_go_curves(m: Manifold, params: Params) -> list[TouchAndGoCurve]:
    """Both touch-and-go trajectories; empty for a circle with l/alpha <= 1.

    Square: the parabolas through B and D, the theta = pi (resp. 2*pi) members
    of the corner families, terminating at A (resp. C).  Circle with
    l/alpha > 1: the characteristics grazing the manifold at the BUP angles
    thbar and pi + thbar.
    """
    if params.alpha != 1.0:
        raise DomainError("touch-and-go curves are available in closed form for alpha = 1")
    if isinstance(m, Square):
        return [
            TouchAndGoCurve(State(-1.0, -1.0), 1.0, -1.5, SquareCorner("A", math.pi), State(-1.0, 1.0)),
            TouchAndGoCurve(State(1.0, 1.0), -1.0, 1.5, SquareCorner("C", _TWO_PI), State(1.0, -1.0)),
        ]
    l = m.l
    if l <= 1.0:
        return []
    theta_bar = math.acos(1.0 / l)
    graze_hi = State(l * math.cos(theta_bar), l * math.sin(theta_bar))
    c_star = 0.5 * (l * l + 1.0)
    t = _solve_far_constant(l, c_star)
    h = math.sqrt(1.0 + t * t)
    theta_star = _TWO_PI + math.atan(t)
    switch_hi = State(l * h + 0.5 * t * t, l * t / h + t)
    upper = TouchAndGoCurve(graze_hi, -1.0, c_star, CircleTheta(theta_star), switch_hi)
    lower = TouchAndGoCurve(
        -graze_hi,
        1.0,
        -c_star,
        CircleTheta(theta_star - math.pi),
        -switch_hi,
    )
    return [upper, lower]


# ── Circle family inversion ────────────────────────────────────────────────────


def _far_constant(l: float, t: float) -> float:
    """Parabola constant of the post-switch circle families, by t = tan(theta).

    Strictly increasing in |t| from l at t = 0; shared by the upper family
    (where it enters with a minus sign) and the lower family.
    """
    t2 = t * t
    h = math.sqrt(1.0 + t2)
    return l * (1.0 + 2.0 * t2) / h + t2 + 0.5 * l * l * t2 / (1.0 + t2)


def _solve_far_constant(l: float, target: float) -> float:
    """The t < 0 with _far_constant(l, t) = target; requires target > l."""
    if target <= l:
        raise DomainError("no post-switch anchor: constant must exceed l")
    lo = -1.0
    while _far_constant(l, lo) < target:
        lo *= 2.0
        if lo < -1e12:
            raise DomainError("post-switch anchor solve failed to bracket")
    hi = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _far_constant(l, mid) >= target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * max(1.0, -lo):
            break
    return 0.5 * (lo + hi)


def _circle_candidates(params: Params, s: State) -> list[_Candidate]:
    l = params.l
    x1, x2 = s.x1, s.x2
    q_max = min(1.0, params.alpha / l)  # cos(thbar); 1 when the NUP is empty
    c_minus = x1 + 0.5 * x2 * x2  # constant of the u = -1 parabola through s
    c_plus = x1 - 0.5 * x2 * x2   # constant of the u = +1 parabola through s
    out: list[_Candidate] = []

    # Near families: one constant-control leg into the manifold.
    disc = 1.0 + l * l - 2.0 * c_minus
    if disc >= 0.0:
        root = math.sqrt(disc)
        for q in ((1.0 - root) / l, (1.0 + root) / l):
            cand = _near_circle(l, q, q_max, x2, upper=True)
            if cand is not None:
                out.append(cand)
    disc = 1.0 + l * l + 2.0 * c_plus
    if disc >= 0.0:
        root = math.sqrt(disc)
        for q in ((-1.0 + root) / l, (-1.0 - root) / l):
            cand = _near_circle(l, q, q_max, x2, upper=False)
            if cand is not None:
                out.append(cand)

    # Far families: pre-switch leg, then the near leg after crossing the
    # switching curve.
    if -c_plus > l:
        t = _solve_far_constant(l, -c_plus)
        h = math.sqrt(1.0 + t * t)
        tau = -t * (l / h + 2.0) - x2
        tau_s = -t
        if tau >= tau_s - _TAU_TOL * (1.0 + tau_s):
            theta = math.pi + math.atan(t)
            sw = State(-l * h - 0.5 * t * t, -l * t / h - t)
            out.append(
                _Candidate(max(tau, tau_s), 1.0, CircleTheta(theta), sw,
                           tau > tau_s + _TIE_TOL * (1.0 + tau), "far_upper")
            )
    if c_minus > l:
        t = _solve_far_constant(l, c_minus)
        h = math.sqrt(1.0 + t * t)
        tau = x2 - l * t / h - 2.0 * t
        tau_s = -t
        if tau >= tau_s - _TAU_TOL * (1.0 + tau_s):
            theta = _TWO_PI + math.atan(t)
            sw = State(l * h + 0.5 * t * t, l * t / h + t)
            out.append(
                _Candidate(max(tau, tau_s), -1.0, CircleTheta(theta), sw,
                           tau > tau_s + _TIE_TOL * (1.0 + tau), "far_lower")
            )
    return out


def _near_circle(l: float, q: float, q_max: float, x2: float, upper: bool) -> _Candidate | None:
    """Near-family candidate from a cos(theta) root, or None if infeasible."""
    if upper:
        if q > q_max + _Q_TOL or q < -1.0 - _Q_TOL:
            return None
        q = min(max(q, -1.0), q_max)
        theta = math.acos(q)
        stheta = math.sqrt(max(0.0, 1.0 - q * q))
        tau = x2 - l * stheta
        u = -1.0
    else:
        if q < -q_max - _Q_TOL or q > 1.0 + _Q_TOL:
            return None
        q = min(max(q, -q_max), 1.0)
        theta = _TWO_PI - math.acos(q)
        stheta = -math.sqrt(max(0.0, 1.0 - q * q))
        tau = l * stheta - x2
        u = 1.0
    if tau < -_TAU_TOL:
        return None
    tau = max(tau, 0.0)
    switching = q < 0.0 if upper else q > 0.0
    if switching:
        tau_s = math.sqrt(max(0.0, 1.0 - q * q)) / abs(q)
        if tau > tau_s + _TAU_TOL * (1.0 + tau_s):
            return None
    theta = theta % _TWO_PI
    name = "near_upper" if upper else "near_lower"
    return _Candidate(tau, u, CircleTheta(theta), None, False, name)


# ── Square family inversion ────────────────────────────────────────────────────


def _clamp_side(side: str, s: float) -> float:
    if side == "AB":
        return min(max(s, _PARAM_EPS), 1.0)
    if side == "BC":
        return min(max(s, -1.0 + _PARAM_EPS), 1.0)
    if side == "CD":
        return min(max(s, -1.0), -_PARAM_EPS)
    return min(max(s, -1.0), 1.0 - _PARAM_EPS)  # AD


def _square_candidates(s: State) -> list[_Candidate]:
    x1, x2 = s.x1, s.x2
    out: list[_Candidate] = []

    # Side families: one constant-control leg into a side.
    rad = x2 * x2 - 2.0 * x1 - 2.0
    if rad >= 0.0:
        p = math.sqrt(rad)  # arrival x2 on the left side
        tau = p - x2
        if p <= 1.0 + _PARAM_TOL and tau >= -_TAU_TOL:
            out.append(_Candidate(max(tau, 0.0), 1.0,
                                  SquareSide("AB", _clamp_side("AB", p)), None, False, "AB"))
    p = x1 - 0.5 * (x2 * x2 - 1.0)  # arrival x1 on the bottom side
    if -1.0 - _PARAM_TOL <= p <= 1.0 + _PARAM_TOL:
        tau = -1.0 - x2
        if tau >= -_TAU_TOL:
            out.append(_Candidate(max(tau, 0.0), 1.0,
                                  SquareSide("BC", _clamp_side("BC", p)), None, False, "BC"))
    rad = 2.0 * x1 + x2 * x2 - 2.0
    if rad >= 0.0:
        p = -math.sqrt(rad)  # arrival x2 on the right side
        tau = x2 - p
        if p >= -1.0 - _PARAM_TOL and tau >= -_TAU_TOL:
            out.append(_Candidate(max(tau, 0.0), -1.0,
                                  SquareSide("CD", _clamp_side("CD", p)), None, False, "CD"))
    p = x1 + 0.5 * (x2 * x2 - 1.0)  # arrival x1 on the top side
    if -1.0 - _PARAM_TOL <= p <= 1.0 + _PARAM_TOL:
        tau = x2 - 1.0
        if tau >= -_TAU_TOL:
            out.append(_Candidate(max(tau, 0.0), -1.0,
                                  SquareSide("AD", _clamp_side("AD", p)), None, False, "AD"))

    # Riding a switching curve into a corner (the pre-switch corner arcs).
    # The band is absolute: the constant-control flow preserves the vertical
    # offset to the curve exactly, so a state captured within the band stays
    # inside it for the whole ride and the closed loop cannot chatter.
    if x2 >= 1.0 - _PARAM_TOL and abs(x1 + 0.5 * (x2 * x2 + 1.0)) <= _ONCURVE_TOL:
        theta1 = min(max(math.pi + math.atan(1.0 - x2), _HALF_PI), math.pi)
        out.append(_Candidate(max(x2 - 1.0, 0.0), -1.0,
                              SquareCorner("A", theta1), s, False, "A_near"))
    if x2 <= -1.0 + _PARAM_TOL and abs(x1 - 0.5 * (x2 * x2 + 1.0)) <= _ONCURVE_TOL:
        theta2 = min(max(_TWO_PI + math.atan(x2 + 1.0), 1.5 * math.pi), _TWO_PI - _PARAM_EPS)
        out.append(_Candidate(max(-1.0 - x2, 0.0), 1.0,
                              SquareCorner("C", theta2), s, False, "C_near"))

    # Corner families beyond the switch: approach, cross the switching curve,
    # ride it into the corner.
    disc = 0.5 * (x2 * x2 - 2.0 * x1 - 1.0)
    if disc >= 0.0:
        t = 1.0 - math.sqrt(disc)
        if t <= _PARAM_TOL:
            t = min(t, 0.0)
            tau = 1.0 - 2.0 * t - x2
            tau_s = -t
            if tau >= tau_s - _TAU_TOL * (1.0 + tau_s):
                theta1 = min(max(math.pi + math.atan(t), _HALF_PI), math.pi)
                x2_sw = 1.0 - t
                sw = State(-0.5 * (x2_sw * x2_sw + 1.0), x2_sw)
                out.append(_Candidate(max(tau, tau_s), 1.0, SquareCorner("A", theta1), sw,
                                      tau > tau_s + _TIE_TOL * (1.0 + tau), "A_far"))
    disc = 0.5 * (x2 * x2 + 2.0 * x1 - 1.0)
    if disc >= 0.0:
        t = 1.0 - math.sqrt(disc)
        if t <= _PARAM_TOL:
            t = min(t, 0.0)
            tau = x2 + 1.0 - 2.0 * t
            tau_s = -t
            if tau >= tau_s - _TAU_TOL * (1.0 + tau_s):
                theta2 = min(max(_TWO_PI + math.atan(t), 1.5 * math.pi), _TWO_PI - _PARAM_EPS)
                x2_sw = -1.0 + t
                sw = State(0.5 * (x2_sw * x2_sw + 1.0), x2_sw)
                out.append(_Candidate(max(tau, tau_s), -1.0, SquareCorner("C", theta2), sw,
                                      tau > tau_s + _TIE_TOL * (1.0 + tau), "C_far"))
    return out


# ── Value-jump loci ────────────────────────────────────────────────────────────


def _locus_halves(m: Manifold, params: Params) -> list[tuple[float, float, float, float]]:
    """The two jump half-parabolas as (sigma, c, w_edge, direction).

    Each locus is {x1 = sigma*w^2 + c : direction*(w - w_edge) >= 0} with w
    the x2 coordinate and sigma = -+1/2.
    """
    if isinstance(m, Circle):
        l = m.l
        if l / params.alpha <= 1.0:
            c_star, w_edge = l, 0.0
        else:
            c_star = 0.5 * (l * l + 1.0)
            w_edge = math.sqrt(l * l - 1.0)
        return [(-0.5, c_star, w_edge, 1.0), (0.5, -c_star, -w_edge, -1.0)]
    return [(-0.5, 1.5, 1.0, 1.0), (0.5, -1.5, -1.0, -1.0)]


def _cubic_real_roots(a: float, b: float, c: float, d: float) -> list[float]:
    """Real roots of a*t^3 + b*t^2 + c*t + d with a != 0."""
    b, c, d = b / a, c / a, d / a
    shift = b / 3.0
    p = c - b * b / 3.0
    q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d
    disc = 0.25 * q * q + p * p * p / 27.0
    if disc > 0.0:
        root = math.sqrt(disc)
        u = _cbrt(-0.5 * q + root)
        v = _cbrt(-0.5 * q - root)
        return [u + v - shift]
    if p == 0.0 and q == 0.0:
        return [-shift]
    r = math.sqrt(max(0.0, -p * p * p / 27.0))
    phi = math.acos(min(1.0, max(-1.0, -0.5 * q / r))) if r > 0.0 else 0.0
    m2 = 2.0 * math.sqrt(max(0.0, -p / 3.0))
    return [m2 * math.cos((phi + 2.0 * math.pi * k) / 3.0) - shift for k in range(3)]


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _parabola_distance(x1: float, x2: float, sigma: float, c: float,
                       w_edge: float, direction: float) -> float:
    """Distance from (x1, x2) to {x1 = sigma*w^2 + c : direction*(w-w_edge) >= 0}.

    sigma here is the half-coefficient (+-0.5).  The squared distance is
    quartic in w; its stationary points solve a cubic.
    """
    # d/dw [(w - x2)^2 + (sigma*w^2 + c - x1)^2] / 2 =
    #   2*sigma^2*w^3 + (1 + 2*sigma*(c - x1))*w - x2
    roots = _cubic_real_roots(2.0 * sigma * sigma, 0.0, 1.0 + 2.0 * sigma * (c - x1), -x2)
    cands = [w_edge]
    for w in roots:
        if direction * (w - w_edge) >= 0.0:
            cands.append(w)
    best = math.inf
    for w in cands:
        dx = sigma * w * w + c - x1
        dw = w - x2
        best = min(best, dw * dw + dx * dx)
    return math.sqrt(best)


def locus_distance(m: Manifold, params: Params, s: State) -> float:
    """Distance from s to the nearest value-jump locus."""
    best = math.inf
    for sigma, c, w_edge, direction in _locus_halves(m, params):
        best = min(best, _parabola_distance(s.x1, s.x2, sigma, c, w_edge, direction))
    return best


def discontinuity_loci(
    m: Manifold,
    params: Params,
    span: float = 5.0,
    n_levels: int = 33,
    scan_step: float = 0.05,
) -> list[list[State]]:
    """Sampled loci where the value function jumps or loses smoothness.

    For each horizontal level x2, the value function is scanned along x1;
    cells whose increment spikes above the locally estimated Lipschitz trend
    are bisected to 1e-8 and kept when the bracket still carries a jump or
    cusp.  Returns [locus_a, locus_b] with locus_a holding the positive-x2
    samples; the two are centrally symmetric images of each other.
    """
    upper: list[State] = []
    lower: list[State] = []
    for i in range(n_levels):
        x2 = -span + i * (2.0 * span) / (n_levels - 1)
        if abs(x2) < 1e-9:
            continue
        for x1_jump in _scan_level(m, params, x2, span, scan_step):
            (upper if x2 > 0.0 else lower).append(State(x1_jump, x2))
    upper.sort(key=lambda p: p.x2)
    lower.sort(key=lambda p: p.x2)
    return [upper, lower]


def _scan_level(m: Manifold, params: Params, x2: float, span: float, h: float) -> list[float]:
    # Candidate cells must beat both a unit-Lipschitz floor (10*h) and 2.5x
    # the neighboring increments.  The value function approaches each locus
    # with a root-type cusp, so neighbor increments grow like fractional
    # powers of the distance but their cell-to-cell ratio stays below 2,
    # while a jump (or the cusp apex itself) dominates its neighbors.
    # Bisection then checks the spike survives at bracket width 1e-8, which
    # keeps jumps and unbounded-slope cusps but drops merely steep cells.
    n = int(round(2.0 * span / h))
    segments: list[tuple[list[float], list[float]]] = [([], [])]
    for j in range(n + 1):
        x1 = -span + j * h
        st = State(x1, x2)
        if contains(m, st):
            if segments[-1][0]:
                segments.append(([], []))
            continue
        segments[-1][0].append(x1)
        segments[-1][1].append(value(m, params, st))
    jumps: list[float] = []
    for xs, vs in segments:
        if len(xs) < 4:
            continue
        diffs = [abs(vs[k + 1] - vs[k]) for k in range(len(vs) - 1)]
        for k in range(1, len(diffs) - 1):
            neighbor = max(diffs[k - 1], diffs[k + 1], 1e-12)
            if diffs[k] > 10.0 * h and diffs[k] > 2.5 * neighbor:
                loc = _bisect_jump(m, params, x2, xs[k], xs[k + 1])
                if loc is not None:
                    jumps.append(loc)
    return jumps


# Confirmation floor for the value variation across a 1e-8-wide bracket.  A
# genuine jump keeps its full gap; a root-type cusp still varies by a
# fractional power of the width (>= ~1e-4 for the cases here); a regular slope
# contributes only ~slope * 1e-8.
_SPIKE_FLOOR = 1e-5


def _bisect_jump(m: Manifold, params: Params, x2: float, lo: float, hi: float) -> float | None:
    v_lo = value(m, params, State(lo, x2))
    v_hi = value(m, params, State(hi, x2))
    while hi - lo > 1e-8:
        mid = 0.5 * (lo + hi)
        v_mid = value(m, params, State(mid, x2))
        if abs(v_mid - v_lo) >= abs(v_hi - v_mid):
            hi, v_hi = mid, v_mid
        else:
            lo, v_lo = mid, v_mid
    if abs(v_hi - v_lo) < _SPIKE_FLOOR:
        return None
    return 0.5 * (lo + hi)


# ── Feedback and value ─────────────────────────────────────────────────────────

_FAMILY_ORDER = {
    name: i
    for i, name in enumerate(
        ["near_upper", "near_lower", "AB", "BC", "CD", "AD",
         "A_near", "C_near", "far_upper", "far_lower", "A_far", "C_far"]
    )
}


def feedback(m: Manifold, params: Params, s: State) -> SynthesisResult:
    """Optimal feedback at s by characteristic inversion (alpha = 1 closed form).

    Enumerates the admissible families, keeps feasible inversions, and returns
    the minimal-time one.  On a switching curve the reported control matches
    the post-switch arc so the closed loop does not chatter.  For alpha != 1
    the answer comes from the numeric minimum-time search instead.
    """
    _reject_interior(m, s)
    if params.alpha != 1.0:
        return _numeric_feedback(m, params, s)
    if isinstance(m, Circle):
        cands = _circle_candidates(params, s)
    else:
        cands = _square_candidates(s)
    if not cands:
        raise DomainError(f"no admissible characteristic reaches {s!r}")
    cands.sort(key=lambda c: (c.tau, _FAMILY_ORDER[c.family]))
    best = cands[0]
    ties = [c for c in cands if c.tau <= best.tau + _TIE_TOL * (1.0 + best.tau)]
    chosen = next((c for c in ties if not c.switch_ahead), ties[0])
    switch_state = chosen.switch_state
    if switch_state is None:
        for c in ties:
            if c.switch_state is not None:
                switch_state = c.switch_state
                break
    flag = locus_distance(m, params, s) <= _LOCUS_FLAG_TOL
    return SynthesisResult(chosen.u, chosen.tau, chosen.terminal, switch_state, flag)


def value(m: Manifold, params: Params, s: State) -> float:
    """Minimum time-to-go from s to the usable part."""
    return feedback(m, params, s).time_to_go


def _reject_interior(m: Manifold, s: State) -> None:
    if isinstance(m, Circle):
        if math.hypot(s.x1, s.x2) < m.l - _INTERIOR_TOL:
            raise InsideTarget(f"{s!r} is inside the target: already terminated")
    elif max(abs(s.x1), abs(s.x2)) < 1.0 - _INTERIOR_TOL:
        raise InsideTarget(f"{s!r} is inside the target: already terminated")


def _numeric_feedback(m: Manifold, params: Params, s: State) -> SynthesisResult:
    # Lazy import: the oracle also serves as the general-alpha fallback law.
    from . import oracle as _oracle
    from . import simulator as _simulator

    pol = _oracle.oracle_policy(m, params, s)
    u_now = pol.u0 if pol.t_switch > 1e-9 else -pol.u0
    switch_state = None
    if 1e-9 < pol.t_switch < pol.t_final:
        a = params.alpha * pol.u0
        switch_state = State(
            s.x1 + s.x2 * pol.t_switch + 0.5 * a * pol.t_switch * pol.t_switch,
            s.x2 + a * pol.t_switch,
        )
    end = _oracle.policy_endpoint(s, pol, params.alpha)
    terminal = _simulator.boundary_point_of_state(m, end)
    return SynthesisResult(u_now, pol.t_final, terminal, switch_state, False)


# ── Classical point-target reference law ───────────────────────────────────────


def point_target_reference(s: State) -> float:
    """Minimum-time law to the origin: brake onto x1 = -x2*|x2|/2 and ride it.

    This is the limit of the circle synthesis as l shrinks to zero.
    """
    curve = -0.5 * s.x2 * abs(s.x2)
    scale = 1.0 + abs(curve)
    if s.x1 == 0.0 and s.x2 == 0.0:
        raise DomainError("state is at the origin: already terminated")
    if abs(s.x1 - curve) <= 1e-12 * scale:
        return -1.0 if s.x2 > 0.0 else 1.0
    return -1.0 if s.x1 > curve else 1.0
