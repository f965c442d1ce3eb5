"""Problem constants, double-integrator dynamics, and non-dimensional scaling.

A point mass on a line is driven by a bounded force. After scaling position
by the tolerance length L, velocity by the tolerance velocity V, and time by
L/V, the plant is the double integrator

    dx1/dt = x2,        dx2/dt = alpha * u,        -1 <= u <= 1,

with a single dimensionless authority parameter

    alpha = L * F_max / (m * V**2).

The terminal-set weight beta trades terminal position error against terminal
velocity error; it is pinned to 1 here (circular target in the scaled phase
plane) because every closed form downstream assumes it.  Constructing Params
with any other beta is rejected rather than silently producing a wrong
synthesis.

All types are immutable values and all operations are pure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


# ── Errors ────────────────────────────────────────────────────────────────────


class DomainError(ValueError):
    """Input outside an operation's documented domain."""


class SingularInstant(DomainError):
    """Control sign queried at an instant where lambda2 = 0.

    The sign rule u* = -sign(lambda2) is undefined there; callers resolve the
    control from the interior of the surrounding arc.
    """


class InsideTarget(DomainError):
    """State strictly inside the target set: already terminated."""


class HorizonExceeded(DomainError):
    """No candidate policy reaches the target within the search horizon."""


# ── Domain types ───────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional plant constants.

    mass [kg], f_max [N], and the tolerance-box scales length [m] and
    velocity [m/s].  All strictly positive.
    """

    mass: float
    f_max: float
    length: float
    velocity: float

    def __post_init__(self) -> None:
        for name in ("mass", "f_max", "length", "velocity"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class Params:
    """Non-dimensional problem constants.

    alpha: control authority; l: radius of the circular target; beta: fixed
    at 1 (see module docstring).
    """

    alpha: float = 1.0
    l: float = 1.0
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise DomainError(f"alpha must be finite and > 0, got {self.alpha!r}")
        if not (math.isfinite(self.l) and self.l > 0.0):
            raise DomainError(f"l must be finite and > 0, got {self.l!r}")
        if self.beta != 1.0:
            raise DomainError(
                f"beta is fixed at 1 (got {self.beta!r}); the closed-form "
                "synthesis is only valid for the circular scaled target"
            )


@dataclass(frozen=True)
class State:
    """Point (x1, x2) of the phase plane: scaled position and velocity."""

    x1: float
    x2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise DomainError(f"state must be finite, got ({self.x1!r}, {self.x2!r})")

    def __neg__(self) -> "State":
        return State(-self.x1, -self.x2)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x1, self.x2)


# Control values are plain floats in [-1, 1]; state derivatives are plain
# (dx1/dt, dx2/dt) pairs.
Control = float
StateDerivative = tuple[float, float]


# ── Operations ─────────────────────────────────────────────────────────────────


def nondimensionalize(p: PhysicalParams, l: float = 1.0) -> Params:
    """Map dimensional constants to Params via alpha = L*F_max/(m*V^2).

    The tolerance radius l is a modelling choice, not derivable from the
    plant, so the caller supplies it (default 1).
    """
    alpha = p.length * p.f_max / (p.mass * p.velocity * p.velocity)
    return Params(alpha=alpha, l=l, beta=1.0)


def validate_control(u: float) -> float:
    if not (math.isfinite(u) and -1.0 <= u <= 1.0):
        raise DomainError(f"control must satisfy -1 <= u <= 1, got {u!r}")
    return u


def dynamics(s: State, u: Control, params: Params) -> StateDerivative:
    """Right-hand side of the plant: (dx1/dt, dx2/dt) = (x2, alpha*u)."""
    validate_control(u)
    return (s.x2, params.alpha * u)


# ── Scenario files ─────────────────────────────────────────────────────────────

_SCENARIO_KEYS = {"alpha", "l", "target"}


def parse_scenario(text: str) -> tuple[Params, str]:
    """Parse a JSON scenario {"alpha": num, "l": num, "target": "circle"|"square"}.

    Unknown keys are rejected.  l defaults to 1.0; the square target ignores
    it.  Returns (Params, target_kind).
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DomainError("scenario must be a JSON object")
    unknown = set(raw) - _SCENARIO_KEYS
    if unknown:
        raise DomainError(f"unknown scenario keys: {sorted(unknown)}")
    target = raw.get("target")
    if target not in ("circle", "square"):
        raise DomainError(f'scenario "target" must be "circle" or "square", got {target!r}')
    alpha = raw.get("alpha", 1.0)
    l = raw.get("l", 1.0)
    if not isinstance(alpha, (int, float)) or isinstance(alpha, bool):
        raise DomainError(f'scenario "alpha" must be a number, got {alpha!r}')
    if not isinstance(l, (int, float)) or isinstance(l, bool):
        raise DomainError(f'scenario "l" must be a number, got {l!r}')
    return Params(alpha=float(alpha), l=float(l)), target
