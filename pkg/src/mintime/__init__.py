"""Minimum-time feedback synthesis for a double integrator driven to a
circular or square terminal set, cross-verified against a brute-force
minimum-time search."""

from .characteristics import (
    Characteristic,
    CharacteristicArc,
    Costate,
    build_characteristic,
    closed_form_state,
    costate_retro,
    forward_control,
    hamiltonian,
    numeric_retro,
    numeric_retro_dense,
    optimal_control,
    switch_tau,
    terminal_costate,
)
from .isochrone import Isochrone, isochrone_circle, isochrone_generic, isocost_point_circle
from .manifold import (
    BoundaryPoint,
    Circle,
    CircleTheta,
    Manifold,
    Normal,
    ParamInterval,
    RegionClass,
    Square,
    SquareCorner,
    SquareSide,
    boundary_state,
    bup_params,
    classify,
    contains,
    outward_normal,
    sample_up,
    signed_distance,
    up_intervals,
)
from .model import (
    Control,
    DomainError,
    HorizonExceeded,
    InsideTarget,
    Params,
    PhysicalParams,
    SingularInstant,
    State,
    dynamics,
    nondimensionalize,
    parse_scenario,
)
from .oracle import (
    GridReport,
    PolicyCandidate,
    acceptance_grid,
    oracle_grid_report,
    oracle_min_time,
    oracle_policy,
)
from .simulator import RolloutReport, Termination, Trajectory, simulate, verify_rollout
from .synthesis import (
    SwitchingCurve,
    SynthesisResult,
    TouchAndGoCurve,
    discontinuity_loci,
    feedback,
    locus_distance,
    point_target_reference,
    switching_curve_circle,
    switching_curve_square,
    touch_and_go_curves,
    value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
