"""Two-dimensional chaotic maps used as deterministic signal sources.

Two maps are provided:

* the Hénon map in its canonical form ``x' = 1 - a x^2 + y``, ``y' = b x``
  (bounded attractor for ``a=1.4, b=0.3``);
* the logistic bimap on the unit square,
  ``x' = lambda_a (3y + 1) x (1 - x)``, ``y' = lambda_b (3x + 1) y (1 - y)``.

The scalar step functions are compiled with numba so the simulation kernel in
:mod:`chaotic_economy.engine` calls exactly the same arithmetic as the public
Python API.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numba

HENON_DIVERGENCE_BOUND = 10.0
HENON_X_SCALE = 1.5
HENON_Y_SCALE = 0.4
BIMAP_CHAOTIC_RANGE = (1.032, 1.0843)
DEFAULT_BURN_IN = 1000


class DivergenceError(ArithmeticError):
    """Raised when an orbit leaves the region where the map is meaningful."""


class MapKind(enum.Enum):
    HENON = "henon"
    BIMAP = "bimap"


@dataclass(frozen=True)
class HenonParams:
    a: float = 1.4
    b: float = 0.3

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"Hénon parameters must be finite, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class LogisticBimapParams:
    """Gains of the coupled logistic bimap.

    ``lambda_a`` drives the x-update, ``lambda_b`` the y-update. The map is
    symmetric about the diagonal when the two are equal.
    """

    lambda_a: float = 1.032
    lambda_b: float = 1.032

    def __post_init__(self):
        if not (math.isfinite(self.lambda_a) and math.isfinite(self.lambda_b)):
            raise ValueError("bimap gains must be finite")

    @property
    def in_chaotic_range(self) -> bool:
        lo, hi = BIMAP_CHAOTIC_RANGE
        return lo <= self.lambda_a <= hi and lo <= self.lambda_b <= hi


@dataclass(frozen=True)
class MapState:
    x: float
    y: float
    t: int = 0


DEFAULT_INITIAL_STATE = {
    MapKind.HENON: MapState(0.0, 0.0),
    # off the diagonal: with equal gains a diagonal start stays on y == x forever
    MapKind.BIMAP: MapState(0.3, 0.4),
}


def params_kind(params) -> MapKind:
    if isinstance(params, HenonParams):
        return MapKind.HENON
    if isinstance(params, LogisticBimapParams):
        return MapKind.BIMAP
    raise TypeError(f"unknown map parameters: {params!r}")


# --- compiled scalar cores -------------------------------------------------
# Return (x', y', ok). ok is False when the new point is outside the valid
# region; the caller decides how to report it.


@numba.njit(cache=True)
def henon_core(x, y, a, b):
    nx = 1.0 - a * x * x + y
    ny = b * x
    ok = abs(nx) <= HENON_DIVERGENCE_BOUND
    return nx, ny, ok


@numba.njit(cache=True)
def bimap_core(x, y, lambda_a, lambda_b):
    nx = lambda_a * (3.0 * y + 1.0) * x * (1.0 - x)
    ny = lambda_b * (3.0 * x + 1.0) * y * (1.0 - y)
    # written so that NaN fails the check
    ok = (nx >= 0.0) and (nx <= 1.0) and (ny >= 0.0) and (ny <= 1.0)
    return nx, ny, ok


@numba.njit(cache=True)
def henon_nu(x):
    v = abs(x) / HENON_X_SCALE
    return v if v < 1.0 else 1.0


@numba.njit(cache=True)
def henon_pair(x, y):
    u = abs(x) / HENON_X_SCALE
    w = abs(y) / HENON_Y_SCALE
    return (u if u < 1.0 else 1.0), (w if w < 1.0 else 1.0)


# --- public API ------------------------------------------------------------


def henon_step(state: MapState, params: HenonParams = HenonParams()) -> MapState:
    if not (math.isfinite(state.x) and math.isfinite(state.y)):
        raise ValueError(f"state must be finite, got {state}")
    nx, ny, ok = henon_core(state.x, state.y, params.a, params.b)
    if not ok:
        raise DivergenceError(
            f"Hénon orbit escaped at t={state.t + 1}: x={nx!r} (|x| > {HENON_DIVERGENCE_BOUND})"
        )
    return MapState(nx, ny, state.t + 1)


def bimap_step(state: MapState, params: LogisticBimapParams = LogisticBimapParams()) -> MapState:
    if not (0.0 <= state.x <= 1.0 and 0.0 <= state.y <= 1.0):
        raise ValueError(f"bimap state must lie in the unit square, got {state}")
    nx, ny, ok = bimap_core(state.x, state.y, params.lambda_a, params.lambda_b)
    if not ok:
        raise DivergenceError(f"bimap orbit left the unit square at t={state.t + 1}: ({nx!r}, {ny!r})")
    return MapState(nx, ny, state.t + 1)


def step(state: MapState, params) -> MapState:
    """Advance one iterate of whichever map ``params`` describes."""
    if params_kind(params) is MapKind.HENON:
        return henon_step(state, params)
    return bimap_step(state, params)


def normalize_nu(state: MapState, map_kind: MapKind) -> float:
    """Exchange fraction in [0, 1] read from the x coordinate.

    Hénon uses ``|x| / 1.5`` clamped to 1; the bimap uses ``x`` as is.
    """
    if MapKind(map_kind) is MapKind.HENON:
        return float(henon_nu(state.x))
    return min(max(state.x, 0.0), 1.0)


def normalize_pair(state: MapState, map_kind: MapKind) -> tuple[float, float]:
    """Both coordinates mapped to [0, 1] for agent selection.

    Hénon uses ``(|x| / 1.5, |y| / 0.4)``, each clamped to 1.
    """
    if MapKind(map_kind) is MapKind.HENON:
        u, w = henon_pair(state.x, state.y)
        return float(u), float(w)
    return min(max(state.x, 0.0), 1.0), min(max(state.y, 0.0), 1.0)


def burn_in(state: MapState, params, n: int = DEFAULT_BURN_IN) -> MapState:
    if n < 0:
        raise ValueError(f"burn-in length must be non-negative, got {n}")
    for _ in range(n):
        state = step(state, params)
    return state


def orbit(state: MapState, params, n: int) -> list[MapState]:
    """The next ``n`` iterates after ``state`` (excluding ``state`` itself)."""
    out = []
    for _ in range(n):
        state = step(state, params)
        out.append(state)
    return out
