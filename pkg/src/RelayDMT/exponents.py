"""Tradeoff curves from the eigenvalue-exponent optimization

At high SNR the eigenvalues of a Rayleigh Gram matrix behave like
lambda_j = SNR^-alpha_j, and the probability of an exponent configuration
decays as SNR^-E(alpha). A protocol whose outage event reduces to a condition
on S(alpha) = sum_j (1 - alpha_j)^+ per link has diversity

    d = inf { sum_links E(alpha_link) : constraint(S_1, S_2, ...) holds }

`minimize_exponent` evaluates this infimum on a grid, optionally polishing the
best grid point with a coordinate search.
"""

from __future__ import annotations
import functools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Callable, Sequence, Union

import numpy as np

from .constants import DEFAULT_RESOLUTION, REFINE_TOL, TOL
from .errors import DomainError
from .tradeoff import dmt_value
from .utils import harmonic_combination

if TYPE_CHECKING:
    from .channel import AntennaConfig

logger = logging.getLogger(__name__)

# Receives one S-value array per shape (mutually broadcastable) and returns a
# boolean array, True where the configuration is in outage. Feasibility must be
# nonincreasing in every S.
OutageConstraint = Callable[..., np.ndarray]


class SearchMethod(str, Enum):
    GRID = "grid"
    GRID_REFINE = "grid+refine"


@dataclass(frozen=True)
class ExponentVector:
    """Eigenvalue decay exponents of an m x n channel, stored nonincreasing"""

    alphas: tuple[float, ...]
    m: int
    n: int

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        if len(alphas) != min(self.m, self.n):
            raise DomainError(
                f"a {self.m}x{self.n} channel has {min(self.m, self.n)} exponents, got {len(alphas)}"
            )
        if any(math.isnan(a) for a in alphas):
            raise DomainError("exponents must not be NaN")
        if any(a < b for a, b in zip(alphas, alphas[1:])):
            raise DomainError(f"exponents must be nonincreasing, got {alphas}")
        object.__setattr__(self, "alphas", alphas)

    @property
    def is_admissible(self) -> bool:
        """All exponents nonnegative, ie inside the optimizer's domain"""
        return all(a >= 0 for a in self.alphas)


def _weights(m: int, n: int) -> np.ndarray:
    # smallest weight pairs with the largest alpha
    k = min(m, n)
    j = np.arange(1, k + 1)
    return (2 * j - 1 + abs(m - n)).astype(float)


def s_value(alpha: ExponentVector) -> float:
    """S(alpha) = sum_j (1 - alpha_j)^+"""
    return float(sum(max(0.0, 1.0 - a) for a in alpha.alphas))


def exponent_weight(alpha: ExponentVector) -> float:
    """Probability exponent sum_j (2j - 1 + |m - n|) alpha_j of a configuration"""
    return float(np.dot(_weights(alpha.m, alpha.n), np.asarray(alpha.alphas)))


@dataclass(frozen=True)
class _Frontier:
    """Cheapest grid configuration of one shape for every reachable S level"""

    s_levels: np.ndarray
    costs: np.ndarray
    layers: tuple[np.ndarray, ...]
    steps: int

    def alphas(self, level: int) -> np.ndarray:
        """Backtrack the exponent vector (nonincreasing) behind one S level"""
        units_left = level
        picks = []
        nxt = 0
        for layer in reversed(self.layers):
            row = layer[units_left, nxt:]
            pick = nxt + int(np.argmin(row))
            picks.append(pick)
            units_left -= pick
            nxt = pick
        return np.array(picks[::-1], dtype=float) / self.steps


@functools.lru_cache(maxsize=64)
def _frontier(m: int, n: int, steps: int) -> _Frontier:
    """Exact grid minimum of the exponent weight for each total of alpha

    alpha_j ranges over {0, 1/steps, ..., 1} with alpha nonincreasing. The DP
    state is (units of alpha used so far, value of the current alpha_j).
    """
    weights = _weights(m, n)
    k = len(weights)
    vals = np.arange(steps + 1)

    layer = np.full((steps + 1, steps + 1), np.inf)
    layer[vals, vals] = weights[0] * vals / steps
    layers = [layer]
    for j in range(1, k):
        prev = layers[-1]
        # best over predecessors with alpha_{j-1} >= alpha_j
        suffix = np.minimum.accumulate(prev[:, ::-1], axis=1)[:, ::-1]
        nxt = np.full((prev.shape[0] + steps, steps + 1), np.inf)
        for v in vals:
            nxt[v : v + prev.shape[0], v] = suffix[:, v] + weights[j] * v / steps
        layers.append(nxt)

    costs = layers[-1].min(axis=1)
    units = np.arange(costs.shape[0])
    s_levels = (k * steps - units) / steps
    for arr in layers:
        arr.setflags(write=False)
    return _Frontier(s_levels, costs, tuple(layers), steps)


def _steps_for(resolution: float) -> int:
    if not (0 < resolution <= 1):
        raise DomainError(f"grid resolution must be in (0, 1], got {resolution}")
    return max(1, int(round(1.0 / resolution)))


def _s_of(alphas: np.ndarray) -> float:
    return float(np.sum(np.maximum(0.0, 1.0 - alphas)))


def _refine(
    shapes: Sequence[tuple[int, int]],
    alphas: list[np.ndarray],
    constraint: OutageConstraint,
    step: float,
    tol: float = REFINE_TOL,
) -> float:
    """Coordinate search from a feasible grid point

    Moves lower one exponent, alone or while raising another by the same amount.
    A move is kept only when it stays feasible and strictly lowers the cost.
    """
    weights = [_weights(m, n) for m, n in shapes]
    bounds = np.cumsum([0] + [len(a) for a in alphas])
    x = np.concatenate(alphas)

    def split(vec: np.ndarray) -> list[np.ndarray]:
        return [np.sort(vec[bounds[i] : bounds[i + 1]])[::-1] for i in range(len(shapes))]

    def cost(vec: np.ndarray) -> float:
        return float(sum(np.dot(w, a) for w, a in zip(weights, split(vec))))

    def feasible(vec: np.ndarray) -> bool:
        svals = [np.asarray(_s_of(a)) for a in split(vec)]
        return bool(constraint(*svals))

    best = cost(x)
    while step >= tol:
        improved = True
        while improved:
            improved = False
            for i in range(len(x)):
                partners = [None] + [j for j in range(len(x)) if j != i]
                for j in partners:
                    cand = x.copy()
                    cand[i] = max(0.0, cand[i] - step)
                    if j is not None:
                        cand[j] = min(1.0, cand[j] + step)
                    if cand[i] == x[i]:
                        continue
                    c = cost(cand)
                    if c < best - 1e-15 and feasible(cand):
                        x, best, improved = cand, c, True
        step /= 2
    logger.debug("refined exponent cost to %g", best)
    return best


def minimize_exponent(
    shapes: Sequence[tuple[int, int]],
    constraint: OutageConstraint,
    method: Union[SearchMethod, str] = SearchMethod.GRID_REFINE,
    resolution: float = DEFAULT_RESOLUTION,
) -> float:
    """Smallest total exponent weight over configurations satisfying `constraint`

    Every exponent is searched over [0, 1]: raising one past 1 cannot lower its S
    any further and only adds weight. Returns +inf when no grid point is feasible.
    """
    method = SearchMethod(method)
    if not shapes:
        raise DomainError("at least one channel shape is required")
    steps = _steps_for(resolution)
    fronts = [_frontier(int(m), int(n), steps) for m, n in shapes]

    # outer sum of per-shape costs over all S-level combinations
    grids = np.meshgrid(*[f.s_levels for f in fronts], indexing="ij", sparse=True)
    total = fronts[0].costs.reshape(grids[0].shape)
    for f, g in zip(fronts[1:], grids[1:]):
        total = total + f.costs.reshape(g.shape)
    mask = np.broadcast_to(np.asarray(constraint(*grids), dtype=bool), total.shape)
    logger.debug("exponent grid over %s has %d points", list(shapes), total.size)

    if not mask.any():
        return math.inf
    masked = np.where(mask, total, np.inf)
    flat = int(np.argmin(masked))
    best = float(masked.flat[flat])
    if method is SearchMethod.GRID or best == 0.0:
        return best

    levels = np.unravel_index(flat, total.shape)
    alphas = [f.alphas(int(lvl)) for f, lvl in zip(fronts, levels)]
    return min(best, _refine(shapes, alphas, constraint, step=resolution / 2))


def single_link_constraint(r: float) -> OutageConstraint:
    """Point-to-point outage: S <= r"""

    def constraint(s):
        return np.asarray(s) <= r + TOL

    return constraint


def harmonic_constraint(r: float) -> OutageConstraint:
    """Two-hop dynamic CF outage: S1 S4 / (S1 + S4) <= r"""

    def constraint(s1, s4):
        return harmonic_combination(s1, s4) <= r + TOL

    return constraint


def fixed_split_constraint(r: float, listen_fraction: float) -> OutageConstraint:
    """Two-hop outage with the relay listening for a fixed fraction of the block"""

    def constraint(s1, s4):
        listen = listen_fraction * np.asarray(s1)
        forward = (1.0 - listen_fraction) * np.asarray(s4)
        return np.minimum(listen, forward) <= r + TOL

    return constraint


def _check_rate(r: float) -> float:
    r = float(r)
    if not math.isfinite(r) or r < 0:
        raise DomainError(f"multiplexing gain must be finite and nonnegative, got {r}")
    return r


def _hops(config: AntennaConfig) -> list[tuple[int, int]]:
    return [(config.m1, config.mr), (config.mr, config.m2)]


def dcf_dmt(
    config: AntennaConfig,
    r: float,
    method: Union[SearchMethod, str] = SearchMethod.GRID_REFINE,
    resolution: float = DEFAULT_RESOLUTION,
) -> float:
    """Diversity of dynamic CF over the half-duplex two-hop channel at gain r"""
    r = _check_rate(r)
    s1 = min(config.m1, config.mr)
    s4 = min(config.mr, config.m2)
    if r >= float(harmonic_combination(s1, s4)):
        return 0.0
    return minimize_exponent(_hops(config), harmonic_constraint(r), method, resolution)


def fixed_listen_dmt(
    config: AntennaConfig,
    r: float,
    listen_fraction: float,
    method: Union[SearchMethod, str] = SearchMethod.GRID_REFINE,
    resolution: float = DEFAULT_RESOLUTION,
) -> float:
    """Diversity of CF with the relay listening for a fixed fraction of each block"""
    r = _check_rate(r)
    if not (0.0 < listen_fraction < 1.0):
        raise DomainError(f"listen fraction must be in (0, 1), got {listen_fraction}")
    return minimize_exponent(
        _hops(config), fixed_split_constraint(r, listen_fraction), method, resolution
    )


def cf_exponent(config: AntennaConfig, r1: float) -> float:
    """Full-duplex CF diversity as the weaker of the two hops"""
    return min(dmt_value(config.m1, config.mr, r1), dmt_value(config.mr, config.m2, r1))
