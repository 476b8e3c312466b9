"""Closed-form diversity-multiplexing tradeoff curves

d_{m,n}(r) is the point-to-point tradeoff of an m x n Rayleigh MIMO link: the
piecewise-linear curve through (k, (m - k)(n - k)), k = 0..min(m, n).
Everything else here (outer bound, DF region, CF tradeoff) is assembled from it.
"""

from __future__ import annotations
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from .constants import THRESHOLD_TOL, TOL
from .errors import DomainError

if TYPE_CHECKING:
    from .channel import AntennaConfig

logger = logging.getLogger(__name__)


def _check_dims(m: int, n: int):
    for name, val in (("m", m), ("n", n)):
        if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < 1:
            raise DomainError(f"{name} must be a positive integer, got {val!r}")


def _check_finite_nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be a finite nonnegative number, got {value}")
    return value


@dataclass(frozen=True)
class DmtCurve:
    """The piecewise-linear tradeoff curve of an m x n channel"""

    m: int
    n: int

    def __post_init__(self):
        _check_dims(self.m, self.n)

    @property
    def max_multiplexing(self) -> int:
        return min(self.m, self.n)

    @property
    def max_diversity(self) -> int:
        return self.m * self.n

    @property
    def vertices(self) -> list[tuple[float, float]]:
        return [
            (float(k), float((self.m - k) * (self.n - k)))
            for k in range(self.max_multiplexing + 1)
        ]

    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        k = np.arange(self.max_multiplexing + 1, dtype=float)
        return k, (self.m - k) * (self.n - k)

    def value(self, r: float) -> float:
        r = float(r)
        if not (-TOL <= r <= self.max_multiplexing + TOL):
            raise DomainError(
                f"r = {r} is outside [0, {self.max_multiplexing}] for the {self.m}x{self.n} curve"
            )
        rs, ds = self._arrays()
        return float(np.interp(min(max(r, 0.0), self.max_multiplexing), rs, ds))

    def inverse(self, d: float) -> float:
        d = float(d)
        if not (-TOL <= d <= self.max_diversity + TOL):
            raise DomainError(
                f"d = {d} is outside [0, {self.max_diversity}] for the {self.m}x{self.n} curve"
            )
        rs, ds = self._arrays()
        # np.interp needs increasing abscissae
        return float(np.interp(min(max(d, 0.0), self.max_diversity), ds[::-1], rs[::-1]))


def dmt_value(m: int, n: int, r: float) -> float:
    """d_{m,n}(r)"""
    return DmtCurve(m, n).value(r)


def dmt_inverse(m: int, n: int, d: float) -> float:
    """r_{m,n}(d), the multiplexing gain at which the m x n curve reaches d"""
    return DmtCurve(m, n).inverse(d)


def _value_or_zero(m: int, n: int, r: float) -> float:
    # rates beyond the curve's maximum multiplexing gain get no diversity
    curve = DmtCurve(m, n)
    if r > curve.max_multiplexing:
        return 0.0
    return curve.value(r)


def _inverse_or_zero(m: int, n: int, d: float) -> float:
    # diversity demands beyond the curve's maximum force zero rate
    curve = DmtCurve(m, n)
    if d > curve.max_diversity:
        return 0.0
    return curve.inverse(d)


@dataclass(frozen=True)
class MultiplexingPair:
    r1: float
    r2: float

    def __post_init__(self):
        object.__setattr__(self, "r1", _check_finite_nonneg("r1", self.r1))
        object.__setattr__(self, "r2", _check_finite_nonneg("r2", self.r2))

    def check(self, config: AntennaConfig):
        """Raise DomainError unless each gain is supportable by its own links"""
        cap1 = min(config.m1, config.mr)
        cap2 = min(config.m2, config.mr)
        if self.r1 > cap1 + TOL:
            raise DomainError(f"r1 = {self.r1} exceeds min(m1, mr) = {cap1}")
        if self.r2 > cap2 + TOL:
            raise DomainError(f"r2 = {self.r2} exceeds min(m2, mr) = {cap2}")


@dataclass(frozen=True)
class DiversityPair:
    d1: float
    d2: float

    def __post_init__(self):
        object.__setattr__(self, "d1", _check_finite_nonneg("d1", self.d1))
        object.__setattr__(self, "d2", _check_finite_nonneg("d2", self.d2))


@dataclass(frozen=True)
class LinearConstraint:
    """a * r1 + b * r2 <= c"""

    a: int
    b: int
    c: float

    def __post_init__(self):
        if self.a not in (0, 1) or self.b not in (0, 1) or (self.a, self.b) == (0, 0):
            raise DomainError(f"unsupported constraint coefficients ({self.a}, {self.b})")
        object.__setattr__(self, "c", _check_finite_nonneg("c", self.c))

    def holds(self, r1: float, r2: float, tol: float = TOL) -> bool:
        return self.a * r1 + self.b * r2 <= self.c + tol


@dataclass(frozen=True)
class RateRegion:
    """A bounded polytope of multiplexing-gain pairs in the nonnegative quadrant"""

    constraints: tuple[LinearConstraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        cap1, cap2, _ = self._caps()
        if not (math.isfinite(cap1) and math.isfinite(cap2)):
            raise DomainError("a rate region must bound both r1 and r2")

    def _caps(self) -> tuple[float, float, float]:
        cap1 = cap2 = total = math.inf
        for con in self.constraints:
            if (con.a, con.b) == (1, 0):
                cap1 = min(cap1, con.c)
            elif (con.a, con.b) == (0, 1):
                cap2 = min(cap2, con.c)
            else:
                total = min(total, con.c)
        cap1 = min(cap1, total)
        cap2 = min(cap2, total)
        return cap1, cap2, total

    def contains(self, pair: MultiplexingPair, tol: float = TOL) -> bool:
        return all(con.holds(pair.r1, pair.r2, tol) for con in self.constraints)

    def symmetric_corner(self) -> float:
        """Largest r with (r, r) in the region"""
        cap1, cap2, total = self._caps()
        return min(cap1, cap2, total / 2)

    def vertices(self) -> list[tuple[float, float]]:
        """Polygon vertices counter-clockwise from the origin"""
        cap1, cap2, total = self._caps()
        pts = [(0.0, 0.0), (cap1, 0.0)]
        if cap1 + cap2 <= total + TOL:
            pts.append((cap1, cap2))
        else:
            pts.append((cap1, total - cap1))
            pts.append((total - cap2, cap2))
        pts.append((0.0, cap2))

        out: list[tuple[float, float]] = []
        for pt in pts:
            if out and abs(out[-1][0] - pt[0]) <= TOL and abs(out[-1][1] - pt[1]) <= TOL:
                continue
            out.append(pt)
        while len(out) > 1 and abs(out[-1][0]) <= TOL and abs(out[-1][1]) <= TOL:
            out.pop()
        return out


def outer_bound(config: AntennaConfig, r: MultiplexingPair) -> DiversityPair:
    """Cut-set bound on each user's diversity: d_i <= d_{M*,Mr}(r_i)"""
    r.check(config)
    return DiversityPair(
        _value_or_zero(config.m_star, config.mr, r.r1),
        _value_or_zero(config.m_star, config.mr, r.r2),
    )


def _check_common_diversity(config: AntennaConfig, d: float) -> float:
    d = float(d)
    dmax = config.m_star * config.mr
    if not (-TOL <= d <= dmax + TOL):
        raise DomainError(f"d = {d} is outside [0, {dmax}] for {config}")
    return min(max(d, 0.0), float(dmax))


def _df_caps(config: AntennaConfig, d: float) -> tuple[float, float]:
    single = dmt_inverse(config.m_star, config.mr, d)
    total = _inverse_or_zero(config.m1 + config.m2, config.mr, d)
    return single, total


def df_region(config: AntennaConfig, d: float) -> RateRegion:
    """Multiplexing gain pairs for which DF gives both users diversity d"""
    d = _check_common_diversity(config, d)
    single, total = _df_caps(config, d)
    return RateRegion(
        (
            LinearConstraint(1, 0, single),
            LinearConstraint(0, 1, single),
            LinearConstraint(1, 1, total),
        )
    )


def df_optimal(config: AntennaConfig, d: float) -> bool:
    """True when the DF region's sum constraint does not cut the optimal square"""
    d = _check_common_diversity(config, d)
    single, total = _df_caps(config, d)
    return single <= total / 2 + TOL


def _df_gap(config: AntennaConfig, d: float) -> float:
    single, total = _df_caps(config, d)
    return total / 2 - single


def df_threshold(config: AntennaConfig) -> float:
    """Smallest d* such that DF is optimal for every common diversity d >= d*"""
    dmax = float(config.m_star * config.mr)
    breaks = {0.0, dmax}
    for m, n in ((config.m_star, config.mr), (config.m1 + config.m2, config.mr)):
        breaks.update(d for _, d in DmtCurve(m, n).vertices if d <= dmax)
    points = sorted(breaks)

    # the gap is linear between breakpoints, so only the last failing piece matters
    last_bad: Optional[int] = None
    for idx, d in enumerate(points):
        if _df_gap(config, d) < -TOL:
            last_bad = idx
    if last_bad is None:
        return 0.0

    lo, hi = points[last_bad], points[last_bad + 1]
    while hi - lo > THRESHOLD_TOL:
        mid = 0.5 * (lo + hi)
        if _df_gap(config, mid) < -TOL:
            lo = mid
        else:
            hi = mid
    logger.debug("df threshold for %s bracketed in [%g, %g]", config, lo, hi)
    return hi


def df_symmetric_dmt(config: AntennaConfig, r: float) -> float:
    """Common diversity DF supports when both users run at multiplexing gain r"""
    r = _check_cf_rate(config, r)
    return min(
        dmt_value(config.m_star, config.mr, r),
        _value_or_zero(config.m1 + config.m2, config.mr, 2 * r),
    )


def _check_cf_rate(config: AntennaConfig, r: float) -> float:
    r = float(r)
    rmax = min(config.m_star, config.mr)
    if not (-TOL <= r <= rmax + TOL):
        raise DomainError(f"r = {r} is outside [0, {rmax}] for {config}")
    return r


def cf_dmt(config: AntennaConfig, r: float) -> float:
    """Per-user diversity achieved by CF relaying, independent of the other user's rate"""
    r = _check_cf_rate(config, r)
    return dmt_value(config.m_star, config.mr, r)
