from __future__ import annotations
import logging
from dataclasses import dataclass

import numpy as np

from .constants import EIGEN_FLOOR
from .errors import DomainError, InputError
from .exponents import ExponentVector
from .utils import db_to_linear, linear_to_db

logger = logging.getLogger(__name__)

_LN2 = np.log(2.0)


def _check_count(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InputError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise InputError(f"{name} must be at least 1, got {value}")
    return int(value)


@dataclass(frozen=True)
class AntennaConfig:
    """The (M1, Mr, M2) antenna triple of a system instance"""

    m1: int
    mr: int
    m2: int

    def __post_init__(self):
        for name in ("m1", "mr", "m2"):
            object.__setattr__(self, name, _check_count(name, getattr(self, name)))

    @property
    def m_star(self) -> int:
        return min(self.m1, self.m2)

    def shapes(self) -> tuple[tuple[int, int], ...]:
        """(rows, cols) of h1, h2, h3, h4 in sampling order"""
        return (
            (self.mr, self.m1),
            (self.mr, self.m2),
            (self.m1, self.mr),
            (self.m2, self.mr),
        )

    def __str__(self):
        return f"({self.m1},{self.mr},{self.m2})"


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """A rows x cols complex channel gain matrix"""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.size == 0:
            raise InputError(f"a channel matrix must be 2-D and non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("channel matrix has non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of the four channel matrices

    h1: relay <- user 1 (mr x m1)
    h2: relay <- user 2 (mr x m2)
    h3: user 1 <- relay (m1 x mr)
    h4: user 2 <- relay (m2 x mr)
    """

    h1: ChannelMatrix
    h2: ChannelMatrix
    h3: ChannelMatrix
    h4: ChannelMatrix

    def check(self, config: AntennaConfig):
        """Raise InputError unless the dimensions match the config"""
        mats = (self.h1, self.h2, self.h3, self.h4)
        for idx, (mat, shape) in enumerate(zip(mats, config.shapes()), start=1):
            if (mat.rows, mat.cols) != shape:
                raise InputError(
                    f"h{idx} is {mat.rows}x{mat.cols}, expected {shape[0]}x{shape[1]} for {config}"
                )


@dataclass(frozen=True, eq=False)
class RealizationBatch:
    """A stack of n realizations, each matrix stored as an (n, rows, cols) array"""

    h1: np.ndarray
    h2: np.ndarray
    h3: np.ndarray
    h4: np.ndarray

    def __len__(self) -> int:
        return self.h1.shape[0]

    def realization(self, index: int) -> ChannelRealization:
        return ChannelRealization(
            ChannelMatrix(self.h1[index]),
            ChannelMatrix(self.h2[index]),
            ChannelMatrix(self.h3[index]),
            ChannelMatrix(self.h4[index]),
        )

    @classmethod
    def from_realization(cls, real: ChannelRealization) -> RealizationBatch:
        return cls(
            real.h1.entries[np.newaxis],
            real.h2.entries[np.newaxis],
            real.h3.entries[np.newaxis],
            real.h4.entries[np.newaxis],
        )


@dataclass(frozen=True)
class SnrPoint:
    """A signal-to-noise ratio held both as a linear power ratio and in dB"""

    linear: float
    db: float

    def __post_init__(self):
        if not np.isfinite(self.linear) or self.linear <= 0:
            raise DomainError(f"snr must be a positive finite ratio, got {self.linear}")
        if not np.isclose(db_to_linear(self.db), self.linear, rtol=1e-12, atol=0.0):
            raise DomainError(f"snr {self.db} dB is inconsistent with linear {self.linear}")

    @classmethod
    def from_db(cls, db: float) -> SnrPoint:
        return cls(db_to_linear(db), float(db))

    @classmethod
    def from_linear(cls, linear: float) -> SnrPoint:
        if linear <= 0:
            raise DomainError(f"snr must be positive, got {linear}")
        return cls(float(linear), linear_to_db(linear))


def sample_batch(
    config: AntennaConfig, stream: np.random.Generator, count: int
) -> RealizationBatch:
    """Draw `count` independent realizations with i.i.d. CN(0, 1) entries

    Each realization consumes one row of standard normals laid out as
    h1, h2, h3, h4, each row-major, each entry real then imaginary. A batch of
    one therefore reproduces `sample_realization` from the same stream state.
    """
    shapes = config.shapes()
    per_real = sum(2 * rows * cols for rows, cols in shapes)
    draws = stream.standard_normal((count, per_real)) * np.sqrt(0.5)

    mats = []
    offset = 0
    for rows, cols in shapes:
        width = 2 * rows * cols
        block = draws[:, offset : offset + width].reshape(count, rows, cols, 2)
        mats.append(block[..., 0] + 1j * block[..., 1])
        offset += width
    return RealizationBatch(*mats)


def sample_realization(
    config: AntennaConfig, stream: np.random.Generator
) -> ChannelRealization:
    """Draw one realization of the four channel matrices"""
    return sample_batch(config, stream, 1).realization(0)


def gram_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of h h^H through the smaller Gram matrix

    Works on a single (rows, cols) matrix or an (..., rows, cols) stack.
    Returns min(rows, cols) eigenvalues per matrix in ascending order, clipped at 0.
    """
    h = np.asarray(h, dtype=complex)
    hh = np.conj(np.swapaxes(h, -1, -2))
    if h.shape[-2] <= h.shape[-1]:
        gram = h @ hh
    else:
        gram = hh @ h
    return np.clip(np.linalg.eigvalsh(gram), 0.0, None)


def _log2_det(eigs: np.ndarray, scale: float) -> np.ndarray:
    # sum_j log2(1 + scale * lambda_j)
    return np.sum(np.log1p(scale * eigs), axis=-1) / _LN2


def _check_tx(m_tx) -> int:
    return _check_count("m_tx", m_tx)


def batch_capacity(h: np.ndarray, m_tx: int, snr: SnrPoint) -> np.ndarray:
    """log2 det(I + snr/m_tx h h^H) for every matrix of an (n, rows, cols) stack"""
    scale = snr.linear / _check_tx(m_tx)
    return _log2_det(gram_eigenvalues(h), scale)


def batch_half_power_capacity(h: np.ndarray, m_tx: int, snr: SnrPoint) -> np.ndarray:
    """log2 det(I + snr/(2 m_tx) h h^H) for every matrix of a stack"""
    scale = snr.linear / (2 * _check_tx(m_tx))
    return _log2_det(gram_eigenvalues(h), scale)


def capacity(h: ChannelMatrix, m_tx: int, snr: SnrPoint) -> float:
    """log2 det(I + (snr/m_tx) h h^H) in bits per channel use"""
    return float(batch_capacity(h.entries, m_tx, snr))


def half_power_capacity(h: ChannelMatrix, m_tx: int, snr: SnrPoint) -> float:
    """The capacity expression with the transmit power halved"""
    return float(batch_half_power_capacity(h.entries, m_tx, snr))


def batch_mac_sum_capacity(
    h1: np.ndarray, m1: int, h2: np.ndarray, m2: int, snr: SnrPoint
) -> np.ndarray:
    """log2 det(I + snr/m1 h1 h1^H + snr/m2 h2 h2^H) for stacks sharing a receiver"""
    stacked = np.concatenate(
        [
            np.asarray(h1, dtype=complex) / np.sqrt(_check_tx(m1)),
            np.asarray(h2, dtype=complex) / np.sqrt(_check_tx(m2)),
        ],
        axis=-1,
    )
    return _log2_det(gram_eigenvalues(stacked), snr.linear)


def mac_sum_capacity(
    h1: ChannelMatrix, m1: int, h2: ChannelMatrix, m2: int, snr: SnrPoint
) -> float:
    """Sum capacity of the two-user multiple access channel into the relay"""
    if h1.rows != h2.rows:
        raise InputError("both users must transmit into the same relay array")
    return float(batch_mac_sum_capacity(h1.entries, m1, h2.entries, m2, snr))


def eigen_exponents(h: ChannelMatrix, snr: SnrPoint) -> ExponentVector:
    """The exponents alpha_j with lambda_j = snr^-alpha_j for the eigenvalues of h h^H

    Zero eigenvalues (below the underflow floor) map to +inf.
    Stored nonincreasing in alpha, ie in ascending order of lambda.
    """
    if snr.linear <= 1.0:
        raise DomainError("eigenvalue exponents need snr > 1")
    eigs = gram_eigenvalues(h.entries)
    log_snr = np.log(snr.linear)
    alphas = []
    for lam in eigs:
        if lam < EIGEN_FLOOR:
            alphas.append(np.inf)
        else:
            alphas.append(float(-np.log(lam) / log_snr))
    return ExponentVector(tuple(alphas), h.rows, h.cols)
