from __future__ import annotations
import numpy as np
import numpy.typing as npt


def db_to_linear(db: float) -> float:
    """Convert a power ratio in dB to linear scale"""
    return float(10.0 ** (db / 10.0))


def linear_to_db(linear: float) -> float:
    """Convert a linear power ratio to dB"""
    return float(10.0 * np.log10(linear))


def positive_part(x: npt.ArrayLike) -> np.ndarray:
    """[x]^+ elementwise"""
    return np.maximum(np.asarray(x, dtype=float), 0.0)


def harmonic_combination(a: npt.ArrayLike, b: npt.ArrayLike) -> np.ndarray:
    """ab / (a + b) elementwise, with 0/0 taken as 0"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    total = a + b
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(total > 0, a * b / np.where(total > 0, total, 1.0), 0.0)
    return out


def frange(start: float, stop: float, step: float) -> list[float]:
    """Inclusive float range that lands exactly on `stop` when it is a multiple of `step`"""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(np.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(count + 1)]
