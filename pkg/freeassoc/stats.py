"""
Normalization of activation matrices and the two inferential statistics
used by the experiments: the paired Wilcoxon signed-rank test with effect
size r = Z / sqrt(n), and Spearman's rank correlation.

Dependencies:
    - numpy
    - scipy

"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np
from scipy.stats import norm, rankdata, spearmanr

from freeassoc import FreeAssocException
from freeassoc.activation.spreading import ActivationMatrix

MIN_PAIRS = 5
MIN_CORRELATION_SAMPLES = 3


class StatsException(FreeAssocException):
    pass


class Normalization(str, Enum):
    L1 = "l1"
    MAX = "max"
    ZSCORE = "zscore"


class NormalizedMatrix(ActivationMatrix):
    """An ActivationMatrix after the column pass and then the row pass"""

    def __init__(self, labels, primes, values, mode: Normalization):
        super().__init__(labels, primes, values)
        self.mode = Normalization(mode)


@dataclass(frozen=True)
class PairedTestResult:
    n: int
    w_plus: float
    w_minus: float
    z: float
    p: float
    effect_r: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    p: float
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


def _normalize_axis(values: np.ndarray, mode: Normalization, axis: int) -> np.ndarray:
    """Normalize every column (axis=0) or row (axis=1); degenerate vectors pass through"""
    out = values.copy()
    if mode is Normalization.ZSCORE:
        mean = values.mean(axis=axis, keepdims=True)
        std = values.std(axis=axis, keepdims=True)
        ok = np.broadcast_to(std > 0, values.shape)
        out[ok] = ((values - mean) / np.where(std > 0, std, 1.0))[ok]
        return out
    if mode is Normalization.L1:
        scale = values.sum(axis=axis, keepdims=True)
    else:
        scale = values.max(axis=axis, keepdims=True)
    ok = np.broadcast_to(scale != 0, values.shape)
    out[ok] = (values / np.where(scale != 0, scale, 1.0))[ok]
    return out


def normalize_array(values: np.ndarray, mode: Union[Normalization, str] = Normalization.L1) -> np.ndarray:
    mode = Normalization(mode)
    values = np.asarray(values, dtype=np.float64)
    return _normalize_axis(_normalize_axis(values, mode, axis=0), mode, axis=1)


def normalize(m: ActivationMatrix, mode: Union[Normalization, str] = Normalization.L1) -> NormalizedMatrix:
    """
    Normalize each column, then each row, of an activation matrix.

    l1 divides by the sum, max by the maximum, zscore subtracts the mean
    and divides by the (population) standard deviation.  All-zero or
    constant vectors are left unchanged.
    """
    mode = Normalization(mode)
    if (m.values < 0).any():
        raise StatsException("Activation matrix has negative entries")
    return NormalizedMatrix(m.labels, m.primes, normalize_array(m.values, mode), mode)


def rank_with_ties(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of their ranks"""
    return rankdata(np.asarray(values, dtype=np.float64), method="average")


def wilcoxon_paired(x: Sequence[float], y: Sequence[float]) -> PairedTestResult:
    """
    Wilcoxon signed-rank test on x - y with the normal approximation (tie
    corrected, no continuity correction) and effect size r = z / sqrt(n).

    Raises:
        StatsException:
            unequal lengths, fewer than 5 pairs, or fewer than 5 non-zero
            differences
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise StatsException(f"Paired samples must be 1-d and equally long, got {x.shape} and {y.shape}")
    if len(x) < MIN_PAIRS:
        raise StatsException(f"Need at least {MIN_PAIRS} pairs, got {len(x)}")

    d = x - y
    d = d[d != 0]
    n = len(d)
    if n < MIN_PAIRS:
        raise StatsException(f"Need at least {MIN_PAIRS} non-zero differences, got {n}")

    magnitude = np.abs(d)
    ranks = rank_with_ties(magnitude)
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())

    _, ties = np.unique(magnitude, return_counts=True)
    tie_correction = float(((ties ** 3) - ties).sum()) / 48.0
    sigma = np.sqrt(n * (n + 1) * (2 * n + 1) / 24.0 - tie_correction)
    z = (w_plus - n * (n + 1) / 4.0) / sigma
    return PairedTestResult(
        n=n,
        w_plus=w_plus,
        w_minus=w_minus,
        z=float(z),
        p=float(2.0 * norm.sf(abs(z))),
        effect_r=float(z / np.sqrt(n))
    )


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """
    Spearman's rho on mid-ranks via scipy.stats.spearmanr, two-sided p from
    the t distribution with n - 2 degrees of freedom; p is 0 when |rho| = 1.

    Raises:
        StatsException:
            unequal lengths, fewer than 3 samples, or a constant input
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise StatsException(f"Samples must be 1-d and equally long, got {x.shape} and {y.shape}")
    n = len(x)
    if n < MIN_CORRELATION_SAMPLES:
        raise StatsException(f"Need at least {MIN_CORRELATION_SAMPLES} samples, got {n}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise StatsException("Spearman correlation is undefined for a constant input")

    rx, ry = rank_with_ties(x), rank_with_ties(y)
    # perfectly (anti-)monotone samples give exactly +1 or -1
    if np.array_equal(rx, ry):
        return CorrelationResult(rho=1.0, p=0.0, n=n)
    if np.array_equal(rx, n + 1 - ry):
        return CorrelationResult(rho=-1.0, p=0.0, n=n)
    result = spearmanr(x, y)
    rho = float(np.clip(result.statistic, -1.0, 1.0))
    p = 0.0 if abs(rho) == 1.0 else float(result.pvalue)
    return CorrelationResult(rho=rho, p=p, n=n)
