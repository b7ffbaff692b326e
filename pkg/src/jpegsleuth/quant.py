"""Closed-form double-quantization arithmetic and per-frequency histograms.

JPEG quantization divides a DCT coefficient by a step and rounds.  When an
image is quantized twice with different steps, the second-stage histogram
inherits a periodic pattern of empty and crowded bins; the functions here
compute that pattern exactly and score how well a candidate primary step
explains an observed histogram.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import DegenerateHistogram


class RoundingMode(Enum):
    """Rounding convention used by the quantizer.

    ``NEAREST_TIES_UP`` rounds to the nearest integer with ties toward
    positive infinity (round(3.5) = 4, round(-3.5) = -3).  ``TOWARD_ZERO``
    truncates; some camera pipelines use it, and the choice changes which
    histogram bins a tie value lands in.
    """

    NEAREST_TIES_UP = "nearest-ties-up"
    TOWARD_ZERO = "toward-zero"


def quantize(u, q: int, rounding: RoundingMode = RoundingMode.NEAREST_TIES_UP):
    """Quantize ``u`` (scalar or array) by step ``q``: the rounded ratio u/q."""
    if q < 1:
        raise ValueError(f"quantization step must be >= 1, got {q}")
    u = np.asarray(u, dtype=np.float64)
    if rounding is RoundingMode.NEAREST_TIES_UP:
        out = np.floor(u / q + 0.5)
    elif rounding is RoundingMode.TOWARD_ZERO:
        out = np.trunc(u / q)
    else:  # pragma: no cover
        raise ValueError(f"unknown rounding mode {rounding!r}")
    out = out.astype(np.int64)
    return int(out) if out.ndim == 0 else out


def dequantize(v, q: int):
    """Invert the division (but not the rounding): q * v."""
    if q < 1:
        raise ValueError(f"quantization step must be >= 1, got {q}")
    v = np.asarray(v)
    out = (v.astype(np.int64) * int(q))
    return int(out) if out.ndim == 0 else out


def double_quantize(u, q1: int, q2: int,
                    rounding: RoundingMode = RoundingMode.NEAREST_TIES_UP):
    """Quantize by ``q1``, dequantize, then quantize by ``q2``."""
    return quantize(dequantize(quantize(u, q1, rounding), q1), q2, rounding)


def bin_contribution(u2, q1: int, q2: int):
    """Number of first-stage histogram bins feeding second-stage bin ``u2``.

    Each first-stage bin holds exactly ``q1`` unit values, and it feeds
    ``u2`` whenever its dequantized center lies in the closed interval
    ``[(u2 - 1/2) q2, (u2 + 1/2) q2]``::

        n(u2) = q1 * (floor((q2/q1)(u2 + 1/2)) - ceil((q2/q1)(u2 - 1/2)) + 1)

    clamped below at zero.  Evaluated in exact integer arithmetic.  The
    closed interval counts a bin boundary value (an exact rounding tie)
    toward both neighboring bins, which keeps n(-u) = n(u); a strict
    single-valued rounding rule would assign such ties to one side only.
    The zero set of n is identical either way.
    """
    if q1 < 1 or q2 < 1:
        raise ValueError("quantization steps must be >= 1")
    u2 = np.asarray(u2, dtype=np.int64)
    q1 = int(q1)
    q2 = int(q2)
    hi = (q2 * (2 * u2 + 1)) // (2 * q1)                  # floor
    lo = -((-(q2 * (2 * u2 - 1))) // (2 * q1))            # ceil
    n = q1 * (hi - lo + 1)
    n = np.maximum(n, 0)
    return int(n) if n.ndim == 0 else n


def periodicity(q1: int, q2: int) -> int:
    """Period of the double-quantization bin pattern: q1 / gcd(q1, q2)."""
    if q1 < 1 or q2 < 1:
        raise ValueError("quantization steps must be >= 1")
    return q1 // math.gcd(q1, q2)


@dataclass
class Histogram:
    """Integer bin counts of quantized coefficients at one frequency.

    ``counts[i]`` tallies coefficient value ``i - bound``; values with
    magnitude above ``bound`` land in the one-sided overflow counters so
    that ``counts.sum() + overflow_neg + overflow_pos`` equals the number
    of contributing blocks.
    """

    frequency: tuple[int, int]
    bound: int
    counts: np.ndarray
    overflow_neg: int = 0
    overflow_pos: int = 0

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.shape != (2 * self.bound + 1,):
            raise ValueError("counts must span [-bound, bound]")
        if (self.counts < 0).any() or self.overflow_neg < 0 or self.overflow_pos < 0:
            raise ValueError("histogram counts must be nonnegative")

    @property
    def bins(self) -> np.ndarray:
        return np.arange(-self.bound, self.bound + 1)

    @property
    def total(self) -> int:
        return int(self.counts.sum()) + self.overflow_neg + self.overflow_pos

    def count(self, value: int) -> int:
        if abs(value) > self.bound:
            raise IndexError(f"bin {value} outside [-{self.bound}, {self.bound}]")
        return int(self.counts[value + self.bound])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["bin", "count"])
            w.writerow(["overflow_neg", self.overflow_neg])
            for b, c in zip(self.bins, self.counts):
                w.writerow([int(b), int(c)])
            w.writerow(["overflow_pos", self.overflow_pos])


def build_histogram(grid: np.ndarray, frequency: tuple[int, int], bound: int = 60) -> Histogram:
    """Tally grid values at positions (8a + row, 8b + col) over all blocks."""
    row, col = frequency
    if not (0 <= row < 8 and 0 <= col < 8):
        raise ValueError(f"frequency must lie in [0,7]^2, got {frequency}")
    if bound < 1:
        raise ValueError("bound must be >= 1")
    vals = np.asarray(grid)[row::8, col::8].ravel().astype(np.int64)
    inside = np.abs(vals) <= bound
    counts = np.bincount(vals[inside] + bound, minlength=2 * bound + 1)
    return Histogram(
        frequency=(row, col),
        bound=bound,
        counts=counts,
        overflow_neg=int((vals < -bound).sum()),
        overflow_pos=int((vals > bound).sum()),
    )


def period_strength(hist: Histogram, candidate_q1: int, q2: int,
                    empty_frac: float = 0.25, min_nonzero_bins: int = 6) -> float:
    """Correlation between observed and predicted bin emptiness for a candidate step.

    Over the contiguous support of the histogram, a bin is observed-empty
    when its count falls below ``empty_frac`` of the median populated-bin
    count (real recompression leaks small counts into structurally empty
    bins).  The prediction is the zero set of :func:`bin_contribution`
    for ``(candidate_q1, q2)``.  Returns the Pearson correlation of the
    two binary patterns, in [-1, 1]; 0 when either pattern is constant.
    """
    if candidate_q1 < 1:
        raise ValueError("candidate_q1 must be >= 1")
    nz = np.flatnonzero(hist.counts)
    if nz.size < min_nonzero_bins:
        raise DegenerateHistogram(
            f"only {nz.size} populated bins (< {min_nonzero_bins})")
    window = slice(nz[0], nz[-1] + 1)
    counts = hist.counts[window]
    bins = hist.bins[window]
    if counts.size < 2 * min_nonzero_bins:
        raise DegenerateHistogram(f"support of {counts.size} bins is too narrow")

    populated = counts[counts > 0]
    threshold = empty_frac * float(np.median(populated))
    obs_empty = (counts <= threshold).astype(np.float64)
    pred_empty = (bin_contribution(bins, candidate_q1, q2) == 0).astype(np.float64)

    if obs_empty.std() == 0.0 or pred_empty.std() == 0.0:
        return 0.0
    return float(np.corrcoef(obs_empty, pred_empty)[0, 1])


def best_period_candidate(hist: Histogram, candidates: Iterable[int], q2: int,
                          empty_frac: float = 0.25) -> tuple[int, float]:
    """Candidate step with the highest period strength; ties favor the smaller step."""
    best_q, best_s = 1, -np.inf
    for cand in candidates:
        s = period_strength(hist, cand, q2, empty_frac=empty_frac)
        if s > best_s:
            best_q, best_s = cand, s
    return best_q, float(best_s)
