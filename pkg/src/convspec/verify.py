"""Orthonormality and completeness checks for constructed spectra.

For a candidate spectrum Lambda of the measure mu, the diagnostic is

    Q(xi) = sum over lambda in Lambda of |mu^(lambda + xi)|^2:

Q <= 1 everywhere iff the exponentials are orthonormal, Q = 1 everywhere
iff they are a basis.  Desk evaluation truncates twice: mu^ is a finite
mask product (depth factors) and Lambda is a finite level, so every Q value
ships with an explicit bound covering both truncations.  The level bound
comes from the exact level completeness identity: since the level sums
|mu^_m(lambda+xi)|^2 to 1, the Q defect is at most the worst factor
1 - |tail transform((lambda+xi)/scale)|^2 over the level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .convolution import (
    ConvolutionSpec,
    DiscreteMeasure,
    TailSpec,
    _inv_float,
    _tail_series_coefficient,
    fourier_finite,
    fourier_tail,
)
from .spectrum import SpectrumLevels

__all__ = [
    "QReport",
    "QValue",
    "orthonormality_gram",
    "level_completeness",
    "q_function",
    "spectral_report",
]

DEFAULT_COMPLETENESS_TOL = 1e-9
DEFAULT_Q_SLACK = 1e-3


def orthonormality_gram(measure: DiscreteMeasure, Lambda: Sequence[int]) -> float:
    """Max entrywise deviation of the exponential Gram matrix from identity.

    Entry (a, b) is the measure transform at lambda_a - lambda_b, so the
    matrix is Hermitian with unit diagonal by construction.
    """
    lam = np.asarray(tuple(Lambda), dtype=float)
    if lam.size == 0:
        raise ValueError("Lambda must be nonempty")
    pos = measure.positions()
    w = measure.weights()
    e = np.exp(-2j * np.pi * np.outer(lam, pos))
    g = (e * w) @ e.conj().T
    return float(np.max(np.abs(g - np.eye(lam.size))))


def _level_points(levels: SpectrumLevels, i: int, xi: np.ndarray) -> np.ndarray:
    lam = np.asarray(levels.level(i), dtype=float)
    return lam[:, None] + xi[None, :]


def level_completeness(
    spec: ConvolutionSpec,
    levels: SpectrumLevels,
    i: int,
    xi_grid: Sequence[float],
) -> float:
    """Max over the grid of |sum_Lambda_i |mu^_{m_i}(lambda+xi)|^2 - 1|."""
    if not 1 <= i <= levels.level_count:
        raise ValueError(f"level index {i} out of range 1..{levels.level_count}")
    xi = np.asarray(xi_grid, dtype=float)
    pts = _level_points(levels, i, xi)
    f = fourier_finite(spec, levels.m(i), pts)
    q = (np.abs(f) ** 2).sum(axis=0)
    return float(np.max(np.abs(q - 1.0)))


def _q_with_bounds(
    spec: ConvolutionSpec,
    levels: SpectrumLevels,
    i: int,
    depth: int,
    xi: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Q values over the grid plus per-point truncation bounds.

    Bound = level part (worst 1 - |tail|^2 over the level, tail evaluated
    with its own truncation margin) + depth part (transform truncation,
    summed over the level).
    """
    m_i = levels.m(i)
    if depth < m_i:
        raise ValueError(f"depth {depth} must be >= m_i = {m_i}")
    pts = _level_points(levels, i, xi)
    f = fourier_finite(spec, depth, pts)
    q = (np.abs(f) ** 2).sum(axis=0)

    tail = TailSpec(spec, m_i)
    z = pts * _inv_float(spec.scale_product(m_i))
    if depth > m_i:
        tv = fourier_tail(tail, z, depth - m_i)
        low = np.clip(np.abs(tv.value) - tv.bound, 0.0, 1.0)
    else:
        low = np.clip(1.0 - np.asarray(tail_bound_at(tail, z)), 0.0, 1.0)
    level_part = np.max(1.0 - low**2, axis=0)
    coef0 = _tail_series_coefficient(TailSpec(spec, 0), depth)
    depth_part = 2.0 * coef0 * np.abs(pts).sum(axis=0)
    return q, level_part + depth_part


def tail_bound_at(tail: TailSpec, z: np.ndarray) -> np.ndarray:
    """Truncation bound for the zero-factor tail approximation (value 1)."""
    coef = _tail_series_coefficient(tail, 0)
    return coef * np.abs(z)


class QValue(NamedTuple):
    q: float
    tail_bound: float


def q_function(
    spec: ConvolutionSpec,
    levels: SpectrumLevels,
    i: int,
    depth: int,
    xi: float,
) -> QValue:
    """Q over level i at a single point, with its accumulated truncation bound."""
    if not 1 <= i <= levels.level_count:
        raise ValueError(f"level index {i} out of range 1..{levels.level_count}")
    q, b = _q_with_bounds(spec, levels, i, depth, np.asarray([float(xi)]))
    return QValue(float(q[0]), float(b[0]))


@dataclass(frozen=True)
class QReport:
    """Grid evaluation of level completeness and Q with explicit bounds."""

    xi_grid: tuple[float, ...]
    q_values: tuple[float, ...]
    q_bounds: tuple[float, ...]
    level: int
    truncation_depth: int
    max_defect: float
    tail_bound: float
    completeness_defect: float
    min_q: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "truncation_depth": self.truncation_depth,
            "max_defect": self.max_defect,
            "tail_bound": self.tail_bound,
            "completeness_defect": self.completeness_defect,
            "min_q": self.min_q,
            "passed": self.passed,
            "xi_grid": list(self.xi_grid),
            "q_values": list(self.q_values),
            "q_bounds": list(self.q_bounds),
        }

    def to_csv(self) -> str:
        lines = ["xi,q,bound"]
        for x, q, b in zip(self.xi_grid, self.q_values, self.q_bounds):
            lines.append(f"{x!r},{q!r},{b!r}")
        return "\n".join(lines) + "\n"


def spectral_report(
    spec: ConvolutionSpec,
    levels: SpectrumLevels,
    grid_n: int = 64,
    depth: int = 30,
    extra_worst: int = 10,
    completeness_tol: float = DEFAULT_COMPLETENESS_TOL,
    q_slack: float = DEFAULT_Q_SLACK,
) -> QReport:
    """Evaluate the deepest level on [-2, 2]: completeness plus Q with bounds.

    The grid is grid_n uniform points augmented with the worst points of a
    4x finer coarse scan.  Pass requires the completeness defect within
    completeness_tol and min Q >= 1 - (tail_bound + q_slack).
    """
    if levels.level_count < 1:
        raise ValueError("no levels to verify")
    i = levels.level_count
    base = np.linspace(-2.0, 2.0, grid_n)
    if extra_worst > 0:
        coarse = np.linspace(-2.0, 2.0, 4 * grid_n + 1)
        q_coarse, _ = _q_with_bounds(spec, levels, i, depth, coarse)
        worst = coarse[np.argsort(q_coarse, kind="stable")[:extra_worst]]
        grid = np.unique(np.concatenate([base, worst]))
    else:
        grid = base
    q, bounds = _q_with_bounds(spec, levels, i, depth, grid)
    comp = level_completeness(spec, levels, i, grid)
    tail_bound = float(np.max(bounds))
    min_q = float(np.min(q))
    passed = comp <= completeness_tol and min_q >= 1.0 - (tail_bound + q_slack)
    return QReport(
        xi_grid=tuple(float(x) for x in grid),
        q_values=tuple(float(v) for v in q),
        q_bounds=tuple(float(b) for b in bounds),
        level=i,
        truncation_depth=depth,
        max_defect=float(np.max(np.abs(q - 1.0))),
        tail_bound=tail_bound,
        completeness_defect=comp,
        min_q=min_q,
        passed=passed,
    )
