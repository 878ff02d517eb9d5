"""Numeric equi-positivity certificates for families of tail measures.

A family of probability measures is equi-positive when uniform eps, delta
exist such that every x in [0,1) admits an integer shift k keeping the
transform at least eps on a delta-ball around x + k, with k = 0 forced at
x = 0.  The probe samples grid points x = j/grid_n, maximizes the truncated
tail transform over shifts |k| <= K, and reports the worst value achieved.
The grid certificate approximates the open-ball definition: delta-hat is
reported as half the grid spacing and labeled as such.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .convolution import ConvolutionSpec, TailSpec, fourier_tail
from .zeros import search_order

__all__ = [
    "ProbeRow",
    "EquiPositivityCertificate",
    "choose_k",
    "probe_family",
    "DEFAULT_FAILURE_THRESHOLD",
]

DEFAULT_FAILURE_THRESHOLD = 1e-4


@dataclass(frozen=True)
class ProbeRow:
    """Best shift found for one grid point and one tail index."""

    x: float
    skip: int
    k: int
    value: float


@dataclass(frozen=True)
class EquiPositivityCertificate:
    """Probe outcome: eps-hat over the grid, or a failure naming the worst pair.

    For every row, the true tail transform at x + k is at least
    value - truncation bound; eps-hat is the minimum value over all rows.
    """

    ok: bool
    epsilon_hat: float
    delta_hat: float
    grid_n: int
    K: int
    depth: int
    failure_threshold: float
    family_id: str
    rows: tuple[ProbeRow, ...]
    worst: ProbeRow

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "epsilon_hat": self.epsilon_hat,
            "delta_hat": self.delta_hat,
            "grid_n": self.grid_n,
            "K": self.K,
            "depth": self.depth,
            "failure_threshold": self.failure_threshold,
            "family_id": self.family_id,
            "worst": {
                "x": self.worst.x,
                "skip": self.worst.skip,
                "k": self.worst.k,
                "value": self.worst.value,
            },
            "table": [[r.x, r.skip, r.k, r.value] for r in self.rows],
        }

    def to_csv(self) -> str:
        lines = ["x,skip,k,value"]
        for r in self.rows:
            lines.append(f"{r.x!r},{r.skip},{r.k},{r.value!r}")
        return "\n".join(lines) + "\n"


def choose_k(tail: TailSpec, x: float, K: int = 8, depth: int = 40) -> tuple[int, float]:
    """Shift k in [-K, K] maximizing |tail transform(x + k)| (truncated).

    Ties break toward smaller |k|, then the positive one; x = 0 always
    returns (0, 1).
    """
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    if K < 1:
        raise ValueError("K must be >= 1")
    if x == 0.0:
        return 0, 1.0
    ks = np.array(search_order(K))
    vals = np.abs(fourier_tail(tail, x + ks, depth).value)
    best = int(np.argmax(vals))  # first maximum respects the tie order
    return int(ks[best]), float(vals[best])


def probe_family(
    spec: ConvolutionSpec,
    skips,
    grid_n: int = 128,
    K: int = 8,
    depth: int = 40,
    failure_threshold: float = DEFAULT_FAILURE_THRESHOLD,
) -> EquiPositivityCertificate:
    """Probe the tails of ``spec`` with the given skip indices on a uniform grid.

    Runs :func:`choose_k` for every (grid point, tail) pair; eps-hat is the
    minimum achieved value.  The result fails when eps-hat does not exceed
    the failure threshold, naming the worst (x, skip) pair.
    """
    skips = tuple(int(n) for n in skips)
    if not skips:
        raise ValueError("skips must be nonempty")
    if grid_n < 2:
        raise ValueError("grid_n must be >= 2")
    ks = np.array(search_order(K))
    xs = np.arange(grid_n) / grid_n
    rows: list[ProbeRow] = []
    for n in skips:
        tail = TailSpec(spec, n)
        pts = xs[None, :] + ks[:, None]
        vals = np.abs(fourier_tail(tail, pts, depth).value)
        idx = np.argmax(vals, axis=0)
        rows.append(ProbeRow(x=0.0, skip=n, k=0, value=1.0))
        for j in range(1, grid_n):
            rows.append(
                ProbeRow(
                    x=float(xs[j]),
                    skip=n,
                    k=int(ks[idx[j]]),
                    value=float(vals[idx[j], j]),
                )
            )
    rows.sort(key=lambda r: (r.x, r.skip))
    worst = min(rows, key=lambda r: r.value)
    eps_hat = worst.value
    return EquiPositivityCertificate(
        ok=eps_hat > failure_threshold,
        epsilon_hat=eps_hat,
        delta_hat=1.0 / (2.0 * grid_n),
        grid_n=grid_n,
        K=K,
        depth=depth,
        failure_threshold=failure_threshold,
        family_id=f"{spec.describe()} skips={list(skips)}",
        rows=tuple(rows),
        worst=worst,
    )
