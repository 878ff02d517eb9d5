"""Hadamard triples on the real line: validation, translation, reduction, composition.

A triple (N, B, L) consists of an integer scale with |N| >= 2 and two
equal-size integer tuples, the digits B and the frequencies L.  It is a
Hadamard triple when the #B x #B matrix

    [ exp(-2*pi*i * b*l / N) / sqrt(#B) ]_{b in B, l in L}

is unitary, equivalently when L is a spectrum of the uniform atomic measure
on B/N.  Scales may be negative; only |N| >= 2 is required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

__all__ = [
    "DEFAULT_UNITARITY_TOL",
    "HadamardTriple",
    "TripleReport",
    "verify_triple",
    "translate_triple",
    "reduce_frequencies",
    "normalize_frequencies",
    "compose_triples",
    "difference_gcd",
]

DEFAULT_UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class HadamardTriple:
    """Scale N with digit tuple B and frequency tuple L, #B == #L >= 2.

    Tuples keep their given order and must be free of exact duplicates;
    duplicated entries are a validation error, never merged silently.
    Numerical unitarity is checked by :func:`verify_triple`, not here.
    """

    N: int
    B: tuple[int, ...]
    L: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "B", tuple(int(b) for b in self.B))
        object.__setattr__(self, "L", tuple(int(l) for l in self.L))
        if abs(self.N) < 2:
            raise ValueError(f"invalid scale N={self.N}: need |N| >= 2")
        if len(self.B) != len(self.L):
            raise ValueError(
                f"size mismatch: #B={len(self.B)} != #L={len(self.L)}"
            )
        if len(self.B) < 2:
            raise ValueError("digit set needs at least two elements")
        if len(set(self.B)) != len(self.B):
            raise ValueError(f"duplicate digits in B={self.B}")
        if len(set(self.L)) != len(self.L):
            raise ValueError(f"duplicate frequencies in L={self.L}")

    @property
    def size(self) -> int:
        return len(self.B)

    def matrix(self) -> np.ndarray:
        """Normalized exponential matrix, rows indexed by B, columns by L."""
        b = np.asarray(self.B, dtype=float)
        l = np.asarray(self.L, dtype=float)
        return np.exp(-2j * np.pi * np.outer(b, l) / self.N) / math.sqrt(self.size)

    def unitarity_deviation(self) -> float:
        """Max entrywise deviation of the row Gram matrix from the identity."""
        m = self.matrix()
        g = m @ m.conj().T
        return float(np.max(np.abs(g - np.eye(self.size))))

    def is_valid(self, tol: float = DEFAULT_UNITARITY_TOL) -> bool:
        return self.unitarity_deviation() <= tol

    def to_json(self) -> dict:
        return {"N": self.N, "B": list(self.B), "L": list(self.L)}

    @classmethod
    def from_json(cls, obj: dict) -> "HadamardTriple":
        return cls(int(obj["N"]), tuple(obj["B"]), tuple(obj["L"]))


@dataclass(frozen=True)
class TripleReport:
    """Outcome of a unitarity check: pass flag plus the worst deviation."""

    ok: bool
    deviation: float | None
    reason: str | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "deviation": self.deviation, "reason": self.reason}


def verify_triple(
    N: int,
    B: Sequence[int],
    L: Sequence[int],
    tol: float = DEFAULT_UNITARITY_TOL,
) -> TripleReport:
    """Check the Hadamard property of raw (N, B, L) data.

    Fails (without raising) when #B != #L or when the row Gram matrix of the
    normalized exponential matrix deviates from the identity by more than
    ``tol``.  A scale with |N| < 2 is rejected with ValueError.
    """
    N = int(N)
    if abs(N) < 2:
        raise ValueError(f"invalid scale N={N}: need |N| >= 2")
    B = tuple(int(b) for b in B)
    L = tuple(int(l) for l in L)
    if not B or not L:
        raise ValueError("digit and frequency sets must be nonempty")
    if len(B) != len(L):
        return TripleReport(ok=False, deviation=None, reason="size-mismatch")
    m = np.exp(
        -2j * np.pi * np.outer(np.asarray(B, float), np.asarray(L, float)) / N
    ) / math.sqrt(len(B))
    g = m @ m.conj().T
    dev = float(np.max(np.abs(g - np.eye(len(B)))))
    return TripleReport(ok=dev <= tol, deviation=dev)


def translate_triple(t: HadamardTriple, b0: int, l0: int) -> HadamardTriple:
    """Translate digits by b0 and frequencies by l0; preserves the property."""
    return HadamardTriple(
        t.N, tuple(b + b0 for b in t.B), tuple(l + l0 for l in t.L)
    )


def reduce_frequencies(t: HadamardTriple) -> HadamardTriple:
    """Reduce every frequency into {0, ..., |N|-1}, keeping the order."""
    return HadamardTriple(t.N, t.B, tuple(l % abs(t.N) for l in t.L))


def normalize_frequencies(t: HadamardTriple) -> HadamardTriple:
    """Reduce frequencies mod |N| and translate so that 0 is among them.

    The inductive spectrum construction needs 0 in every frequency set and
    frequencies inside {0, ..., |N|-1}; both are reachable by a translation
    followed by reduction, which keeps the Hadamard property.
    """
    r = reduce_frequencies(t)
    if 0 in r.L:
        return r
    return reduce_frequencies(translate_triple(r, 0, -min(r.L)))


def compose_triples(ts: Sequence[HadamardTriple]) -> HadamardTriple:
    """Compose triples (N_1,B_1,L_1), ..., (N_n,B_n,L_n) into one.

    The composite is (N_n...N_1,
                      (N_n...N_2) B_1 + ... + N_n B_{n-1} + B_n,
                      L_1 + N_1 L_2 + ... + (N_1...N_{n-1}) L_n),
    enumerated digit-major (first factor outermost).
    """
    ts = list(ts)
    if not ts:
        raise ValueError("invalid input: cannot compose an empty list of triples")
    n = len(ts)
    scales = [t.N for t in ts]
    big_n = math.prod(scales)
    # coefficient of B_i is the product of the scales after it
    b_coef = [math.prod(scales[i + 1 :]) for i in range(n)]
    # coefficient of L_i is the product of the scales before it
    l_coef = [math.prod(scales[:i]) for i in range(n)]
    big_b = tuple(
        sum(c * b for c, b in zip(b_coef, combo))
        for combo in product(*(t.B for t in ts))
    )
    big_l = tuple(
        sum(c * l for c, l in zip(l_coef, combo))
        for combo in product(*(t.L for t in ts))
    )
    return HadamardTriple(big_n, big_b, big_l)


def difference_gcd(B: Sequence[int]) -> int:
    """gcd of all pairwise differences of B; 0 for a singleton."""
    B = [int(b) for b in B]
    if not B:
        raise ValueError("digit set must be nonempty")
    g = 0
    for b in B[1:]:
        g = math.gcd(g, abs(b - B[0]))
    return g
