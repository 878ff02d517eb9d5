"""Finite-level convolution measures, mask transforms, and rescaled tails.

An infinite convolution is driven by a finite family of Hadamard triples
together with an eventually periodic selection word w and matching factor
exponents e: the k-th factor is the uniform atomic measure on

    B_{w_k} / (N_{w_1}^{e_1} * ... * N_{w_k}^{e_k}).

Finite truncations are kept in exact rational arithmetic; Fourier-side
evaluation multiplies mask polynomials M_B(xi) = mean_b exp(-2*pi*i*b*xi)
and converts to floating point only at the last step.  Dropping the first
n factors and rescaling by the accumulated contraction gives the tail
measure of index n, whose transform is again a mask product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

import numpy as np

from .triples import HadamardTriple

__all__ = [
    "DEFAULT_TAIL_DEPTH",
    "SelectionWord",
    "ConvolutionSpec",
    "DiscreteMeasure",
    "TailSpec",
    "TailValue",
    "SupportBound",
    "DepthTooLargeError",
    "finite_level",
    "convolve",
    "mask",
    "fourier_finite",
    "fourier_tail",
    "tail_truncation_bound",
    "support_bound",
    "cdf",
    "fraction_str",
]

ArrayLike = Union[float, Sequence[float], np.ndarray]

DEFAULT_DENOMINATOR_BITS = 1 << 16


class DepthTooLargeError(ValueError):
    """Raised when level denominators exceed the configured bit budget."""


@dataclass(frozen=True)
class SelectionWord:
    """Eventually periodic word over {1..m} with per-factor exponents.

    ``prefix + period^inf`` encodes the symbol sequence, and the exponent
    sequence uses the same encoding independently.  Indexing is 1-based to
    match the factor count of the convolution.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = (1,)
    exp_prefix: tuple[int, ...] = ()
    exp_period: tuple[int, ...] = (1,)

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(s) for s in self.prefix))
        object.__setattr__(self, "period", tuple(int(s) for s in self.period))
        object.__setattr__(self, "exp_prefix", tuple(int(s) for s in self.exp_prefix))
        object.__setattr__(self, "exp_period", tuple(int(s) for s in self.exp_period))
        if not self.period:
            raise ValueError("word period must be nonempty")
        if not self.exp_period:
            raise ValueError("exponent period must be nonempty")
        if any(s < 1 for s in self.prefix + self.period):
            raise ValueError("word symbols must be >= 1")
        if any(e < 1 for e in self.exp_prefix + self.exp_period):
            raise ValueError("exponents must be >= 1")

    def symbol(self, k: int) -> int:
        """Symbol at position k >= 1."""
        if k < 1:
            raise ValueError(f"position must be >= 1, got {k}")
        if k <= len(self.prefix):
            return self.prefix[k - 1]
        return self.period[(k - len(self.prefix) - 1) % len(self.period)]

    def exponent(self, k: int) -> int:
        """Exponent at position k >= 1."""
        if k < 1:
            raise ValueError(f"position must be >= 1, got {k}")
        if k <= len(self.exp_prefix):
            return self.exp_prefix[k - 1]
        return self.exp_period[(k - len(self.exp_prefix) - 1) % len(self.exp_period)]

    @property
    def max_symbol(self) -> int:
        return max(self.prefix + self.period)

    def shifted(self, n: int) -> "SelectionWord":
        """The word with its first n positions dropped."""
        if n < 0:
            raise ValueError("shift must be >= 0")

        def shift(pre: tuple[int, ...], per: tuple[int, ...]):
            if n <= len(pre):
                return pre[n:], per
            d = (n - len(pre)) % len(per)
            return (), per[d:] + per[:d]

        p, q = shift(self.prefix, self.period)
        ep, eq = shift(self.exp_prefix, self.exp_period)
        return SelectionWord(p, q, ep, eq)

    def describe(self) -> str:
        sym = "".join(map(str, self.prefix)) + ":" + "".join(map(str, self.period))
        exp = "".join(map(str, self.exp_prefix)) + ":" + "".join(map(str, self.exp_period))
        return f"word={sym} exp={exp}"

    def to_json(self) -> dict:
        return {
            "prefix": list(self.prefix),
            "period": list(self.period),
            "exp_prefix": list(self.exp_prefix),
            "exp_period": list(self.exp_period),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SelectionWord":
        return cls(
            tuple(obj.get("prefix", ())),
            tuple(obj.get("period", (1,))),
            tuple(obj.get("exp_prefix", ())),
            tuple(obj.get("exp_period", (1,))),
        )


@dataclass(frozen=True)
class ConvolutionSpec:
    """A triple family (1-indexed) and the word selecting factors from it."""

    family: tuple[HadamardTriple, ...]
    word: SelectionWord

    def __post_init__(self):
        object.__setattr__(self, "family", tuple(self.family))
        if not self.family:
            raise ValueError("family must contain at least one triple")
        if self.word.max_symbol > len(self.family):
            raise ValueError(
                f"word symbol {self.word.max_symbol} exceeds family size {len(self.family)}"
            )

    def triple_at(self, k: int) -> HadamardTriple:
        """Triple acting at factor position k >= 1."""
        return self.family[self.word.symbol(k) - 1]

    def exponent_at(self, k: int) -> int:
        return self.word.exponent(k)

    def scale_product(self, n: int) -> int:
        """Signed exact product of the first n factor scales N^e."""
        p = 1
        for k in range(1, n + 1):
            p *= self.triple_at(k).N ** self.exponent_at(k)
        return p

    def describe(self) -> str:
        fam = ",".join(
            f"({t.N},B={list(t.B)},L={list(t.L)})" for t in self.family
        )
        return f"family=[{fam}] {self.word.describe()}"

    def to_json(self) -> dict:
        return {
            "triples": [t.to_json() for t in self.family],
            "word": self.word.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ConvolutionSpec":
        return cls(
            tuple(HadamardTriple.from_json(t) for t in obj["triples"]),
            SelectionWord.from_json(obj["word"]),
        )


@dataclass(frozen=True)
class TailSpec:
    """The convolution with its first ``skip`` factors dropped and rescaled."""

    spec: ConvolutionSpec
    skip: int = 0

    def __post_init__(self):
        if self.skip < 0:
            raise ValueError("skip must be >= 0")

    def triple_at(self, j: int) -> HadamardTriple:
        """Triple of the j-th tail factor (j >= 1)."""
        return self.spec.triple_at(self.skip + j)

    def exponent_at(self, j: int) -> int:
        return self.spec.exponent_at(self.skip + j)

    def word(self) -> SelectionWord:
        return self.spec.word.shifted(self.skip)

    def describe(self) -> str:
        return f"{self.spec.describe()} skip={self.skip}"


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite atomic probability measure with exact rational atoms.

    Atoms are stored sorted by position; weights are positive Fractions
    summing to exactly 1.  Construct through :meth:`from_dict`.
    """

    atoms: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_dict(cls, d: dict[Fraction, Fraction]) -> "DiscreteMeasure":
        items = []
        total = Fraction(0)
        for pos, w in d.items():
            pos = Fraction(pos)
            w = Fraction(w)
            if w <= 0:
                raise ValueError(f"weight at {pos} must be positive, got {w}")
            items.append((pos, w))
            total += w
        if total != 1:
            raise ValueError(f"weights must sum to exactly 1, got {total}")
        if not items:
            raise ValueError("measure needs at least one atom")
        return cls(tuple(sorted(items)))

    @classmethod
    def point_mass(cls, pos: Fraction | int = 0) -> "DiscreteMeasure":
        return cls(((Fraction(pos), Fraction(1)),))

    @classmethod
    def digit_measure(cls, B: Sequence[int], scale: Fraction) -> "DiscreteMeasure":
        """Uniform measure on B*scale."""
        if not B:
            raise ValueError("digit set must be nonempty")
        scale = Fraction(scale)
        w = Fraction(1, len(B))
        return cls.from_dict({b * scale: w for b in B})

    def as_dict(self) -> dict[Fraction, Fraction]:
        return dict(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def positions(self) -> np.ndarray:
        return np.array([float(p) for p, _ in self.atoms])

    def weights(self) -> np.ndarray:
        return np.array([float(w) for _, w in self.atoms])

    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), start=Fraction(0))

    def fourier(self, xi: ArrayLike) -> complex | np.ndarray:
        """Transform sum_x w(x) exp(-2*pi*i*x*xi), evaluated in doubles."""
        x = np.asarray(xi, dtype=float)
        e = np.exp(-2j * np.pi * np.multiply.outer(self.positions(), x))
        out = np.tensordot(self.weights(), e, axes=1)
        return complex(out) if np.isscalar(xi) or x.ndim == 0 else out

    def to_csv(self) -> str:
        lines = ["position,weight"]
        for pos, w in self.atoms:
            lines.append(f"{fraction_str(pos)},{fraction_str(w)}")
        return "\n".join(lines) + "\n"


class TailValue(NamedTuple):
    """Truncated tail transform together with a rigorous truncation bound."""

    value: complex | np.ndarray
    bound: float | np.ndarray


@dataclass(frozen=True)
class SupportBound:
    """h = 1 + max|digit|; levels live in [-(h-1), h-1], tails shrink like 2^-n."""

    h: int

    def level_interval(self) -> tuple[float, float]:
        return (-(self.h - 1), self.h - 1)

    def tail_interval(self, n: int) -> tuple[float, float]:
        r = self.h * 0.5**n
        return (-r, r)


def fraction_str(q: Fraction) -> str:
    """Exact decimal string when the denominator is 2^a*5^b, else 'p/q'."""
    den = q.denominator
    a = b = 0
    d = den
    while d % 2 == 0:
        d //= 2
        a += 1
    while d % 5 == 0:
        d //= 5
        b += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    k = max(a, b)
    scaled = abs(q.numerator) * 10**k // den
    sign = "-" if q < 0 else ""
    if k == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(k + 1, "0")
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def _inv_float(p: int) -> float:
    """1/p in double precision; 0.0 when p is beyond the double range."""
    try:
        return 1.0 / float(p)
    except OverflowError:
        return math.copysign(0.0, p)


def convolve(a: DiscreteMeasure, b: DiscreteMeasure) -> DiscreteMeasure:
    """Convolution: atoms at all pairwise sums, colliding atoms merged."""
    acc: dict[Fraction, Fraction] = {}
    for pa, wa in a.atoms:
        for pb, wb in b.atoms:
            p = pa + pb
            acc[p] = acc.get(p, Fraction(0)) + wa * wb
    return DiscreteMeasure.from_dict(acc)


def finite_level(
    spec: ConvolutionSpec,
    n: int,
    max_denominator_bits: int = DEFAULT_DENOMINATOR_BITS,
) -> DiscreteMeasure:
    """Exact n-factor truncation of the infinite convolution."""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    mu = DiscreteMeasure.point_mass(0)
    p = 1
    for k in range(1, n + 1):
        t = spec.triple_at(k)
        p *= t.N ** spec.exponent_at(k)
        if p.bit_length() > max_denominator_bits:
            raise DepthTooLargeError(
                f"denominator exceeds {max_denominator_bits} bits at level {k}"
            )
        mu = convolve(mu, DiscreteMeasure.digit_measure(t.B, Fraction(1, p)))
    return mu


def mask(B: Sequence[int], xi: ArrayLike) -> complex | np.ndarray:
    """Mask polynomial M_B(xi) = mean_b exp(-2*pi*i*b*xi); period 1, |M| <= 1."""
    if not len(B):
        raise ValueError("digit set must be nonempty")
    x = np.asarray(xi, dtype=float)
    b = np.asarray(B, dtype=float)
    out = np.exp(-2j * np.pi * np.multiply.outer(b, x)).mean(axis=0)
    return complex(out) if x.ndim == 0 else out


def fourier_finite(spec: ConvolutionSpec, n: int, xi: ArrayLike) -> complex | np.ndarray:
    """Transform of the n-factor truncation as a product of n masks."""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    x = np.asarray(xi, dtype=float)
    out = np.ones(x.shape, dtype=complex)
    p = 1
    for k in range(1, n + 1):
        t = spec.triple_at(k)
        p *= t.N ** spec.exponent_at(k)
        out = out * mask(t.B, x * _inv_float(p))
    return complex(out) if x.ndim == 0 else out


def _tail_series_coefficient(tail: TailSpec, depth: int) -> float:
    """Exact value of sum_{j>depth} 2*pi*max|B_j| / |P_j| for the tail factors.

    P_j is the running product of the tail scales |N|^e.  The word is
    eventually periodic, so past the preperiodic part the terms form a
    geometric pattern and the series sums in closed form.
    """
    w = tail.word()
    pre = max(len(w.prefix), len(w.exp_prefix))
    per = math.lcm(len(w.period), len(w.exp_period))
    # first index > max(depth, pre) aligned with the period start
    t0 = max(0, -(-(depth - pre) // per))  # ceil
    start = pre + 1 + t0 * per

    fam = tail.spec.family
    maxb = [max(abs(b) for b in t.B) for t in fam]

    p = 1
    total = 0.0
    for j in range(1, start):
        p *= fam[w.symbol(j) - 1].N ** w.exponent(j)
        if j > depth:
            total += 2.0 * math.pi * maxb[w.symbol(j) - 1] * abs(_inv_float(p))
    s_per = 0.0
    q = 1
    for j in range(start, start + per):
        p *= fam[w.symbol(j) - 1].N ** w.exponent(j)
        q *= abs(fam[w.symbol(j) - 1].N) ** w.exponent(j)
        s_per += 2.0 * math.pi * maxb[w.symbol(j) - 1] * abs(_inv_float(p))
    total += s_per / (1.0 - _inv_float(q))
    return total


DEFAULT_TAIL_DEPTH = 40


def tail_truncation_bound(
    tail: TailSpec, xi: ArrayLike, depth: int = DEFAULT_TAIL_DEPTH
) -> float | np.ndarray:
    """Rigorous bound on |exact tail transform - depth-factor truncation|.

    Each dropped factor z_j satisfies |z_j - 1| <= 2*pi*max|B_j|*|xi|/|P_j|
    and |z_j| <= 1, so the dropped product differs from 1 by at most the
    series sum; the bound is monotone decreasing in depth.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    coef = _tail_series_coefficient(tail, depth)
    x = np.asarray(xi, dtype=float)
    out = coef * np.abs(x)
    return float(out) if x.ndim == 0 else out


def fourier_tail(tail: TailSpec, xi: ArrayLike, depth: int = DEFAULT_TAIL_DEPTH) -> TailValue:
    """Truncated tail transform (depth factors) with its truncation bound."""
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    x = np.asarray(xi, dtype=float)
    out = np.ones(x.shape, dtype=complex)
    p = 1
    for j in range(1, depth + 1):
        t = tail.triple_at(j)
        p *= t.N ** tail.exponent_at(j)
        out = out * mask(t.B, x * _inv_float(p))
    bound = tail_truncation_bound(tail, x, depth)
    if x.ndim == 0:
        return TailValue(complex(out), float(bound))
    return TailValue(out, bound)


def support_bound(spec: ConvolutionSpec) -> SupportBound:
    """h = 1 + max over the family of max|b|."""
    return SupportBound(1 + max(max(abs(b) for b in t.B) for t in spec.family))


def cdf(measure: DiscreteMeasure, x: Fraction | int | float) -> Fraction:
    """Exact weight of (-inf, x]."""
    x = Fraction(x)
    total = Fraction(0)
    for pos, w in measure.atoms:
        if pos > x:
            break
        total += w
    return total
