"""Inductive construction of candidate spectra for infinite convolutions.

Starting from Lambda_0 = {0}, each step picks the least admissible factor
index m_i (all current elements shrink below delta/2 under the accumulated
scale), forms the composite block triple over positions (m_{i-1}, m_i], and
extends

    Lambda_i = Lambda_{i-1} + N_{0,m_{i-1}} * { l + k_l * N_block : l in L_block }

with integer shifts k_l picked so the tail transform beyond m_i stays large
at the shifted block frequencies (k = 0 forced at l = 0).  Every level is an
exact spectrum of the corresponding finite-level measure; the shift search
is the numeric surrogate for the equi-positivity constant, so the
construction aborts when no shift achieves the demanded floor.

The family's frequency sets are normalized (reduced mod |N| and translated
to contain 0) before any block is formed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .convolution import ConvolutionSpec, TailSpec
from .equipos import choose_k
from .triples import (
    HadamardTriple,
    compose_triples,
    difference_gcd,
    normalize_frequencies,
)

__all__ = [
    "BuildParams",
    "CompositeBlocks",
    "SpectrumLevels",
    "GcdReport",
    "GcdNotCertifiedWarning",
    "EquiPositivityViolation",
    "HorizonExhaustedError",
    "block_frequencies",
    "next_level",
    "build_spectrum",
    "certify_gcd_condition",
]


class GcdNotCertifiedWarning(UserWarning):
    """The family misses the gcd condition; spectrality is not guaranteed."""


class HorizonExhaustedError(RuntimeError):
    """No admissible next index remained in the given subsequence."""


class EquiPositivityViolation(RuntimeError):
    """The shift search fell below the demanded floor; names the witness."""

    def __init__(self, lam: int, m: int, x: float, achieved: float, epsilon: float):
        self.lam = lam
        self.m = m
        self.x = x
        self.achieved = achieved
        self.epsilon = epsilon
        super().__init__(
            f"equi-positivity violation at block frequency lambda={lam}, "
            f"m={m}: best |tail transform| {achieved:.6g} < epsilon {epsilon:.6g} "
            f"(x={x:.6g})"
        )


@dataclass(frozen=True)
class BuildParams:
    """Knobs of the construction; delta and epsilon mirror the (eps, delta)
    pair of equi-positivity, which is not computable exactly."""

    delta: float = 0.2
    epsilon: float = 0.15
    K: int = 8
    depth: int = 40
    max_m: int = 512

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.K < 1 or self.depth < 1 or self.max_m < 1:
            raise ValueError("K, depth and max_m must be >= 1")

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "epsilon": self.epsilon,
            "K": self.K,
            "depth": self.depth,
        }


@dataclass(frozen=True)
class CompositeBlocks:
    """Composite triple over factor positions p+1..q of the effective sequence."""

    p: int
    q: int
    bigN: int
    bigB: tuple[int, ...]
    bigL: tuple[int, ...]

    def triple(self) -> HadamardTriple:
        return HadamardTriple(self.bigN, self.bigB, self.bigL)


@dataclass(frozen=True)
class SpectrumLevels:
    """Nested integer sets Lambda_0 <= Lambda_1 <= ... with their shift data."""

    levels: tuple[tuple[int, ...], ...]
    indices: tuple[int, ...]
    shifts: tuple[tuple[tuple[int, int], ...], ...]
    delta_used: float
    epsilon_used: float
    k_window: int
    probe_depth: int

    @property
    def level_count(self) -> int:
        return len(self.indices)

    def level(self, i: int) -> tuple[int, ...]:
        """Lambda_i (i = 0 is the {0} bootstrap)."""
        return self.levels[i]

    def m(self, i: int) -> int:
        """Factor count m_i of level i >= 1."""
        return self.indices[i - 1]

    def shift_map(self, i: int) -> dict[int, int]:
        """Block-frequency -> shift map used to build level i >= 1."""
        return dict(self.shifts[i - 1])

    def to_json(self) -> dict:
        return {
            "levels": [list(lv) for lv in self.levels],
            "indices": list(self.indices),
            "shifts": [[[l, k] for l, k in sh] for sh in self.shifts],
            "parameters": {
                "delta": self.delta_used,
                "epsilon": self.epsilon_used,
                "K": self.k_window,
                "depth": self.probe_depth,
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SpectrumLevels":
        params = obj.get("parameters", {})
        return cls(
            levels=tuple(tuple(int(x) for x in lv) for lv in obj["levels"]),
            indices=tuple(int(x) for x in obj["indices"]),
            shifts=tuple(
                tuple((int(l), int(k)) for l, k in sh) for sh in obj["shifts"]
            ),
            delta_used=float(params.get("delta", 0.0)),
            epsilon_used=float(params.get("epsilon", 0.0)),
            k_window=int(params.get("K", 0)),
            probe_depth=int(params.get("depth", 0)),
        )

    @classmethod
    def initial(cls, params: BuildParams) -> "SpectrumLevels":
        return cls(
            levels=((0,),),
            indices=(),
            shifts=(),
            delta_used=params.delta,
            epsilon_used=params.epsilon,
            k_window=params.K,
            probe_depth=params.depth,
        )


def _normalized_spec(spec: ConvolutionSpec) -> ConvolutionSpec:
    return ConvolutionSpec(
        tuple(normalize_frequencies(t) for t in spec.family), spec.word
    )


def _effective_triple(spec: ConvolutionSpec, k: int) -> HadamardTriple:
    """Position-k factor as a plain triple: (N^e, B, N^(e-1) L)."""
    t = spec.triple_at(k)
    e = spec.exponent_at(k)
    return HadamardTriple(
        t.N**e, t.B, tuple(t.N ** (e - 1) * l for l in t.L)
    )


def block_frequencies(spec: ConvolutionSpec, p: int, q: int) -> CompositeBlocks:
    """Composite triple over factor positions p+1..q (frequencies normalized)."""
    if not 0 <= p < q:
        raise ValueError(f"invalid range: need 0 <= p < q, got p={p}, q={q}")
    nspec = _normalized_spec(spec)
    composite = compose_triples(
        [_effective_triple(nspec, k) for k in range(p + 1, q + 1)]
    )
    return CompositeBlocks(
        p=p, q=q, bigN=composite.N, bigB=composite.B, bigL=composite.L
    )


def next_level(
    spec: ConvolutionSpec,
    state: SpectrumLevels,
    subsequence: Iterable[int] | None = None,
    params: BuildParams | None = None,
) -> SpectrumLevels:
    """Extend the construction by one level.

    m_i is the least element of ``subsequence`` past the current index whose
    accumulated scale shrinks every current element below delta/2; the shift
    of each block frequency comes from the tail-transform search, with the
    achieved value required to reach epsilon.
    """
    params = params or BuildParams()
    if subsequence is None:
        subsequence = range(1, params.max_m + 1)
    prev = state.levels[-1]
    m_prev = state.indices[-1] if state.indices else 0

    m_i = None
    for m in subsequence:
        if m <= m_prev:
            continue
        if m > params.max_m:
            break
        inv = abs(Fraction(1, spec.scale_product(m)))
        if all(abs(lam) * inv < Fraction(params.delta) / 2 for lam in prev):
            m_i = m
            break
    if m_i is None:
        raise HorizonExhaustedError(
            f"no admissible index after m={m_prev} within the subsequence horizon"
        )

    blocks = block_frequencies(spec, m_prev, m_i)
    tail = TailSpec(spec, m_i)
    n0_prev = spec.scale_product(m_prev)

    shift_map: dict[int, int] = {}
    for lam in blocks.bigL:
        if lam == 0:
            shift_map[0] = 0
            continue
        ratio = Fraction(lam, blocks.bigN)
        whole = math.floor(ratio)
        x = float(ratio - whole)
        k_x, achieved = choose_k(tail, x, K=params.K, depth=params.depth)
        if achieved < params.epsilon:
            raise EquiPositivityViolation(
                lam=lam, m=m_i, x=x, achieved=achieved, epsilon=params.epsilon
            )
        shift_map[lam] = k_x - whole

    block_points = [lam + shift_map[lam] * blocks.bigN for lam in blocks.bigL]
    new_level = sorted({a + n0_prev * b for a in prev for b in block_points})
    if len(new_level) != len(prev) * len(blocks.bigL):
        raise RuntimeError(
            "level cardinality collapsed; the input spec is not a valid "
            "Hadamard system"
        )
    return SpectrumLevels(
        levels=state.levels + (tuple(new_level),),
        indices=state.indices + (m_i,),
        shifts=state.shifts + (tuple(sorted(shift_map.items())),),
        delta_used=params.delta,
        epsilon_used=params.epsilon,
        k_window=params.K,
        probe_depth=params.depth,
    )


def build_spectrum(
    spec: ConvolutionSpec,
    depth_i: int,
    subsequence: Iterable[int] | None = None,
    params: BuildParams | None = None,
) -> SpectrumLevels:
    """Run ``depth_i`` construction steps from Lambda_0 = {0}.

    Families missing the gcd condition draw a warning; the construction is
    still attempted and fails honestly if the shift search collapses.
    """
    if depth_i < 1:
        raise ValueError(f"depth_i must be >= 1, got {depth_i}")
    params = params or BuildParams()
    gcd_report = certify_gcd_condition(spec.family)
    if not gcd_report.certified:
        warnings.warn(
            "difference gcds "
            f"{list(gcd_report.gcds)} are not all 1 (offending indices "
            f"{list(gcd_report.offending)}); spectrality of every word is "
            "not guaranteed",
            GcdNotCertifiedWarning,
            stacklevel=2,
        )
    subsequence = list(subsequence) if subsequence is not None else None
    state = SpectrumLevels.initial(params)
    for _ in range(depth_i):
        state = next_level(spec, state, subsequence=subsequence, params=params)
    return state


@dataclass(frozen=True)
class GcdReport:
    """Whether every digit set has pairwise-difference gcd 1."""

    certified: bool
    gcds: tuple[int, ...]
    offending: tuple[int, ...]  # 1-based family indices
    note: str | None = None

    def to_json(self) -> dict:
        return {
            "certified": self.certified,
            "gcds": list(self.gcds),
            "offending": list(self.offending),
            "note": self.note,
        }


def certify_gcd_condition(family: Sequence[HadamardTriple]) -> GcdReport:
    """Certified iff difference_gcd(B_j) == 1 for every family member.

    This is the sufficient condition making every word and exponent choice
    spectral; failing it only voids the blanket guarantee.
    """
    family = tuple(family)
    if not family:
        raise ValueError("family must be nonempty")
    gcds = tuple(difference_gcd(t.B) for t in family)
    offending = tuple(j + 1 for j, g in enumerate(gcds) if g != 1)
    note = None
    if offending and len(family) == 1:
        note = (
            "single-triple systems can still be spectral despite gcd != 1; "
            "the certificate only covers the every-word guarantee"
        )
    return GcdReport(
        certified=not offending, gcds=gcds, offending=offending, note=note
    )
