"""Brute-force cross-validation of the closed-form causal oracles.

Samples random elements of the causal cone from families that are causal by
construction, certifies each one on a declared grid at generation time, and
checks that no sampled element ever separates a pair the closed-form oracle
calls related.  Sampling cannot prove non-relatedness (the cone is infinite
dimensional), so a pair that no sample separates is reported INCONCLUSIVE;
actual refutations are the witness module's job and a witness element can be
injected into a run through its endpoint values.

Streams are driven by numpy's PCG64 generator seeded per (seed, index), so
identical configurations reproduce bit-identical elements on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .causality import PureState, pure_causal
from .cone import AlgebraElement, RegionGrid, certify_grid_psd
from .fields import eval_values
from .states import DiracData
from .witness import EndpointElement

PAIR_TOL = 1e-10

DEFAULT_REGION = RegionGrid(-3.0, 3.0, -3.0, 3.0, 41, 41)


class Family(str, Enum):
    """Element families with an a-priori membership argument."""

    DIAGONAL_CAUSAL = "DIAGONAL_CAUSAL"  # diag of two causal functions
    LEMMA_B = "LEMMA_B"  # equal diagonal dominating a bounded off-diagonal
    CONSTANT_DEGENERATE = "CONSTANT_DEGENERATE"  # constants, degenerate Dirac only


@dataclass(frozen=True)
class SamplerConfig:
    """Deterministic sampling plan for causal elements."""

    seed: int
    n_elements: int
    families: tuple[Family, ...] = (Family.DIAGONAL_CAUSAL, Family.LEMMA_B)
    region: RegionGrid = field(default_factory=lambda: DEFAULT_REGION)
    psd_tol: float = 1e-9
    diag_coeff_range: tuple[float, float] = (0.05, 1.5)
    lemma_amp_range: tuple[float, float] = (0.02, 0.3)
    lemma_freq_range: tuple[float, float] = (0.2, 2.0)
    const_range: tuple[float, float] = (-2.0, 2.0)

    def __post_init__(self) -> None:
        if self.n_elements < 1:
            raise ValueError("n_elements must be at least 1")
        if not self.families:
            raise ValueError("need at least one family")
        for name in ("diag_coeff_range", "lemma_amp_range", "lemma_freq_range"):
            lo, hi = getattr(self, name)
            if not (0.0 < lo < hi):
                raise ValueError(f"{name} must be an increasing positive range")
        lo, hi = self.const_range
        if not lo < hi:
            raise ValueError("const_range must be increasing")


def _fmt(value: float) -> str:
    return repr(float(value))


def _diagonal_causal(rng: np.random.Generator, cfg: SamplerConfig) -> AlgebraElement:
    lo, hi = cfg.diag_coeff_range

    def causal_source() -> str:
        beta, gamma, extra = rng.uniform(lo, hi, size=3)
        alpha = beta + gamma + extra  # slope alpha >= beta + gamma keeps d/dt dominant
        return f"{_fmt(alpha)}*t + {_fmt(beta)}*tanh(t + x) + {_fmt(gamma)}*tanh(t - x)"

    return AlgebraElement.from_sources(causal_source(), causal_source())


def _lemma_bounded(rng: np.random.Generator, cfg: SamplerConfig, dirac: DiracData) -> AlgebraElement:
    amp = rng.uniform(*cfg.lemma_amp_range)
    freq = rng.uniform(*cfg.lemma_freq_range)
    phase = rng.uniform(0.0, 2.0 * math.pi)
    # sup over the plane of |c_t| + |c_x| + gap |c| for the Gaussian wave below
    # is bounded by amp * (2 sqrt(2/e) + freq + gap); 5% headroom on top.
    bound = amp * (2.0 * math.sqrt(2.0 / math.e) + freq + dirac.gap)
    slope = 1.05 * bound
    envelope = "exp(-(t^2 + x^2))"
    diag = f"{_fmt(slope)}*t"
    return AlgebraElement.from_sources(
        diag,
        diag,
        f"{_fmt(amp)}*{envelope}*cos({_fmt(freq)}*t + {_fmt(phase)})",
        f"{_fmt(amp)}*{envelope}*sin({_fmt(freq)}*t + {_fmt(phase)})",
    )


def _constant(rng: np.random.Generator, cfg: SamplerConfig) -> AlgebraElement:
    lo, hi = cfg.const_range
    a, b, c_re, c_im = rng.uniform(lo, hi, size=4)
    return AlgebraElement.from_sources(_fmt(a), _fmt(b), _fmt(c_re), _fmt(c_im))


def sample_causal_element(cfg: SamplerConfig, k: int, dirac: DiracData) -> AlgebraElement:
    """Deterministic k-th causal element of the stream; certified on the region.

    Raises ValueError when the scheduled family is invalid for the Dirac data
    and RuntimeError if grid certification fails (which would be a generator
    bug, not a sampling accident).
    """
    family = cfg.families[k % len(cfg.families)]
    rng = np.random.default_rng([cfg.seed, k])
    if family is Family.CONSTANT_DEGENERATE:
        if not dirac.degenerate:
            raise ValueError("CONSTANT_DEGENERATE elements need a degenerate Dirac gap")
        el = _constant(rng, cfg)
    elif family is Family.DIAGONAL_CAUSAL:
        el = _diagonal_causal(rng, cfg)
    elif family is Family.LEMMA_B:
        el = _lemma_bounded(rng, cfg, dirac)
    else:
        raise ValueError(f"unknown family {family}")
    if not certify_grid_psd(el, dirac, cfg.region, cfg.psd_tol):
        raise RuntimeError(f"generated element failed grid certification (family {family.value})")
    return el


def sample_elements(cfg: SamplerConfig, dirac: DiracData) -> list[AlgebraElement]:
    return [sample_causal_element(cfg, k, dirac) for k in range(cfg.n_elements)]


SampledElement = Union[AlgebraElement, EndpointElement]


def _element_values(el: SampledElement, t: np.ndarray, x: np.ndarray):
    if isinstance(el, AlgebraElement):
        a = eval_values(el.a, t, x)
        b = eval_values(el.b, t, x)
        c = eval_values(el.c_re, t, x) + 1j * eval_values(el.c_im, t, x)
        return a, b, c
    return el.values_at(t, x)


class PairStatus(str, Enum):
    CONSISTENT = "CONSISTENT"  # related and never violated
    SOUNDNESS_BUG = "SOUNDNESS_BUG"  # related yet some causal element separated it
    INCONCLUSIVE = "INCONCLUSIVE"  # not related, sampling found no separation
    REFUTED = "REFUTED"  # not related and a sampled element separated it


@dataclass(frozen=True)
class PairCheck:
    related: bool
    status: PairStatus
    n_violations: int
    worst_margin: Optional[float]  # max over elements of omega(a) - eta(a)

    def to_dict(self) -> dict:
        return {
            "related": self.related,
            "status": self.status.value,
            "n_violations": self.n_violations,
            "worst_margin": self.worst_margin,
        }


@dataclass(frozen=True)
class CrossValidationReport:
    pairs: list[PairCheck]
    n_elements: int
    sound: bool  # no related pair was ever violated
    n_refuted: int
    n_inconclusive: int

    def to_dict(self) -> dict:
        return {
            "schema": "causalnc/1",
            "n_elements": self.n_elements,
            "sound": self.sound,
            "n_refuted": self.n_refuted,
            "n_inconclusive": self.n_inconclusive,
            "pairs": [p.to_dict() for p in self.pairs],
        }


def cross_validate_pure(
    pairs: Sequence[tuple[PureState, PureState]],
    dirac: DiracData,
    cfg: Optional[SamplerConfig] = None,
    elements: Optional[Sequence[SampledElement]] = None,
    tol: float = PAIR_TOL,
) -> CrossValidationReport:
    """Check every pair against every sampled element.

    The pairing of a state with an element [[a, -c], [-c*, b]] at its event
    is |xi1|^2 a + |xi2|^2 b - 2 Re(conj(xi1) xi2 c); an element separates a
    pair when the start value exceeds the end value by more than tol.
    Explicit elements (e.g. a witness endpoint element) take precedence over
    sampling from cfg; an empty element list yields a vacuous INCONCLUSIVE
    report.
    """
    if elements is None:
        if cfg is None:
            raise ValueError("need either a sampler config or explicit elements")
        elements = sample_elements(cfg, dirac)

    verdicts = [pure_causal(a, b, dirac).related for a, b in pairs]
    n = len(pairs)
    t_all = np.array([s.point.t for a, b in pairs for s in (a, b)])
    x_all = np.array([s.point.x for a, b in pairs for s in (a, b)])

    w1 = np.empty(2 * n)
    w2 = np.empty(2 * n)
    cross = np.empty(2 * n, dtype=complex)
    for i, (a, b) in enumerate(pairs):
        for j, state in enumerate((a, b)):
            xi = state.internal
            w1[2 * i + j] = abs(xi.xi1) ** 2
            w2[2 * i + j] = abs(xi.xi2) ** 2
            cross[2 * i + j] = xi.xi1.conjugate() * xi.xi2

    worst = np.full(n, -np.inf)
    violations = np.zeros(n, dtype=int)
    for el in elements:
        av, bv, cv = _element_values(el, t_all, x_all)
        values = w1 * av + w2 * bv - 2.0 * (cross * cv).real
        margins = values[0::2] - values[1::2]  # omega(a) - eta(a)
        worst = np.maximum(worst, margins)
        violations += margins > tol

    checks = []
    sound = True
    n_refuted = 0
    n_inconclusive = 0
    for i in range(n):
        if not elements:
            status = PairStatus.INCONCLUSIVE
            n_inconclusive += 1
            checks.append(PairCheck(verdicts[i], status, 0, None))
            continue
        violated = violations[i] > 0
        if verdicts[i]:
            status = PairStatus.SOUNDNESS_BUG if violated else PairStatus.CONSISTENT
            sound = sound and not violated
        elif violated:
            status = PairStatus.REFUTED
            n_refuted += 1
        else:
            status = PairStatus.INCONCLUSIVE
            n_inconclusive += 1
        checks.append(PairCheck(verdicts[i], status, int(violations[i]), float(worst[i])))
    return CrossValidationReport(checks, len(elements), sound, n_refuted, n_inconclusive)
