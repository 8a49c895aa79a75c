"""Separating-element certificates for non-causal pure-state pairs.

When the closed-form oracle says a same-latitude pair is NOT related because
the available proper time is short of the required internal angle, an
explicit causal element separates the two states.  Along the straight
worldline between the events its off-diagonal field follows the schedule

    c(l) = -csc(g*l + eps) * exp(i*theta_c),      g = Dirac gap,

with eps > 0 chosen so that the whole schedule stays inside (0, pi), and
its diagonal derivative fields are fixed (up to constants) by the velocity
profile of the worldline.  The certificate produced here bundles

* the closed-form endpoint values of both sides of the separation
  inequality (the pairing difference must come out strictly negative),
* a numerical re-derivation of the left side by composite-Simpson
  integration of the diagonal derivative fields, and
* a positive-semidefiniteness certification of the element along the
  worldline via the first four characteristic-polynomial coefficients,
  computed from traces by Newton's identities; the two leading ones are
  also matched against their closed forms.

The element is only evaluated along the worldline and at its endpoints; a
global extension off the curve exists but is never needed quantitatively,
so none is constructed.  Exactly antipodal internal angles (distance pi)
admit no direct certificate here and are rejected.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .causality import MixedState, PureState, Reason, _mixed_angle_sup, mixed_causal, pure_causal
from .minkowski import CausalCurve, SpacetimePoint, proper_time
from .states import DiracData, angular_distance, parallel_angle, signed_arc, wrap_angle

ANGLE_TOL = 1e-12
#: Relative tolerance for closed-form versus trace-based / integrated values.
MATCH_RTOL = 1e-8
#: Normalised characteristic-coefficient tolerances (scale-free).
COEFF_POS_TOL = 1e-12
COEFF_ZERO_TOL = 1e-9
SIMPSON_PANELS = 1000


@dataclass(frozen=True)
class _Segment:
    length: float  # proper time of the segment
    l_start: float  # cumulative proper time at its start
    velocity: float


def _segments_of(curve: CausalCurve) -> list[_Segment]:
    segments = []
    offset = 0.0
    for i in range(len(curve.samples) - 1):
        _, p0 = curve.samples[i]
        _, p1 = curve.samples[i + 1]
        dt = p1.t - p0.t
        dx = p1.x - p0.x
        if abs(dx) >= dt:
            raise ValueError("the witness schedule needs a timelike worldline")
        length = math.sqrt(dt * dt - dx * dx)
        segments.append(_Segment(length, offset, dx / dt))
        offset += length
    return segments


@dataclass(frozen=True)
class WitnessSpec:
    """A separating element pinned down along a timelike worldline.

    epsilon and theta_c fix the off-diagonal schedule; abs_phi1/abs_phi2 are
    the moduli of the internal components shared by the pair; delta_theta is
    the angular separation the pair would need; direction is the sign of the
    signed shorter arc between the parallel angles.
    """

    epsilon: float
    theta_c: float
    curve: CausalCurve
    abs_phi1: float
    abs_phi2: float
    dirac: DiracData
    delta_theta: float
    direction: float

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        if not self.delta_theta + self.epsilon < math.pi:
            raise ValueError("the schedule requires delta_theta + epsilon < pi")
        if self.dirac.degenerate:
            raise ValueError("a degenerate Dirac gap admits no schedule")
        if not min(self.abs_phi1, self.abs_phi2) > 0.0:
            raise ValueError("pole states carry no parallel angle to separate")
        gap_l = self.dirac.gap * self.total_proper_time()
        if gap_l >= self.delta_theta:
            raise ValueError("worldline too long: the pair is causally related")

    def total_proper_time(self) -> float:
        return proper_time(self.curve)

    def schedule(self, l: float | np.ndarray):
        """The angle Theta(l) = gap*l + epsilon driving the csc schedule."""
        return self.dirac.gap * np.asarray(l, dtype=float) + self.epsilon

    def c_field(self, l: float) -> complex:
        """Off-diagonal field value at proper time l along the worldline."""
        return -1.0 / math.sin(float(self.schedule(l))) * cmath.exp(1j * self.theta_c)

    def endpoints(self) -> tuple[SpacetimePoint, SpacetimePoint]:
        return self.curve.endpoints()


def build_witness(
    omega: PureState, eta: PureState, dirac: DiracData, epsilon: Optional[float] = None
) -> WitnessSpec:
    """Construct the separating element's schedule for a non-related pair.

    Preconditions: the events are causally ordered, the internal states share
    a latitude away from the poles, the angular separation lies strictly
    inside (0, pi), the Dirac gap is positive, and the closed-form oracle
    says NOT related (speed bound).  The default epsilon centres the schedule
    inside (0, pi), which maximises the distance from the csc singularities.
    """
    verdict = pure_causal(omega, eta, dirac)
    if verdict.related:
        raise ValueError("the states are causally related; no separating element exists")
    if verdict.reason is not Reason.SPEED_BOUND:
        raise ValueError(
            f"witness construction needs a speed-bound refusal, got {verdict.reason.value}"
        )
    theta_from = parallel_angle(omega.internal)
    theta_to = parallel_angle(eta.internal)
    delta = angular_distance(theta_from, theta_to)
    if delta >= math.pi - ANGLE_TOL:
        raise ValueError("antipodal angles are refuted by transitivity, not by a direct witness")
    if delta <= ANGLE_TOL:
        raise ValueError("coinciding angles cannot be separated")
    if epsilon is None:
        epsilon = 0.5 * (math.pi - delta)
    arc = signed_arc(theta_from, theta_to)
    direction = 1.0 if arc >= 0.0 else -1.0
    p, q = omega.point, eta.point
    dt, dx = q.t - p.t, q.x - p.x
    if dt > 0.0 and abs(dx) >= dt:
        raise ValueError("lightlike endpoint separation: no timelike worldline to schedule on")
    abs_phi1 = abs(eta.internal.xi1)
    abs_phi2 = abs(eta.internal.xi2)
    return WitnessSpec(
        epsilon=float(epsilon),
        theta_c=wrap_angle(direction * epsilon - theta_from),
        curve=CausalCurve.straight(p, q),
        abs_phi1=abs_phi1,
        abs_phi2=abs_phi2,
        dirac=dirac,
        delta_theta=delta,
        direction=direction,
    )


def separation_values(spec: WitnessSpec) -> tuple[float, float]:
    """Closed-form values of both sides of the separation inequality.

    Returns (lhs, rhs) where lhs is the latitude-weighted growth of the
    diagonal fields between the endpoints and rhs the real pairing of the
    off-diagonal schedule with the internal states.  For every valid spec
    lhs < rhs strictly, which contradicts the pairing inequality any causal
    relation would impose.
    """
    gap_l = spec.dirac.gap * spec.total_proper_time()
    eps = spec.epsilon
    pref = 2.0 * spec.abs_phi1 * spec.abs_phi2
    cot = lambda u: math.cos(u) / math.sin(u)
    lhs = pref * (-cot(gap_l + eps) + cot(eps))
    rhs = pref * (-math.cos(spec.delta_theta + eps) / math.sin(gap_l + eps) + cot(eps))
    return lhs, rhs


def lhs_by_integration(spec: WitnessSpec, panels: int = SIMPSON_PANELS) -> float:
    """Re-derive the lhs by integrating the diagonal derivative fields.

    Composite Simpson in coordinate time along each segment of the
    worldline, evaluating the scheduled field derivatives literally; used to
    cross-check the closed form within MATCH_RTOL.
    """
    segments = _segments_of(spec.curve)
    if not segments:
        return 0.0
    gap = spec.dirac.gap
    k1, k2 = spec.abs_phi1, spec.abs_phi2
    total = 0.0
    for i, seg in enumerate(segments):
        _, p0 = spec.curve.samples[i]
        _, p1 = spec.curve.samples[i + 1]
        dt = p1.t - p0.t
        v = seg.velocity
        lam1, lam2 = (1.0 + v) / 2.0, (1.0 - v) / 2.0
        sqrt_ll = math.sqrt(lam1 * lam2)
        n = max(2, panels // len(segments))
        if n % 2:
            n += 1
        tau = np.linspace(0.0, dt, n + 1)
        l_here = seg.l_start + tau * math.sqrt(1.0 - v * v)
        csc2 = 1.0 / np.sin(spec.schedule(l_here)) ** 2
        a0 = gap / (2.0 * sqrt_ll) * (k2 / k1) * csc2
        a1 = -v * a0
        b0 = gap / (2.0 * sqrt_ll) * (k1 / k2) * csc2
        b1 = -v * b0
        integrand = k1 * k1 * (a0 + v * a1) + k2 * k2 * (b0 + v * b1)
        weights = np.ones(n + 1)
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
        total += float((dt / n) / 3.0 * np.dot(weights, integrand))
    return total


@dataclass(frozen=True)
class CoeffSample:
    """Characteristic-polynomial data of the element's matrix at one sample."""

    s: float  # fraction of total proper time
    l: float
    c1: float
    c2: float
    c3: float
    c4: float
    c1_closed: float
    c2_closed: float
    scale: float
    passed: bool

    def to_dict(self) -> dict:
        return {"s": self.s, "c1": self.c1, "c2": self.c2, "c3": self.c3, "c4": self.c4}


@dataclass(frozen=True)
class PsdCertification:
    passed: bool
    samples: list[CoeffSample]
    first_failure: Optional[CoeffSample]


def _sample_profile(spec: WitnessSpec, n: int) -> list[tuple[float, float, float]]:
    """(fraction, proper time, velocity) at n uniform proper-time samples."""
    segments = _segments_of(spec.curve)
    total = spec.total_proper_time()
    out = []
    for j in range(n):
        frac = j / (n - 1)
        l = frac * total
        v = 0.0
        for seg in segments:
            if l <= seg.l_start + seg.length or seg is segments[-1]:
                v = seg.velocity
                break
        out.append((frac, l, v))
    return out


def _witness_matrix(spec: WitnessSpec, l: float, v: float) -> np.ndarray:
    """The element's 4x4 membership matrix at proper time l, velocity v.

    The off-diagonal derivative fields are split proportionally between the
    two null directions, c_t + c_x = g sqrt(lam2/lam1) cos(Theta)
    csc^2(Theta) e^(i theta_c) and mirrored for c_t - c_x, which is the
    unique proportional split consistent with the chain rule applied to the
    csc schedule along the worldline.  The resulting matrix is isospectral
    to the one with the cosine entries negated (replace Theta by pi - Theta),
    so every certified quantity is insensitive to that off-curve choice.
    """
    gap = spec.dirac.gap
    theta = float(spec.schedule(l))
    lam1, lam2 = (1.0 + v) / 2.0, (1.0 - v) / 2.0
    r21 = math.sqrt(lam2 / lam1)
    r12 = math.sqrt(lam1 / lam2)
    k1, k2 = spec.abs_phi1, spec.abs_phi2
    pm = 1.0 if spec.dirac.d1 >= spec.dirac.d2 else -1.0
    phase = cmath.exp(1j * spec.theta_c)
    pref = gap / math.sin(theta) ** 2
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = pref * r21 * (k2 / k1)
    m[1, 1] = pref * r12 * (k2 / k1)
    m[2, 2] = pref * r21 * (k1 / k2)
    m[3, 3] = pref * r12 * (k1 / k2)
    m[0, 2] = -pref * r21 * cos_t * phase  # -(c_t + c_x)
    m[1, 3] = -pref * r12 * cos_t * phase  # -(c_t - c_x)
    m[0, 3] = pref * pm * sin_t * phase  # -(d1 - d2) c
    m[1, 2] = -pref * pm * sin_t * phase  # (d1 - d2) c
    m[2, 0] = np.conj(m[0, 2])
    m[3, 1] = np.conj(m[1, 3])
    m[3, 0] = np.conj(m[0, 3])
    m[2, 1] = np.conj(m[1, 2])
    return m


def certify_witness_psd(spec: WitnessSpec, n: int) -> PsdCertification:
    """Certify the element's membership matrix along the worldline.

    At each of n proper-time samples the matrix is assembled and the
    coefficients of det(A - lambda) = lambda^4 - c1 lambda^3 + c2 lambda^2
    - c3 lambda + c4 are computed from traces via Newton's identities.  The
    matrix is PSD iff all four are non-negative; here c3 and c4 vanish
    identically, so the test is c1, c2 >= 0 and c3, c4 = 0 within
    tolerance.  Tolerances are applied to coefficients of the matrix scaled
    by 1/scale, scale = max(1, largest absolute entry), i.e. they grow with
    the k-th power of the scale for the k-th coefficient.  The trace-based
    c1, c2 must also match their closed forms within MATCH_RTOL.
    """
    if n < 2:
        raise ValueError("need at least two certification samples")
    gap = spec.dirac.gap
    k1, k2 = spec.abs_phi1, spec.abs_phi2
    samples: list[CoeffSample] = []
    first_failure: Optional[CoeffSample] = None
    for frac, l, v in _sample_profile(spec, n):
        m = _witness_matrix(spec, l, v)
        scale = max(1.0, float(np.abs(m).max()))
        mn = m / scale
        p1 = complex(np.trace(mn)).real
        m2 = mn @ mn
        p2 = complex(np.trace(m2)).real
        p3 = complex(np.trace(m2 @ mn)).real
        c1n = p1
        c2n = 0.5 * (p1 * p1 - p2)
        c3n = (p1**3 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0
        c4n = complex(np.linalg.det(mn)).real

        theta = float(spec.schedule(l))
        lam1, lam2 = (1.0 + v) / 2.0, (1.0 - v) / 2.0
        csc2 = 1.0 / math.sin(theta) ** 2
        c1_closed = gap * csc2 / (math.sqrt(lam1 * lam2) * k1 * k2)
        c2_closed = (
            gap**2
            * csc2**2
            * (k1**2 * k2**2 * (lam2 - lam1) ** 2 * math.sin(theta) ** 2 + lam1 * lam2)
            / (lam1 * lam2 * k1**2 * k2**2)
        )
        c1 = c1n * scale
        c2 = c2n * scale**2
        ok = (
            c1n >= -COEFF_POS_TOL
            and c2n >= -COEFF_POS_TOL
            and abs(c3n) <= COEFF_ZERO_TOL
            and abs(c4n) <= COEFF_ZERO_TOL
            and abs(c1 - c1_closed) <= MATCH_RTOL * max(1.0, abs(c1_closed))
            and abs(c2 - c2_closed) <= MATCH_RTOL * max(1.0, abs(c2_closed))
        )
        sample = CoeffSample(
            s=frac,
            l=l,
            c1=c1,
            c2=c2,
            c3=c3n * scale**3,
            c4=c4n * scale**4,
            c1_closed=c1_closed,
            c2_closed=c2_closed,
            scale=scale,
            passed=ok,
        )
        samples.append(sample)
        if not ok and first_failure is None:
            first_failure = sample
    return PsdCertification(first_failure is None, samples, first_failure)


@dataclass(frozen=True)
class RefutationCertificate:
    """Machine-checkable refutation of a claimed causal relation."""

    spec: WitnessSpec
    lhs: float
    rhs: float
    margin: float
    lhs_numeric: float
    psd: PsdCertification

    def to_dict(self) -> dict:
        return {
            "schema": "causalnc/1",
            "epsilon": self.spec.epsilon,
            "theta_c": self.spec.theta_c,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "lhs_numeric": self.lhs_numeric,
            "psd_passed": self.psd.passed,
            "psd_samples": [s.to_dict() for s in self.psd.samples],
        }


def refute_with_witness(
    omega: PureState, eta: PureState, dirac: DiracData, n_samples: int = 64
) -> RefutationCertificate:
    """Produce a full separating-element certificate for a non-related pair.

    Bundles the schedule, the strict endpoint inequality (closed form and
    Simpson-integrated lhs agreeing within MATCH_RTOL) and the PSD
    certification at n_samples points.  Raises if the pair is related or any
    certificate component fails.
    """
    spec = build_witness(omega, eta, dirac)
    lhs, rhs = separation_values(spec)
    margin = rhs - lhs
    if not margin > 0.0:
        raise AssertionError(f"separation margin must be strictly positive, got {margin}")
    numeric = lhs_by_integration(spec)
    if abs(numeric - lhs) > MATCH_RTOL * max(1.0, abs(lhs)):
        raise AssertionError(f"integrated lhs {numeric} disagrees with closed form {lhs}")
    psd = certify_witness_psd(spec, n_samples)
    if not psd.passed:
        fail = psd.first_failure
        raise AssertionError(
            f"membership certification failed at s={fail.s}: "
            f"c=({fail.c1}, {fail.c2}, {fail.c3}, {fail.c4})"
        )
    return RefutationCertificate(spec, lhs, rhs, margin, numeric, psd)


@dataclass(frozen=True)
class EndpointElement:
    """A causal element known only by its values at a fixed set of events.

    Used to inject a witness element into brute-force never-separate runs:
    the pairing of a state with the element needs field values at the pair's
    events only.
    """

    points: tuple[SpacetimePoint, ...]
    a_values: tuple[float, ...]
    b_values: tuple[float, ...]
    c_values: tuple[complex, ...]

    def values_at(self, t: np.ndarray, x: np.ndarray):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = np.atleast_1d(np.asarray(x, dtype=float))
        a = np.empty(t.shape)
        b = np.empty(t.shape)
        c = np.empty(t.shape, dtype=complex)
        for i in range(t.shape[0]):
            for p, av, bv, cv in zip(self.points, self.a_values, self.b_values, self.c_values):
                if abs(p.t - t[i]) <= 1e-9 and abs(p.x - x[i]) <= 1e-9:
                    a[i], b[i], c[i] = av, bv, cv
                    break
            else:
                raise ValueError(f"element is only defined at its endpoints, not ({t[i]}, {x[i]})")
        return a, b, c


def endpoint_element(spec: WitnessSpec) -> EndpointElement:
    """Endpoint values of the separating element, diagonal gauge a(p) = b(p) = 0.

    The diagonal growths depend only on the total proper time:
    a(q) - a(p) = (|phi2|/|phi1|) (cot(eps) - cot(g L + eps)) and symmetrically
    for b; the off-diagonal values follow the csc schedule.
    """
    p, q = spec.endpoints()
    gap_l = spec.dirac.gap * spec.total_proper_time()
    eps = spec.epsilon
    cot = lambda u: math.cos(u) / math.sin(u)
    growth = cot(eps) - cot(gap_l + eps)
    da = (spec.abs_phi2 / spec.abs_phi1) * growth
    db = (spec.abs_phi1 / spec.abs_phi2) * growth
    return EndpointElement(
        points=(p, q),
        a_values=(0.0, da),
        b_values=(0.0, db),
        c_values=(spec.c_field(0.0), spec.c_field(spec.total_proper_time())),
    )


def build_mixed_witness(omega: MixedState, eta: MixedState, dirac: DiracData) -> WitnessSpec:
    """Thin wrapper scheduling a separating element for mixed internal states.

    Projects both Bloch vectors onto their shared parallel, picks the
    rotation angle that maximises the arccos separation, and reuses the pure
    machinery with component moduli sqrt((1 +/- z)/2) (the matrix and the
    inequality are invariant under that common normalisation) and the
    epsilon/theta_c choice dictated by the sign of the projected arc.
    """
    verdict = mixed_causal(omega, eta, dirac)
    if verdict.related:
        raise ValueError("the states are causally related; no separating element exists")
    if verdict.reason is not Reason.SPEED_BOUND:
        raise ValueError(
            f"witness construction needs a speed-bound refusal, got {verdict.reason.value}"
        )
    rho, sigma = omega.internal, eta.internal
    z = 0.5 * (rho.rz + sigma.rz)
    width = math.sqrt(max(1.0 - z * z, 0.0))
    _, theta_star = _mixed_angle_sup(rho, sigma)
    arc_r = math.acos(max(-1.0, min(1.0, rho.parallel_radius / width * math.cos(rho.parallel_angle + theta_star))))
    arc_s = math.acos(max(-1.0, min(1.0, sigma.parallel_radius / width * math.cos(sigma.parallel_angle + theta_star))))
    if min(arc_r, arc_s) <= ANGLE_TOL or max(arc_r, arc_s) >= math.pi - ANGLE_TOL:
        raise ValueError("projected angles touch the limiting values 0 or pi; no direct witness")
    if arc_s > arc_r:
        epsilon, theta_c, direction = arc_r, theta_star, 1.0
    else:
        epsilon, theta_c, direction = math.pi - arc_r, theta_star + math.pi, -1.0
    p, q = omega.point, eta.point
    dt, dx = q.t - p.t, q.x - p.x
    if dt > 0.0 and abs(dx) >= dt:
        raise ValueError("lightlike endpoint separation: no timelike worldline to schedule on")
    return WitnessSpec(
        epsilon=epsilon,
        theta_c=wrap_angle(theta_c),
        curve=CausalCurve.straight(p, q),
        abs_phi1=math.sqrt((1.0 + z) / 2.0),
        abs_phi2=math.sqrt((1.0 - z) / 2.0),
        dirac=dirac,
        delta_theta=abs(arc_s - arc_r),
        direction=direction,
    )
