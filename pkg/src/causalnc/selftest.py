"""Reduced-scale self-test battery behind the CLI's selftest subcommand.

Runs the same families of checks as the acceptance suite, scaled down to a
few seconds: closed-form oracle exactness on a parameter grid, the necessary
conditions, lightlike lockout, witness refutation, brute-force never-separate
runs, order axioms, mixed/pure consistency, unitary equivariance, conformal
invariance, derivative fidelity of the field DSL and path-planner
feasibility.  Each check reports a name, a pass flag and a short detail
string; the battery passes iff every check does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .causality import (
    MixedState,
    PureState,
    Reason,
    mixed_causal,
    mixed_required_angle,
    plan_causal_path,
    pure_causal,
    unitary_transport_check,
)
from .cone import PSD_TOL, cone_matrix_at, conformal_rescale_matrix, is_psd
from .fields import eval_with_derivatives, parse
from .minkowski import SpacetimePoint
from .oracle import SamplerConfig, cross_validate_pure, sample_elements
from .states import (
    DiracData,
    InternalUnitary,
    MixedInternalState,
    PureInternalState,
    angular_distance,
    wrap_angle,
)
from .witness import refute_with_witness


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _equator_pair(rng, gap, related: bool):
    """Random same-latitude pure pair, timelike-separated, on either side of the bound."""
    z = rng.uniform(-0.85, 0.85)
    theta = rng.uniform(-math.pi, math.pi)
    dtheta = rng.uniform(0.15, math.pi - 0.15)
    factor = rng.uniform(1.05, 1.6) if related else rng.uniform(0.2, 0.92)
    length = factor * dtheta / gap
    v = rng.uniform(-0.6, 0.6)
    t_span = length / math.sqrt(1.0 - v * v)
    p = SpacetimePoint(rng.uniform(-1.0, 0.0), rng.uniform(-0.5, 0.5))
    q = SpacetimePoint(p.t + t_span, p.x + v * t_span)
    xi = PureInternalState.from_parallel(z, theta)
    phi = PureInternalState.from_parallel(z, wrap_angle(theta + rng.choice([-1.0, 1.0]) * dtheta))
    return PureState(p, xi), PureState(q, phi)


def _check_pure_oracle_grid(rng, tol) -> tuple[bool, str]:
    dirac_gaps = (0.5, 2.0)
    worst = 0
    for gap in dirac_gaps:
        dirac = DiracData(0.0, gap)
        for t_span in np.linspace(0.0, 3.0, 8):
            for dx_frac in np.linspace(-1.0, 1.0, 8):
                dx = dx_frac * t_span
                for dtheta in np.linspace(0.0, math.pi, 8):
                    p = SpacetimePoint(0.0, 0.0)
                    q = SpacetimePoint(t_span, dx)
                    xi = PureInternalState.from_parallel(0.0, 0.0)
                    phi = PureInternalState.from_parallel(0.0, dtheta)
                    got = pure_causal(PureState(p, xi), PureState(q, phi), dirac).related
                    have = math.sqrt(max(t_span**2 - dx**2, 0.0))
                    need = dtheta / gap
                    if abs(have - need) <= 1e-12:
                        continue  # boundary decided either way within tolerance
                    if got != (have >= need):
                        worst += 1
    return worst == 0, f"{worst} grid mismatches"


def _check_necessary_conditions(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(0.3, 1.3)
    bad = 0
    for _ in range(100):
        z1 = rng.uniform(-0.9, 0.9)
        z2 = z1 + rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 0.5)
        z2 = min(0.99, max(-0.99, z2))
        a = PureState(SpacetimePoint(0, 0), PureInternalState.from_parallel(z1, rng.uniform(-3, 3)))
        b = PureState(SpacetimePoint(5, 0), PureInternalState.from_parallel(z2, rng.uniform(-3, 3)))
        v = pure_causal(a, b, dirac)
        bad += v.related or v.reason is not Reason.LATITUDE_MISMATCH
    degenerate = DiracData(1.0, 1.0)
    for _ in range(100):
        z = rng.uniform(-0.9, 0.9)
        a = PureState(SpacetimePoint(0, 0), PureInternalState.from_parallel(z, 0.3))
        b = PureState(SpacetimePoint(5, 0), PureInternalState.from_parallel(z, 1.7))
        v = pure_causal(a, b, degenerate)
        bad += v.related or v.reason is not Reason.DEGENERATE_INTERNAL_CHANGE
    for _ in range(100):
        xi = PureInternalState.from_parallel(0.0, 0.0)
        a = PureState(SpacetimePoint(0.0, 0.0), xi)
        b = PureState(SpacetimePoint(rng.uniform(0, 2), 5.0), xi)
        v = pure_causal(a, b, dirac)
        bad += v.related or v.reason is not Reason.SPACETIME_ORDER
    return bad == 0, f"{bad} necessary-condition failures"


def _check_null_lockout(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(0.0, 1.0)
    bad = 0
    for _ in range(30):
        r = rng.uniform(0.5, 3.0)
        side = rng.choice([-1.0, 1.0])
        p = SpacetimePoint(0.0, 0.0)
        q = SpacetimePoint(r, side * r)
        dtheta = rng.uniform(0.01, math.pi)
        a = PureState(p, PureInternalState.from_parallel(0.0, 0.0))
        b = PureState(q, PureInternalState.from_parallel(0.0, dtheta))
        bad += pure_causal(a, b, dirac).related
    return bad == 0, f"{bad} lightlike pairs wrongly related"


def _check_witness_refutation(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(0.0, 1.0)
    bad = 0
    for _ in range(10):
        a, b = _equator_pair(rng, dirac.gap, related=False)
        cert = refute_with_witness(a, b, dirac, n_samples=16)
        bad += not (cert.margin > 0.0 and cert.psd.passed)
    return bad == 0, f"{bad} refutations failed"


def _check_oracle_never_separate(rng, tol, n_elements: int) -> tuple[bool, str]:
    dirac = DiracData(0.0, 1.0)
    cfg = SamplerConfig(seed=int(rng.integers(1 << 30)), n_elements=n_elements, psd_tol=tol)
    pairs = [_equator_pair(rng, dirac.gap, related=True) for _ in range(20)]
    report = cross_validate_pure(pairs, dirac, cfg=cfg)
    return report.sound, f"sound={report.sound} over {report.n_elements} elements"


def _check_order_axioms(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(0.0, 1.0)
    bad = 0
    for _ in range(100):
        z = rng.uniform(-0.85, 0.85)
        states = []
        t_acc, x_acc, th_acc = 0.0, 0.0, rng.uniform(-math.pi, math.pi)
        for _ in range(3):
            states.append(
                PureState(SpacetimePoint(t_acc, x_acc), PureInternalState.from_parallel(z, th_acc))
            )
            v = rng.uniform(-0.6, 0.6)
            step = rng.uniform(0.0, 1.2)
            t_acc += step
            x_acc += v * step
            th_acc = wrap_angle(th_acc + rng.choice([-1.0, 1.0]) * rng.uniform(0.0, 1.2))
        a, b, c = states
        bad += not pure_causal(a, a, dirac).related
        ab = pure_causal(a, b, dirac).related
        bc = pure_causal(b, c, dirac).related
        ac = pure_causal(a, c, dirac).related
        bad += ab and bc and not ac
    return bad == 0, f"{bad} order-axiom failures"


def _check_mixed_pure_consistency(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(0.0, 1.0)
    bad = 0
    for _ in range(60):
        a, b = _equator_pair(rng, dirac.gap, related=bool(rng.integers(2)))
        ma = MixedState(a.point, MixedInternalState.from_pure(a.internal))
        mb = MixedState(b.point, MixedInternalState.from_pure(b.internal))
        bad += pure_causal(a, b, dirac).related != mixed_causal(ma, mb, dirac).related
        ax, ay, _ = a.internal.bloch()
        bx, by, _ = b.internal.bloch()
        want = angular_distance(math.atan2(ay, ax), math.atan2(by, bx))
        got = mixed_required_angle(ma.internal, mb.internal)
        bad += abs(got - want) > 1e-8
    return bad == 0, f"{bad} mixed/pure inconsistencies"


def _check_unitary_equivariance(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(-0.4, 0.9)
    bad = 0
    for _ in range(10):
        u = InternalUnitary.haar_random(rng)
        for _ in range(10):
            a, b = _equator_pair(rng, dirac.gap, related=bool(rng.integers(2)))
            bad += not unitary_transport_check(a, b, u, dirac)
    return bad == 0, f"{bad} equivariance failures"


def _check_conformal_invariance(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(0.0, 1.0)
    cfg = SamplerConfig(seed=int(rng.integers(1 << 30)), n_elements=20)
    elements = sample_elements(cfg, dirac)
    bad = 0
    count = 0
    for el in elements:
        for _ in range(5):
            p = SpacetimePoint(rng.uniform(-2, 2), rng.uniform(-2, 2))
            m = cone_matrix_at(el, dirac, p)
            base = is_psd(m, tol)
            for omega in (1e-3, 0.5, 1.0, 2.0, 1e3):
                bad += is_psd(conformal_rescale_matrix(m, omega), tol) != base
                count += 1
    return bad == 0, f"{bad}/{count} conformal verdict flips"


def _check_dsl_derivatives(rng, tol) -> tuple[bool, str]:
    sources = [
        "sin(t)*exp(-x^2)",
        "tanh(t + x) + tanh(t - x)",
        "t^3 - 2*x^2 + t*x",
        "atan(t*x) / (2 + cos(x))",
        "exp(-(t^2 + x^2))*sin(3*t + 1)",
        "sqrt(4 + t^2 + x^2)",
        "log(3 + sin(t) + x^2)",
        "csc(2 + sin(t)*x)",
    ]
    h = 1e-5
    bad = 0
    for src in sources:
        expr = parse(src)
        for _ in range(50):
            t = rng.uniform(-1.5, 1.5)
            x = rng.uniform(-1.5, 1.5)
            got = eval_with_derivatives(expr, SpacetimePoint(t, x))
            fd_t = (
                eval_with_derivatives(expr, SpacetimePoint(t + h, x)).value
                - eval_with_derivatives(expr, SpacetimePoint(t - h, x)).value
            ) / (2 * h)
            fd_x = (
                eval_with_derivatives(expr, SpacetimePoint(t, x + h)).value
                - eval_with_derivatives(expr, SpacetimePoint(t, x - h)).value
            ) / (2 * h)
            for ad, fd in ((got.d_dt, fd_t), (got.d_dx, fd_x)):
                bad += abs(ad - fd) > max(1e-6 * max(abs(ad), abs(fd)), 1e-8)
    return bad == 0, f"{bad} derivative mismatches"


def _check_path_planner(rng, tol) -> tuple[bool, str]:
    dirac = DiracData(0.0, 1.0)
    bad = 0
    for _ in range(20):
        a, b = _equator_pair(rng, dirac.gap, related=True)
        for sample in plan_causal_path(a, b, dirac, 16):
            mid = PureState(sample.point, sample.internal)
            bad += not pure_causal(a, mid, dirac).related
            bad += not pure_causal(mid, b, dirac).related
    return bad == 0, f"{bad} infeasible path prefixes"


def run_selftest(seed: int = 0, quick: bool = False, tol: float = PSD_TOL) -> dict:
    """Run the battery; returns a JSON-ready summary with one entry per check."""
    quick_subset = {
        "pure_oracle_grid",
        "necessary_conditions",
        "null_lockout",
        "order_axioms",
        "dsl_derivatives",
        "oracle_never_separate",
    }
    checks: list[tuple[str, Callable]] = [
        ("pure_oracle_grid", _check_pure_oracle_grid),
        ("necessary_conditions", _check_necessary_conditions),
        ("null_lockout", _check_null_lockout),
        ("witness_refutation", _check_witness_refutation),
        (
            "oracle_never_separate",
            lambda rng, tol: _check_oracle_never_separate(rng, tol, 10 if quick else 60),
        ),
        ("order_axioms", _check_order_axioms),
        ("mixed_pure_consistency", _check_mixed_pure_consistency),
        ("unitary_equivariance", _check_unitary_equivariance),
        ("conformal_invariance", _check_conformal_invariance),
        ("dsl_derivatives", _check_dsl_derivatives),
        ("path_planner_prefix", _check_path_planner),
    ]
    results: list[CheckResult] = []
    for index, (name, fn) in enumerate(checks):
        if quick and name not in quick_subset:
            continue
        rng = np.random.default_rng([seed, index])
        try:
            passed, detail = fn(rng, tol)
        except Exception as err:  # a crashed check is a failed check
            passed, detail = False, f"{type(err).__name__}: {err}"
        results.append(CheckResult(name, bool(passed), detail))
    return {
        "schema": "causalnc/1",
        "seed": seed,
        "quick": quick,
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
