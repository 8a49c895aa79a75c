"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; the whole battery is sized for well under a minute on a laptop.
"""

import math

import numpy as np

from causalnc.causality import (
    MixedState,
    PureState,
    Reason,
    mixed_causal,
    mixed_required_angle,
    plan_causal_path,
    pure_causal,
    unitary_transport_check,
)
from causalnc.cone import ConeMatrix, cone_matrix_at, conformal_rescale_matrix, is_psd
from causalnc.fields import BinOp, Call, Num, Pow, Var, eval_with_derivatives, parse, to_source
from causalnc.minkowski import SpacetimePoint
from causalnc.oracle import SamplerConfig, cross_validate_pure, sample_elements
from causalnc.states import (
    DiracData,
    InternalUnitary,
    MixedInternalState,
    PureInternalState,
    angular_distance,
    wrap_angle,
)
from causalnc.witness import refute_with_witness

D_UNIT = DiracData(0.0, 1.0)


def _report(number: int, description: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"{status}: criterion {number} - {description}{suffix}")
    assert ok, f"criterion {number}: {description}{suffix}"


def _random_same_latitude_pair(rng, gap, related, z_range=0.8, dtheta_range=(0.2, math.pi - 0.2)):
    z = rng.uniform(-z_range, z_range)
    theta = rng.uniform(-math.pi, math.pi)
    dtheta = rng.uniform(*dtheta_range)
    factor = rng.uniform(1.05, 1.6) if related else rng.uniform(0.15, 0.92)
    length = factor * dtheta / gap
    v = rng.uniform(-0.6, 0.6)
    t_span = length / math.sqrt(1.0 - v * v)
    p = SpacetimePoint(rng.uniform(-1.2, -0.2), rng.uniform(-0.4, 0.4))
    q = SpacetimePoint(p.t + t_span, p.x + v * t_span)
    return (
        PureState(p, PureInternalState.from_parallel(z, theta)),
        PureState(q, PureInternalState.from_parallel(z, wrap_angle(theta + rng.choice([-1.0, 1.0]) * dtheta))),
    )


def test_criterion_1_pure_oracle_exactness():
    gaps = (0.5, 1.0, 2.0, 5.0, 10.0)
    t_values = np.linspace(0.0, 3.0, 20)
    dx_fractions = np.linspace(-1.0, 1.0, 20)
    dthetas = np.linspace(0.0, math.pi, 20)
    internals = [PureInternalState.from_parallel(0.0, float(a)) for a in dthetas]
    start_internal = PureInternalState.from_parallel(0.0, 0.0)
    origin = SpacetimePoint(0.0, 0.0)
    mismatches = 0
    checked = 0
    for gap in gaps:
        dirac = DiracData(0.0, gap)
        for t_span in t_values:
            for frac in dx_fractions:
                dx = float(frac * t_span)
                q = SpacetimePoint(float(t_span), dx)
                available = math.sqrt(max(t_span**2 - dx**2, 0.0))
                for dtheta, internal in zip(dthetas, internals):
                    required = float(dtheta) / gap
                    got = pure_causal(
                        PureState(origin, start_internal), PureState(q, internal), dirac
                    ).related
                    checked += 1
                    if abs(available - required) <= 1e-12:
                        continue  # boundary: either decision is within tolerance
                    if got != (available >= required):
                        mismatches += 1
    _report(
        1,
        "pure-state oracle matches sqrt(T^2-dx^2) >= dtheta/gap on the 20x20x20x5 grid",
        mismatches == 0,
        f"{checked} cases, {mismatches} mismatches",
    )


def test_criterion_2_necessary_condition_suites():
    rng = np.random.default_rng(2001)
    dirac = DiracData(0.2, 1.4)
    bad_latitude = 0
    for _ in range(1000):
        z1 = rng.uniform(-0.9, 0.9)
        offset = rng.choice([-1.0, 1.0]) * rng.uniform(0.01, 0.4)
        z2 = float(np.clip(z1 + offset, -0.95, 0.95))
        if abs(z2 - z1) < 1e-6:
            z2 = z1 + 0.01
        a = PureState(
            SpacetimePoint(0, 0), PureInternalState.from_parallel(z1, rng.uniform(-3, 3))
        )
        b = PureState(
            SpacetimePoint(rng.uniform(1, 6), 0),
            PureInternalState.from_parallel(z2, rng.uniform(-3, 3)),
        )
        v = pure_causal(a, b, dirac)
        bad_latitude += v.related or v.reason is not Reason.LATITUDE_MISMATCH

    degenerate = DiracData(0.8, 0.8)
    bad_degenerate = 0
    for _ in range(1000):
        z = rng.uniform(-0.9, 0.9)
        th = rng.uniform(-math.pi, math.pi)
        dth = rng.choice([-1.0, 1.0]) * rng.uniform(0.05, 3.0)
        a = PureState(SpacetimePoint(0, 0), PureInternalState.from_parallel(z, th))
        b = PureState(
            SpacetimePoint(rng.uniform(1, 6), 0),
            PureInternalState.from_parallel(z, wrap_angle(th + dth)),
        )
        v = pure_causal(a, b, degenerate)
        bad_degenerate += v.related or v.reason is not Reason.DEGENERATE_INTERNAL_CHANGE

    bad_order = 0
    for i in range(1000):
        xi = PureInternalState.from_parallel(rng.uniform(-0.9, 0.9), rng.uniform(-3, 3))
        if i % 2:  # spacelike separation
            dt = rng.uniform(-2.0, 2.0)
            dx = (abs(dt) + rng.uniform(0.01, 2.0)) * rng.choice([-1.0, 1.0])
        else:  # past-directed timelike separation
            dt = -rng.uniform(0.01, 2.0)
            dx = rng.uniform(-1.0, 1.0) * abs(dt)
        a = PureState(SpacetimePoint(0, 0), xi)
        b = PureState(SpacetimePoint(dt, dx), xi)
        v = pure_causal(a, b, dirac)
        bad_order += v.related or v.reason is not Reason.SPACETIME_ORDER
    ok = bad_latitude == 0 and bad_degenerate == 0 and bad_order == 0
    _report(
        2,
        "latitude, degeneracy and spacetime-order necessary conditions (3 x 1000 pairs)",
        ok,
        f"failures: latitude {bad_latitude}, degenerate {bad_degenerate}, order {bad_order}",
    )


def test_criterion_3_null_geodesic_lockout():
    rng = np.random.default_rng(2003)
    bad = 0
    for _ in range(100):
        r = rng.uniform(0.2, 4.0)
        side = rng.choice([-1.0, 1.0])
        z = rng.uniform(-0.8, 0.8)
        th = rng.uniform(-math.pi, math.pi)
        dth = rng.choice([-1.0, 1.0]) * rng.uniform(0.02, math.pi - 0.02)
        a = PureState(SpacetimePoint(0, 0), PureInternalState.from_parallel(z, th))
        b = PureState(
            SpacetimePoint(r, side * r), PureInternalState.from_parallel(z, wrap_angle(th + dth))
        )
        bad += pure_causal(a, b, D_UNIT).related
    _report(3, "lightlike separation forbids internal motion (100 pairs)", bad == 0, f"{bad} bad")


def test_criterion_4_witness_refutation_completeness():
    rng = np.random.default_rng(2004)
    gaps = (0.5, 1.0, 2.0)
    failures = []
    for i in range(100):
        gap = gaps[i % len(gaps)]
        dirac = DiracData(0.0, gap)
        pair = _random_same_latitude_pair(
            rng, gap, related=False, dtheta_range=(0.1 + 1e-6, math.pi - 0.1 - 1e-6)
        )
        cert = refute_with_witness(pair[0], pair[1], dirac, n_samples=64)
        ok = cert.margin > 0 and cert.psd.passed and len(cert.psd.samples) == 64
        ok = ok and abs(cert.lhs_numeric - cert.lhs) <= 1e-8 * max(1.0, abs(cert.lhs))
        for s in cert.psd.samples:
            # coefficient tolerances scale with the k-th power of the matrix scale
            ok = ok and s.c1 >= -1e-12 * s.scale and s.c2 >= -1e-12 * s.scale**2
            ok = ok and abs(s.c3) <= 1e-9 * s.scale**3 and abs(s.c4) <= 1e-9 * s.scale**4
        if not ok:
            failures.append(i)
    _report(
        4,
        "witness certificates for 100 non-related pairs: strict margin, coefficients, integration",
        not failures,
        f"failing indices {failures[:5]}" if failures else "all margins strict",
    )


def test_criterion_5_oracle_never_separates_related_pairs():
    rng = np.random.default_rng(2005)
    pairs = []
    while len(pairs) < 100:
        pair = _random_same_latitude_pair(rng, D_UNIT.gap, related=True)
        inside = all(
            -3.0 <= s.point.t <= 3.0 and -3.0 <= s.point.x <= 3.0 for s in pair
        )
        if inside and pure_causal(*pair, D_UNIT).related:
            pairs.append(pair)
    cfg = SamplerConfig(seed=50_001, n_elements=10_000)
    report = cross_validate_pure(pairs, D_UNIT, cfg=cfg)
    worst = max(c.worst_margin for c in report.pairs)
    _report(
        5,
        "10^4 certified causal elements never separate 100 related pairs",
        report.sound,
        f"worst margin {worst:.3e} (tolerance 1e-10)",
    )


def test_criterion_6_order_axioms():
    rng = np.random.default_rng(2006)
    reflexivity_bad = 0
    antisymmetry_bad = 0
    antisymmetry_cases = 0
    transitivity_bad = 0
    chains = 0
    for i in range(1000):
        z = rng.uniform(-0.85, 0.85)
        t_acc = rng.uniform(-1, 0)
        x_acc = rng.uniform(-0.5, 0.5)
        theta = rng.uniform(-math.pi, math.pi)
        states = []
        for _ in range(3):
            states.append(
                PureState(SpacetimePoint(t_acc, x_acc), PureInternalState.from_parallel(z, theta))
            )
            step = rng.uniform(0.0, 1.5)
            t_acc += step
            x_acc += rng.uniform(-0.7, 0.7) * step
            theta = wrap_angle(theta + rng.choice([-1.0, 1.0]) * rng.uniform(0.0, 1.3))
        a, b, c = states
        if i % 10 == 0:  # keep the mutual-relation branch of antisymmetry non-vacuous
            b = PureState(a.point, a.internal)
        reflexivity_bad += not pure_causal(a, a, D_UNIT).related
        ab = pure_causal(a, b, D_UNIT).related
        ba = pure_causal(b, a, D_UNIT).related
        bc = pure_causal(b, c, D_UNIT).related
        if ab and ba:
            antisymmetry_cases += 1
            antisymmetry_bad += not (
                a.point.almost_equal(b.point)
                and angular_distance_of(a.internal, b.internal) <= 1e-11
            )
        if ab and bc:
            chains += 1
            transitivity_bad += not pure_causal(a, c, D_UNIT).related
    ok = (
        reflexivity_bad == 0
        and antisymmetry_bad == 0
        and antisymmetry_cases > 0
        and transitivity_bad == 0
    )
    _report(
        6,
        "reflexivity, antisymmetry and transitivity on 1000 same-latitude triples",
        ok,
        f"{chains} transitive chains, {antisymmetry_cases} mutual pairs, 0 failures"
        if ok
        else f"failures r={reflexivity_bad} a={antisymmetry_bad} t={transitivity_bad}",
    )


def angular_distance_of(a: PureInternalState, b: PureInternalState) -> float:
    xa, ya, _ = a.bloch()
    xb, yb, _ = b.bloch()
    return angular_distance(math.atan2(ya, xa), math.atan2(yb, xb))


def test_criterion_7_mixed_pure_consistency():
    rng = np.random.default_rng(2007)
    verdict_mismatch = 0
    angle_mismatch = 0
    for i in range(1000):
        pair = _random_same_latitude_pair(rng, D_UNIT.gap, related=bool(i % 2))
        ma = MixedState(pair[0].point, MixedInternalState.from_pure(pair[0].internal))
        mb = MixedState(pair[1].point, MixedInternalState.from_pure(pair[1].internal))
        verdict_mismatch += (
            mixed_causal(ma, mb, D_UNIT).related != pure_causal(*pair, D_UNIT).related
        )
        want = angular_distance_of(pair[0].internal, pair[1].internal)
        got = mixed_required_angle(ma.internal, mb.internal)
        angle_mismatch += abs(got - want) > 1e-8
    ok = verdict_mismatch == 0 and angle_mismatch == 0
    _report(
        7,
        "mixed oracle agrees with the pure oracle on 1000 unit-Bloch pairs",
        ok,
        f"verdict mismatches {verdict_mismatch}, angle mismatches {angle_mismatch}",
    )


def test_criterion_8_unitary_equivariance():
    rng = np.random.default_rng(2008)
    dirac = DiracData(-0.3, 0.9)
    unitaries = [InternalUnitary.haar_random(rng) for _ in range(100)]
    pairs = []
    for i in range(100):
        if i % 3 == 2:  # include latitude-mismatched pairs
            a = PureState(
                SpacetimePoint(0, 0),
                PureInternalState.from_parallel(rng.uniform(-0.8, 0.8), rng.uniform(-3, 3)),
            )
            b = PureState(
                SpacetimePoint(rng.uniform(0.5, 3), 0),
                PureInternalState.from_parallel(rng.uniform(-0.8, 0.8), rng.uniform(-3, 3)),
            )
            pairs.append((a, b))
        else:
            pairs.append(_random_same_latitude_pair(rng, dirac.gap, related=bool(i % 2)))
    bad = 0
    for u in unitaries:
        for pair in pairs:
            bad += not unitary_transport_check(pair[0], pair[1], u, dirac)
    _report(8, "verdicts invariant under 100 unitaries x 100 pairs", bad == 0, f"{bad} flips")


def test_criterion_9_conformal_invariance():
    rng = np.random.default_rng(2009)
    matrices = []
    cfg = SamplerConfig(seed=50_009, n_elements=50)
    for el in sample_elements(cfg, D_UNIT):
        for _ in range(10):
            p = SpacetimePoint(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5))
            matrices.append(cone_matrix_at(el, D_UNIT, p))
    while len(matrices) < 1000:
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = g + g.conj().T
        eigs = np.linalg.eigvalsh(h)
        if abs(eigs[0]) < 1e-2:  # keep verdicts away from the tolerance band
            continue
        matrices.append(ConeMatrix(h))
    flips = 0
    for m in matrices:
        base = is_psd(m)
        for omega in (1e-3, 0.5, 1.0, 2.0, 1e3):
            flips += is_psd(conformal_rescale_matrix(m, omega)) != base
    _report(
        9,
        "PSD verdict invariant under conformal rescaling on 1000 matrices x 5 factors",
        flips == 0,
        f"{flips} flips",
    )


def _random_smooth_expression(rng):
    """A random globally smooth field with moderate derivatives."""

    def coeff(lo=0.2, hi=1.5):
        return Num(round(float(rng.uniform(lo, hi)), 4))

    def linear_arg():
        node = BinOp(
            "+",
            BinOp("*", coeff(), Var("t")),
            BinOp("*", coeff(), Var("x")),
        )
        return BinOp("+", node, coeff(0.0, 2.0))

    def term():
        kind = rng.integers(5)
        if kind == 0:
            return BinOp("*", coeff(), Call(("sin", "cos")[rng.integers(2)], linear_arg()))
        if kind == 1:
            return BinOp("*", coeff(), Call("tanh", linear_arg()))
        if kind == 2:
            return BinOp("*", coeff(), Call("atan", linear_arg()))
        if kind == 3:
            gauss = Call("exp", BinOp("*", Num(0.5), BinOp("+", Pow(Var("t"), 2), Pow(Var("x"), 2))))
            return BinOp("/", coeff(), gauss)
        return BinOp(
            "*", coeff(), BinOp("*", Pow(Var("t"), int(rng.integers(1, 3))), Var("x"))
        )

    node = term()
    for _ in range(int(rng.integers(1, 3))):
        node = BinOp(("+", "-")[rng.integers(2)], node, term())
    return parse(to_source(node))  # round-trips through the grammar


def test_criterion_10_dsl_derivative_fidelity():
    rng = np.random.default_rng(2010)
    h = 1e-5
    bad = 0
    total = 0
    for _ in range(50):
        expr = _random_smooth_expression(rng)
        for _ in range(100):
            t = rng.uniform(-1.5, 1.5)
            x = rng.uniform(-1.5, 1.5)
            got = eval_with_derivatives(expr, SpacetimePoint(t, x))
            f = lambda tt, xx: eval_with_derivatives(expr, SpacetimePoint(tt, xx)).value
            fd_t = (f(t + h, x) - f(t - h, x)) / (2 * h)
            fd_x = (f(t, x + h) - f(t, x - h)) / (2 * h)
            total += 2
            for ad, fd in ((got.d_dt, fd_t), (got.d_dx, fd_x)):
                bad += abs(ad - fd) > max(1e-6 * max(abs(ad), abs(fd)), 1e-8)
    _report(
        10,
        "dual-number partials match central differences on 50 expressions x 100 points",
        bad == 0,
        f"{bad}/{total} mismatches",
    )


def test_criterion_11_path_planner_feasibility():
    rng = np.random.default_rng(2011)
    infeasible = 0
    for _ in range(100):
        pair = _random_same_latitude_pair(rng, D_UNIT.gap, related=True)
        path = plan_causal_path(pair[0], pair[1], D_UNIT, 32)
        for sample in path:
            mid = PureState(sample.point, sample.internal)
            infeasible += not pure_causal(pair[0], mid, D_UNIT).related
            infeasible += not pure_causal(mid, pair[1], D_UNIT).related
    _report(
        11,
        "every path prefix is itself causally related (100 pairs, n=32)",
        infeasible == 0,
        f"{infeasible} infeasible samples",
    )
