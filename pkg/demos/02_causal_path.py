"""A feasible trajectory through the space of pure states.

For a related pair the planner emits samples of an explicit path: the
spacetime leg is the straight worldline, and the internal angle advances at
the maximal admissible rate until the target angle is reached, then holds.
Every prefix of the path is itself a causal relation, so the samples can be
checked independently — and they make the plottable data for a worldline
picture (s, t, x, theta, z).
"""

import math

from causalnc import (
    DiracData,
    PureInternalState,
    PureState,
    SpacetimePoint,
    plan_causal_path,
    pure_causal,
)

dirac = DiracData(0.0, 1.0)
start = PureState(SpacetimePoint(0.0, 0.0), PureInternalState.from_parallel(0.0, 0.0))
end = PureState(SpacetimePoint(2.0, 0.6), PureInternalState.from_parallel(0.0, math.pi / 2))

verdict = pure_causal(start, end, dirac)
print(
    f"pair related: {verdict.related} "
    f"(needs {verdict.bound_required:.4f} of proper time, has {verdict.bound_available:.4f})\n"
)

path = plan_causal_path(start, end, dirac, n=10)
print(f"{'s':>6} {'t':>7} {'x':>7} {'theta':>8} {'prefix ok':>10}")
for sample in path:
    mid = PureState(sample.point, sample.internal)
    ok = pure_causal(start, mid, dirac).related and pure_causal(mid, end, dirac).related
    x_, y_, _ = sample.internal.bloch()
    theta = math.atan2(y_, x_)
    print(f"{sample.s:>6.2f} {sample.point.t:>7.3f} {sample.point.x:>7.3f} {theta:>8.4f} {str(ok):>10}")

print("\nThe angle ramps linearly in proper time and plateaus once the quarter")
print("turn is complete; the same table is what the CLI's plan-path emits as CSV.")
