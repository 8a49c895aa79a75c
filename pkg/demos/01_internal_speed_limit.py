"""How far can the internal state rotate per unit of proper time?

Two states share the equator of the internal sphere but sit at different
angles along it.  The causal order only lets the internal angle advance at
the Dirac gap rate per unit of proper time, so whether the pair is related
depends on how much proper time the spacetime leg provides.
"""

import math

from causalnc import DiracData, PureInternalState, PureState, SpacetimePoint, pure_causal

gap = 1.0
dirac = DiracData(0.0, gap)
quarter_turn = math.pi / 2

start = PureState(SpacetimePoint(0.0, 0.0), PureInternalState.from_parallel(0.0, 0.0))
print(f"internal target: a quarter turn ({quarter_turn:.4f} rad) at Dirac gap {gap}")
print(f"required proper time: {quarter_turn / gap:.4f}\n")

print(f"{'T':>5} {'dx':>5} {'proper time':>12} {'related':>8}  reason")
for t_span, dx in [(1.0, 0.0), (1.5, 0.0), (1.6, 0.0), (2.0, 0.0), (2.0, 1.6), (2.0, 2.0)]:
    end = PureState(
        SpacetimePoint(t_span, dx), PureInternalState.from_parallel(0.0, quarter_turn)
    )
    verdict = pure_causal(start, end, dirac)
    print(
        f"{t_span:>5} {dx:>5} {verdict.bound_available:>12.4f} "
        f"{str(verdict.related):>8}  {verdict.reason.value}"
    )

print("\nRiding the light cone (dx = T) leaves zero proper time, so any internal")
print("motion at all is forbidden there, while a rest worldline of the same")
print("coordinate span has the most proper time to spend.")

print("\nLatitudes are causally disconnected: tilting the target off the parallel")
north_ish = PureState(
    SpacetimePoint(10.0, 0.0), PureInternalState.from_parallel(0.3, quarter_turn)
)
verdict = pure_causal(start, north_ish, dirac)
print(f"equator -> latitude 0.3 with T = 10: related = {verdict.related} ({verdict.reason.value})")

print("\nAnd a degenerate Dirac operator freezes the internal space entirely:")
frozen = pure_causal(start, PureState(SpacetimePoint(10.0, 0.0), start.internal), DiracData(1, 1))
moved = pure_causal(
    start,
    PureState(SpacetimePoint(10.0, 0.0), PureInternalState.from_parallel(0.0, 0.01)),
    DiracData(1, 1),
)
print(f"same internal state: related = {frozen.related}")
print(f"rotated by 0.01:     related = {moved.related} ({moved.reason.value})")
