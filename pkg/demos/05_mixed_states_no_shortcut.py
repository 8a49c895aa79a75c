"""No causal shortcut leads through the interior of the Bloch ball.

Shortest-distance intuition suggests cutting across the ball between two
points of the same parallel.  Causally it buys nothing: the proper time a
mixed pair requires is governed by the largest projected arc between the
Bloch vectors, and for pure states on a parallel that equals the plain
angular distance.  Unitary (pure-state) evolution is therefore as good as
any mixed detour.
"""

import math

from causalnc import (
    DiracData,
    MixedInternalState,
    MixedState,
    SpacetimePoint,
    mixed_causal,
    mixed_required_angle,
)

dirac = DiracData(0.0, 1.0)
quarter = math.pi / 2

pure_a = MixedInternalState(1.0, 0.0, 0.0)
pure_b = MixedInternalState(math.cos(quarter), math.sin(quarter), 0.0)
print("pure rim states a quarter turn apart:")
print(f"  required angle: {mixed_required_angle(pure_a, pure_b):.6f}  (= pi/2)\n")

print("shrinking both vectors toward the centre (the 'shortcut' family):")
print(f"{'radius':>8} {'required angle':>15}")
for radius in (1.0, 0.8, 0.6, 0.4, 0.2, 0.0):
    a = MixedInternalState(radius, 0.0, 0.0)
    b = MixedInternalState(radius * math.cos(quarter), radius * math.sin(quarter), 0.0)
    print(f"{radius:>8.2f} {mixed_required_angle(a, b):>15.6f}")

print("\nShrinking the radius does reduce the requirement between the shrunken")
print("states, but to *return* to the rim the missing arc must still be paid:")
centre = MixedInternalState(0.0, 0.0, 0.0)
print(f"  rim -> centre: {mixed_required_angle(pure_a, centre):.6f}")
print(f"  centre -> rim: {mixed_required_angle(centre, pure_b):.6f}")
print(f"  sum           : {2 * mixed_required_angle(pure_a, centre):.6f}  >= pi/2 direct\n")

p = SpacetimePoint(0.0, 0.0)
for t_span in (2.0, 1.0):
    verdict = mixed_causal(
        MixedState(p, pure_a), MixedState(SpacetimePoint(t_span, 0.0), pure_b), dirac
    )
    print(
        f"T = {t_span}: related = {verdict.related} "
        f"(needs {verdict.bound_required:.4f}, has {verdict.bound_available:.4f})"
    )
