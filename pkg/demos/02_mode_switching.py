"""Grip-or-flip: how hard to press before the finger changes mode.

The same finger serves two uses.  Held below the switching force it
pinches objects like a parallel gripper; pressed at or past it along an
opening direction, it flips over and lets the hand roll an object
instead.  This walkthrough asks, for a few press directions, where that
boundary sits and how much grip force stays safely on the pinching side.

CLI equivalent:  linkstat analyze --zeta-deg 5
"""

import math

from linkstat import (
    GraspMode,
    NotOpeningError,
    default_parameters,
    parallel_grip_budget,
    select_mode,
    switching_threshold,
)

p = default_parameters()

print("switching thresholds by press direction")
print("-" * 56)
for zeta_deg in (-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 25.0):
    try:
        t = switching_threshold(p, math.radians(zeta_deg))
    except NotOpeningError as exc:
        print(f"{zeta_deg:+7.1f} deg : never flips ({exc})")
        continue
    budget = parallel_grip_budget(t)
    print(
        f"{zeta_deg:+7.1f} deg : flips at {t:5.2f} N, "
        f"grip budget {budget:5.2f} N"
    )

print()
print("mode decisions at 0 deg")
print("-" * 56)
t = switching_threshold(p, 0.0)
for applied in (2.0, 4.0, t - 0.01, t, t + 0.5):
    mode = select_mode(applied, t)
    label = "parallel grip" if mode is GraspMode.PARALLEL_GRIP else "turn over"
    print(f"apply {applied:6.3f} N -> {label}")

print()
print("The boundary itself belongs to turn-over: pressing exactly the")
print("threshold force flips the finger.  Planning grip forces at 80")
print("percent of the threshold keeps a guard band against the flip.")
