"""Map the envelope of press directions that swing the finger open.

The closed finger resists a press on its tip pad for most directions:
the contact force just wedges the linkage tighter.  Inside a band of
directions, though, the same press drives the joints the other way and
the finger swings open.  This script sweeps that band for the reference
build and prints the refined edges.

CLI equivalent:  linkstat sweep --out envelope.csv --svg envelope.svg
"""

import math

from linkstat import default_parameters, opening_interval, sweep

p = default_parameters()

print("=" * 64)
print("opening envelope, reference build")
print("=" * 64)

curve = sweep(p)  # -30 to +90 degrees, half-degree grid
print(f"samples: {len(curve.samples)}")
print(f"samples that open: {curve.opening_count}")

for iv in opening_interval(curve):
    print(
        f"opening band: {math.degrees(iv.lo):+8.3f} to "
        f"{math.degrees(iv.hi):+8.3f} deg "
        f"(width {math.degrees(iv.width):.3f} deg)"
    )

print()
print("verdict detail along the sweep:")
print(f"{'zeta_deg':>9}  {'opens':>6}  {'force_N':>8}  reason")
for sample in curve.samples[::20]:
    d = sample.decision
    force = f"{d.required_force:8.3f}" if d.opens else "       -"
    reason = "" if d.opens else (d.blocked_reason.value if d.blocked_reason else "")
    print(f"{math.degrees(sample.zeta):9.1f}  {str(d.opens):>6}  {force}  {reason}")

print()
print("Directions below the band keep the pad pressed into the object;")
print("directions above it would need a negative contact force, which a")
print("one-sided contact cannot supply.  Between the edges the finger")
print("opens at roughly 4.4 to 5.2 N for this build.")
