"""Search the linkage design space for a target opening behaviour.

The reference build refuses to open when pressed at -15 degrees.  Ask
the search to fix that: find a build whose opening band covers -10 to
+15 degrees AND whose switching force at -15 degrees lands between 3 and
8 N, varying only the slotted strut angle.  Then ask for something no
spring can do, and watch the search say so instead of pretending.

CLI equivalent:  linkstat optimize --design target.txt --out found.txt
"""

import math

from linkstat import (
    DesignSpec,
    default_parameters,
    optimize_design,
    sensitivity,
)

rad = math.radians
p = default_parameters()

print("=" * 64)
print("reachable target: open the band down to -15 deg")
print("=" * 64)
spec = DesignSpec(
    interval_lo=rad(-10.0),
    interval_hi=rad(15.0),
    press_angle=rad(-15.0),
    threshold_lo=3.0,
    threshold_hi=8.0,
    free=("theta2",),
    bounds={"theta2": (rad(10.0), rad(30.0))},
)
result = optimize_design(spec, p, budget=400)
print(f"status      : {result.status.value}")
print(f"evaluations : {result.evaluations}")
print(f"theta2      : {math.degrees(p.theta2):.2f} -> "
      f"{math.degrees(result.parameters.theta2):.2f} deg")
record = result.verification
assert record is not None
print(
    f"verified    : band [{math.degrees(record.interval_lo):+.2f}, "
    f"{math.degrees(record.interval_hi):+.2f}] deg, "
    f"threshold {record.threshold:.2f} N"
)

print()
print("local sensitivities around the found build (balance force per unit)")
found = result.parameters
for name in ("theta2", "l3", "spring_k"):
    grad = sensitivity(found, name, rad(0.0))
    print(f"  d(xi)/d({name}) = {grad:+.3f}")

print()
print("=" * 64)
print("impossible target: a kilo-newton press from a soft spring")
print("=" * 64)
hopeless = DesignSpec(
    interval_lo=rad(-10.0),
    interval_hi=rad(15.0),
    press_angle=rad(0.0),
    threshold_lo=1000.0,
    threshold_hi=1e9,
    free=("spring_k",),
    bounds={"spring_k": (0.01, 1.0)},
)
blocked = optimize_design(hopeless, p, budget=60)
print(f"status      : {blocked.status.value}")
print(f"evaluations : {blocked.evaluations}")
for violation in blocked.violations:
    print(f"violation   : {violation}")
