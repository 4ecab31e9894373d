"""Device calibration: chirality index -> diameter and threshold voltage.

The whole library leans on two one-parameter laws. A zigzag nanotube's
diameter grows linearly with the chirality index n, and the threshold
magnitude falls off as 1/diameter. This script prints the fitted laws next
to the calibration rows they were pinned against.
"""

from mvladders.device import (
    CALIBRATION_ROWS,
    NM_PER_CHIRALITY_INDEX,
    VTH_NUMERATOR_V_NM,
    diameter_nm,
    threshold_voltage_v,
)

print(f"diameter law:  d = {NM_PER_CHIRALITY_INDEX} * n  [nm]")
print(f"threshold law: Vth = {VTH_NUMERATOR_V_NM} / d  [V]")
print()
print(f"{'n':>4} {'d ref':>8} {'d fit':>8} {'err%':>6}   {'Vth ref':>8} {'Vth fit':>8} {'err%':>6}")
for n, d_ref, vth_ref in CALIBRATION_ROWS:
    d = diameter_nm(n)
    vth = threshold_voltage_v(n)
    print(
        f"{n:>4} {d_ref:>8.3f} {d:>8.3f} {100 * (d - d_ref) / d_ref:>6.2f}   "
        f"{vth_ref:>8.3f} {vth:>8.3f} {100 * (vth - vth_ref) / vth_ref:>6.2f}"
    )

print()
print("Why it matters: a multi-valued gate picks its switching level purely")
print("by pairing chiralities.  For example an N at n=19 (Vth 0.293 V) turns")
print("on between the ternary 0 and 1 levels, while an N at n=37 (0.150 V)")
print("already conducts at the quaternary 0.3 V level.")

print()
print("The menu used by the circuit generators:")
for n in (8, 10, 13, 19, 29, 37):
    print(f"  n={n:>2}: d={diameter_nm(n):5.3f} nm, |Vth|={threshold_voltage_v(n):5.3f} V")
