"""The headline comparison: 6-bit vs 4-trit vs 3-quit carry-propagate adders.

Six CPAs computing (approximately) the same amount of information are
verified exhaustively against integer addition and then benchmarked at a
2 fF load per stage output.  The takeaways the numbers support:

- the binary CPA uses more adders yet roughly half the transistor diameter
  total of the m-valued CPAs;
- full carry swing beats reduced swing on the carry chain for both radices;
- the 0.45 V binary CPA wins power outright (quarter of its 0.9 V twin) and
  with it the PDP.

This is the same computation as `mvladders compare-cpa --cl 2`.
"""

from mvladders.cli import compare_cpa

rows, checks = compare_cpa(cl_ff=2.0)

print(f"{'design':28s} {'area nm':>8} {'in->Cout':>9} {'Cin->Cout':>10} "
      f"{'Cin->Sum':>9} {'power uW':>9} {'PDP aJ':>8}")
for r in rows:
    d = r.delays
    print(
        f"{r.design:28s} {r.area_nm:>8.1f} {d.in_cout * 1e12:>9.1f} "
        f"{d.cin_cout * 1e12:>10.1f} {d.cin_sum * 1e12:>9.1f} "
        f"{r.power_w * 1e6:>9.3f} {r.pdp_j * 1e18:>8.1f}"
    )

print()
for name, ok in checks:
    print(f"{'PASS' if ok else 'FAIL'}: {name}")

print()
print("(delay/power columns are calibrated-model values, not measurements)")
