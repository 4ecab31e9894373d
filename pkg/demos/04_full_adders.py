"""The seven full-adder designs and their exhaustive verification.

Each single-digit adder is built as a transistor netlist and checked against
integer addition on every input combination.  Ternary and quaternary adders
exist in two carry flavors: the reduced swing keeps the carry at the digit-1
level (vdd/2 or vdd/3), the full swing runs it rail to rail.
"""

import itertools

from mvladders.adders import AdderVariant, CarrySwing, all_single_stage_designs, build_full_adder, verify_design
from mvladders.analysis import area
from mvladders.solver import solve_dc

print(f"{'design':26s} {'devices':>8} {'area nm':>8} {'vectors':>8} {'failures':>9}")
for design in all_single_stage_designs():
    report = verify_design(design)
    print(
        f"{design.label:26s} {design.netlist.device_count:>8} "
        f"{area(design.netlist):>8.1f} {report.vectors:>8} {report.failures:>9}"
    )

print()
print("one full truth table, solved from the transistors (TFA2, full swing):")
fa = build_full_adder(AdderVariant.TFA2, CarrySwing.FULL)
maps = fa.input_maps()
outs = fa.output_maps()
print("  a b cin | sum cout")
for a, b, cin in itertools.product(range(3), range(3), (0, 1)):
    state = solve_dc(
        fa.netlist,
        {"A": maps["A"].volts(a), "B": maps["B"].volts(b), "Cin": maps["Cin"].volts(cin)},
    )
    s = outs["Sum"].decode(state.voltage("Sum"))
    c = outs["Cout"].decode(state.voltage("Cout"))
    print(f"  {a} {b}  {cin}  |  {s}   {c}")

print()
print("carry stays binary at every vector: the carry-1 voltage is the swing")
print(f"voltage ({fa.swing_v} V here), never an intermediate digit level.")
