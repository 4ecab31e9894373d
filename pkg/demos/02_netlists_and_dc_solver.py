"""Netlists and the switch-level DC solver.

A circuit is a plain-text netlist of CNTFETs between named nets.  The
solver treats every conducting channel as an ideal switch: a group of nets
joined by conducting channels takes the voltage of the supply or input
inside it.  That gives exact rail voltages, flags rail-to-rail conflicts,
and otherwise marks nets floating.
"""

from mvladders.netlist import parse, serialize
from mvladders.solver import solve_dc

# A ternary negative inverter (NTI): asymmetric thresholds make it switch
# between the ternary 0 and 1 levels. The N (n=19, Vth 0.293 V) sees an
# overdrive at 0.45 V but the P (n=10, Vth 0.557 V) does not.
NTI = """
SUPPLY vdd 0.9
SUPPLY gnd 0
INPUT a 3
OUTPUT y 3
DEVICE N n=19 g=a s=gnd d=y
DEVICE P n=10 g=a s=vdd d=y
"""

nti = parse(NTI)
print("parsed and re-serialized canonically:")
print(serialize(nti))

print("input sweep over the three ternary levels:")
for digit, volts in enumerate((0.0, 0.45, 0.9)):
    state = solve_dc(nti, {"a": volts})
    print(f"  a = {volts:4.2f} V (digit {digit}) -> y = {state.voltage('y'):.2f} V")
print("which is the NI unary function: 0 -> 2, 1 -> 0, 2 -> 0")

# A deliberately broken circuit: an always-on device bridging the rails.
CLASH = """
SUPPLY vdd 0.9
SUPPLY gnd 0
INPUT a 2
OUTPUT y 2
DEVICE N n=37 g=vdd s=gnd d=vdd
DEVICE P n=19 g=a s=vdd d=y
DEVICE N n=19 g=a s=gnd d=y
"""

state = solve_dc(parse(CLASH), {"a": 0.0})
print()
print("a bridged pair of rails is reported, never averaged:")
for conflict in state.conflicts:
    volts = ", ".join(f"{v:g} V" for v in conflict.voltages)
    print(f"  conflict: nets {', '.join(conflict.nets)} join {volts}")

# Floating detection: a disabled transmission gate leaves its output undriven.
TGATE = """
SUPPLY gnd 0
INPUT d 3
INPUT en 2
INPUT enb 2
OUTPUT y 3
DEVICE N n=19 g=en s=d d=y
DEVICE P n=19 g=enb s=d d=y
"""
tg = parse(TGATE)
on = solve_dc(tg, {"d": 0.45, "en": 0.9, "enb": 0.0})
off = solve_dc(tg, {"d": 0.45, "en": 0.0, "enb": 0.9})
print()
print(f"enabled TGate passes the level exactly: y = {on.voltage('y'):.2f} V")
print(f"disabled TGate floats: y floating = {'y' in off.floating}")
