import itertools
from dataclasses import replace

import numpy as np
import pytest

from mvladders.device import CntfetSpec, Polarity
from mvladders.gates import GateKind, build
from mvladders.logic import VoltageMap
from mvladders.netlist import Device, NetlistBuilder
from mvladders.solver import (
    NonConvergenceError,
    SolverError,
    compile_netlist,
    conducts,
    solve_dc,
    solve_dc_batch,
    step_waveforms,
)


def _dev(pol, n):
    return Device(CntfetSpec(pol, n), "g", "s", "d")


def test_conducts_examples():
    # n=19 N with mid gate passes a low channel
    assert conducts(_dev(Polarity.N, 19), 0.45, 0.0, 0.0)
    # n=10 P with 0.45 gate cannot pass 0.9 (overdrive below threshold)
    assert not conducts(_dev(Polarity.P, 10), 0.45, 0.9, 0.9)
    # grounded-gate N never conducts for non-negative channels
    for va, vb in itertools.product((0.0, 0.45, 0.9), repeat=2):
        assert not conducts(_dev(Polarity.N, 19), 0.0, va, vb)


def test_inverter_dc():
    inv = build(GateKind("Inverter"))
    assert solve_dc(inv, {"a": 0.0}).voltage("y") == pytest.approx(0.9)
    assert solve_dc(inv, {"a": 0.9}).voltage("y") == pytest.approx(0.0)


def test_nti_dc_matches_table():
    nti = build(GateKind("NTI"))
    vmap = VoltageMap(0.9, 3)
    expect = {0: 2, 1: 0, 2: 0}
    for digit, out in expect.items():
        state = solve_dc(nti, {"a": vmap.volts(digit)})
        assert state.voltage("y") == pytest.approx(vmap.volts(out))
        assert not state.conflicts


def _conflict_fixture():
    b = NetlistBuilder()
    b.add_supply("vdd", 0.9)
    b.add_supply("gnd", 0.0)
    b.add_input("a", 2)
    b.add_output("y", 2)
    # always-on bridge between the rails
    b.add_device(Polarity.N, 37, "vdd", "gnd", "vdd")
    return b.build("clash")


def test_supply_conflict_reported():
    state = solve_dc(_conflict_fixture(), {"a": 0.0})
    assert len(state.conflicts) == 1
    conflict = state.conflicts[0]
    assert set(conflict.nets) >= {"vdd", "gnd"}
    assert conflict.voltages == (0.0, 0.9)
    # supplies keep their declared voltages even inside the conflict
    assert state.voltage("vdd") == pytest.approx(0.9)
    assert state.voltage("gnd") == pytest.approx(0.0)


def test_missing_input_rejected():
    inv = build(GateKind("Inverter"))
    with pytest.raises(SolverError):
        solve_dc(inv, {})
    with pytest.raises(SolverError):
        solve_dc(inv, {"a": 0.0, "nope": 1.0})


def test_unflattened_rejected():
    from mvladders.adders import AdderVariant, CpaConfig, build_cpa
    from mvladders.logic import CarrySwing

    cpa = build_cpa(CpaConfig(AdderVariant.BFA1_14T, 2, CarrySwing.FULL))
    with pytest.raises(SolverError):
        solve_dc(cpa.hierarchical, {})


def test_determinism_under_device_order():
    nti = build(GateKind("NTI"))
    shuffled = replace(nti, devices=tuple(reversed(nti.devices)))
    for volts in (0.0, 0.45, 0.9):
        s1 = solve_dc(nti, {"a": volts})
        s2 = solve_dc(shuffled, {"a": volts})
        assert s1.voltages == s2.voltages
        assert s1.floating == s2.floating


def test_oscillating_topology_reports_nonconvergence():
    # a pulldown gated by its own drain: pulling the node up turns the
    # pulldown on, which poisons the node, which turns it back off
    b = NetlistBuilder()
    b.add_supply("vdd", 0.9)
    b.add_supply("gnd", 0.0)
    b.add_input("a", 2)
    b.add_output("y", 2)
    b.add_device(Polarity.P, 19, "gnd", "vdd", "y")
    b.add_device(Polarity.N, 19, "y", "gnd", "y")
    with pytest.raises(NonConvergenceError):
        solve_dc(b.build("selfgate"), {"a": 0.0})


def test_step_waveforms_constant_inputs():
    inv = build(GateKind("Inverter"))
    trace = step_waveforms(inv, {"a": [1, 1, 1]})
    assert len(trace) == 3
    assert all(not c for c in trace.changes)
    v = [s.voltage("y") for s in trace.states]
    assert v == [v[0]] * 3


def test_step_waveforms_records_deltas_and_retention():
    mux = build(GateKind("Mux3Ternary"))
    waves = {"d0": [0, 0], "d1": [2, 2], "d2": [1, 1], "s": [0, 1]}
    trace = step_waveforms(mux, waves)
    assert trace.states[0].voltage("y") == pytest.approx(0.0)
    assert trace.states[1].voltage("y") == pytest.approx(0.9)
    assert "y" in trace.changes[1]
    # the series midpoint of the disabled branch keeps its old voltage
    floats = trace.states[1].floating
    retained = [n for n in floats if trace.states[1].voltage(n) is not None]
    assert trace.times == (0.0, 1e-9)


def test_qfa2_staircase_sum_trace():
    from mvladders.adders import AdderVariant, build_full_adder

    fa = build_full_adder(AdderVariant.QFA2)
    waves = {"A": [0, 1, 2, 3, 2, 1, 0], "B": [0] * 7, "Cin": [0] * 7}
    trace = step_waveforms(fa.netlist, waves, fa.input_maps())
    vmap = VoltageMap(0.9, 4)
    digits = [vmap.decode(s.voltage("Sum")) for s in trace.states]
    assert digits == [0, 1, 2, 3, 2, 1, 0]


def test_qfa1_cin_pulse_cout_trace():
    from mvladders.adders import AdderVariant, build_full_adder

    fa = build_full_adder(AdderVariant.QFA1)
    waves = {"A": [2, 2, 2], "B": [1, 1, 1], "Cin": [0, 1, 0]}
    trace = step_waveforms(fa.netlist, waves, fa.input_maps())
    cmap = fa.output_maps()["Cout"]
    assert [cmap.decode(s.voltage("Cout")) for s in trace.states] == [0, 1, 0]


def test_warm_start_equivalence():
    from mvladders.adders import AdderVariant, build_full_adder

    fa = build_full_adder(AdderVariant.TFA2)
    waves = {"A": [0, 2, 1, 2], "B": [1, 1, 2, 0], "Cin": [0, 1, 1, 0]}
    maps = fa.input_maps()
    trace = step_waveforms(fa.netlist, waves, maps)
    final = trace.states[-1]
    cold = solve_dc(
        fa.netlist,
        {name: maps[name].volts(waves[name][-1]) for name in waves},
    )
    assert final.floating == cold.floating
    for name, volts in cold.voltages.items():
        assert final.voltage(name) == pytest.approx(volts)


def test_batch_matches_scalar():
    from mvladders.adders import AdderVariant, build_full_adder

    fa = build_full_adder(AdderVariant.TFA2)
    comp = compile_netlist(fa.netlist)
    vmap = VoltageMap(0.9, 3)
    vectors = list(itertools.product(range(3), range(3), (0, 1)))
    columns = {
        "A": np.array([vmap.volts(a) for a, _, _ in vectors]),
        "B": np.array([vmap.volts(b) for _, b, _ in vectors]),
        "Cin": np.array([0.9 * c for _, _, c in vectors]),
    }
    batch = solve_dc_batch(comp, columns)
    assert not batch.conflict.any()
    assert not batch.nonconverged.any()
    for row, (a, b, c) in enumerate(vectors):
        state = solve_dc(comp, {"A": vmap.volts(a), "B": vmap.volts(b), "Cin": 0.9 * c})
        for name in ("Sum", "Cout"):
            got = batch.values[row, comp.index[name]]
            assert got == pytest.approx(state.voltage(name))
