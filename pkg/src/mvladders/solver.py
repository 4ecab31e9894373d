"""Switch-level steady-state solver with conflict and floating-node detection.

The model is an ideal switch: a conducting channel has no threshold drop, so
a channel-connected component takes exactly the voltage of the supplies or
driven inputs inside it.  Components holding sources at different voltages
are recorded as conflicts; components with no source are floating.  Devices
whose gate or whole channel is unknown default to non-conducting, and the
fixed point is capped so genuinely bistable topologies surface as
non-convergence instead of a silent wrong answer.

Two implementations share these semantics: a scalar solver used for traces
and spot checks, and a numpy batch solver used for exhaustive verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .device import Polarity
from .logic import VoltageMap
from .netlist import Device, Netlist

__all__ = [
    "Conflict",
    "DcState",
    "StepTrace",
    "SolverError",
    "NonConvergenceError",
    "conducts",
    "conduction_state",
    "compile_netlist",
    "CompiledNetlist",
    "solve_dc",
    "solve_dc_batch",
    "BatchResult",
    "step_waveforms",
    "default_input_maps",
]

_EPS = 1e-9


class SolverError(ValueError):
    """Bad solver request (unflattened netlist, missing input, ...)."""


class NonConvergenceError(RuntimeError):
    """The conduction fixed point oscillated past the iteration cap."""


@dataclass(frozen=True)
class Conflict:
    """A channel-connected component that joins sources at different voltages."""

    nets: tuple[str, ...]
    voltages: tuple[float, ...]


@dataclass
class DcState:
    """Solved node voltages for one input vector.

    ``voltages`` holds every net with a defined value, including retained
    values on floating nets during waveform stepping.  Nets in ``floating``
    have no driver; nets inside a conflict have no value at all.
    """

    voltages: dict[str, float]
    floating: frozenset[str]
    conflicts: tuple[Conflict, ...]
    iterations: int

    def voltage(self, net: str) -> float | None:
        return self.voltages.get(net)

    @property
    def ok(self) -> bool:
        return not self.conflicts


def conducts(device: Device, v_gate: float, v_a: float, v_b: float) -> bool:
    """Ideal-switch conduction test with all terminal voltages known.

    N conducts iff v_gate - min(v_a, v_b) > Vth; P iff max(v_a, v_b) - v_gate > Vth.
    """
    vth = device.spec.threshold_v
    if device.spec.polarity is Polarity.N:
        return v_gate - min(v_a, v_b) > vth
    return max(v_a, v_b) - v_gate > vth


def _conducts_partial(
    is_n: bool, vth: float, vg: float | None, vs: float | None, vd: float | None
) -> bool:
    """Conduction with possibly-unknown terminals: unknowns bias to 'off'."""
    if vg is None:
        return False
    known = [v for v in (vs, vd) if v is not None]
    if not known:
        return False
    if is_n:
        return vg - min(known) > vth
    return max(known) - vg > vth


def conduction_state(nl: "Netlist | CompiledNetlist", state: "DcState") -> tuple[bool, ...]:
    """Which devices conduct under a solved state.  Floating nets count as
    unknown even when they carry a retained voltage, matching the solver."""
    comp = _as_compiled(nl)
    val = [
        None if name in state.floating else state.voltages.get(name)
        for name in comp.names
    ]
    return tuple(
        _conducts_partial(
            comp.dev_is_n[j],
            comp.dev_vth[j],
            val[comp.dev_g[j]],
            val[comp.dev_s[j]],
            val[comp.dev_d[j]],
        )
        for j in range(comp.n_devices)
    )


@dataclass
class CompiledNetlist:
    """Index-based view of a flat netlist, shared by both solver paths."""

    netlist: Netlist
    names: tuple[str, ...]
    index: dict[str, int]
    dev_is_n: tuple[bool, ...]
    dev_vth: tuple[float, ...]
    dev_g: tuple[int, ...]
    dev_s: tuple[int, ...]
    dev_d: tuple[int, ...]
    supply_v: dict[int, float]
    input_idx: tuple[int, ...]
    output_idx: tuple[int, ...]

    @property
    def n_nets(self) -> int:
        return len(self.names)

    @property
    def n_devices(self) -> int:
        return len(self.dev_g)

    @property
    def iteration_cap(self) -> int:
        return 2 + 2 * self.n_devices


def compile_netlist(nl: Netlist) -> CompiledNetlist:
    if not nl.is_flat:
        raise SolverError(f"netlist {nl.name!r} must be flattened before solving")
    names = tuple(nl.nets)
    index = {n: i for i, n in enumerate(names)}
    return CompiledNetlist(
        netlist=nl,
        names=names,
        index=index,
        dev_is_n=tuple(d.spec.polarity is Polarity.N for d in nl.devices),
        dev_vth=tuple(d.spec.threshold_v for d in nl.devices),
        dev_g=tuple(index[d.gate] for d in nl.devices),
        dev_s=tuple(index[d.source] for d in nl.devices),
        dev_d=tuple(index[d.drain] for d in nl.devices),
        supply_v={index[n.name]: n.voltage for n in nl.supplies},
        input_idx=tuple(index[n.name] for n in nl.inputs),
        output_idx=tuple(index[n.name] for n in nl.outputs),
    )


def _as_compiled(nl: Netlist | CompiledNetlist) -> CompiledNetlist:
    return nl if isinstance(nl, CompiledNetlist) else compile_netlist(nl)


def _source_map(comp: CompiledNetlist, inputs: Mapping[str, float]) -> dict[int, float]:
    input_names = {comp.names[i] for i in comp.input_idx}
    unknown = set(inputs) - input_names
    if unknown:
        raise SolverError(f"assignments to non-input nets: {sorted(unknown)}")
    missing = input_names - set(inputs)
    if missing:
        raise SolverError(f"unassigned input nets: {sorted(missing)}")
    sources = dict(comp.supply_v)
    for name, volts in inputs.items():
        sources[comp.index[name]] = float(volts)
    return sources


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _fixpoint(
    comp: CompiledNetlist,
    sources: dict[int, float],
) -> tuple[list[float | None], list[bool], int, dict]:
    """Monotone conduction fixed point from unknowns.

    Returns (values, driven flags, sweeps, conflict roots).
    """
    n = comp.n_nets
    val: list[float | None] = [None] * n
    for i, v in sources.items():
        val[i] = v
    cond: list[bool] | None = None
    for sweep in range(1, comp.iteration_cap + 1):
        new_cond = [
            _conducts_partial(
                comp.dev_is_n[j],
                comp.dev_vth[j],
                val[comp.dev_g[j]],
                val[comp.dev_s[j]],
                val[comp.dev_d[j]],
            )
            for j in range(comp.n_devices)
        ]
        uf = _UnionFind(n)
        for j, on in enumerate(new_cond):
            if on:
                uf.union(comp.dev_s[j], comp.dev_d[j])
        comp_sources: dict[int, list[float]] = {}
        for i, v in sources.items():
            comp_sources.setdefault(uf.find(i), []).append(v)
        root_voltage: dict[int, float | None] = {}
        conflict_roots: dict[int, tuple[float, ...]] = {}
        for root, volts in comp_sources.items():
            distinct = _distinct(volts)
            if len(distinct) == 1:
                root_voltage[root] = distinct[0]
            else:
                root_voltage[root] = None
                conflict_roots[root] = distinct
        new_val: list[float | None] = [None] * n
        new_driven = [False] * n
        for i in range(n):
            root = uf.find(i)
            if root in root_voltage:
                new_driven[i] = True
                new_val[i] = root_voltage[root]
        for i, v in sources.items():
            new_val[i] = v
        if new_cond == cond and new_val == val:
            conflict_info = {
                "roots": {
                    root: (
                        tuple(sorted(comp.names[i] for i in range(n) if uf.find(i) == root)),
                        volts,
                    )
                    for root, volts in conflict_roots.items()
                }
            }
            return new_val, new_driven, sweep, conflict_info
        cond, val = new_cond, new_val
    raise NonConvergenceError(
        f"{comp.netlist.name!r} did not reach a conduction fixed point "
        f"within {comp.iteration_cap} sweeps"
    )


def solve_dc(
    nl: Netlist | CompiledNetlist,
    inputs: Mapping[str, float],
    *,
    warm: Mapping[str, float] | None = None,
) -> DcState:
    """Solve one input vector to the conduction fixed point.

    ``warm`` supplies charge retention: a net that ends up floating keeps
    its previous voltage in the recorded state.  Retained charge is
    bookkeeping only; it never gates a device (floating counts as unknown,
    and unknown-terminal devices default to non-conducting), so the fixed
    point always runs from the optimistic monotone start.
    """
    comp = _as_compiled(nl)
    sources = _source_map(comp, inputs)
    n = comp.n_nets
    val, driven, sweeps, conflict_info = _fixpoint(comp, sources)

    conflicts = tuple(
        Conflict(nets=nets, voltages=volts)
        for _, (nets, volts) in sorted(conflict_info["roots"].items())
    )
    floating = frozenset(
        comp.names[i] for i in range(n) if not driven[i] and i not in sources
    )
    voltages = {comp.names[i]: val[i] for i in range(n) if val[i] is not None}
    if warm:
        for name in floating:
            if name not in voltages and name in warm:
                voltages[name] = warm[name]
    return DcState(
        voltages=voltages,
        floating=floating,
        conflicts=conflicts,
        iterations=sweeps,
    )


def _distinct(volts: list[float]) -> tuple[float, ...]:
    out: list[float] = []
    for v in sorted(volts):
        if not out or v - out[-1] > _EPS:
            out.append(v)
    return tuple(out)


# --------------------------------------------------------------------------
# batch solving (cold start), used for exhaustive verification


@dataclass
class BatchResult:
    """Vectorized cold-start solutions: one row per input vector."""

    names: tuple[str, ...]
    values: np.ndarray       # [V, N] float64, NaN where undefined
    driven: np.ndarray       # [V, N] bool
    conflict: np.ndarray     # [V] bool
    nonconverged: np.ndarray  # [V] bool
    iterations: int


def solve_dc_batch(
    nl: Netlist | CompiledNetlist, inputs: Mapping[str, np.ndarray]
) -> BatchResult:
    """Cold-start solve of many input vectors at once.

    ``inputs`` maps each input net to a voltage column; all columns must
    share one length.  Semantics match :func:`solve_dc` vector by vector.
    """
    comp = _as_compiled(nl)
    input_names = {comp.names[i] for i in comp.input_idx}
    if set(inputs) != input_names:
        raise SolverError(
            f"batch inputs must assign exactly the input nets {sorted(input_names)}"
        )
    columns = {name: np.asarray(col, dtype=np.float64) for name, col in inputs.items()}
    lengths = {len(c) for c in columns.values()}
    if len(lengths) != 1:
        raise SolverError("batch input columns must share one length")
    (n_vec,) = lengths
    n, n_dev = comp.n_nets, comp.n_devices

    # Nets are rows so every per-net slice is contiguous.
    source_mask = np.zeros((n, 1), dtype=bool)
    sv = np.full((n, n_vec), np.nan)
    for i, v in comp.supply_v.items():
        source_mask[i, 0] = True
        sv[i, :] = v
    for name, col in columns.items():
        i = comp.index[name]
        source_mask[i, 0] = True
        sv[i, :] = col

    val = np.where(source_mask, sv, np.nan)
    cond = np.zeros((n_dev, n_vec), dtype=bool)
    vth = np.asarray(comp.dev_vth)[:, None]
    is_n = np.asarray(comp.dev_is_n)[:, None]
    g_idx = np.asarray(comp.dev_g)
    s_idx = np.asarray(comp.dev_s)
    d_idx = np.asarray(comp.dev_d)

    # Device order forward then backward per relaxation pass: values propagate
    # quickly along chains in either direction.
    order = list(range(n_dev)) + list(range(n_dev - 1, -1, -1))

    # Finite stand-in for +/-inf so monotone checksums detect the fixed point.
    big = 1e9

    nonconv = np.ones(n_vec, dtype=bool)
    iterations = comp.iteration_cap
    vmin = vmax = None
    for sweep in range(1, comp.iteration_cap + 1):
        vg = val[g_idx]
        vs = val[s_idx]
        vd = val[d_idx]
        lo = np.fmin(vs, vd)
        hi = np.fmax(vs, vd)
        known = ~np.isnan(vg) & ~np.isnan(lo)
        new_cond = np.where(is_n, vg - lo > vth, hi - vg > vth) & known
        active = [j for j in order if new_cond[j].any()]

        vmin = np.where(source_mask, sv, big)
        vmax = np.where(source_mask, sv, -big)
        checksum = None
        for _ in range(n + 2):
            for j in active:
                m = new_cond[j]
                a, b = s_idx[j], d_idx[j]
                lo_ab = np.minimum(vmin[a], vmin[b])
                hi_ab = np.maximum(vmax[a], vmax[b])
                vmin[a] = np.where(m, lo_ab, vmin[a])
                vmin[b] = np.where(m, lo_ab, vmin[b])
                vmax[a] = np.where(m, hi_ab, vmax[a])
                vmax[b] = np.where(m, hi_ab, vmax[b])
            # vmin only ever decreases and vmax only increases, so the pair of
            # sums is an exact fixed-point witness.
            new_checksum = (float(vmin.sum()), float(vmax.sum()))
            if new_checksum == checksum:
                break
            checksum = new_checksum

        driven = vmin <= vmax
        clean = driven & (vmax - vmin <= _EPS)
        new_val = np.where(clean, vmin, np.nan)
        new_val = np.where(source_mask, sv, new_val)

        same_val = (new_val == val) | (np.isnan(new_val) & np.isnan(val))
        changed_rows = (new_cond != cond).any(axis=0) | ~same_val.all(axis=0)
        val = new_val
        cond = new_cond
        if not changed_rows.any():
            nonconv = changed_rows
            iterations = sweep
            break
        nonconv = changed_rows

    driven = vmin <= vmax
    conflict = (driven & (vmax - vmin > _EPS)).any(axis=0)
    return BatchResult(
        names=comp.names,
        values=val.T,
        driven=driven.T,
        conflict=conflict,
        nonconverged=nonconv,
        iterations=iterations,
    )


# --------------------------------------------------------------------------
# quasi-static stepping


@dataclass
class StepTrace:
    """Ordered DC solutions across a level waveform, with per-step deltas.

    ``changes[k]`` maps each net whose voltage moved at step k to
    ``(old, new)``; ``changes[0]`` is empty, matching the solved initial
    vector.  Floating nets retain their previous voltage between steps.
    """

    netlist: Netlist
    times: tuple[float, ...]
    states: tuple[DcState, ...]
    changes: tuple[dict[str, tuple[float | None, float]], ...]
    stepped: tuple[frozenset[str], ...] = field(default=())

    @property
    def netlist_name(self) -> str:
        return self.netlist.name

    def __len__(self) -> int:
        return len(self.states)


def default_input_maps(nl: Netlist) -> dict[str, VoltageMap]:
    """Digit maps for each input net: full range up to the largest supply."""
    vdd = nl.max_supply_v()
    return {n.name: VoltageMap(vdd, n.radix) for n in nl.inputs}


def step_waveforms(
    nl: Netlist | CompiledNetlist,
    waveforms: Mapping[str, Sequence[int]],
    maps: Mapping[str, VoltageMap] | None = None,
    *,
    dt: float = 1e-9,
) -> StepTrace:
    """Quasi-static stepping: solve each column with the previous solution
    as warm start.  The first column is the solved initial vector."""
    comp = _as_compiled(nl)
    if maps is None:
        maps = default_input_maps(comp.netlist)
    input_names = [comp.names[i] for i in comp.input_idx]
    missing = set(input_names) - set(waveforms)
    if missing:
        raise SolverError(f"waveforms missing for inputs: {sorted(missing)}")
    lengths = {len(waveforms[name]) for name in input_names}
    if len(lengths) != 1:
        raise SolverError("waveform sequences must share one length")
    (steps,) = lengths
    if steps < 1:
        raise SolverError("waveforms must contain at least one step")
    for name in input_names:
        vmap = maps[name]
        for level in waveforms[name]:
            vmap.volts(level)  # validates range

    states: list[DcState] = []
    changes: list[dict[str, tuple[float | None, float]]] = []
    stepped: list[frozenset[str]] = []
    prev_vals: dict[str, float] | None = None
    prev_levels: dict[str, int] | None = None
    for k in range(steps):
        levels = {name: waveforms[name][k] for name in input_names}
        inputs = {name: maps[name].volts(levels[name]) for name in input_names}
        try:
            state = solve_dc(comp, inputs, warm=prev_vals)
        except NonConvergenceError as exc:
            raise NonConvergenceError(f"step {k}: {exc}") from None
        if k == 0:
            changes.append({})
            stepped.append(frozenset())
        else:
            delta: dict[str, tuple[float | None, float]] = {}
            for name, new in state.voltages.items():
                old = prev_vals.get(name)
                if old is None or abs(new - old) > _EPS:
                    delta[name] = (old, new)
            changes.append(delta)
            stepped.append(
                frozenset(n for n in input_names if levels[n] != prev_levels[n])
            )
        states.append(state)
        prev_vals = dict(state.voltages)
        prev_levels = levels
    return StepTrace(
        netlist=comp.netlist,
        times=tuple(k * dt for k in range(steps)),
        states=tuple(states),
        changes=tuple(changes),
        stepped=tuple(stepped),
    )
