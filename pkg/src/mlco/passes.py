"""Circuit transformations: cancellation, certified rewrite rules, lowerings, pipelines.

All passes are pure ``Circuit -> Circuit`` functions that preserve the
unitary up to global phase (on the ancilla-zero subspace once ancillas
appear).  Scans are leftmost-first with lowest-qubit tie-breaks, so every
pass is deterministic.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import sim
from .build import (
    H2Order, PdeParams, WingStyle, build_one_step, build_steps,
    compose_steps, step_orders,
)
from .ir import (
    FIXED_CX_COST, HIGS, LOGS, MIGS, ROTATION_KINDS,
    Circuit, CircuitError, Gate, GateKind,
    ccx, census, commutes, conforms, crz, cs, csdg, cx, cz, h,
    mcrz_cx_cost, rccx, rccx_decomposition, rz, s, sdg, x,
)


class ConformanceError(CircuitError):
    """Input circuit does not conform to the pass's required gate-set level."""


@dataclass(frozen=True)
class PassConfig:
    angle_merge_tolerance: float = 1e-10
    max_fixpoint_iterations: int = 64
    enabled_rules: frozenset[str] | None = None  # None = all registered rules

    def __post_init__(self):
        if self.angle_merge_tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        if self.max_fixpoint_iterations < 1:
            raise ValueError("iteration cap must be >= 1")

    @classmethod
    def from_json(cls, data: bytes | str) -> "PassConfig":
        doc = json.loads(data)
        rules = doc.get("enabled_rules")
        return cls(
            angle_merge_tolerance=doc.get("angle_merge_tolerance", 1e-10),
            max_fixpoint_iterations=doc.get("max_fixpoint_iterations", 64),
            enabled_rules=None if rules is None else frozenset(rules),
        )


DEFAULT_CONFIG = PassConfig()


@dataclass(frozen=True)
class CostModel:
    """CX cost of each gate under the reference one-shot decompositions."""

    fixed: dict[str, int] = field(default_factory=lambda: dict(FIXED_CX_COST))

    def mcrz(self, k: int) -> int:
        return mcrz_cx_cost(k)

    def gate_cost(self, gate: Gate) -> int:
        if gate.kind is GateKind.BARRIER or not gate.controls:
            return 0
        if gate.kind in (GateKind.MCRZ,):
            return self.mcrz(len(gate.controls))
        if gate.kind in (GateKind.CRZ,):
            return self.mcrz(1)
        return self.fixed.get(gate.kind.value, 1)

    def deto_step_cx(self, n: int) -> int:
        """Cost-model CX per step: every backbone decomposed in place, plus wings."""
        return sum(self.mcrz(k) for k in range(1, n)) + n * (n - 1)


COST_MODEL = CostModel()


# ---------------------------------------------------------------------------
# Commutation-aware cancellation

def _merged(a: Gate, b: Gate) -> Gate | None:
    """Merge candidate for two rotations of the same kind on the same support."""
    if (a.kind is b.kind and a.kind in ROTATION_KINDS
            and frozenset(a.controls) == frozenset(b.controls)
            and a.target == b.target):
        return Gate(a.kind, a.controls, a.target, a.angle + b.angle)
    return None


def _inverse_pair(a: Gate, b: Gate) -> bool:
    inv = a.inverse()
    return isinstance(inv, Gate) and inv == b


def cancel_adjacent(circuit: Circuit, config: PassConfig = DEFAULT_CONFIG) -> Circuit:
    """Cancel inverse pairs and merge rotations across commuting gates, to fixpoint."""
    tol = config.angle_merge_tolerance
    gates = [g for g in circuit.gates if g.kind is not GateKind.BARRIER]
    for _ in range(config.max_fixpoint_iterations):
        changed = False
        gates = [g for g in gates
                 if not (g.kind in ROTATION_KINDS and abs(g.angle) <= tol)]
        i = 0
        while i < len(gates):
            g = gates[i]
            j = i + 1
            acted = False
            while j < len(gates):
                other = gates[j]
                if _inverse_pair(g, other):
                    del gates[j], gates[i]
                    acted = True
                    break
                merged = _merged(g, other)
                if merged is not None:
                    del gates[j]
                    if abs(merged.angle) <= tol:
                        del gates[i]
                    else:
                        gates[i] = merged
                    acted = True
                    break
                if not commutes(g, other):
                    break
                j += 1
            if acted:
                changed = True
                i = max(i - 1, 0)
            else:
                i += 1
        if not changed:
            break
    return circuit.with_gates(gates)


# ---------------------------------------------------------------------------
# Rewrite rules

@dataclass(frozen=True)
class RewriteRule:
    """An oracle-certified equivalence between two small circuits."""

    name: str
    pattern: Circuit
    replacement: Circuit
    certified: bool = False

    def certify(self) -> "RewriteRule":
        """Exact unitary-equivalence check; refuses entangling-count regressions."""
        up = sim.unitary_of(self.pattern)
        ur = sim.unitary_of(self.replacement)
        dev = np.abs(sim.align_phase(up, ur) - ur).max()
        if dev > 1e-12:
            raise CircuitError(f"rule {self.name!r} failed certification: dev={dev:g}")
        n_pat = sum(1 for g in self.pattern.gates if g.is_entangling)
        n_rep = sum(1 for g in self.replacement.gates if g.is_entangling)
        if n_rep > n_pat:
            raise CircuitError(f"rule {self.name!r} increases entangling count")
        return RewriteRule(self.name, self.pattern, self.replacement, True)


def _rule(name: str, wires: int, pattern: list[Gate], replacement: list[Gate]) -> RewriteRule:
    return RewriteRule(name, Circuit(wires, tuple(pattern)),
                       Circuit(wires, tuple(replacement))).certify()


def _build_registry() -> dict[str, RewriteRule]:
    rules = [
        # Three CX in a ladder contract to two.
        _rule("cx-ladder", 3,
              [cx(0, 1), cx(1, 2), cx(0, 1)],
              [cx(1, 2), cx(0, 2)]),
        _rule("cx-ladder-rev", 3,
              [cx(0, 1), cx(2, 0), cx(0, 1)],
              [cx(2, 0), cx(2, 1)]),
        _rule("cx-stair", 3,
              [cx(0, 2), cx(1, 2), cx(0, 1)],
              [cx(0, 1), cx(1, 2)]),
        _rule("cx-stair-rev", 3,
              [cx(0, 1), cx(1, 2), cx(0, 2)],
              [cx(1, 2), cx(0, 1)]),
        # An X on the control between two equal CX collapses them.
        _rule("cx-x-cx", 2,
              [cx(0, 1), x(0), cx(0, 1)],
              [x(0), x(1)]),
        # Two Toffolis around an X on a control collapse to one CX.
        _rule("ccx-x-ccx", 3,
              [ccx(0, 1, 2), x(1), ccx(0, 1, 2)],
              [x(1), cx(0, 2)]),
        # CZ/CX fusion: the pair becomes a single CX with phase dressing.
        _rule("cz-cx-fuse", 2,
              [cz(0, 1), cx(0, 1)],
              [sdg(1), cx(0, 1), s(1), sdg(0)]),
        _rule("cz-cx-fuse-flip", 2,
              [cz(0, 1), cx(1, 0)],
              [sdg(0), cx(1, 0), s(0), sdg(1)]),
        _rule("cx-cz-fuse", 2,
              [cx(0, 1), cz(0, 1)],
              [sdg(1), cx(0, 1), s(1), s(0)]),
        _rule("cx-cz-fuse-flip", 2,
              [cx(1, 0), cz(0, 1)],
              [sdg(0), cx(1, 0), s(0), s(1)]),
    ]
    return {r.name: r for r in rules}


RULES: dict[str, RewriteRule] = _build_registry()

HIGS_RULE_NAMES = ("cx-ladder", "cx-ladder-rev", "cx-stair", "cx-stair-rev", "cx-x-cx")
MIGS_RULE_NAMES = ("ccx-x-ccx",)
FUSION_RULE_NAMES = ("cz-cx-fuse", "cz-cx-fuse-flip", "cx-cz-fuse", "cx-cz-fuse-flip")


def rules_named(names) -> list[RewriteRule]:
    return [RULES[n] for n in names]


def _match_gate(pattern_gate: Gate, gate: Gate, binding: dict[int, int]) -> list[dict[int, int]]:
    """Extensions of `binding` mapping the pattern gate onto `gate`."""
    if pattern_gate.kind is not gate.kind or pattern_gate.angle != gate.angle:
        return []
    if len(pattern_gate.controls) != len(gate.controls):
        return []
    results: list[dict[int, int]] = []

    def assign(b: dict[int, int], pw: int, cw: int) -> dict[int, int] | None:
        if pw in b:
            return b if b[pw] == cw else None
        if cw in b.values():
            return None
        out = dict(b)
        out[pw] = cw
        return out

    def walk(b: dict[int, int], remaining_p: list[int], remaining_c: list[int]):
        if not remaining_p:
            done = assign(b, pattern_gate.target, gate.target) \
                if pattern_gate.target is not None else b
            if done is not None:
                results.append(done)
            return
        pw = remaining_p[0]
        for k, cw in enumerate(remaining_c):
            nb = assign(b, pw, cw)
            if nb is not None:
                walk(nb, remaining_p[1:], remaining_c[:k] + remaining_c[k + 1:])

    walk(binding, list(pattern_gate.controls), list(gate.controls))
    return results


def _find_match(gates: list[Gate], rule: RewriteRule, start: int, gather: str):
    """Leftmost match of `rule.pattern` with commuting gates allowed in between.

    Returns (positions, binding) or None.  With gather "left" the matched
    gates are pulled together at the first position, so every skipped gate
    must commute with all matched gates after it; with gather "right" they
    collect at the last position and skipped gates must commute with all
    matched gates before them.
    """
    pattern = rule.pattern.gates
    first = gates[start]
    for binding in _match_gate(pattern[0], first, {}):
        found = _extend(gates, pattern, 1, start, [start], binding, {}, gather)
        if found is not None:
            return found
    return None


def _extend(gates, pattern, p_idx, last_pos, positions, binding, by_wire, gather):
    if p_idx == len(pattern):
        return positions, binding
    j = last_pos + 1
    by_wire = {w: list(lst) for w, lst in by_wire.items()}
    matched = [gates[p] for p in positions]
    while j < len(gates):
        g = gates[j]
        # Only skipped gates sharing a wire can fail to commute.
        conflicts = {id(sk): sk for w in g.qubits for sk in by_wire.get(w, ())}
        matchable = True
        if gather == "left":
            matchable = all(commutes(g, sk) for sk in conflicts.values())
        for nb in (_match_gate(pattern[p_idx], g, binding) if matchable else []):
            found = _extend(gates, pattern, p_idx + 1, j,
                            positions + [j], nb, by_wire, gather)
            if found is not None:
                return found
        if gather == "right" and not all(commutes(g, m) for m in matched):
            return None
        for w in g.qubits:
            by_wire.setdefault(w, []).append(g)
        j += 1
    return None


def _apply_binding(circ: Circuit, binding: dict[int, int]) -> list[Gate]:
    out = []
    for g in circ.gates:
        controls = tuple(binding[q] for q in g.controls)
        target = binding[g.target] if g.target is not None else None
        out.append(Gate(g.kind, controls, target, g.angle))
    return out


def _rewrite_once(gates: list[Gate], rules: list[RewriteRule]) -> list[Gate] | None:
    for i in range(len(gates)):
        for rule in rules:
            for gather in ("left", "right"):
                found = _find_match(gates, rule, i, gather)
                if found is None:
                    continue
                positions, binding = found
                replacement = _apply_binding(rule.replacement, binding)
                pos_set = set(positions)
                middle = [gates[k] for k in range(positions[0], positions[-1] + 1)
                          if k not in pos_set]
                if gather == "left":
                    body = replacement + middle
                else:
                    body = middle + replacement
                return gates[:positions[0]] + body + gates[positions[-1] + 1:]
    return None


def apply_rules(circuit: Circuit, rules: list[RewriteRule],
                config: PassConfig = DEFAULT_CONFIG) -> Circuit:
    """Interleave rule rewriting with cancellation until a fixed point."""
    for rule in rules:
        if not rule.certified:
            raise CircuitError(f"rule {rule.name!r} is not certified")
    if config.enabled_rules is not None:
        rules = [r for r in rules if r.name in config.enabled_rules]
    circ = cancel_adjacent(circuit, config)
    for _ in range(config.max_fixpoint_iterations):
        gates = list(circ.gates)
        rewritten = _rewrite_once(gates, rules)
        if rewritten is None:
            return circ
        circ = cancel_adjacent(circ.with_gates(rewritten), config)
    return circ


def simplify(circuit: Circuit, rule_names, config: PassConfig = DEFAULT_CONFIG) -> Circuit:
    return apply_rules(circuit, rules_named(rule_names), config)


# ---------------------------------------------------------------------------
# Lowerings

def lower_vchain(circuit: Circuit) -> Circuit:
    """HiGS -> MiGS: expand every k>=3-controlled RZ with the CCRZ-keeping vchain.

    One shared clean-ancilla pool serves every site; each site computes a
    conjunction chain with 2(k-2) Toffolis and rotates via one CCRZ.
    """
    if not conforms(circuit, HIGS):
        raise ConformanceError("lower_vchain expects a HiGS circuit")
    max_k = max((len(g.controls) for g in circuit.gates
                 if g.kind is GateKind.MCRZ), default=0)
    pool = max(max_k - 2, 0)
    width = circuit.num_qubits + pool
    anc = list(range(circuit.num_qubits, width))
    out: list[Gate] = []
    for g in circuit.gates:
        if g.kind is not GateKind.MCRZ:
            out.append(g)
            continue
        controls = sorted(g.controls)
        k = len(controls)
        chain = [ccx(controls[0], controls[1], anc[0])]
        chain += [ccx(controls[i + 1], anc[i - 1], anc[i]) for i in range(1, k - 2)]
        out.extend(chain)
        out.append(Gate(GateKind.CCRZ, (controls[-1], anc[k - 3]), g.target, g.angle))
        out.extend(reversed(chain))
    return Circuit(width, tuple(out), circuit.num_ancillas + pool)


def replace_ccx_with_rccx(circuit: Circuit,
                          config: PassConfig = DEFAULT_CONFIG) -> Circuit:
    """Strength-reduce conjugate Toffoli pairs to relative-phase Toffolis.

    Each CCX of a same-support pair is swapped for an exact RCCX-based
    equivalent whose CS/CZ phase corrections face inward; the corrections
    then cancel wherever the gates between them are diagonal or only read
    the correction qubits.  Unpaired Toffolis are left alone.
    """
    if not conforms(circuit, MIGS):
        raise ConformanceError("replace_ccx_with_rccx expects a MiGS circuit")
    gates = list(circuit.without_barriers().gates)
    paired: dict[int, tuple[str, int]] = {}
    open_stack: dict[tuple, list[int]] = {}
    for idx, g in enumerate(gates):
        if g.kind is not GateKind.CCX:
            continue
        key = (frozenset(g.controls), g.target)
        stack = open_stack.setdefault(key, [])
        if stack:
            left = stack.pop()
            # Put the CZ correction on the control whose (control, target)
            # pair already carries a CX inside the gap, so the leftover CZ
            # can fuse with it; otherwise the corrections meet and cancel.
            c1 = max(g.controls)
            for mid in gates[left + 1:idx]:
                if (mid.kind is GateKind.CX and mid.target == g.target
                        and mid.controls[0] in g.controls):
                    c1 = mid.controls[0]
                    break
            paired[left] = ("left", c1)
            paired[idx] = ("right", c1)
        else:
            stack.append(idx)
    out: list[Gate] = []
    for idx, g in enumerate(gates):
        if idx not in paired:
            out.append(g)
            continue
        side, c1 = paired[idx]
        c2 = next(c for c in g.controls if c != c1)
        t = g.target
        if side == "left":
            out += [rccx(c1, c2, t), cs(c1, c2), cz(c1, t)]
        else:
            out += [csdg(c1, c2), cz(c1, t), rccx(c1, c2, t)]
    simplified = cancel_adjacent(circuit.with_gates(out), config)
    return apply_rules(simplified, rules_named(FUSION_RULE_NAMES), config)


# Fixed LoGS decompositions, each certified once at import time.

def _ccx_logs(c1: int, c2: int, t: int) -> list[Gate]:
    from .ir import t as tg, tdg, h as hg
    return [hg(t), cx(c2, t), tdg(t), cx(c1, t), tg(t), cx(c2, t), tdg(t),
            cx(c1, t), tg(c2), tg(t), hg(t), cx(c1, c2), tg(c1), tdg(c2),
            cx(c1, c2)]


def _crz_logs(c: int, t: int, theta: float) -> list[Gate]:
    return [rz(t, theta / 2), cx(c, t), rz(t, -theta / 2), cx(c, t)]


def _ccrz_logs(c1: int, c2: int, t: int, theta: float) -> list[Gate]:
    # Gray-code multiplexed rotation: four CX, four quarter-angle RZ.
    return [rz(t, theta / 4), cx(c1, t), rz(t, -theta / 4), cx(c2, t),
            rz(t, theta / 4), cx(c1, t), rz(t, -theta / 4), cx(c2, t)]


_RZ_EQUIV = {GateKind.Z: math.pi, GateKind.S: math.pi / 2,
             GateKind.SDG: -math.pi / 2, GateKind.T: math.pi / 4,
             GateKind.TDG: -math.pi / 4}


def _lower_gate_logs(g: Gate) -> list[Gate]:
    kind = g.kind
    if kind in LOGS.allowed_kinds:
        return [g]
    if kind in _RZ_EQUIV:
        return [rz(g.target, _RZ_EQUIV[kind])]
    if kind is GateKind.RX:
        return [h(g.target), rz(g.target, g.angle), h(g.target)]
    if kind is GateKind.CZ:
        (c,), t = g.controls, g.target
        return [h(t), cx(c, t), h(t)]
    if kind is GateKind.CY:
        (c,), t = g.controls, g.target
        return [sdg(t), cx(c, t), s(t)]
    if kind is GateKind.CS:
        (c,), t = g.controls, g.target
        return [rz(c, math.pi / 4)] + _crz_logs(c, t, math.pi / 2)
    if kind is GateKind.CSDG:
        (c,), t = g.controls, g.target
        return [rz(c, -math.pi / 4)] + _crz_logs(c, t, -math.pi / 2)
    if kind is GateKind.CRZ:
        return _crz_logs(g.controls[0], g.target, g.angle)
    if kind is GateKind.CCRZ:
        return _ccrz_logs(*g.controls, g.target, g.angle)
    if kind is GateKind.CCX:
        return _ccx_logs(*g.controls, g.target)
    if kind is GateKind.RCCX:
        return list(rccx_decomposition(*g.controls, g.target))
    raise ConformanceError(f"no LoGS decomposition for {kind.value}")


def _lowered_to_rz(gates: list[Gate]) -> list[Gate]:
    """Rewrite leftover S/T/Z-family gates as RZ so the result conforms to LoGS."""
    out = []
    for g in gates:
        if g.kind in _RZ_EQUIV:
            out.append(rz(g.target, _RZ_EQUIV[g.kind]))
        else:
            out.append(g)
    return out


def lower_to_logs(circuit: Circuit) -> Circuit:
    """MiGS -> LoGS with the fixed, certified decompositions; no optimization."""
    if not conforms(circuit, MIGS):
        raise ConformanceError("lower_to_logs expects a MiGS circuit")
    out: list[Gate] = []
    for g in circuit.without_barriers().gates:
        out.extend(_lowered_to_rz(_lower_gate_logs(g)))
    return circuit.with_gates(out)


def gray_mcrz(controls: tuple[int, ...], target: int, theta: float) -> list[Gate]:
    """Ancilla-free k-controlled RZ as a 2^k-CX gray-code multiplexed rotation."""
    k = len(controls)
    if k == 0:
        return [rz(target, theta)]
    if k == 1:
        return _crz_logs(controls[0], target, theta)
    size = 2 ** k
    # Rotation angles are the Walsh coefficients of the all-ones selector.
    gates: list[Gate] = []
    for i in range(size):
        gray = i ^ (i >> 1)
        sign = (-1) ** bin(gray).count("1")
        gates.append(rz(target, sign * theta / size))
        next_gray = ((i + 1) % size) ^ (((i + 1) % size) >> 1)
        changed = gray ^ next_gray
        gates.append(cx(controls[changed.bit_length() - 1], target))
    return gates


def _fuse_single_qubit_runs(gates: list[Gate], num_qubits: int,
                            tol: float) -> list[Gate]:
    """Collapse maximal single-qubit runs per wire into a short RZ/H/X word."""
    out: list[Gate] = []
    run: dict[int, list[Gate]] = {}

    def flush(q: int):
        seq = run.pop(q, None)
        if seq:
            out.extend(_resynthesize_1q(seq, q, tol))

    for g in gates:
        if not g.controls and g.kind is not GateKind.BARRIER:
            run.setdefault(g.target, []).append(g)
            continue
        for q in g.qubits:
            flush(q)
        out.append(g)
    for q in sorted(run):
        flush(q)
    return out


def _resynthesize_1q(seq: list[Gate], q: int, tol: float) -> list[Gate]:
    u = np.eye(2, dtype=complex)
    for g in seq:
        u = sim.gate_unitary(g) @ u
    # Strip global phase via the first nonzero column entry.
    col = u[:, 0]
    pivot = col[np.argmax(np.abs(col))]
    v = u * (abs(pivot) / pivot)
    if np.abs(v - np.eye(2)).max() <= tol:
        return []
    if abs(v[0, 1]) <= tol:  # diagonal -> one RZ
        theta = float(np.angle(v[1, 1]) - np.angle(v[0, 0]))
        return [rz(q, theta)] if abs(theta) > tol else []
    if abs(v[0, 0]) <= tol:  # antidiagonal -> RZ then X
        delta = float(np.angle(u[0, 1] / u[1, 0]))
        word = [] if abs(delta) <= tol else [rz(q, delta)]
        return word + [x(q)]
    hd = sim.gate_unitary(h(q))
    if np.abs(sim.align_phase(u, hd) - hd).max() <= tol:
        return [h(q)]
    # General case: RZ - H - RZ - H - RZ Euler word.
    rz_after, theta_mid, rz_before = _euler_zxz(u)
    word: list[Gate] = []
    if abs(rz_before) > tol:
        word.append(rz(q, rz_before))
    if abs(theta_mid) > tol:
        word += [h(q), rz(q, theta_mid), h(q)]
    if abs(rz_after) > tol:
        word.append(rz(q, rz_after))
    return word if word else []


def _euler_zxz(u: np.ndarray) -> tuple[float, float, float]:
    """Angles (after, mid, before) with u ~ RZ(after) RX(mid) RZ(before)."""
    det = np.linalg.det(u)
    su = u / np.sqrt(det)
    mid = 2 * math.atan2(abs(su[1, 0]), abs(su[0, 0]))
    half_diff = float(np.angle(1j * su[1, 0])) if abs(su[1, 0]) > 1e-12 else 0.0
    if abs(su[1, 1]) < 1e-12:
        return 0.0, mid, -2.0 * half_diff
    half_sum = float(np.angle(su[1, 1]))
    return half_sum + half_diff, mid, half_sum - half_diff


def optimize_logs(circuit: Circuit, config: PassConfig = DEFAULT_CONFIG) -> Circuit:
    """LoGS cleanup: cancellation plus single-qubit run fusion; CX never increases."""
    if not conforms(circuit, LOGS):
        raise ConformanceError("optimize_logs expects a LoGS circuit")
    tol = max(config.angle_merge_tolerance, 1e-12)
    circ = circuit.without_barriers()
    for _ in range(config.max_fixpoint_iterations):
        before = circ.gates
        circ = cancel_adjacent(circ, config)
        circ = circ.with_gates(
            _fuse_single_qubit_runs(list(circ.gates), circ.num_qubits, tol))
        if circ.gates == before:
            break
    return circ


# ---------------------------------------------------------------------------
# Pipelines

@dataclass(frozen=True)
class Stage:
    name: str
    circuit: Circuit
    seconds: float = 0.0


def one_step_migs(params: PdeParams, style: WingStyle, order: H2Order,
                  config: PassConfig = DEFAULT_CONFIG) -> list[Stage]:
    """Build one step and push it through HiGS and MiGS simplification."""
    stages: list[Stage] = []
    tick = time.perf_counter()

    def record(name: str, circ: Circuit) -> Circuit:
        nonlocal tick
        now = time.perf_counter()
        stages.append(Stage(name, circ, now - tick))
        tick = now
        return circ

    source = record("1-step source",
                    build_one_step(params, style, order).without_barriers())
    higs = record("1-step HiGS simplified", simplify(source, HIGS_RULE_NAMES, config))
    migs_in = record("1-step MiGS input", lower_vchain(higs))
    record("1-step MiGS simplified", simplify(migs_in, MIGS_RULE_NAMES, config))
    return stages


def pipeline_mlco(params: PdeParams, steps: int, style: WingStyle,
                  config: PassConfig = DEFAULT_CONFIG) -> tuple[Circuit, list[Stage]]:
    """Full multilevel pipeline; returns the LoGS circuit and every stage."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    orders = step_orders(steps)
    per_step = [one_step_migs(params, style, o, config) for o in orders]
    stages = list(per_step[0])
    simplified_steps = [chain[-1].circuit for chain in per_step]
    tick = time.perf_counter()

    def record(name: str, circ: Circuit) -> Circuit:
        nonlocal tick
        now = time.perf_counter()
        stages.append(Stage(name, circ, now - tick))
        tick = now
        return circ

    composed = compose_steps(simplified_steps)
    if steps > 1:
        composed = record(f"{steps}-step MiGS composed", composed)
    migs_simplified = record(f"{steps}-step MiGS simplified",
                             simplify(composed, MIGS_RULE_NAMES, config))
    replaced = record(f"{steps}-step MiGS replaced",
                      replace_ccx_with_rccx(migs_simplified, config))
    lowered = record(f"{steps}-step LoGS input", lower_to_logs(replaced))
    optimized = record(f"{steps}-step LoGS target", optimize_logs(lowered, config))
    return optimized, stages


def pipeline_deto(params: PdeParams, steps: int, style: WingStyle,
                  mode: str = "cost-model",
                  config: PassConfig = DEFAULT_CONFIG):
    """Decompose-then-optimize baseline.

    cost-model: returns (None, predicted CX count) without building anything.
    executable: gray-code-decomposes every backbone ancilla-free, optimizes,
    and returns (circuit, CX count); counts differ from the cost model by
    design.
    """
    if mode == "cost-model":
        return None, steps * COST_MODEL.deto_step_cx(params.n)
    if mode != "executable":
        raise ValueError(f"unknown DETO mode {mode!r}")
    source = build_steps(params, steps, style).without_barriers()
    out: list[Gate] = []
    for g in source.gates:
        if g.kind is GateKind.MCRZ:
            out.extend(gray_mcrz(g.controls, g.target, g.angle))
        else:
            out.extend(_lowered_to_rz(_lower_gate_logs(g)))
    lowered = source.with_gates(out)
    optimized = optimize_logs(lowered, config)
    return optimized, census(optimized)["CX"]
