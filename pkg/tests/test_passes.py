"""Rewrite rules, lowerings, and pipeline stages."""

import json

import numpy as np
import pytest

from mlco import passes, sim
from mlco.build import PdeParams, WingStyle, build_one_step
from mlco.ir import (
    Circuit, GateKind, LOGS, MIGS, ccrz, ccx, census, conforms, crz,
    cs, cx, cz, h, mcrz, rccx, rz, s, x,
)
from mlco.passes import (
    COST_MODEL, PassConfig, RULES, ConformanceError, apply_rules,
    cancel_adjacent, gray_mcrz, lower_to_logs, lower_vchain, optimize_logs,
    pipeline_deto, pipeline_mlco, replace_ccx_with_rccx, rules_named, simplify,
)


def _equiv(a: Circuit, b: Circuit, tol=1e-10) -> bool:
    ok, dev = sim.equivalent_up_to_phase(a, b, trials=6, seed=7)
    return ok and dev < tol


# ---------------------------------------------------------------------------
# cancel_adjacent

def test_cancel_inverse_pair():
    c = Circuit(2, (h(0), cx(0, 1), cx(0, 1), h(0)))
    assert cancel_adjacent(c).gates == ()


def test_cancel_across_commuting_gates():
    # The rz on wire 1 commutes with cx control on wire 0? No - cx acts on
    # both wires; use a gate on an untouched wire instead.
    c = Circuit(3, (cx(0, 1), rz(2, 0.3), cx(0, 1)))
    got = cancel_adjacent(c).gates
    assert got == (rz(2, 0.3),)


def test_cancel_blocked_by_noncommuting_gate():
    c = Circuit(2, (cx(0, 1), h(1), cx(0, 1)))
    assert len(cancel_adjacent(c).gates) == 3


def test_rotation_merge_and_zero_drop():
    c = Circuit(2, (rz(0, 0.4), rz(0, -0.4), crz(0, 1, 0.2), crz(0, 1, 0.3)))
    got = cancel_adjacent(c).gates
    assert got == (crz(0, 1, 0.5),)


def test_cancel_drops_barriers():
    from mlco.ir import barrier
    c = Circuit(2, (h(0), barrier((0, 1)), h(0)))
    assert cancel_adjacent(c).gates == ()


# ---------------------------------------------------------------------------
# rewrite rules

@pytest.mark.parametrize("name", sorted(RULES))
def test_every_rule_is_certified(name):
    # certify() raises on any unitary mismatch or entangling-count increase.
    certified = RULES[name].certify()
    assert certified.certified


@pytest.mark.parametrize("name", sorted(RULES))
def test_rules_never_add_entangling_gates(name):
    rule = RULES[name]
    def weight(circ):
        return sum(1 for g in circ.gates if g.is_entangling)
    assert weight(rule.replacement) <= weight(rule.pattern)


def test_rule_applies_under_wire_renaming():
    # cx-ladder on renamed wires: [cx(2,0), cx(0,3), cx(2,0)] -> 2 gates.
    c = Circuit(4, (cx(2, 0), cx(0, 3), cx(2, 0)))
    got = simplify(c, ("cx-ladder",))
    assert len(got.gates) == 2
    assert _equiv(c, got)


def test_rule_applies_across_intervening_commuting_gate():
    c = Circuit(4, (cx(0, 1), rz(3, 0.2), cx(1, 2), cx(0, 1)))
    got = simplify(c, ("cx-ladder",))
    assert sum(1 for g in got.gates if g.kind is GateKind.CX) == 2
    assert _equiv(c, got)


def test_rule_blocked_by_noncommuting_interloper():
    c = Circuit(3, (cx(0, 1), h(0), cx(1, 2), cx(0, 1)))
    got = simplify(c, ("cx-ladder",))
    assert sum(1 for g in got.gates if g.kind is GateKind.CX) == 3


def test_unknown_rule_name_rejected():
    with pytest.raises(KeyError):
        rules_named(("no-such-rule",))


def test_enabled_rules_filter():
    cfg = PassConfig(enabled_rules=frozenset({"cx-stair"}))
    c = Circuit(3, (cx(0, 1), cx(1, 2), cx(0, 1)))  # cx-ladder shape
    got = apply_rules(c, rules_named(("cx-ladder",)), cfg)
    assert len(got.gates) == 3  # ladder disabled by the config filter


# ---------------------------------------------------------------------------
# PassConfig

def test_config_validation_and_json():
    with pytest.raises(ValueError):
        PassConfig(angle_merge_tolerance=-1.0)
    with pytest.raises(ValueError):
        PassConfig(max_fixpoint_iterations=0)
    cfg = PassConfig.from_json(json.dumps(
        {"angle_merge_tolerance": 1e-9, "enabled_rules": ["cx-ladder"]}))
    assert cfg.angle_merge_tolerance == 1e-9
    assert cfg.enabled_rules == frozenset({"cx-ladder"})
    assert PassConfig.from_json("{}") == PassConfig()


# ---------------------------------------------------------------------------
# lower_vchain

def test_vchain_counts_and_equivalence():
    c = Circuit(5, (mcrz((0, 1, 2, 3), 4, 0.7),))
    low = lower_vchain(c)
    assert conforms(low, MIGS)
    assert low.num_ancillas == 2  # k - 2 for k = 4
    cnt = census(low)
    assert cnt == {"CCX": 4, "CCRZ": 1}  # 2(k-2) Toffolis + one rotation
    assert _equiv(c, low)


def test_vchain_shares_ancilla_pool():
    c = Circuit(5, (mcrz((0, 1, 2, 3), 4, 0.7), mcrz((0, 1, 2), 4, 0.3)))
    low = lower_vchain(c)
    assert low.num_ancillas == 2  # pool sized by the largest site only
    assert _equiv(c, low)


def test_vchain_rejects_non_higs():
    with pytest.raises(ConformanceError):
        lower_vchain(Circuit(3, (rccx(0, 1, 2),)))


# ---------------------------------------------------------------------------
# replace_ccx_with_rccx

def test_rccx_replacement_on_conjugate_pair():
    inner = (cx(0, 3), rz(3, 0.25), cx(0, 3))
    c = Circuit(4, (ccx(0, 1, 3),) + inner + (ccx(0, 1, 3),))
    got = replace_ccx_with_rccx(c)
    cnt = census(got)
    assert cnt["RCCX"] == 2 and cnt["CCX"] == 0
    assert _equiv(c, got)


def test_rccx_replacement_leaves_unpaired_toffoli():
    c = Circuit(3, (ccx(0, 1, 2), h(2)))
    got = replace_ccx_with_rccx(c)
    assert census(got)["CCX"] == 1
    assert census(got)["RCCX"] == 0


def test_rccx_replacement_rejects_higs_input():
    with pytest.raises(ConformanceError):
        replace_ccx_with_rccx(Circuit(5, (mcrz((0, 1, 2), 4, 0.1),)))


# ---------------------------------------------------------------------------
# LoGS lowering

@pytest.mark.parametrize("gate,want_cx", [
    (ccx(0, 1, 2), 6),
    (rccx(0, 1, 2), 3),
    (ccrz(0, 1, 2, 0.4), 4),
    (crz(0, 1, 0.4), 2),
    (cz(0, 1), 1),
    (cs(0, 1), 2),
])
def test_logs_decomposition_cx_budget(gate, want_cx):
    c = Circuit(3, (gate,))
    low = lower_to_logs(c)
    assert conforms(low, LOGS)
    assert census(low)["CX"] == want_cx
    assert _equiv(c, low, tol=1e-12)


def test_lower_to_logs_whole_circuit():
    c = Circuit(4, (h(0), s(1), ccx(0, 1, 2), crz(2, 3, 0.3), x(3)))
    low = lower_to_logs(c)
    assert conforms(low, LOGS)
    assert _equiv(c, low)


# ---------------------------------------------------------------------------
# gray-code backbone decomposition

@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gray_mcrz_exact(k):
    theta = 0.613
    target = k
    controls = tuple(range(k))
    ref = Circuit(k + 1, (mcrz(controls, target, theta),))
    got = Circuit(k + 1, tuple(gray_mcrz(controls, target, theta)))
    assert conforms(got, LOGS)
    assert census(got)["CX"] == 2 ** k
    assert np.abs(sim.unitary_of(got) - sim.unitary_of(ref)).max() < 1e-12


# ---------------------------------------------------------------------------
# optimize_logs

def test_optimize_logs_fuses_single_qubit_runs():
    c = Circuit(2, (rz(0, 0.2), h(0), h(0), rz(0, 0.3), cx(0, 1),
                    rz(1, 0.1), rz(1, -0.1)))
    got = optimize_logs(c)
    assert got.gates == (rz(0, 0.5), cx(0, 1))
    assert _equiv(c, got)


def test_optimize_logs_resynthesizes_euler_runs():
    c = Circuit(1, (h(0), rz(0, 0.4), h(0), rz(0, 0.2), h(0), rz(0, 0.9), h(0)))
    got = optimize_logs(c)
    assert len(got.gates) <= 5  # at most rz-h-rz-h-rz
    assert _equiv(c, got, tol=1e-9)


def test_optimize_logs_never_increases_cx():
    p = PdeParams(n=5)
    low = lower_to_logs(replace_ccx_with_rccx(lower_vchain(
        build_one_step(p, WingStyle.STAIR).without_barriers())))
    before = census(low)["CX"]
    after = census(optimize_logs(low))["CX"]
    assert after <= before


def test_optimize_logs_rejects_migs():
    with pytest.raises(ConformanceError):
        optimize_logs(Circuit(3, (ccx(0, 1, 2),)))


# ---------------------------------------------------------------------------
# pipelines

def test_pipeline_stage_names():
    p = PdeParams(n=4)
    _, stages = pipeline_mlco(p, 2, WingStyle.STAIR)
    names = [s.name for s in stages]
    assert names == [
        "1-step source", "1-step HiGS simplified",
        "1-step MiGS input", "1-step MiGS simplified",
        "2-step MiGS composed", "2-step MiGS simplified",
        "2-step MiGS replaced", "2-step LoGS input", "2-step LoGS target",
    ]
    assert all(s.seconds >= 0 for s in stages)


def test_pipeline_one_step_has_no_composed_stage():
    _, stages = pipeline_mlco(PdeParams(n=4), 1, WingStyle.SPRAY)
    assert "1-step MiGS composed" not in [s.name for s in stages]


def test_pipeline_end_to_end_equivalence_small():
    from mlco.build import build_steps
    p = PdeParams(n=4)
    final, stages = pipeline_mlco(p, 2, WingStyle.STAIR)
    two_step = build_steps(p, 2, WingStyle.STAIR)
    one_step = build_one_step(p, WingStyle.STAIR)
    assert conforms(final, LOGS)
    assert _equiv(two_step, final)
    for stage in stages:
        ref = one_step if stage.name.startswith("1-step") else two_step
        assert _equiv(ref, stage.circuit), stage.name


def test_pipeline_deto_modes():
    p = PdeParams(n=6)
    none_circ, cost = pipeline_deto(p, 1, WingStyle.STAIR, mode="cost-model")
    assert none_circ is None and cost == 114
    circ, cx_count = pipeline_deto(p, 1, WingStyle.STAIR, mode="executable")
    assert conforms(circ, LOGS)
    assert census(circ)["CX"] == cx_count
    assert _equiv(build_one_step(p, WingStyle.STAIR), circ)
    with pytest.raises(ValueError):
        pipeline_deto(p, 1, WingStyle.STAIR, mode="bogus")


def test_cost_model_gate_costs():
    assert COST_MODEL.gate_cost(ccx(0, 1, 2)) == 6
    assert COST_MODEL.gate_cost(crz(0, 1, 0.2)) == 2
    assert COST_MODEL.gate_cost(mcrz((0, 1, 2, 3, 4), 5, 0.2)) == 40
    assert COST_MODEL.gate_cost(h(0)) == 0
    assert COST_MODEL.deto_step_cx(6) == 114
