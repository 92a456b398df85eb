import numpy as np
import pytest

from catalab.models import build_catalyst, build_model
from catalab.pauli import PauliOperator
from catalab.protocols import (
    MeasurementRecord,
    PreparationSchedule,
    RecipeError,
    Stage,
    audit_schedule,
    catalyzed_pipeline,
    conjugate_gate_by_qca,
    execute_schedule,
    ghz_even_staircase,
    ghz_pair_staircase,
    long_range_bell_layer,
    measurement_prepare_catalyst,
    register_a_matches,
    sqrt_zz_gate,
    ghz_step_gate,
)
from catalab.stabilizer import CliffordCircuit, StabilizerMixture, x_gate
from catalab.verify import audit_gate_symmetric


def test_ghz_step_gate_symmetric():
    bundle = build_model("cluster-1d", n=8)
    gate = ghz_step_gate(8, 0, 2)
    assert audit_gate_symmetric(gate, bundle.symmetry)
    closer = sqrt_zz_gate(8, 6, 0)
    assert audit_gate_symmetric(closer, bundle.symmetry)


def test_staircase_builds_ghz_pair():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    ghz = build_catalyst(bundle, "ghz")
    circuit = ghz_pair_staircase(n, n, 0)
    assert circuit.depth == n - 1
    assert all(len(layer) == 1 for layer in circuit.layers)
    out = StabilizerMixture.plus_state(n).apply_circuit(circuit)
    assert out.same_state(ghz.stab)


def test_even_staircase_builds_one_sublattice_ghz():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    cat = build_catalyst(bundle, "ghz-one-sublattice")
    circuit = ghz_even_staircase(n, n, 0)
    out = StabilizerMixture.plus_state(n).apply_circuit(circuit)
    assert out.same_state(cat.stab)


def test_long_range_layer_builds_antipodal_pairs():
    n = 8
    bundle = build_model("lsm-dimer", n=n)
    cat = build_catalyst(bundle, "long-range-bell")
    circuit = long_range_bell_layer(n, n, 0)
    assert circuit.depth == 1
    out = bundle.trivial.apply_circuit(circuit)
    assert out.same_state(cat.stab)


def test_measurement_protocol_parities_and_invariance():
    n = 8
    for seed in range(25):
        record = measurement_prepare_catalyst(n, np.random.default_rng(seed))
        assert record.parity_even == 1
        assert record.parity_odd == 1
        assert record.invariant_under_entangler
        assert len(record.outcomes) == n


def test_measurement_protocol_all_plus_seed_gives_ghz_pair():
    # Seed 214 produces the all-+1 outcome pattern at n=8.
    n = 8
    record = measurement_prepare_catalyst(n, np.random.default_rng(214))
    assert all(s == 1 for s in record.outcomes)
    bundle = build_model("cluster-1d", n=n)
    ghz = build_catalyst(bundle, "ghz")
    assert record.post_state.same_state(ghz.stab)


def test_measurement_protocol_reproducible():
    a = measurement_prepare_catalyst(8, np.random.default_rng(7))
    b = measurement_prepare_catalyst(8, np.random.default_rng(7))
    assert a.outcomes == b.outcomes


def test_ancilla_pipeline_cluster_ghz():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    ghz = build_catalyst(bundle, "ghz")
    schedule = catalyzed_pipeline(bundle, ghz, "ancilla")
    assert schedule.total_depth == (n - 1) + 2
    assert audit_schedule(schedule, bundle.symmetry)
    final, _ = execute_schedule(schedule)
    assert register_a_matches(final, bundle.target, n)
    assert final.same_state(bundle.target.tensor(ghz.stab))


def test_ancilla_pipeline_with_unmake():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    ghz = build_catalyst(bundle, "ghz")
    schedule = catalyzed_pipeline(bundle, ghz, "ancilla", unmake=True)
    assert schedule.total_depth == 2 * (n - 1) + 2
    final, _ = execute_schedule(schedule)
    assert final.same_state(bundle.target.tensor(bundle.trivial))


def test_four_step_pipeline():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    ghz = build_catalyst(bundle, "ghz")
    schedule = catalyzed_pipeline(bundle, ghz, "four-step")
    assert schedule.total_depth == 2 * (n - 1)
    assert audit_schedule(schedule, bundle.symmetry)
    final, _ = execute_schedule(schedule)
    assert final.same_state(bundle.target)


def test_long_range_pipeline_constant_depth():
    depths = {}
    for n in (4, 8, 12):
        bundle = build_model("lsm-dimer", n=n)
        cat = build_catalyst(bundle, "long-range-bell")
        schedule = catalyzed_pipeline(bundle, cat, "ancilla")
        assert audit_schedule(schedule, bundle.symmetry)
        assert schedule.long_range_gate_count == n // 4
        lr_stage = schedule.stages[0]
        assert lr_stage.long_range
        final, _ = execute_schedule(schedule)
        assert register_a_matches(final, bundle.target, n)
        depths[n] = schedule.total_depth
    assert len(set(depths.values())) == 1
    assert depths[8] == 3


def test_measurement_pipeline_yields_cluster_for_any_seed():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    swssb = build_catalyst(bundle, "swssb")
    schedule = catalyzed_pipeline(bundle, swssb, "measurement")
    assert audit_schedule(schedule, bundle.symmetry)
    for seed in range(10):
        final, outcomes = execute_schedule(schedule, np.random.default_rng(seed))
        assert register_a_matches(final, bundle.target, n)
        assert len(outcomes[0]) == n


def test_gapless_recipe_refused():
    bundle = build_model("cluster-1d", n=8)
    gapless = build_catalyst(bundle, "gapless")
    with pytest.raises(RecipeError):
        catalyzed_pipeline(bundle, gapless, "ancilla")


def test_audit_schedule_rejects_asymmetric_stage():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    bad_stage = Stage(
        kind="circuit",
        label="bad",
        depth=1,
        circuit=CliffordCircuit(n, ((x_gate(n, 0),),)),
    )
    schedule = PreparationSchedule(
        model="cluster-1d",
        catalyst="none",
        mode="manual",
        n_total=n,
        initial_state=StabilizerMixture.plus_state(n),
        stages=[bad_stage],
        ancilla_offset=None,
    )
    # an X on an even site anticommutes with no generator; use a Z instead
    from catalab.stabilizer import z_gate

    schedule.stages[0].circuit = CliffordCircuit(n, ((z_gate(n, 0),),))
    assert not audit_schedule(schedule, bundle.symmetry)


def test_measurement_stage_audit():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    swssb = build_catalyst(bundle, "swssb")
    schedule = catalyzed_pipeline(bundle, swssb, "measurement")
    audit_schedule(schedule, bundle.symmetry)
    assert schedule.stages[0].audited
    # measuring a single Z is not symmetric
    schedule.stages[0].measurements = (PauliOperator.z_at(2 * n, 0),)
    assert not audit_schedule(schedule, bundle.symmetry)


def test_conjugated_gate_locality():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    gate = ghz_step_gate(n, 2, 4)
    conj = conjugate_gate_by_qca(gate, bundle.entangler)
    assert set(conj.support) <= {1, 2, 3, 4, 5}
    dsym = bundle.symmetry
    assert audit_gate_symmetric(conj, dsym)


def test_depth_accounting_exact():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    ghz = build_catalyst(bundle, "ghz")
    schedule = catalyzed_pipeline(bundle, ghz, "ancilla")
    staircase_stage = schedule.stages[0]
    assert staircase_stage.depth == len(staircase_stage.circuit.layers)
    assert schedule.total_depth == sum(s.depth for s in schedule.stages)


def test_pipeline_verifier_consistency():
    # a schedule that executes to the target also passes the verifier with
    # the same catalyst
    from catalab.verify import verify_catalysis

    bundle = build_model("cluster-1d", n=8)
    ghz = build_catalyst(bundle, "ghz")
    schedule = catalyzed_pipeline(bundle, ghz, "ancilla")
    assert audit_schedule(schedule, bundle.symmetry)
    final, _ = execute_schedule(schedule)
    assert final.same_state(bundle.target.tensor(ghz.stab))
    assert verify_catalysis(bundle, ghz).passed


def test_four_step_pipeline_lsm_long_range():
    bundle = build_model("lsm-dimer", n=8)
    cat = build_catalyst(bundle, "long-range-bell")
    schedule = catalyzed_pipeline(bundle, cat, "four-step")
    # one logical layer per stage: the conjugated layer re-packs but still
    # counts once
    assert schedule.total_depth == 2
    assert audit_schedule(schedule, bundle.symmetry)
    final, _ = execute_schedule(schedule)
    assert final.same_state(bundle.target)


def test_identity_entangler_pipeline_acts_trivially_on_system():
    # with an identity entangler the doubled stage is swap-then-swap, so the
    # schedule leaves register A in the trivial state
    from catalab.models import ModelBundle
    from catalab.stabilizer import CircuitQca

    n = 8
    base = build_model("cluster-1d", n=n)
    trivial = StabilizerMixture.plus_state(n)
    bundle = ModelBundle(
        name="identity-demo",
        lattice=base.lattice,
        n=n,
        symmetry=base.symmetry,
        entangler=CircuitQca(CliffordCircuit(n, ())),
        entangler_label="identity",
        trivial=trivial,
        target=trivial,
        catalyst_kinds=(),
    )
    ghz = build_catalyst(base, "ghz")
    schedule = catalyzed_pipeline(bundle, ghz, "ancilla")
    assert audit_schedule(schedule, bundle.symmetry)
    final, _ = execute_schedule(schedule)
    assert register_a_matches(final, trivial, n)
    assert final.same_state(trivial.tensor(ghz.stab))
