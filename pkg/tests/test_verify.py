import numpy as np
import pytest

from catalab.dense import DenseState, apply_pauli, apply_site_permutation, overlap
from catalab.models import Catalyst, build_catalyst, build_model
from catalab.pauli import PauliOperator
from catalab.stabilizer import (
    CircuitQca,
    CliffordCircuit,
    PermutationQca,
    StabilizerMixture,
    cz_gate,
    pack_gates_into_layers,
    z_gate,
)
from catalab.verify import (
    RegionTooSmallError,
    audit_gate_symmetric,
    build_doubled_fdqc,
    disorder_parameter,
    doubled_conjugate,
    fidelity_correlator,
    qca_spread,
    spt_invariant,
    spt_invariant_dense,
    strong_localization,
    verify_catalysis,
    weak_localization,
)


def ring_translation(n):
    return PermutationQca([(i + 1) % n for i in range(n)])


def cz_ring_qca(n):
    return CircuitQca(
        pack_gates_into_layers(n, [cz_gate(n, i, (i + 1) % n) for i in range(n)])
    )


def random_stab_state(n, seed):
    """Random pure stabilizer state from a random Clifford circuit."""
    from catalab.stabilizer import cnot_gate, h_gate, s_gate

    rng = np.random.default_rng(seed)
    state = StabilizerMixture.zero_state(n)
    for _ in range(3 * n):
        choice = rng.integers(0, 3)
        if choice == 0:
            state = state.apply_gate(h_gate(n, int(rng.integers(0, n))))
        elif choice == 1:
            state = state.apply_gate(s_gate(n, int(rng.integers(0, n))))
        else:
            a, b = rng.choice(n, size=2, replace=False)
            state = state.apply_gate(cnot_gate(n, int(a), int(b)))
    return state


# ---------------------------------------------------------------------------
# spread and doubled circuits
# ---------------------------------------------------------------------------


def test_qca_spread_translation():
    bundle = build_model("lsm-dimer", n=8)
    assert qca_spread(bundle.entangler, 8, bundle.lattice) == 1


def test_qca_spread_cz_ring():
    bundle = build_model("cluster-1d", n=8)
    assert qca_spread(bundle.entangler, 8, bundle.lattice) == 1


def test_qca_spread_single_layer():
    n = 6
    circuit = CliffordCircuit(n, ((cz_gate(n, 0, 1), cz_gate(n, 2, 3)),))
    bundle = build_model("cluster-1d", n=n)
    assert qca_spread(CircuitQca(circuit), n, bundle.lattice) <= 1


def test_doubled_identity_acts_trivially():
    n = 4
    qca = CircuitQca(CliffordCircuit(n, ()))
    bundle = build_model("cluster-1d", n=n)
    doubled = build_doubled_fdqc(qca, n, bundle.lattice)
    state = random_stab_state(2 * n, seed=5)
    assert doubled.apply_stab(state).same_state(state)
    rng = np.random.default_rng(0)
    amps = rng.normal(size=1 << (2 * n)) + 1j * rng.normal(size=1 << (2 * n))
    amps /= np.linalg.norm(amps)
    dense = DenseState(2, 2 * n, amps)
    out = doubled.apply_dense(dense)
    assert np.allclose(out.amps, dense.amps, atol=1e-10)


def test_doubled_translation_dense_product_check():
    n = 4
    bundle = build_model("lsm-dimer", n=n)
    doubled = build_doubled_fdqc(bundle.entangler, n, bundle.lattice)
    assert doubled.logical_depth == 2
    # v-layer is a single layer of disjoint swaps
    assert len(doubled.as_circuit().layers) == 2
    rng = np.random.default_rng(3)
    for _ in range(5):
        pa = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        pb = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        psi = DenseState(2, n, pa / np.linalg.norm(pa))
        anc = DenseState(2, n, pb / np.linalg.norm(pb))
        combined = psi.tensor(anc)
        out = doubled.apply_dense(combined)
        expected = apply_site_permutation(psi, list(bundle.entangler.perm)).tensor(
            apply_site_permutation(anc, list(bundle.entangler.perm_inv))
        )
        assert np.linalg.norm(out.amps - expected.amps) < 1e-10


def test_doubled_cz_ring_matches_tableau_and_dense():
    n = 4
    bundle = build_model("cluster-1d", n=n)
    qca = bundle.entangler
    doubled = build_doubled_fdqc(qca, n, bundle.lattice)
    # exact tableau equality with U (x) U^-1
    for a in range(2 * n):
        for p in (PauliOperator.x_at(2 * n, a), PauliOperator.z_at(2 * n, a)):
            assert doubled.conjugate(p) == doubled_conjugate(qca, n, p)
    # dense operator equality, including the global phase
    rng = np.random.default_rng(9)
    for _ in range(5):
        amps = rng.normal(size=1 << (2 * n)) + 1j * rng.normal(size=1 << (2 * n))
        amps /= np.linalg.norm(amps)
        state = DenseState(2, 2 * n, amps)
        out = doubled.apply_dense(state)
        expected = state
        for i in range(n):
            czm = np.diag([1.0, 1, 1, -1]).astype(complex)
            from catalab.dense import apply_local_unitary

            expected = apply_local_unitary(expected, czm, [i, (i + 1) % n])
            expected = apply_local_unitary(expected, czm, [n + i, n + (i + 1) % n])
        assert np.linalg.norm(out.amps - expected.amps) < 1e-10


def test_doubled_gate_supports_are_local():
    n = 8
    bundle = build_model("cluster-1d", n=n)
    doubled = build_doubled_fdqc(bundle.entangler, n, bundle.lattice)
    assert doubled.max_gate_support <= 2 * (2 * doubled.spread + 1)
    for gate in doubled.v_gates:
        a_sites = [s for s in gate.support if s < n]
        assert len(a_sites) <= 2 * doubled.spread + 1


# ---------------------------------------------------------------------------
# symmetric-gate audit
# ---------------------------------------------------------------------------


def test_audit_swap_against_doubled_symmetry():
    bundle = build_model("cluster-1d", n=8)
    doubled = build_doubled_fdqc(bundle.entangler, 8, bundle.lattice)
    dsym = bundle.symmetry.doubled()
    for gate in doubled.all_gates():
        assert audit_gate_symmetric(gate, dsym)


def test_audit_z_gate_fails_x_symmetry():
    bundle = build_model("cluster-1d", n=8)
    gate = z_gate(8, 0)
    assert not audit_gate_symmetric(gate, bundle.symmetry)


def test_audit_cz_passes_z_symmetry():
    bundle = build_model("lsm-dimer", n=8)
    gate = cz_gate(8, 2, 3)
    # CZ is diagonal, so it commutes with the all-Z generator restriction but
    # fails the all-X one.
    sym = bundle.symmetry
    z_gen = [g for g in sym.generators if g.name == "z-all"][0]
    restricted = z_gen.pauli.restrict(gate.support)
    assert gate.conjugate(restricted) == restricted


# ---------------------------------------------------------------------------
# catalysis verification
# ---------------------------------------------------------------------------


def test_catalysis_cluster_ghz_passes():
    bundle = build_model("cluster-1d", n=8)
    cat = build_catalyst(bundle, "ghz")
    report = verify_catalysis(bundle, cat)
    assert report.passed
    assert report.logical_depth == 2
    assert all(ok for _, ok in report.gate_audits)
    assert report.state_match == "group-equality-up-to-phase"


def test_catalysis_swssb_mixed_branch():
    bundle = build_model("cluster-1d", n=8)
    cat = build_catalyst(bundle, "swssb")
    report = verify_catalysis(bundle, cat)
    assert report.passed
    assert report.state_match == "operator-equality"


def test_catalysis_fake_catalyst_fails():
    bundle = build_model("lsm-dimer", n=8)
    n = 8
    gens = tuple(
        PauliOperator.z_at(n, i).with_sign(1 if i % 2 == 0 else -1) for i in range(n)
    )
    fake = Catalyst(
        name="fake-pattern",
        engine="stabilizer",
        mixed=False,
        stab=StabilizerMixture.from_generators(n, gens),
    )
    report = verify_catalysis(bundle, fake)
    assert not report.passed
    assert report.state_match == "mismatch"


def test_catalysis_dense_superposition():
    bundle = build_model("lsm-dimer", n=4)
    cat = build_catalyst(bundle, "superposition")
    report = verify_catalysis(bundle, cat)
    assert report.passed
    assert report.overlap_modulus >= 1 - 1e-10


def test_catalysis_cocycle_ghz():
    bundle = build_model("cocycle-z2z2", sites=3)
    cat = build_catalyst(bundle, "ghz")
    report = verify_catalysis(bundle, cat)
    assert report.passed


# ---------------------------------------------------------------------------
# entangler invariant
# ---------------------------------------------------------------------------


def test_invariant_identity_entangler():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    qca = CircuitQca(CliffordCircuit(n, ()))
    table = spt_invariant(qca, bundle.symmetry, n)
    for value in table.entries.values():
        assert value == 1


def test_invariant_cz_ring_table():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    table = spt_invariant(bundle.entangler, bundle.symmetry, n)
    assert table.entries[("x-even", "x-odd")] == -1
    assert table.entries[("x-odd", "x-even")] == -1
    assert table.entries[("x-even", "x-even")] == 1
    assert table.entries[("x-odd", "x-odd")] == 1
    assert table.entries[("1", "x-even")] == 1


def test_invariant_matches_dense_oracle():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    table = spt_invariant(bundle.entangler, bundle.symmetry, n)

    czm = np.diag([1.0, 1, 1, -1]).astype(complex)

    def apply_u(state):
        from catalab.dense import apply_local_unitary

        for i in range(n):
            state = apply_local_unitary(state, czm, [i, (i + 1) % n])
        return state

    dense_table = spt_invariant_dense(apply_u, apply_u, bundle.symmetry, n)
    for key, value in table.entries.items():
        assert abs(dense_table.entries[key] - value) < 1e-9


def test_invariant_squared_entangler_trivial():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    circuit = bundle.entangler.circuit
    squared = CircuitQca(CliffordCircuit(n, circuit.layers + circuit.layers))
    table = spt_invariant(squared, bundle.symmetry, n)
    for value in table.entries.values():
        assert value == 1


def test_invariant_bilinearity():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    table = spt_invariant(bundle.entangler, bundle.symmetry, n)
    labels = {"1": 0, "x-even": 1, "x-odd": 2, "x-even*x-odd": 3}

    def compose(a, b):
        return a ^ b

    inverse_labels = {v: k for k, v in labels.items()}
    for ga in labels.values():
        for gb in labels.values():
            for h in labels.values():
                lhs = (
                    table.entries[(inverse_labels[ga], inverse_labels[h])]
                    * table.entries[(inverse_labels[gb], inverse_labels[h])]
                )
                rhs = table.entries[(inverse_labels[compose(ga, gb)], inverse_labels[h])]
                assert lhs == rhs


def test_invariant_region_too_small():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    with pytest.raises(RegionTooSmallError):
        spt_invariant(bundle.entangler, bundle.symmetry, n, (0, 5), (5, 6))


# ---------------------------------------------------------------------------
# localization
# ---------------------------------------------------------------------------


def test_strong_localization_cluster_string_order():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    cluster = bundle.target
    gen = bundle.symmetry.by_name("x-even").pauli
    witness = strong_localization(cluster, (2, 7), gen, radius=1)
    assert witness is not None
    left, right = witness
    combined = left * right
    # Z-type endpoints just outside the interval
    assert combined.x == 0
    assert combined.z != 0


def test_strong_localization_plus_state():
    n = 12
    state = StabilizerMixture.plus_state(n)
    gen = PauliOperator.x_at(n, *range(n))
    witness = strong_localization(state, (3, 8), gen, radius=1)
    assert witness is not None
    left, right = witness
    assert (left * right).is_identity()


def test_strong_localization_none_for_swssb():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    cat = build_catalyst(bundle, "swssb")
    for name in ("x-even", "x-odd"):
        gen = bundle.symmetry.by_name(name).pauli
        for gamma in ((0, 3), (0, 5), (0, 7), (2, 9)):
            assert strong_localization(cat.stab, gamma, gen, radius=1) is None


def test_weak_localization_swssb_trivial_witness():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    cat = build_catalyst(bundle, "swssb")
    gen = bundle.symmetry.by_name("x-even").pauli
    witness = weak_localization(cat.stab, (0, 5), gen, radius=1)
    assert witness is not None
    left, right = witness
    assert left.is_identity() and right.is_identity()


def test_weak_localization_cluster_matches_strong():
    n = 12
    bundle = build_model("cluster-1d", n=n)
    gen = bundle.symmetry.by_name("x-even").pauli
    witness = weak_localization(bundle.target, (2, 7), gen, radius=1)
    assert witness is not None


def test_weak_localization_none_adversarial():
    n = 8
    state = StabilizerMixture.from_generators(n, (PauliOperator.z_at(n, 4),))
    gen = PauliOperator.x_at(n, *range(n))
    assert weak_localization(state, (2, 6), gen, radius=1) is None
    assert strong_localization(state, (2, 6), gen, radius=1) is None


def test_localization_radius_precondition():
    n = 12
    state = StabilizerMixture.plus_state(n)
    gen = PauliOperator.x_at(n, *range(n))
    with pytest.raises(ValueError):
        strong_localization(state, (0, 3), gen, radius=3)


# ---------------------------------------------------------------------------
# correlators
# ---------------------------------------------------------------------------


def test_fidelity_correlator_swssb():
    bundle = build_model("cluster-1d", n=8)
    cat = build_catalyst(bundle, "swssb")
    same = fidelity_correlator(
        cat.stab, PauliOperator.z_at(8, 0), PauliOperator.z_at(8, 2)
    )
    assert same == 1
    cross = fidelity_correlator(
        cat.stab, PauliOperator.z_at(8, 0), PauliOperator.z_at(8, 1)
    )
    assert cross == 0


def test_lieb_mixed_diagnostics():
    bundle = build_model("lieb-2d", lx=2, ly=2)
    cat = build_catalyst(bundle, "lieb-mixed")
    lat = bundle.lattice
    n = bundle.n
    for loop in lat.dual_loops():
        w = PauliOperator.z_at(n, *loop)
        assert cat.stab.expectation(w) == 0
        exp, fid = disorder_parameter(cat.stab, w)
        assert exp == 0 and fid == 1
    open_string = PauliOperator.x_at(n, *lat.open_string(1))
    exp, fid = disorder_parameter(cat.stab, open_string)
    assert exp == 0 and fid == 1


def test_lieb_mixed_vertex_fidelity_correlator():
    bundle = build_model("lieb-2d", lx=2, ly=2)
    cat = build_catalyst(bundle, "lieb-mixed")
    lat = bundle.lattice
    v1, v2 = lat.vertex(0, 0), lat.vertex(1, 1)
    val = fidelity_correlator(
        cat.stab,
        PauliOperator.z_at(bundle.n, v1),
        PauliOperator.z_at(bundle.n, v2),
    )
    assert val == 1


def test_weak_localization_implies_long_range_fidelity():
    # a weak witness on the spin-glass mixture comes with a unit fidelity
    # correlator for the charged endpoint pair
    n = 12
    bundle = build_model("cluster-1d", n=n)
    cat = build_catalyst(bundle, "swssb")
    gen = bundle.symmetry.by_name("x-even").pauli
    witness = weak_localization(cat.stab, (0, 5), gen, radius=1)
    assert witness is not None
    val = fidelity_correlator(
        cat.stab, PauliOperator.z_at(n, 0), PauliOperator.z_at(n, 6)
    )
    assert val == 1


def test_catalysis_cocycle_dense_catalysts():
    bundle = build_model("cocycle-z2z2", sites=3)
    for kind in ("superposition", "gapless"):
        cat = build_catalyst(bundle, kind)
        report = verify_catalysis(bundle, cat)
        assert report.passed
        assert report.overlap_modulus >= 1 - 1e-10
        assert all(ok for _, ok in report.gate_audits)


def test_swssb_diagnostics_match_dense_oracle_n6():
    # the spin-glass mixture at N=6: expectation, fidelity, and Renyi values
    # against the dense density-matrix oracle
    from catalab.dense import (
        dense_fidelity,
        dense_renyi_correlator,
        pauli_matrix,
        stabilizer_density,
    )
    from catalab.stabilizer import fidelity, renyi_correlator

    n = 6
    bundle = build_model("cluster-1d", n=n)
    cat = build_catalyst(bundle, "swssb")
    rho = stabilizer_density(cat.stab)
    zz = PauliOperator.z_at(n, 0) * PauliOperator.z_at(n, 2)
    assert cat.stab.expectation(zz) == 0
    assert abs(np.trace(rho @ pauli_matrix(zz)).real) < 1e-12
    sigma_state = StabilizerMixture(
        n, tuple(g if zz.commutes(g) else g.negate() for g in cat.stab.generators)
    )
    stab_f = float(fidelity(cat.stab, sigma_state))
    dense_f = dense_fidelity(rho, stabilizer_density(sigma_state))
    assert abs(stab_f - dense_f) < 1e-10
    stab_r = float(
        renyi_correlator(cat.stab, PauliOperator.z_at(n, 0), PauliOperator.z_at(n, 2), 2)
    )
    dense_r = dense_renyi_correlator(
        rho,
        pauli_matrix(PauliOperator.z_at(n, 0)),
        pauli_matrix(PauliOperator.z_at(n, 2)),
        2,
    )
    assert stab_r == 1
    assert abs(stab_r - dense_r) < 1e-10


def test_fidelity_fallback_noncommuting_case():
    from catalab.verify import fidelity_with_fallback

    zero = StabilizerMixture.zero_state(1)
    plus = StabilizerMixture.plus_state(1)
    # |<0|+>|^2 = 1/2, so F = 1/sqrt(2); the exact path cannot cover this
    val = float(fidelity_with_fallback(zero, plus))
    assert abs(val - 2 ** -0.5) < 1e-10


def test_doubled_rejects_nonlocal_unitary():
    # a permutation that teleports a site across the ring is not locality
    # preserving at this size
    n = 12
    perm = list(range(n))
    perm[0], perm[n // 2] = perm[n // 2], perm[0]
    bundle = build_model("cluster-1d", n=n)
    with pytest.raises(ValueError):
        build_doubled_fdqc(PermutationQca(perm), n, bundle.lattice)
