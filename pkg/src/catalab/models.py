"""Registry of lattices, symmetries, entanglers, targets, and catalysts.

Every bundle is checked at build time: the entangler commutes with each
symmetry generator as a whole, and the target state is reproduced from the
trivial state.  Every catalyst is checked for its declared symmetry pattern
and for entangler invariance before it is handed to the verifier.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from . import dense as dn
from .cohomology import (
    CocycleCircuit,
    FiniteAbelianGroup,
    bilinear_cocycle,
    compile_cocycle_circuit,
    normalize_cocycle,
    ring_triangulation,
)
from .gf2 import BitMatrix
from .pauli import PauliOperator
from .stabilizer import (
    CircuitQca,
    CliffordCircuit,
    PermutationQca,
    StabilizerMixture,
    cz_gate,
    is_invariant,
    pack_gates_into_layers,
)


class RegistryError(ValueError):
    """Unknown key or invalid size for a registry entry."""


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RingLattice:
    n: int
    kind: str = "ring1d"

    def distance(self, i: int, j: int) -> int:
        d = abs(i - j) % self.n
        return min(d, self.n - d)


@dataclass(frozen=True)
class LiebLattice:
    """Square-lattice torus with qubits on vertices and edges.

    Index map: vertices [0, V), horizontal edges [V, V+V), vertical edges
    [V+V, V+2V), where V = lx*ly.  h(i,j) joins (i,j)-(i+1,j), v(i,j) joins
    (i,j)-(i,j+1).
    """

    lx: int
    ly: int
    kind: str = "lieb2d"

    @property
    def num_vertices(self) -> int:
        return self.lx * self.ly

    @property
    def n(self) -> int:
        return 3 * self.num_vertices

    def vertex(self, i: int, j: int) -> int:
        return (j % self.ly) * self.lx + (i % self.lx)

    def h_edge(self, i: int, j: int) -> int:
        return self.num_vertices + (j % self.ly) * self.lx + (i % self.lx)

    def v_edge(self, i: int, j: int) -> int:
        return 2 * self.num_vertices + (j % self.ly) * self.lx + (i % self.lx)

    def vertices(self) -> list[int]:
        return list(range(self.num_vertices))

    def edges(self) -> list[int]:
        return list(range(self.num_vertices, self.n))

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        v = self.num_vertices
        if e < 2 * v:
            idx = e - v
            i, j = idx % self.lx, idx // self.lx
            return self.vertex(i, j), self.vertex(i + 1, j)
        idx = e - 2 * v
        i, j = idx % self.lx, idx // self.lx
        return self.vertex(i, j), self.vertex(i, j + 1)

    def vertex_star(self, vtx: int) -> list[int]:
        i, j = vtx % self.lx, vtx // self.lx
        return [
            self.h_edge(i, j),
            self.h_edge(i - 1, j),
            self.v_edge(i, j),
            self.v_edge(i, j - 1),
        ]

    def plaquette_edges(self, i: int, j: int) -> list[int]:
        return [
            self.h_edge(i, j),
            self.h_edge(i, j + 1),
            self.v_edge(i, j),
            self.v_edge(i + 1, j),
        ]

    def plaquettes(self) -> list[list[int]]:
        return [
            self.plaquette_edges(i, j) for j in range(self.ly) for i in range(self.lx)
        ]

    def winding_loops(self) -> list[list[int]]:
        horizontal = [self.h_edge(i, 0) for i in range(self.lx)]
        vertical = [self.v_edge(0, j) for j in range(self.ly)]
        return [horizontal, vertical]

    def dual_loops(self) -> list[list[int]]:
        """Closed paths on the dual lattice: one vertical, one horizontal."""
        crossing_h = [self.h_edge(0, j) for j in range(self.ly)]
        crossing_v = [self.v_edge(i, 0) for i in range(self.lx)]
        return [crossing_h, crossing_v]

    def open_string(self, length: int) -> list[int]:
        """Open path of consecutive horizontal bonds in row 0."""
        if length >= self.lx:
            raise ValueError("open string must not wrap the torus")
        return [self.h_edge(i, 0) for i in range(length)]

    def position(self, site: int) -> tuple[int, int]:
        v = self.num_vertices
        if site < v:
            return (2 * (site % self.lx), 2 * (site // self.lx))
        if site < 2 * v:
            idx = site - v
            return (2 * (idx % self.lx) + 1, 2 * (idx // self.lx))
        idx = site - 2 * v
        return (2 * (idx % self.lx), 2 * (idx // self.lx) + 1)

    def distance(self, a: int, b: int) -> int:
        ax, ay = self.position(a)
        bx, by = self.position(b)
        dx = min(abs(ax - bx), 2 * self.lx - abs(ax - bx))
        dy = min(abs(ay - by), 2 * self.ly - abs(ay - by))
        return max(dx, dy)


@dataclass(frozen=True)
class SquareLattice:
    """Torus of vertex qubits with diagonal-line subsystem symmetries."""

    l: int
    kind: str = "square2d"

    @property
    def n(self) -> int:
        return self.l * self.l

    def vertex(self, i: int, j: int) -> int:
        return (j % self.l) * self.l + (i % self.l)

    def coords(self, site: int) -> tuple[int, int]:
        return site % self.l, site // self.l

    def neighbors(self, site: int) -> list[int]:
        i, j = self.coords(site)
        out = {
            self.vertex(i + 1, j),
            self.vertex(i - 1, j),
            self.vertex(i, j + 1),
            self.vertex(i, j - 1),
        }
        out.discard(site)
        return sorted(out)

    def edge_pairs(self) -> list[tuple[int, int]]:
        pairs = set()
        for site in range(self.n):
            for nb in self.neighbors(site):
                pairs.add((min(site, nb), max(site, nb)))
        return sorted(pairs)

    def diagonal_line(self, c: int, direction: int) -> list[int]:
        return [self.vertex(i, c + direction * i) for i in range(self.l)]

    def distance(self, a: int, b: int) -> int:
        ai, aj = self.coords(a)
        bi, bj = self.coords(b)
        dx = min(abs(ai - bi), self.l - abs(ai - bi))
        dy = min(abs(aj - bj), self.l - abs(aj - bj))
        return max(dx, dy)


Lattice = Union[RingLattice, LiebLattice, SquareLattice]


# ---------------------------------------------------------------------------
# Symmetry representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymmetryGenerator:
    name: str
    pauli: PauliOperator
    form: str  # "0-form" | "1-form" | "line"


@dataclass(frozen=True)
class SymmetryRep:
    """Pauli-string symmetry generators acting on n qubits."""

    n: int
    generators: tuple[SymmetryGenerator, ...]

    def __post_init__(self):
        for a in self.generators:
            for b in self.generators:
                if not a.pauli.commutes(b.pauli):
                    raise ValueError(f"symmetry generators {a.name}, {b.name} anticommute")

    def by_name(self, name: str) -> SymmetryGenerator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def zero_form(self) -> list[SymmetryGenerator]:
        return [g for g in self.generators if g.form == "0-form"]

    def zero_form_elements(self) -> list[tuple[str, PauliOperator]]:
        """All products of 0-form generators, labelled by generator names."""
        gens = self.zero_form()
        out: list[tuple[str, PauliOperator]] = []
        for mask in range(1 << len(gens)):
            p = PauliOperator.identity(self.n)
            labels = []
            for i, g in enumerate(gens):
                if (mask >> i) & 1:
                    p = p * g.pauli
                    labels.append(g.name)
            out.append(("1" if not labels else "*".join(labels), p))
        return out

    def doubled(self) -> "SymmetryRep":
        """U'(g) = U(g) x U(g) on two copies of the register."""
        gens = []
        for g in self.generators:
            doubled = g.pauli.tensor(g.pauli)
            gens.append(SymmetryGenerator(g.name, doubled, g.form))
        return SymmetryRep(2 * self.n, tuple(gens))


@dataclass(frozen=True)
class QuditSymmetry:
    """On-site regular action u(g)|h> = |gh> of a finite abelian group."""

    group: FiniteAbelianGroup
    sites: int

    def apply(self, state: dn.DenseState, g: tuple[int, ...]) -> dn.DenseState:
        mapping = [self.group.index(self.group.add(g, h)) for h in self.group.elements()]
        return dn.apply_site_relabel(state, mapping)

    def site_matrix(self, g: tuple[int, ...]) -> np.ndarray:
        q = self.group.order
        mat = np.zeros((q, q), dtype=np.complex128)
        for h in self.group.elements():
            mat[self.group.index(self.group.add(g, h)), self.group.index(h)] = 1.0
        return mat


# ---------------------------------------------------------------------------
# Bundles and catalysts
# ---------------------------------------------------------------------------


@dataclass
class Catalyst:
    name: str
    engine: str  # "stabilizer" | "dense"
    mixed: bool
    stab: Optional[StabilizerMixture] = None
    dense_state: Optional[dn.DenseState] = None
    strong_under: tuple[str, ...] = ()
    weak_under: tuple[str, ...] = ()
    broken: tuple[str, ...] = ()
    prep_recipe: Optional[str] = None
    notes: str = ""


@dataclass
class ModelBundle:
    name: str
    lattice: Lattice
    n: int
    symmetry: SymmetryRep
    entangler: Union[CircuitQca, PermutationQca, CocycleCircuit]
    entangler_label: str
    trivial: Optional[StabilizerMixture]
    target: Optional[StabilizerMixture]
    catalyst_kinds: tuple[str, ...]
    qudit_symmetry: Optional[QuditSymmetry] = None
    trivial_dense_builder: Optional[Callable[[], dn.DenseState]] = None
    target_dense_builder: Optional[Callable[[], dn.DenseState]] = None

    @property
    def is_clifford(self) -> bool:
        return isinstance(self.entangler, (CircuitQca, PermutationQca))

    def trivial_dense(self) -> dn.DenseState:
        if self.trivial_dense_builder is not None:
            return self.trivial_dense_builder()
        return dn.stabilizer_to_dense(self.trivial)

    def target_dense(self) -> dn.DenseState:
        if self.target_dense_builder is not None:
            return self.target_dense_builder()
        return dn.stabilizer_to_dense(self.target)


REGISTRY_KEYS = ("lsm-dimer", "cluster-1d", "lieb-2d", "square-sspt", "cocycle-z2z2")


# -- shared circuit builders -------------------------------------------------


def cz_ring_circuit(n: int) -> CliffordCircuit:
    return pack_gates_into_layers(n, [cz_gate(n, i, (i + 1) % n) for i in range(n)])


def lieb_entangler_circuit(lat: LiebLattice) -> CliffordCircuit:
    gates = []
    for e in lat.edges():
        for v in lat.edge_endpoints(e):
            gates.append(cz_gate(lat.n, e, v))
    return pack_gates_into_layers(lat.n, gates)


def square_entangler_circuit(lat: SquareLattice) -> CliffordCircuit:
    gates = [cz_gate(lat.n, a, b) for a, b in lat.edge_pairs()]
    return pack_gates_into_layers(lat.n, gates)


def ghz_generators(n: int, sites: Sequence[int]) -> list[PauliOperator]:
    """Stabilizers of the cat state on `sites` (Z-basis GHZ)."""
    gens = [
        PauliOperator.z_at(n, sites[i], sites[i + 1]) for i in range(len(sites) - 1)
    ]
    gens.append(PauliOperator.x_at(n, *sites))
    return gens


# -- model builders ----------------------------------------------------------


def _build_lsm_dimer(n: int) -> ModelBundle:
    if n < 4 or n % 2:
        raise RegistryError("lsm-dimer needs an even qubit count of at least 4")
    lat = RingLattice(n)
    sym = SymmetryRep(
        n,
        (
            SymmetryGenerator("x-all", PauliOperator.x_at(n, *range(n)), "0-form"),
            SymmetryGenerator("z-all", PauliOperator.z_at(n, *range(n)), "0-form"),
        ),
    )
    trivial_gens = []
    spt_gens = []
    for i in range(0, n, 2):
        trivial_gens.append(PauliOperator.x_at(n, i, (i + 1) % n))
        trivial_gens.append(PauliOperator.z_at(n, i, (i + 1) % n))
        spt_gens.append(PauliOperator.x_at(n, (i + 1) % n, (i + 2) % n))
        spt_gens.append(PauliOperator.z_at(n, (i + 1) % n, (i + 2) % n))
    trivial = StabilizerMixture.from_generators(n, trivial_gens)
    target = StabilizerMixture.from_generators(n, spt_gens)
    entangler = PermutationQca([(i + 1) % n for i in range(n)])
    return ModelBundle(
        name="lsm-dimer",
        lattice=lat,
        n=n,
        symmetry=sym,
        entangler=entangler,
        entangler_label="translation",
        trivial=trivial,
        target=target,
        catalyst_kinds=("ghz", "superposition", "gapless", "long-range-bell"),
    )


def _build_cluster_1d(n: int) -> ModelBundle:
    if n < 4 or n % 2:
        raise RegistryError("cluster-1d needs an even ring of at least 4 qubits")
    lat = RingLattice(n)
    sym = SymmetryRep(
        n,
        (
            SymmetryGenerator("x-even", PauliOperator.x_at(n, *range(0, n, 2)), "0-form"),
            SymmetryGenerator("x-odd", PauliOperator.x_at(n, *range(1, n, 2)), "0-form"),
        ),
    )
    trivial = StabilizerMixture.plus_state(n)
    circuit = cz_ring_circuit(n)
    target = trivial.apply_circuit(circuit)
    return ModelBundle(
        name="cluster-1d",
        lattice=lat,
        n=n,
        symmetry=sym,
        entangler=CircuitQca(circuit),
        entangler_label="cz-ring",
        trivial=trivial,
        target=target,
        catalyst_kinds=(
            "ghz",
            "ghz-one-sublattice",
            "superposition",
            "gapless",
            "swssb",
            "group-average",
        ),
    )


def _build_lieb_2d(lx: int, ly: int) -> ModelBundle:
    if lx < 2 or ly < 2:
        raise RegistryError("lieb-2d needs a torus of at least 2x2 cells")
    lat = LiebLattice(lx, ly)
    n = lat.n
    gens = [
        SymmetryGenerator("x-vertices", PauliOperator.x_at(n, *lat.vertices()), "0-form")
    ]
    for idx, edges in enumerate(lat.plaquettes()):
        gens.append(
            SymmetryGenerator(f"loop-f{idx}", PauliOperator.x_at(n, *edges), "1-form")
        )
    for tag, loop in zip(("wind-h", "wind-v"), lat.winding_loops()):
        gens.append(
            SymmetryGenerator(f"loop-{tag}", PauliOperator.x_at(n, *loop), "1-form")
        )
    sym = SymmetryRep(n, tuple(gens))
    trivial = StabilizerMixture.plus_state(n)
    circuit = lieb_entangler_circuit(lat)
    target = trivial.apply_circuit(circuit)
    return ModelBundle(
        name="lieb-2d",
        lattice=lat,
        n=n,
        symmetry=sym,
        entangler=CircuitQca(circuit),
        entangler_label="cz-incidence",
        trivial=trivial,
        target=target,
        catalyst_kinds=("ghz-vertices", "toric-code", "lieb-mixed"),
    )


def _build_square_sspt(l: int) -> ModelBundle:
    if l < 2:
        raise RegistryError("square-sspt needs a torus of linear size at least 2")
    lat = SquareLattice(l)
    n = lat.n
    gens = []
    for c in range(l):
        gens.append(
            SymmetryGenerator(
                f"line-d{c}", PauliOperator.x_at(n, *lat.diagonal_line(c, +1)), "line"
            )
        )
        gens.append(
            SymmetryGenerator(
                f"line-a{c}", PauliOperator.x_at(n, *lat.diagonal_line(c, -1)), "line"
            )
        )
    sym = SymmetryRep(n, tuple(gens))
    trivial = StabilizerMixture.plus_state(n)
    circuit = square_entangler_circuit(lat)
    target = trivial.apply_circuit(circuit)
    return ModelBundle(
        name="square-sspt",
        lattice=lat,
        n=n,
        symmetry=sym,
        entangler=CircuitQca(circuit),
        entangler_label="cz-edges",
        trivial=trivial,
        target=target,
        catalyst_kinds=("pim-symmetric", "group-average"),
    )


def _build_cocycle_z2z2(sites: int) -> ModelBundle:
    if sites < 3:
        raise RegistryError("the cocycle chain needs at least 3 sites")
    group = FiniteAbelianGroup((2, 2))
    nu = normalize_cocycle(bilinear_cocycle(group, 0, 1))
    circuit = compile_cocycle_circuit(nu, ring_triangulation(sites), sites)
    qsym = QuditSymmetry(group, sites)
    sym = SymmetryRep(sites, ())  # qubit-string generators are not used here

    def trivial_builder() -> dn.DenseState:
        return dn.DenseState.uniform(group.order, sites)

    def target_builder() -> dn.DenseState:
        return circuit.apply(trivial_builder())

    return ModelBundle(
        name="cocycle-z2z2",
        lattice=RingLattice(sites),
        n=sites,
        symmetry=sym,
        entangler=circuit,
        entangler_label="cocycle-gates",
        trivial=None,
        target=None,
        catalyst_kinds=("ghz", "superposition", "gapless"),
        qudit_symmetry=qsym,
        trivial_dense_builder=trivial_builder,
        target_dense_builder=target_builder,
    )


def build_model(name: str, **params) -> ModelBundle:
    """Build and validate a registry bundle.

    Size parameters: n (1D models), lx/ly (lieb-2d), l (square-sspt),
    sites (cocycle chains).
    """
    if name == "lsm-dimer":
        bundle = _build_lsm_dimer(int(params.get("n", 8)))
    elif name == "cluster-1d":
        bundle = _build_cluster_1d(int(params.get("n", 8)))
    elif name == "lieb-2d":
        bundle = _build_lieb_2d(int(params.get("lx", 2)), int(params.get("ly", 2)))
    elif name == "square-sspt":
        bundle = _build_square_sspt(int(params.get("l", 3)))
    elif name == "cocycle-z2z2":
        bundle = _build_cocycle_z2z2(int(params.get("sites", 4)))
    else:
        raise RegistryError(f"unknown model key {name!r}; known: {REGISTRY_KEYS}")
    _check_bundle(bundle)
    return bundle


def _check_bundle(bundle: ModelBundle) -> None:
    if bundle.is_clifford:
        for gen in bundle.symmetry.generators:
            conj = bundle.entangler.conjugate(gen.pauli)
            if conj != gen.pauli:
                raise AssertionError(
                    f"entangler is not symmetric under {gen.name} in {bundle.name}"
                )
        evolved = bundle.trivial.apply_qca(bundle.entangler)
        if not evolved.same_state(bundle.target):
            raise AssertionError(f"target state mismatch in {bundle.name}")
    else:
        qsym = bundle.qudit_symmetry
        rng = np.random.default_rng(97)
        probes = [bundle.trivial_dense()]
        for _ in range(2):
            amps = rng.normal(size=qsym.group.order**bundle.n) + 1j * rng.normal(
                size=qsym.group.order**bundle.n
            )
            probes.append(
                dn.DenseState.from_amplitudes(
                    qsym.group.order, bundle.n, amps, normalize=True
                )
            )
        for state in probes:
            for g in qsym.group.elements():
                before = bundle.entangler.apply(qsym.apply(state, g))
                after = qsym.apply(bundle.entangler.apply(state), g)
                if np.linalg.norm(before.amps - after.amps) > 1e-10:
                    raise AssertionError("cocycle entangler is not symmetric as a whole")
        evolved = bundle.entangler.apply(bundle.trivial_dense())
        if abs(dn.overlap(evolved, bundle.target_dense())) < 1 - 1e-10:
            raise AssertionError("cocycle target mismatch")


# ---------------------------------------------------------------------------
# Catalysts
# ---------------------------------------------------------------------------


def _verify_catalyst_stab(bundle: ModelBundle, cat: Catalyst) -> None:
    state = cat.stab
    for name in cat.strong_under:
        gen = bundle.symmetry.by_name(name)
        if state.membership_sign(gen.pauli) != 1:
            raise AssertionError(f"catalyst {cat.name} is not strongly {name}-symmetric")
    for name in cat.weak_under:
        gen = bundle.symmetry.by_name(name)
        if any(gen.pauli.symplectic_product(g) for g in state.generators):
            raise AssertionError(f"catalyst {cat.name} is not weakly {name}-symmetric")
    if not is_invariant(state, bundle.entangler):
        raise AssertionError(f"catalyst {cat.name} is not entangler-invariant")


def _verify_catalyst_dense(bundle: ModelBundle, cat: Catalyst) -> None:
    state = cat.dense_state
    if bundle.qudit_symmetry is not None:
        qsym = bundle.qudit_symmetry
        for g in qsym.group.elements():
            moved = qsym.apply(state, g)
            if abs(complex(np.vdot(state.amps, moved.amps)) - 1) > 1e-9:
                raise AssertionError(f"catalyst {cat.name} is not symmetric under {g}")
        evolved = bundle.entangler.apply(state)
    else:
        for name in cat.strong_under:
            gen = bundle.symmetry.by_name(name)
            moved = dn.apply_pauli(state, gen.pauli)
            if abs(complex(np.vdot(state.amps, moved.amps)) - 1) > 1e-9:
                raise AssertionError(f"catalyst {cat.name} is not symmetric under {name}")
        if isinstance(bundle.entangler, PermutationQca):
            evolved = dn.apply_site_permutation(state, list(bundle.entangler.perm))
        else:
            evolved = dn.apply_circuit_dense(state, bundle.entangler.circuit)
    if abs(abs(complex(np.vdot(state.amps, evolved.amps))) - 1) > 1e-9:
        raise AssertionError(f"catalyst {cat.name} is not entangler-invariant")


def build_catalyst(
    bundle: ModelBundle, kind: str, rng: Optional[np.random.Generator] = None
) -> Catalyst:
    """Construct a named catalyst for the bundle and verify it before return."""
    builder = _CATALYST_BUILDERS.get((bundle.name, kind))
    if builder is None:
        raise RegistryError(f"no catalyst {kind!r} for model {bundle.name!r}")
    cat = builder(bundle, rng)
    if cat.engine == "stabilizer":
        _verify_catalyst_stab(bundle, cat)
    else:
        _verify_catalyst_dense(bundle, cat)
    return cat


# -- individual constructions ---------------------------------------------


def _lsm_ghz(bundle: ModelBundle, rng) -> Catalyst:
    n = bundle.n
    gens = ghz_generators(n, list(range(n)))
    gens.append(PauliOperator.z_at(n, *range(n)))
    state = StabilizerMixture.from_generators(n, _independent_subset(n, gens))
    return Catalyst(
        name="ghz",
        engine="stabilizer",
        mixed=False,
        stab=state,
        strong_under=("x-all", "z-all"),
        prep_recipe=None,
    )


def _lsm_long_range_bell(bundle: ModelBundle, rng) -> Catalyst:
    n = bundle.n
    m = n // 2
    gens = []
    for i in range(m):
        gens.append(PauliOperator.x_at(n, i, i + m))
        gens.append(PauliOperator.z_at(n, i, i + m))
    state = StabilizerMixture.from_generators(n, gens)
    return Catalyst(
        name="long-range-bell",
        engine="stabilizer",
        mixed=False,
        stab=state,
        strong_under=("x-all", "z-all"),
        prep_recipe="lr-bell-swap",
    )


def _superposition_catalyst(bundle: ModelBundle, rng) -> Catalyst:
    triv = bundle.trivial_dense()
    targ = bundle.target_dense()
    amps = triv.amps + targ.amps
    state = dn.DenseState.from_amplitudes(triv.q, triv.sites, amps, normalize=True)
    strong = tuple(bundle.symmetry.names()) if bundle.qudit_symmetry is None else ()
    return Catalyst(
        name="superposition",
        engine="dense",
        mixed=False,
        dense_state=state,
        strong_under=strong,
        notes="equal-weight superposition of the trivial and entangled states",
    )


def _gapless_catalyst(bundle: ModelBundle, rng) -> Catalyst:
    op = build_hamiltonian(bundle, "catalyst-sum")
    energy, basis = dn.ground_state(op)
    if len(basis) != 1:
        raise AssertionError(
            f"catalyst Hamiltonian for {bundle.name} has a degenerate ground space "
            f"({len(basis)} states) at this size"
        )
    vec = basis[0]
    state = dn.DenseState.from_amplitudes(
        2 if bundle.qudit_symmetry is None else bundle.qudit_symmetry.group.order,
        bundle.n,
        vec,
        normalize=True,
    )
    strong = tuple(bundle.symmetry.names()) if bundle.qudit_symmetry is None else ()
    # The ground state must carry eigenvalue +1, not just map to itself.
    return Catalyst(
        name="gapless",
        engine="dense",
        mixed=False,
        dense_state=state,
        strong_under=strong,
        notes=f"unique ground state at energy {energy:.6f}",
    )


def _cluster_ghz(bundle: ModelBundle, rng) -> Catalyst:
    n = bundle.n
    gens = ghz_generators(n, list(range(0, n, 2))) + ghz_generators(
        n, list(range(1, n, 2))
    )
    state = StabilizerMixture.from_generators(n, gens)
    return Catalyst(
        name="ghz",
        engine="stabilizer",
        mixed=False,
        stab=state,
        strong_under=("x-even", "x-odd"),
        prep_recipe="ghz-staircase",
    )


def _cluster_ghz_one_sublattice(bundle: ModelBundle, rng) -> Catalyst:
    n = bundle.n
    gens = ghz_generators(n, list(range(0, n, 2)))
    gens += [PauliOperator.x_at(n, i) for i in range(1, n, 2)]
    state = StabilizerMixture.from_generators(n, gens)
    return Catalyst(
        name="ghz-one-sublattice",
        engine="stabilizer",
        mixed=False,
        stab=state,
        strong_under=("x-even", "x-odd"),
        prep_recipe="ghz-staircase-even",
    )


def _cluster_swssb(bundle: ModelBundle, rng) -> Catalyst:
    n = bundle.n
    state = StabilizerMixture.from_generators(
        n,
        (
            PauliOperator.x_at(n, *range(0, n, 2)),
            PauliOperator.x_at(n, *range(1, n, 2)),
        ),
    )
    return Catalyst(
        name="swssb",
        engine="stabilizer",
        mixed=True,
        stab=state,
        strong_under=("x-even", "x-odd"),
        prep_recipe="measure-zz",
        notes="spin-glass-like mixture with long-range fidelity correlations",
    )


def _group_average_catalyst(bundle: ModelBundle, rng) -> Catalyst:
    """rho proportional to the sum of all symmetry operators."""
    gens = [g.pauli for g in bundle.symmetry.generators]
    state = StabilizerMixture.from_generators(
        bundle.n, _independent_subset(bundle.n, gens)
    )
    return Catalyst(
        name="group-average",
        engine="stabilizer",
        mixed=True,
        stab=state,
        strong_under=tuple(bundle.symmetry.names()),
    )


def _lieb_ghz_vertices(bundle: ModelBundle, rng) -> Catalyst:
    lat: LiebLattice = bundle.lattice
    n = bundle.n
    gens = [PauliOperator.x_at(n, e) for e in lat.edges()]
    gens += ghz_generators(n, lat.vertices())
    state = StabilizerMixture.from_generators(n, gens)
    return Catalyst(
        name="ghz-vertices",
        engine="stabilizer",
        mixed=False,
        stab=state,
        strong_under=tuple(bundle.symmetry.names()),
        notes="cat state on the vertex qubits; edge qubits polarized in X",
    )


def _lieb_toric_code(bundle: ModelBundle, rng) -> Catalyst:
    lat: LiebLattice = bundle.lattice
    n = bundle.n
    gens = [PauliOperator.x_at(n, v) for v in lat.vertices()]
    gens += [PauliOperator.z_at(n, e) for e in lat.edges()]
    state = StabilizerMixture.from_generators(n, gens)
    for edges in lat.plaquettes():
        state = state.project(PauliOperator.x_at(n, *edges), 1)
    strong = ["x-vertices"] + [f"loop-f{i}" for i in range(len(lat.plaquettes()))]
    return Catalyst(
        name="toric-code",
        engine="stabilizer",
        mixed=False,
        stab=state,
        strong_under=tuple(strong),
        broken=("loop-wind-h", "loop-wind-v"),
        notes="topologically ordered edge state; winding 1-form loops are "
        "spontaneously broken, which is the allowed partial breaking",
    )


def _lieb_mixed(bundle: ModelBundle, rng) -> Catalyst:
    lat: LiebLattice = bundle.lattice
    n = bundle.n
    gens = [PauliOperator.x_at(n, *lat.vertices())]
    gens += [PauliOperator.x_at(n, *edges) for edges in lat.plaquettes()]
    state = StabilizerMixture.from_generators(n, _independent_subset(n, gens))
    strong = ["x-vertices"] + [f"loop-f{i}" for i in range(len(lat.plaquettes()))]
    return Catalyst(
        name="lieb-mixed",
        engine="stabilizer",
        mixed=True,
        stab=state,
        strong_under=tuple(strong),
        weak_under=("loop-wind-h", "loop-wind-v"),
        notes="strong-to-weak breaking of both the 0-form and 1-form symmetry",
    )


def _square_pim_symmetric(bundle: ModelBundle, rng) -> Catalyst:
    lat: SquareLattice = bundle.lattice
    n = bundle.n
    gens = [PauliOperator.z_at(n, *lat.neighbors(v)) for v in range(n)]
    gens += [g.pauli for g in bundle.symmetry.generators]
    state = StabilizerMixture.from_generators(n, _independent_subset(n, gens))
    return Catalyst(
        name="pim-symmetric",
        engine="stabilizer",
        mixed=not state.is_pure,
        stab=state,
        strong_under=tuple(bundle.symmetry.names()),
        notes="line-symmetric ground state of the plaquette Ising model",
    )


def _cocycle_ghz(bundle: ModelBundle, rng) -> Catalyst:
    qsym = bundle.qudit_symmetry
    group = qsym.group
    q = group.order
    amps = np.zeros(q**bundle.n, dtype=np.complex128)
    for g in group.elements():
        idx = sum(group.index(g) * q**i for i in range(bundle.n))
        amps[idx] = 1.0
    state = dn.DenseState.from_amplitudes(q, bundle.n, amps, normalize=True)
    return Catalyst(
        name="ghz",
        engine="dense",
        mixed=False,
        dense_state=state,
        notes="uniform-group cat state; completely breaks the on-site symmetry",
    )


def _independent_subset(n: int, gens: Iterable[PauliOperator]) -> list[PauliOperator]:
    out: list[PauliOperator] = []
    rows: list[int] = []
    for g in gens:
        candidate = rows + [g.symplectic()]
        if BitMatrix(candidate, 2 * n).rank() == len(candidate):
            out.append(g)
            rows.append(g.symplectic())
    return out


_CATALYST_BUILDERS: dict[tuple[str, str], Callable] = {
    ("lsm-dimer", "ghz"): _lsm_ghz,
    ("lsm-dimer", "superposition"): _superposition_catalyst,
    ("lsm-dimer", "gapless"): _gapless_catalyst,
    ("lsm-dimer", "long-range-bell"): _lsm_long_range_bell,
    ("cluster-1d", "ghz"): _cluster_ghz,
    ("cluster-1d", "ghz-one-sublattice"): _cluster_ghz_one_sublattice,
    ("cluster-1d", "superposition"): _superposition_catalyst,
    ("cluster-1d", "gapless"): _gapless_catalyst,
    ("cluster-1d", "swssb"): _cluster_swssb,
    ("cluster-1d", "group-average"): _group_average_catalyst,
    ("lieb-2d", "ghz-vertices"): _lieb_ghz_vertices,
    ("lieb-2d", "toric-code"): _lieb_toric_code,
    ("lieb-2d", "lieb-mixed"): _lieb_mixed,
    ("square-sspt", "pim-symmetric"): _square_pim_symmetric,
    ("square-sspt", "group-average"): _group_average_catalyst,
    ("cocycle-z2z2", "ghz"): _cocycle_ghz,
    ("cocycle-z2z2", "superposition"): _superposition_catalyst,
    ("cocycle-z2z2", "gapless"): _gapless_catalyst,
}


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------


def build_hamiltonian(
    bundle: ModelBundle, kind: str, alpha: Optional[float] = None
) -> dn.DenseOperator:
    """Dense Hamiltonians: trivial / entangled-side / interpolated / catalyst-sum."""
    if bundle.qudit_symmetry is not None:
        return _cocycle_hamiltonian(bundle, kind, alpha)
    triv_terms = _trivial_terms(bundle)
    if kind == "triv":
        return dn.DenseOperator.from_pauli_terms(bundle.n, triv_terms)
    spt_terms = [
        (coeff, bundle.entangler.conjugate(p)) for coeff, p in triv_terms
    ]
    if kind == "spt":
        return dn.DenseOperator.from_pauli_terms(bundle.n, spt_terms)
    if kind == "interpolated":
        if alpha is None:
            raise ValueError("interpolated Hamiltonians need alpha")
        terms = [(alpha * c, p) for c, p in triv_terms]
        terms += [((1 - alpha) * c, p) for c, p in spt_terms]
        return dn.DenseOperator.from_pauli_terms(bundle.n, terms)
    if kind == "catalyst-sum":
        return dn.DenseOperator.from_pauli_terms(bundle.n, triv_terms + spt_terms)
    raise RegistryError(f"unknown hamiltonian kind {kind!r}")


def _trivial_terms(bundle: ModelBundle) -> list[tuple[float, PauliOperator]]:
    n = bundle.n
    if bundle.name == "lsm-dimer":
        terms = []
        for i in range(0, n, 2):
            terms.append((-1.0, PauliOperator.x_at(n, i, (i + 1) % n)))
            terms.append((-1.0, PauliOperator.z_at(n, i, (i + 1) % n)))
        return terms
    return [(-1.0, PauliOperator.x_at(n, i)) for i in range(n)]


def _cocycle_hamiltonian(bundle, kind, alpha) -> dn.DenseOperator:
    qsym = bundle.qudit_symmetry
    q = qsym.group.order
    plus_proj = np.full((q, q), 1.0 / q, dtype=np.complex128)
    triv = [((i,), -plus_proj) for i in range(bundle.n)]
    if kind == "triv":
        return dn.DenseOperator(bundle.n, q, triv)
    circuit: CocycleCircuit = bundle.entangler
    conj1 = [_conjugate_term_by_diagonal(circuit, s, m) for s, m in triv]
    if kind == "spt":
        return dn.DenseOperator(bundle.n, q, conj1)
    if kind == "interpolated":
        if alpha is None:
            raise ValueError("interpolated Hamiltonians need alpha")
        terms = [(s, alpha * m) for s, m in triv] + [
            (s, (1 - alpha) * m) for s, m in conj1
        ]
        return dn.DenseOperator(bundle.n, q, terms)
    if kind == "catalyst-sum":
        order = circuit.order()
        terms = list(triv)
        current = triv
        for _ in range(order - 1):
            current = [_conjugate_term_by_diagonal(circuit, s, m) for s, m in current]
            terms += current
        return dn.DenseOperator(bundle.n, q, terms)
    raise RegistryError(f"unknown hamiltonian kind {kind!r}")


def _conjugate_term_by_diagonal(
    circuit: CocycleCircuit, support: tuple[int, ...], mat: np.ndarray
) -> tuple[tuple[int, ...], np.ndarray]:
    """Conjugate a local term by the diagonal circuit, growing the support."""
    touching = []
    halo = set(support)
    for gate in circuit.gates:
        if any(s in support for s in gate.sites):
            touching.append(gate)
            halo.update(gate.sites)
    new_support = tuple(sorted(halo))
    q = circuit.q
    m = len(new_support)
    pos = {s: i for i, s in enumerate(new_support)}
    dim = q**m
    diag = np.ones(dim, dtype=np.complex128)
    for gate in touching:
        phases = gate.phases()
        for idx in range(dim):
            digits = [(idx // q**k) % q for k in range(m)]
            gate_idx = 0
            for k, site in enumerate(gate.sites):
                gate_idx += digits[pos[site]] * q**k
            diag[idx] *= phases[gate_idx]
    embedded = dn.embed_operator(mat, [pos[s] for s in support], m, q)
    new_mat = (diag[:, None] * embedded) * diag.conj()[None, :]
    return new_support, new_mat
