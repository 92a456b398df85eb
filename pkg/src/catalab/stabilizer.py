"""Pure and mixed stabilizer states with exact Clifford evolution.

A StabilizerMixture holds k independent commuting signed Paulis g_j and
represents the density operator 2^(k-n) * prod_j (1 + g_j); k = n is the pure
case.  Every diagnostic (expectation, fidelity, Renyi correlator, invariance)
reduces to GF(2) algebra plus exact sign bookkeeping, so results are exact
rationals rather than samples.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .gf2 import BitMatrix, rowspace_intersection, solve_in_rowspace
from .pauli import PauliOperator, SiteSet


class UnsupportedCaseError(Exception):
    """Raised when an exact stabilizer algorithm does not cover the input."""


class ZeroProjectionError(Exception):
    """Raised when a forced projection has probability zero."""


# ---------------------------------------------------------------------------
# Clifford gates and circuits
# ---------------------------------------------------------------------------

_NAMED_ONE = {"H", "S", "SDG", "X", "Y", "Z"}
_NAMED_TWO = {"CZ", "CNOT", "SWAP"}
_SELF_INVERSE = {"H", "X", "Y", "Z", "CZ", "CNOT", "SWAP"}


@dataclass(frozen=True)
class CliffordGate:
    """A local Clifford gate given by its conjugation images on its support."""

    kind: str
    n: int
    support: SiteSet
    images: dict[int, tuple[PauliOperator, PauliOperator]] = field(compare=False)

    def __post_init__(self):
        for a in self.support:
            if not 0 <= a < self.n:
                raise ValueError(f"gate support {a} out of range for n={self.n}")
        if self.kind == "TABLEAU":
            _validate_tableau_images(self.n, self.support, self.images)

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        """Exact Heisenberg conjugation g P g^dagger."""
        if p.n != self.n:
            raise ValueError("operator size does not match gate register")
        acc = PauliOperator(self.n, 0, 0, p.phase)
        touched = 0
        for a in self.support:
            bit = 1 << a
            if p.x & bit:
                acc = acc * self.images[a][0]
            if p.z & bit:
                acc = acc * self.images[a][1]
            touched |= bit
        rest = PauliOperator(self.n, p.x & ~touched, p.z & ~touched, 0)
        return acc * rest

    def inverse(self) -> "CliffordGate":
        if self.kind in _SELF_INVERSE:
            return self
        if self.kind == "S":
            return sdg_gate(self.n, self.support[0])
        if self.kind == "SDG":
            return s_gate(self.n, self.support[0])
        return _invert_tableau_gate(self)

    def __repr__(self) -> str:
        return f"{self.kind}{tuple(self.support)}"


def _validate_tableau_images(n, support, images):
    for a in support:
        if a not in images:
            raise ValueError("tableau gate must give images for every support site")
        ix, iz = images[a]
        for img in (ix, iz):
            if img.n != n:
                raise ValueError("image register size mismatch")
            if not img.is_hermitian():
                raise ValueError("tableau images must be hermitian")
            if any(s not in support for s in img.support()):
                raise ValueError("tableau image escapes the gate support")
    sites = list(support)
    basis = []
    for a in sites:
        basis.append((PauliOperator.x_at(n, a), images[a][0]))
        basis.append((PauliOperator.z_at(n, a), images[a][1]))
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            src = basis[i][0].symplectic_product(basis[j][0])
            dst = basis[i][1].symplectic_product(basis[j][1])
            if src != dst:
                raise ValueError("tableau images do not preserve commutation")


def _invert_tableau_gate(gate: CliffordGate) -> CliffordGate:
    sites = list(gate.support)
    m = len(sites)
    pos = {a: i for i, a in enumerate(sites)}

    def to_vec(p: PauliOperator) -> int:
        v = 0
        for a in p.support():
            i = pos[a]
            if (p.x >> a) & 1:
                v |= 1 << i
            if (p.z >> a) & 1:
                v |= 1 << (m + i)
        return v

    cols = []
    for a in sites:
        cols.append(to_vec(gate.images[a][0]))
        cols.append(to_vec(gate.images[a][1]))
    # Matrix with columns = image vectors; rows = 2m coordinates.
    rows = []
    for coord in range(2 * m):
        r = 0
        for c, vec in enumerate(cols):
            if (vec >> coord) & 1:
                r |= 1 << c
        rows.append(r)
    fmat = BitMatrix(rows, 2 * m)

    def preimage(target: PauliOperator) -> PauliOperator:
        combo = fmat.solve_mask(to_vec(target))
        if combo is None:
            raise ValueError("tableau gate is not invertible")
        x = z = 0
        for i, a in enumerate(sites):
            if (combo >> (2 * i)) & 1:
                x |= 1 << a
            if (combo >> (2 * i + 1)) & 1:
                z |= 1 << a
        cand = PauliOperator(gate.n, x, z, (x & z).bit_count() % 4)
        forward = gate.conjugate(cand)
        if forward == target:
            return cand
        if forward == target.negate():
            return cand.negate()
        raise AssertionError("inverse candidate does not conjugate back")

    images = {
        a: (preimage(PauliOperator.x_at(gate.n, a)), preimage(PauliOperator.z_at(gate.n, a)))
        for a in sites
    }
    return CliffordGate("TABLEAU", gate.n, gate.support, images)


def _one_site(kind: str, n: int, a: int, img_x: PauliOperator, img_z: PauliOperator) -> CliffordGate:
    return CliffordGate(kind, n, SiteSet([a]), {a: (img_x, img_z)})


def h_gate(n: int, a: int) -> CliffordGate:
    return _one_site("H", n, a, PauliOperator.z_at(n, a), PauliOperator.x_at(n, a))


def s_gate(n: int, a: int) -> CliffordGate:
    return _one_site("S", n, a, PauliOperator.y_at(n, a), PauliOperator.z_at(n, a))


def sdg_gate(n: int, a: int) -> CliffordGate:
    return _one_site("SDG", n, a, PauliOperator.y_at(n, a).negate(), PauliOperator.z_at(n, a))


def x_gate(n: int, a: int) -> CliffordGate:
    return _one_site("X", n, a, PauliOperator.x_at(n, a), PauliOperator.z_at(n, a).negate())


def y_gate(n: int, a: int) -> CliffordGate:
    return _one_site("Y", n, a, PauliOperator.x_at(n, a).negate(), PauliOperator.z_at(n, a).negate())


def z_gate(n: int, a: int) -> CliffordGate:
    return _one_site("Z", n, a, PauliOperator.x_at(n, a).negate(), PauliOperator.z_at(n, a))


def cz_gate(n: int, a: int, b: int) -> CliffordGate:
    images = {
        a: (PauliOperator.x_at(n, a) * PauliOperator.z_at(n, b), PauliOperator.z_at(n, a)),
        b: (PauliOperator.z_at(n, a) * PauliOperator.x_at(n, b), PauliOperator.z_at(n, b)),
    }
    return CliffordGate("CZ", n, SiteSet([a, b]), images)


def cnot_gate(n: int, control: int, target: int) -> CliffordGate:
    images = {
        control: (
            PauliOperator.x_at(n, control, target),
            PauliOperator.z_at(n, control),
        ),
        target: (
            PauliOperator.x_at(n, target),
            PauliOperator.z_at(n, control, target),
        ),
    }
    return CliffordGate("CNOT", n, SiteSet([control, target]), images)


def swap_gate(n: int, a: int, b: int) -> CliffordGate:
    images = {
        a: (PauliOperator.x_at(n, b), PauliOperator.z_at(n, b)),
        b: (PauliOperator.x_at(n, a), PauliOperator.z_at(n, a)),
    }
    return CliffordGate("SWAP", n, SiteSet([a, b]), images)


def tableau_gate(n: int, images: dict[int, tuple[PauliOperator, PauliOperator]]) -> CliffordGate:
    return CliffordGate("TABLEAU", n, SiteSet(images.keys()), images)


@dataclass(frozen=True)
class CliffordCircuit:
    """Layered local Clifford circuit; gates within a layer have disjoint supports."""

    n: int
    layers: tuple[tuple[CliffordGate, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "layers", tuple(tuple(layer) for layer in self.layers)
        )
        for layer in self.layers:
            seen = 0
            for g in layer:
                if g.n != self.n:
                    raise ValueError("gate register size mismatch")
                mask = 0
                for a in g.support:
                    mask |= 1 << a
                if mask & seen:
                    raise ValueError("overlapping gate supports within a layer")
                seen |= mask

    @property
    def depth(self) -> int:
        return len(self.layers)

    def gates(self) -> Iterable[CliffordGate]:
        for layer in self.layers:
            yield from layer

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        for layer in self.layers:
            for g in layer:
                p = g.conjugate(p)
        return p

    def conjugate_inverse(self, p: PauliOperator) -> PauliOperator:
        for layer in reversed(self.layers):
            for g in reversed(layer):
                p = g.inverse().conjugate(p)
        return p

    def inverse(self) -> "CliffordCircuit":
        inv_layers = tuple(
            tuple(g.inverse() for g in reversed(layer)) for layer in reversed(self.layers)
        )
        return CliffordCircuit(self.n, inv_layers)


def pack_gates_into_layers(n: int, gates: Sequence[CliffordGate]) -> CliffordCircuit:
    """Greedy first-fit packing of commuting/ordered gates into disjoint layers."""
    layers: list[list[CliffordGate]] = []
    masks: list[int] = []
    for g in gates:
        gmask = 0
        for a in g.support:
            gmask |= 1 << a
        placed = False
        for i, m in enumerate(masks):
            if not (m & gmask):
                layers[i].append(g)
                masks[i] |= gmask
                placed = True
                break
        if not placed:
            layers.append([g])
            masks.append(gmask)
    return CliffordCircuit(n, tuple(tuple(layer) for layer in layers))


# ---------------------------------------------------------------------------
# Locality-preserving unitaries (QCA handles)
# ---------------------------------------------------------------------------


class CircuitQca:
    """QCA realized by an explicit Clifford circuit."""

    def __init__(self, circuit: CliffordCircuit):
        self.circuit = circuit
        self.n = circuit.n

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        return self.circuit.conjugate(p)

    def conjugate_inverse(self, p: PauliOperator) -> PauliOperator:
        return self.circuit.conjugate_inverse(p)

    def inverse(self) -> "CircuitQca":
        return CircuitQca(self.circuit.inverse())


class PermutationQca:
    """QCA that relabels sites (e.g. lattice translation); not an FDQC."""

    def __init__(self, perm: Sequence[int]):
        self.perm = tuple(perm)
        self.n = len(self.perm)
        inv = [0] * self.n
        for i, p in enumerate(self.perm):
            inv[p] = i
        self.perm_inv = tuple(inv)

    def conjugate(self, p: PauliOperator) -> PauliOperator:
        return p.permute(list(self.perm))

    def conjugate_inverse(self, p: PauliOperator) -> PauliOperator:
        return p.permute(list(self.perm_inv))

    def inverse(self) -> "PermutationQca":
        return PermutationQca(self.perm_inv)


QcaLike = Union[CircuitQca, PermutationQca]


# ---------------------------------------------------------------------------
# Stabilizer mixtures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerMixture:
    """rho = 2^(k-n) prod_j (1+g_j) for independent commuting signed Paulis."""

    n: int
    generators: tuple[PauliOperator, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_generators(
        cls, n: int, generators: Iterable[PauliOperator], validate: bool = True
    ) -> "StabilizerMixture":
        state = cls(n, tuple(generators))
        if validate:
            state.validate()
        return state

    @classmethod
    def plus_state(cls, n: int) -> "StabilizerMixture":
        return cls(n, tuple(PauliOperator.x_at(n, i) for i in range(n)))

    @classmethod
    def zero_state(cls, n: int) -> "StabilizerMixture":
        return cls(n, tuple(PauliOperator.z_at(n, i) for i in range(n)))

    @classmethod
    def maximally_mixed(cls, n: int) -> "StabilizerMixture":
        return cls(n, ())

    # -- structure ------------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def is_pure(self) -> bool:
        return self.k == self.n

    def validate(self) -> None:
        for g in self.generators:
            if g.n != self.n:
                raise ValueError("generator register size mismatch")
            if not g.is_hermitian():
                raise ValueError(f"generator {g} is not hermitian")
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if gens[i].symplectic_product(gens[j]):
                    raise ValueError(f"generators {gens[i]} and {gens[j]} anticommute")
        rows = [g.symplectic() for g in gens]
        if BitMatrix(rows, 2 * self.n).rank() != len(gens):
            raise ValueError("generators are not independent")

    def tensor(self, other: "StabilizerMixture") -> "StabilizerMixture":
        gens = [g.tensor(PauliOperator.identity(other.n)) for g in self.generators]
        gens += [PauliOperator.identity(self.n).tensor(g) for g in other.generators]
        return StabilizerMixture(self.n + other.n, tuple(gens))

    # -- group membership -------------------------------------------------

    def _combine(self, mask: int) -> PauliOperator:
        acc = PauliOperator.identity(self.n)
        for j, g in enumerate(self.generators):
            if (mask >> j) & 1:
                acc = acc * g
        return acc

    def membership_sign(self, p: PauliOperator) -> Optional[int]:
        """+1 if p is in the signed group, -1 if -p is, None otherwise."""
        rows = [g.symplectic() for g in self.generators]
        combo = solve_in_rowspace(rows, 2 * self.n, p.symplectic())
        if combo is None:
            return None
        member = self._combine(combo)
        diff = (member.phase - p.phase) & 3
        if diff == 0:
            return 1
        if diff == 2:
            return -1
        raise AssertionError("phase mismatch between hermitian operators")

    def expectation(self, p: PauliOperator) -> int:
        """Tr(rho p) for a hermitian Pauli: exactly -1, 0, or +1."""
        if not p.is_hermitian():
            raise ValueError("expectation requires a hermitian operator")
        sign = self.membership_sign(p)
        return 0 if sign is None else sign

    # -- evolution ---------------------------------------------------------

    def apply_gate(self, gate: CliffordGate) -> "StabilizerMixture":
        new = StabilizerMixture(self.n, tuple(gate.conjugate(g) for g in self.generators))
        if __debug__:
            new.validate()
        return new

    def apply_circuit(self, circuit: CliffordCircuit) -> "StabilizerMixture":
        if circuit.n != self.n:
            raise ValueError("circuit register size mismatch")
        gens = list(self.generators)
        for layer in circuit.layers:
            for gate in layer:
                gens = [gate.conjugate(g) for g in gens]
        new = StabilizerMixture(self.n, tuple(gens))
        if __debug__:
            new.validate()
        return new

    def apply_qca(self, qca: QcaLike) -> "StabilizerMixture":
        new = StabilizerMixture(self.n, tuple(qca.conjugate(g) for g in self.generators))
        if __debug__:
            new.validate()
        return new

    def measure(
        self, p: PauliOperator, rng: np.random.Generator
    ) -> tuple[int, "StabilizerMixture"]:
        """Projective measurement of a hermitian Pauli; exact update."""
        if not p.is_hermitian():
            raise ValueError("cannot measure a non-hermitian operator")
        anti = [j for j, g in enumerate(self.generators) if g.symplectic_product(p)]
        if anti:
            outcome = 1 if int(rng.integers(0, 2)) == 0 else -1
            gens = list(self.generators)
            j0 = anti[0]
            for j in anti[1:]:
                gens[j] = gens[j] * gens[j0]
            gens[j0] = p.with_sign(outcome)
            new = StabilizerMixture(self.n, tuple(gens))
        else:
            sign = self.membership_sign(p)
            if sign is not None:
                return sign, self
            outcome = 1 if int(rng.integers(0, 2)) == 0 else -1
            new = StabilizerMixture(self.n, self.generators + (p.with_sign(outcome),))
        if __debug__:
            new.validate()
        return outcome, new

    def project(self, p: PauliOperator, sign: int) -> "StabilizerMixture":
        """Forced projection onto the sign eigenspace of p (renormalized)."""
        if not p.is_hermitian():
            raise ValueError("cannot project onto a non-hermitian operator")
        anti = [j for j, g in enumerate(self.generators) if g.symplectic_product(p)]
        if anti:
            gens = list(self.generators)
            j0 = anti[0]
            for j in anti[1:]:
                gens[j] = gens[j] * gens[j0]
            gens[j0] = p.with_sign(sign)
            return StabilizerMixture(self.n, tuple(gens))
        known = self.membership_sign(p)
        if known is not None:
            if known != sign:
                raise ZeroProjectionError(f"projection onto {sign}*{p} has zero weight")
            return self
        return StabilizerMixture(self.n, self.generators + (p.with_sign(sign),))

    # -- comparison and canonical form --------------------------------------

    def canonical(self) -> "StabilizerMixture":
        """Row-echelon canonical generators (unique per signed group)."""
        rows = [g.symplectic() for g in self.generators]
        mat = BitMatrix(rows, 2 * self.n)
        red, pivots, transform = mat.rref_with_transform()
        gens = tuple(self._combine(transform[r]) for r in range(len(pivots)))
        return StabilizerMixture(self.n, gens)

    def same_state(self, other: "StabilizerMixture") -> bool:
        if self.n != other.n or self.k != other.k:
            return False
        return self.canonical().generators == other.canonical().generators

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "generators": [g.to_string() for g in self.canonical().generators],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, payload: dict) -> "StabilizerMixture":
        gens = tuple(PauliOperator.from_string(s) for s in payload["generators"])
        return cls.from_generators(payload["n"], gens)


# ---------------------------------------------------------------------------
# Exact mixed-state diagnostics
# ---------------------------------------------------------------------------


def _element_with_vector(state: StabilizerMixture, vec: int) -> PauliOperator:
    rows = [g.symplectic() for g in state.generators]
    combo = solve_in_rowspace(rows, 2 * state.n, vec)
    if combo is None:
        raise AssertionError("vector is not in the group row space")
    return state._combine(combo)


def fidelity(rho: StabilizerMixture, sigma: StabilizerMixture) -> Union[Fraction, float]:
    """Uhlmann fidelity of two commuting-projector stabilizer mixtures.

    Exact via sign bookkeeping on the group intersection: zero when some
    common unsigned element carries opposite signs, else 2^(s - (k1+k2)/2)
    with s the intersection dimension.  Raises UnsupportedCaseError when the
    two generator sets do not pairwise commute (caller may fall back to the
    dense oracle).
    """
    if rho.n != sigma.n:
        raise ValueError("register size mismatch")
    for g in rho.generators:
        for h in sigma.generators:
            if g.symplectic_product(h):
                raise UnsupportedCaseError(
                    "fidelity requires pairwise commuting generator sets"
                )
    inter = rowspace_intersection(
        [g.symplectic() for g in rho.generators],
        [h.symplectic() for h in sigma.generators],
        2 * rho.n,
    )
    for vec in inter:
        a = _element_with_vector(rho, vec)
        b = _element_with_vector(sigma, vec)
        if ((a.phase - b.phase) & 3) == 2:
            return Fraction(0)
    s = len(inter)
    e2 = 2 * s - rho.k - sigma.k
    if e2 % 2 == 0:
        e = e2 // 2
        return Fraction(2**e) if e >= 0 else Fraction(1, 2**-e)
    return float(2.0 ** (e2 / 2.0))


def renyi_correlator(
    rho: StabilizerMixture, o_i: PauliOperator, o_j: PauliOperator, order: int
) -> Fraction:
    """Renyi-n correlator Tr(rho sigma^(n-1))/Tr(rho^n), sigma = Oi' Oj rho Oj' Oi.

    For Pauli charge operators the conjugated state shares the unsigned group
    of rho, so the value is the exact sign-consistency indicator for n >= 2
    and trivially 1 for n = 1.
    """
    if order < 1:
        raise ValueError("order must be a positive integer")
    if order == 1:
        return Fraction(1)
    w = o_i.dagger() * o_j
    for g in rho.generators:
        if w.symplectic_product(g):
            return Fraction(0)
    return Fraction(1)


def is_invariant(state: StabilizerMixture, conj: Union[CliffordCircuit, QcaLike]) -> bool:
    """True iff conjugation maps the signed stabilizer group onto itself."""
    conj_fn: Callable[[PauliOperator], PauliOperator]
    if isinstance(conj, CliffordCircuit):
        conj_fn = conj.conjugate
    else:
        conj_fn = conj.conjugate
    for g in state.generators:
        if state.membership_sign(conj_fn(g)) != 1:
            return False
    return True
