"""Exact small-system oracle: dense state vectors and density matrices.

Sites carry dimension q (2 for qubits, |G| for cocycle models).  Everything
here is deliberately brute force: full hermitian eigensolves, explicit
matrices, no iterative methods.  Configured limits keep sizes at desk scale;
override with CATALAB_DENSE_LIMIT / CATALAB_EIG_LIMIT (amplitude counts).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .pauli import PauliOperator
from .stabilizer import CliffordGate, CliffordCircuit, StabilizerMixture

_DEFAULT_AMP_LIMIT = 2**20
_DEFAULT_EIG_LIMIT = 2**14

ATOL = 1e-10


def amp_limit() -> int:
    return int(os.environ.get("CATALAB_DENSE_LIMIT", _DEFAULT_AMP_LIMIT))


def eig_limit() -> int:
    return int(os.environ.get("CATALAB_EIG_LIMIT", _DEFAULT_EIG_LIMIT))


@dataclass
class DenseState:
    """Complex amplitude vector over `sites` qudits of dimension q."""

    q: int
    sites: int
    amps: np.ndarray

    def __post_init__(self):
        dim = self.q**self.sites
        if dim > amp_limit():
            raise ValueError(f"dense state of {dim} amplitudes exceeds the configured limit")
        self.amps = np.asarray(self.amps, dtype=np.complex128).reshape(dim)
        norm = np.linalg.norm(self.amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm {norm} is not 1 within 1e-12")

    @classmethod
    def from_amplitudes(cls, q: int, sites: int, amps: np.ndarray, normalize: bool = False):
        amps = np.asarray(amps, dtype=np.complex128)
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(q, sites, amps)

    @classmethod
    def computational(cls, q: int, sites: int, index: int = 0) -> "DenseState":
        amps = np.zeros(q**sites, dtype=np.complex128)
        amps[index] = 1.0
        return cls(q, sites, amps)

    @classmethod
    def uniform(cls, q: int, sites: int) -> "DenseState":
        dim = q**sites
        return cls(q, sites, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))

    def copy(self) -> "DenseState":
        return DenseState(self.q, self.sites, self.amps.copy())

    def tensor(self, other: "DenseState") -> "DenseState":
        if self.q != other.q:
            raise ValueError("site dimensions differ")
        # Site 0 is the least-significant axis throughout the package.
        amps = np.kron(other.amps, self.amps)
        return DenseState(self.q, self.sites + other.sites, amps)


def _axis(state_sites: int, site: int) -> int:
    # amps.reshape((q,)*sites) puts the highest site index on axis 0.
    return state_sites - 1 - site


def apply_matrix(state: DenseState, matrix: np.ndarray, support: Sequence[int]) -> DenseState:
    """Contract a q^m x q^m matrix into the state on the given sites."""
    q, n = state.q, state.sites
    m = len(support)
    if matrix.shape != (q**m, q**m):
        raise ValueError("matrix shape does not match the support")
    psi = state.amps.reshape((q,) * n)
    # Local matrices index support[0] as the least-significant digit.
    axes = [_axis(n, s) for s in reversed(support)]
    moved = np.moveaxis(psi, axes, range(m))
    shaped = moved.reshape(q**m, -1)
    out = matrix @ shaped
    out = out.reshape((q,) * m + moved.shape[m:])
    out = np.moveaxis(out, range(m), axes)
    return DenseState.from_amplitudes(q, n, out.reshape(-1))


def apply_local_unitary(state: DenseState, matrix: np.ndarray, support: Sequence[int]) -> DenseState:
    """Apply a local unitary; rejects non-unitary input (1e-10)."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    dim = matrix.shape[0]
    if not np.allclose(matrix @ matrix.conj().T, np.eye(dim), atol=1e-10):
        raise ValueError("matrix is not unitary within 1e-10")
    return apply_matrix(state, matrix, support)


def apply_diagonal(state: DenseState, phases: np.ndarray, support: Sequence[int]) -> DenseState:
    """Multiply by a diagonal gate given as a q^m phase vector on `support`."""
    q, n = state.q, state.sites
    m = len(support)
    psi = state.amps.reshape((q,) * n)
    axes = [_axis(n, s) for s in reversed(support)]
    moved = np.moveaxis(psi, axes, range(m)).copy()
    shaped = moved.reshape(q**m, -1)
    shaped *= np.asarray(phases, dtype=np.complex128)[:, None]
    out = np.moveaxis(shaped.reshape((q,) * m + moved.shape[m:]), range(m), axes)
    return DenseState.from_amplitudes(q, n, out.reshape(-1))


def apply_site_relabel(state: DenseState, mapping: Sequence[int], sites: Optional[Sequence[int]] = None) -> DenseState:
    """Relabel local basis states |v> -> |mapping[v]> on the chosen sites."""
    q, n = state.q, state.sites
    target = range(n) if sites is None else sites
    psi = state.amps.reshape((q,) * n)
    inv = np.argsort(np.asarray(mapping))
    for s in target:
        psi = np.take(psi, inv, axis=_axis(n, s))
    return DenseState.from_amplitudes(q, n, psi.reshape(-1))


def apply_site_permutation(state: DenseState, perm: Sequence[int]) -> DenseState:
    """Move the content of site i to site perm[i] (lattice translation etc.)."""
    q, n = state.q, state.sites
    psi = state.amps.reshape((q,) * n)
    axes_new = [0] * n
    for i, p in enumerate(perm):
        axes_new[_axis(n, p)] = _axis(n, i)
    psi = psi.transpose(axes_new)
    return DenseState.from_amplitudes(q, n, psi.reshape(-1))


def apply_pauli(state: DenseState, p: PauliOperator) -> DenseState:
    """Exact Pauli action for qubit states via index arithmetic."""
    if state.q != 2 or p.n != state.sites:
        raise ValueError("apply_pauli expects a qubit state of matching size")
    idx = np.arange(state.amps.size, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(p.z)) & np.uint64(1)).astype(np.float64)
    tmp = signs * state.amps
    out = tmp[(idx ^ np.uint64(p.x)).astype(np.int64)]
    return DenseState.from_amplitudes(2, state.sites, (1j**p.phase) * out)


def overlap(a: DenseState, b: DenseState) -> complex:
    if a.q != b.q or a.sites != b.sites:
        raise ValueError("shape mismatch")
    return complex(np.vdot(a.amps, b.amps))


def apply_circuit_dense(state: DenseState, circuit: CliffordCircuit) -> DenseState:
    for layer in circuit.layers:
        for gate in layer:
            state = apply_matrix(state, gate_unitary(gate), list(gate.support))
    return state


# ---------------------------------------------------------------------------
# Operators and Hamiltonians
# ---------------------------------------------------------------------------


@dataclass
class DenseOperator:
    """Either a single matrix on a support or a sum of hermitian local terms."""

    sites: int
    q: int
    terms: list[tuple[tuple[int, ...], np.ndarray]]
    hermitian: bool = True

    def __post_init__(self):
        checked = []
        for support, mat in self.terms:
            mat = np.asarray(mat, dtype=np.complex128)
            support = tuple(support)
            if len(set(support)) != len(support):
                raise ValueError("term support has repeated sites")
            if any(not 0 <= s < self.sites for s in support):
                raise ValueError("term support out of range")
            if mat.shape != (self.q ** len(support),) * 2:
                raise ValueError("term matrix does not match its support")
            if self.hermitian and not np.allclose(mat, mat.conj().T, atol=1e-12):
                raise ValueError("hamiltonian term is not hermitian within 1e-12")
            checked.append((support, mat))
        self.terms = checked

    @classmethod
    def from_pauli_terms(
        cls, sites: int, terms: Iterable[tuple[float, PauliOperator]]
    ) -> "DenseOperator":
        out = []
        for coeff, p in terms:
            support = tuple(p.support())
            local = _restrict_pauli(p, support)
            out.append((support, coeff * pauli_matrix(local)))
        return cls(sites, 2, out)

    def to_matrix(self) -> np.ndarray:
        dim = self.q**self.sites
        if dim > eig_limit():
            raise ValueError(f"operator dimension {dim} exceeds the dense-eig limit")
        total = np.zeros((dim, dim), dtype=np.complex128)
        for support, mat in self.terms:
            total += embed_operator(mat, support, self.sites, self.q)
        return total

    def conjugated(self, conj_term: Callable[[tuple[int, ...], np.ndarray], tuple[tuple[int, ...], np.ndarray]]) -> "DenseOperator":
        return DenseOperator(
            self.sites, self.q, [conj_term(s, m) for s, m in self.terms], self.hermitian
        )

    def __add__(self, other: "DenseOperator") -> "DenseOperator":
        if (self.sites, self.q) != (other.sites, other.q):
            raise ValueError("operator shapes differ")
        return DenseOperator(self.sites, self.q, self.terms + other.terms, self.hermitian and other.hermitian)

    def scaled(self, factor: float) -> "DenseOperator":
        return DenseOperator(self.sites, self.q, [(s, factor * m) for s, m in self.terms], self.hermitian)


def _restrict_pauli(p: PauliOperator, support: tuple[int, ...]) -> PauliOperator:
    x = z = 0
    for i, s in enumerate(support):
        if (p.x >> s) & 1:
            x |= 1 << i
        if (p.z >> s) & 1:
            z |= 1 << i
    return PauliOperator(len(support), x, z, p.phase)


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a signed Pauli."""
    dim = 1 << p.n
    idx = np.arange(dim, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(p.z)) & np.uint64(1)).astype(np.float64)
    mat = np.zeros((dim, dim), dtype=np.complex128)
    rows = (idx ^ np.uint64(p.x)).astype(np.int64)
    mat[rows, idx.astype(np.int64)] = (1j**p.phase) * signs
    return mat


def embed_operator(mat: np.ndarray, support: Sequence[int], sites: int, q: int) -> np.ndarray:
    """Embed a local operator into the full q^sites space."""
    support = list(support)
    m = len(support)
    rest = [s for s in range(sites) if s not in support]
    full = np.kron(mat, np.eye(q ** len(rest), dtype=np.complex128))
    # Axis j of the reshaped tensor holds the j-th most significant digit:
    # support digits first (support[0] least significant), then rest digits.
    order = list(reversed(support)) + list(reversed(rest))
    tensor = full.reshape((q,) * (2 * sites))
    perm = [0] * sites
    for axis_pos, site in enumerate(order):
        perm[_axis(sites, site)] = axis_pos
    tensor = tensor.transpose(perm + [p + sites for p in perm])
    return tensor.reshape(q**sites, q**sites)


def ground_state(
    op: DenseOperator, degeneracy_tol: float = 1e-8
) -> tuple[float, list[np.ndarray]]:
    """Full hermitian eigensolve; returns energy and an orthonormal ground basis."""
    h = op.to_matrix()
    evals, evecs = np.linalg.eigh(h)
    e0 = float(evals[0])
    cols = [evecs[:, i].copy() for i in range(len(evals)) if evals[i] <= e0 + degeneracy_tol]
    return e0, cols


def symmetrize_in_ground_space(
    basis: Sequence[np.ndarray], symmetries: Sequence[Callable[[np.ndarray], np.ndarray]]
) -> np.ndarray:
    """Simultaneous +1 eigenvector of all symmetries within span(basis).

    Raises ValueError when the span is not symmetry-invariant or contains no
    symmetric vector.
    """
    if not basis:
        raise ValueError("empty ground-space basis")
    b = np.stack(basis, axis=1)
    k = b.shape[1]
    proj = np.eye(k, dtype=np.complex128)
    for apply_s in symmetries:
        sb = np.stack([apply_s(b[:, i]) for i in range(k)], axis=1)
        m = b.conj().T @ sb
        if not np.allclose(b @ m, sb, atol=1e-9):
            raise ValueError("ground space is not invariant under the symmetry")
        proj = proj @ (np.eye(k) + m) / 2.0
    for i in range(k):
        v = proj @ np.eye(k, dtype=np.complex128)[:, i]
        if np.linalg.norm(v) > 1e-8:
            vec = b @ v
            vec = vec / np.linalg.norm(vec)
            for apply_s in symmetries:
                if np.linalg.norm(apply_s(vec) - vec) > 1e-9:
                    raise ValueError("projector output failed the symmetry check")
            return vec
    raise ValueError("no symmetric vector in the ground space")


# ---------------------------------------------------------------------------
# Density-matrix diagnostics
# ---------------------------------------------------------------------------


def density_from_mixture(weights: Sequence[float], states: Sequence[np.ndarray]) -> np.ndarray:
    if abs(sum(weights) - 1.0) > 1e-10:
        raise ValueError("weights must sum to 1")
    dim = states[0].shape[0]
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for w, psi in zip(weights, states):
        rho += w * np.outer(psi, psi.conj())
    return rho


def dense_fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """F(rho, sigma) = Tr sqrt(sqrt(rho) sigma sqrt(rho)).

    Eigenvalues below 1e-12 are treated as exact zeros: the states handled
    here have dyadic spectra bounded well away from that scale, and taking
    square roots of eigensolver noise would otherwise dominate the error.
    """
    evals, evecs = np.linalg.eigh(rho)
    evals = np.where(evals < 1e-12, 0.0, evals)
    sqrt_rho = (evecs * np.sqrt(evals)) @ evecs.conj().T
    middle = sqrt_rho @ sigma @ sqrt_rho
    mvals = np.linalg.eigvalsh(middle)
    mvals = np.where(mvals < 1e-12, 0.0, mvals)
    return float(np.sum(np.sqrt(mvals)))


def dense_renyi_correlator(
    rho: np.ndarray, o_i: np.ndarray, o_j: np.ndarray, order: int
) -> float:
    """Tr(rho sigma^(n-1)) / Tr(rho^n) with sigma = Oi' Oj rho Oj' Oi."""
    w = o_i.conj().T @ o_j
    sigma = w @ rho @ w.conj().T
    num = np.trace(rho @ np.linalg.matrix_power(sigma, order - 1))
    den = np.trace(np.linalg.matrix_power(rho, order))
    return float((num / den).real)


# ---------------------------------------------------------------------------
# Bridges from the stabilizer engine
# ---------------------------------------------------------------------------


def stabilizer_to_dense(state: StabilizerMixture) -> DenseState:
    """Dense vector for a pure stabilizer state (phase convention arbitrary)."""
    if not state.is_pure:
        raise ValueError("dense vector form needs a pure state")
    n = state.n
    dim = 1 << n
    for start in range(dim):
        psi = np.zeros(dim, dtype=np.complex128)
        psi[start] = 1.0
        vec = DenseState(2, n, psi)
        ok = True
        for g in state.generators:
            projected = 0.5 * (vec.amps + apply_pauli(vec, g).amps)
            norm = np.linalg.norm(projected)
            if norm < 1e-9:
                ok = False
                break
            vec = DenseState.from_amplitudes(2, n, projected / norm)
        if ok:
            return vec
    raise AssertionError("projector product vanished on every basis state")


def stabilizer_density(state: StabilizerMixture) -> np.ndarray:
    """Dense density matrix of a stabilizer mixture (exact)."""
    n = state.n
    dim = 1 << n
    rho = np.eye(dim, dtype=np.complex128)
    for g in state.generators:
        rho = rho @ (np.eye(dim) + pauli_matrix(g)) / 2.0
    return rho / (2 ** (n - state.k))


def gate_unitary(gate: CliffordGate) -> np.ndarray:
    """Dense unitary of a Clifford gate on its support.

    The tableau fixes the gate up to a global phase; the phase is pinned by
    making the trace positive real (all gates used on the dense path have
    nonzero trace, e.g. conjugated SWAPs with trace 2^(m-1)), falling back to
    the first significant matrix entry otherwise.
    """
    support = list(gate.support)
    m = len(support)
    dim = 1 << m
    img_x = [_restrict_pauli(gate.images[a][0], tuple(support)) for a in support]
    img_z = [_restrict_pauli(gate.images[a][1], tuple(support)) for a in support]

    v0 = None
    for start in range(dim):
        psi = np.zeros(dim, dtype=np.complex128)
        psi[start] = 1.0
        vec = DenseState(2, m, psi)
        ok = True
        for g in img_z:
            projected = 0.5 * (vec.amps + apply_pauli(vec, g).amps)
            norm = np.linalg.norm(projected)
            if norm < 1e-9:
                ok = False
                break
            vec = DenseState.from_amplitudes(2, m, projected / norm)
        if ok:
            v0 = vec
            break
    if v0 is None:
        raise AssertionError("could not build the image of |0...0>")

    cols = np.zeros((dim, dim), dtype=np.complex128)
    for x in range(dim):
        col = v0
        for a in range(m):
            if (x >> a) & 1:
                col = apply_pauli(col, img_x[a])
        cols[:, x] = col.amps
    tr = np.trace(cols)
    if abs(tr) > 1e-9:
        cols = cols * (tr.conjugate() / abs(tr))
    else:
        flat = cols.reshape(-1)
        pivot = flat[np.argmax(np.abs(flat) > 1e-9)]
        cols = cols * (pivot.conjugate() / abs(pivot))
    if not np.allclose(cols @ cols.conj().T, np.eye(dim), atol=1e-9):
        raise AssertionError("gate reconstruction is not unitary")
    return cols
