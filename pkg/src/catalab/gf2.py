"""Exact linear algebra over GF(2) and over Z_M.

GF(2) matrices are stored as packed bit rows (one Python int per row, bit c
of row r holding the entry (r, c)) with an explicit column count.  All
elimination is done in place on copies, with row operations recorded where a
transform is needed.  Z_M arithmetic (used for cohomology exponent systems)
is kept separate and works through integer Smith normal form; there is no
generic ring abstraction on purpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


def _parity(x: int) -> int:
    return x.bit_count() & 1


class BitMatrix:
    """Dense GF(2) matrix with bit-packed rows."""

    __slots__ = ("rows", "cols")

    def __init__(self, rows: Iterable[int], cols: int):
        self.rows = list(rows)
        self.cols = cols
        for r in self.rows:
            if r < 0 or r >> cols:
                raise ValueError("row has bits outside the declared column range")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "BitMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged rows")
            packed.append(sum((bit & 1) << c for c, bit in enumerate(row)))
        return cls(packed, cols)

    @classmethod
    def zeros(cls, nrows: int, cols: int) -> "BitMatrix":
        return cls([0] * nrows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def get(self, r: int, c: int) -> int:
        return (self.rows[r] >> c) & 1

    def copy(self) -> "BitMatrix":
        return BitMatrix(list(self.rows), self.cols)

    def to_lists(self) -> list[list[int]]:
        return [[(row >> c) & 1 for c in range(self.cols)] for row in self.rows]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.cols == other.cols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.cols})"

    def rref(self) -> tuple["BitMatrix", list[int]]:
        """Reduced row echelon form and its pivot columns."""
        rows = list(self.rows)
        pivots: list[int] = []
        rank = 0
        for c in range(self.cols):
            pivot = None
            for r in range(rank, len(rows)):
                if (rows[r] >> c) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            for r in range(len(rows)):
                if r != rank and (rows[r] >> c) & 1:
                    rows[r] ^= rows[rank]
            pivots.append(c)
            rank += 1
        return BitMatrix(rows, self.cols), pivots

    def rref_with_transform(self) -> tuple["BitMatrix", list[int], list[int]]:
        """RREF together with the row transform T (as bit rows, T·A = R)."""
        rows = list(self.rows)
        transform = [1 << i for i in range(len(rows))]
        pivots: list[int] = []
        rank = 0
        for c in range(self.cols):
            pivot = None
            for r in range(rank, len(rows)):
                if (rows[r] >> c) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            transform[rank], transform[pivot] = transform[pivot], transform[rank]
            for r in range(len(rows)):
                if r != rank and (rows[r] >> c) & 1:
                    rows[r] ^= rows[rank]
                    transform[r] ^= transform[rank]
            pivots.append(c)
            rank += 1
        return BitMatrix(rows, self.cols), pivots, transform

    def rank(self) -> int:
        _, pivots = self.rref()
        return len(pivots)

    def solve_mask(self, b: int) -> Optional[int]:
        """Solve A·x = b (b packed over rows).  Free variables are set to 0.

        Returns the solution as a column bitmask, or None when inconsistent.
        """
        rows = list(self.rows)
        rhs = [(b >> r) & 1 for r in range(len(rows))]
        pivots: list[int] = []
        rank = 0
        for c in range(self.cols):
            pivot = None
            for r in range(rank, len(rows)):
                if (rows[r] >> c) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            rhs[rank], rhs[pivot] = rhs[pivot], rhs[rank]
            for r in range(len(rows)):
                if r != rank and (rows[r] >> c) & 1:
                    rows[r] ^= rows[rank]
                    rhs[r] ^= rhs[rank]
            pivots.append(c)
            rank += 1
        for r in range(rank, len(rows)):
            if rhs[r]:
                return None
        x = 0
        for r, c in enumerate(pivots):
            if rhs[r]:
                x |= 1 << c
        return x

    def kernel_basis(self) -> list[int]:
        """Basis of {x : A·x = 0}, one bitmask per basis vector."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for f in free:
            v = 1 << f
            for r, c in enumerate(pivots):
                if (red.rows[r] >> f) & 1:
                    v |= 1 << c
            basis.append(v)
        return basis


def rank(m: BitMatrix) -> int:
    return m.rank()


def solve(a: BitMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Solve A·x = b over GF(2); deterministic (free variables zero)."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side length must equal the row count")
    mask = sum((bit & 1) << r for r, bit in enumerate(b))
    x = a.solve_mask(mask)
    if x is None:
        return None
    return tuple((x >> c) & 1 for c in range(a.cols))


def solve_in_rowspace(rows: Sequence[int], cols: int, target: int) -> Optional[int]:
    """Find a combination c with XOR of the chosen rows equal to target.

    Returns a bitmask over row indices, or None when target is outside the
    row space.  Deterministic: derived from the recorded RREF transform.
    """
    mat = BitMatrix(list(rows), cols)
    red, pivots, transform = mat.rref_with_transform()
    combo = 0
    residue = target
    for r, c in enumerate(pivots):
        if (residue >> c) & 1:
            residue ^= red.rows[r]
            combo ^= transform[r]
    if residue:
        return None
    return combo


def rowspace_intersection(rows_a: Sequence[int], rows_b: Sequence[int], cols: int) -> list[int]:
    """Basis of span(rows_a) ∩ span(rows_b) via the Zassenhaus construction.

    Rows [a | a] and [b | 0] are reduced with the first block in the low bits
    (eliminated first); reduced rows with vanishing first block carry an
    intersection basis in their second block.
    """
    low_mask = (1 << cols) - 1
    stacked = [(r & low_mask) | (r << cols) for r in rows_a] + [r & low_mask for r in rows_b]
    mat = BitMatrix(stacked, 2 * cols)
    red, _ = mat.rref()
    out = []
    for row in red.rows:
        if row and (row & low_mask) == 0:
            out.append(row >> cols)
    return out


# ---------------------------------------------------------------------------
# Z_M matrices and integer Smith normal form
# ---------------------------------------------------------------------------


@dataclass
class IntMatrixModM:
    """Integer matrix with entries understood as residues mod M."""

    modulus: int
    entries: list[list[int]]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        m = self.modulus
        self.entries = [[v % m for v in row] for row in self.entries]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0


@dataclass
class SmithDecomposition:
    """U·A·V = D over the integers with U, V unimodular (inverses recorded)."""

    diagonal: list[int]
    u: list[list[int]]
    v: list[list[int]]
    u_inv: list[list[int]]
    v_inv: list[list[int]]


def _mat_identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form_int(a: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Integer Smith normal form with full transform bookkeeping."""
    m = [list(row) for row in a]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    u = _mat_identity(nr)
    u_inv = _mat_identity(nr)
    v = _mat_identity(nc)
    v_inv = _mat_identity(nc)

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]
        for row in u_inv:
            row[i], row[j] = row[j], row[i]

    def row_add(i, j, c):
        # row_j += c * row_i
        for k in range(nc):
            m[j][k] += c * m[i][k]
        for k in range(nr):
            u[j][k] += c * u[i][k]
        for row in u_inv:
            row[i] -= c * row[j]

    def row_neg(i):
        for k in range(nc):
            m[i][k] = -m[i][k]
        for k in range(nr):
            u[i][k] = -u[i][k]
        for row in u_inv:
            row[i] = -row[i]

    def col_swap(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def col_add(i, j, c):
        # col_j += c * col_i
        for row in m:
            row[j] += c * row[i]
        for row in v:
            row[j] += c * row[i]
        for k in range(nc):
            v_inv[i][k] -= c * v_inv[j][k]

    def col_neg(i):
        for row in m:
            row[i] = -row[i]
        for row in v:
            row[i] = -row[i]
        for k in range(nc):
            v_inv[i][k] = -v_inv[i][k]

    t = 0
    while t < min(nr, nc):
        # Locate the smallest-magnitude nonzero entry in the remaining block.
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    row_add(t, i, -q)
                    if m[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    col_add(t, j, -q)
                    if m[t][j]:
                        col_swap(t, j)
                        dirty = True
        if m[t][t] < 0:
            row_neg(t)
        # Enforce divisibility d_t | d_{t+1}: fold offending entries back in.
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if m[i][j] % m[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(offender, t, 1)
            continue
        t += 1
    diag = [m[i][i] for i in range(min(nr, nc))]
    return SmithDecomposition(diag, u, v, u_inv, v_inv)


def smith_normal_form(mat: IntMatrixModM) -> tuple[tuple[int, ...], SmithDecomposition]:
    """Invariant factors of a Z_M matrix plus the integer transforms.

    Factors are gcd(d_i, M) for the integer SNF diagonal d_i, which is the
    correct Z_M-module normalisation (a diagonal entry coprime to M acts
    invertibly and contributes a trivial factor 1).
    """
    dec = smith_normal_form_int(mat.entries)
    m = mat.modulus
    factors = tuple(math.gcd(d, m) if d else m for d in dec.diagonal)
    return factors, dec


def solve_mod(a: Sequence[Sequence[int]], b: Sequence[int], modulus: int) -> Optional[list[int]]:
    """Solve A·x ≡ b (mod M) exactly, or return None when inconsistent."""
    import math

    nr = len(a)
    nc = len(a[0]) if nr else 0
    if len(b) != nr:
        raise ValueError("shape mismatch")
    if nc == 0:
        return [] if all(v % modulus == 0 for v in b) else None
    dec = smith_normal_form_int(a)
    ub = [sum(dec.u[i][k] * b[k] for k in range(nr)) % modulus for i in range(nr)]
    y = [0] * nc
    for i in range(nr):
        d = dec.diagonal[i] if i < len(dec.diagonal) else 0
        rhs = ub[i] % modulus
        if d % modulus == 0:
            if rhs != 0:
                return None
            continue
        g = math.gcd(d, modulus)
        if rhs % g != 0:
            return None
        dd, mm = d // g, modulus // g
        y[i] = (rhs // g) * pow(dd, -1, mm) % mm
    x = [sum(dec.v[i][k] * y[k] for k in range(nc)) % modulus for i in range(nc)]
    return x


def hermite_column_basis(cols: Sequence[Sequence[int]], dim: int) -> list[list[int]]:
    """Column-style Hermite basis of the lattice spanned by integer columns.

    Returns a list of `dim` basis columns; the input lattice must have full
    rank (always true here, callers include M·e_i generators).
    """
    work = [list(c) for c in cols]
    basis: list[list[int]] = []
    for r in range(dim):
        # Reduce on row r by repeated gcd elimination.
        while True:
            nz = [c for c in work if c[r] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda c: abs(c[r]))
            p = nz[0]
            for c in nz[1:]:
                q = c[r] // p[r]
                for k in range(dim):
                    c[k] -= q * p[k]
        pivot = None
        for c in work:
            if c[r] != 0:
                pivot = c
                break
        if pivot is None:
            raise ValueError("lattice does not have full rank")
        if pivot[r] < 0:
            for k in range(dim):
                pivot[k] = -pivot[k]
        basis.append(list(pivot))
        work.remove(pivot)
    return basis


def lattice_quotient(
    gens_k: Sequence[Sequence[int]], gens_i: Sequence[Sequence[int]], dim: int, modulus: int
) -> tuple[tuple[int, ...], list[list[int]]]:
    """Invariant factors and representatives of (K + MZ^dim)/(I + MZ^dim).

    gens_k / gens_i are integer column generators of the two subgroups of
    Z_M^dim (K must contain I).  Representatives are returned for every
    nontrivial invariant factor, as integer vectors mod M.
    """
    ext_k = [list(g) for g in gens_k] + [
        [modulus if i == j else 0 for i in range(dim)] for j in range(dim)
    ]
    ext_i = [list(g) for g in gens_i] + [
        [modulus if i == j else 0 for i in range(dim)] for j in range(dim)
    ]
    hk = hermite_column_basis(ext_k, dim)
    # Express each generator of I in the basis hk (integer back-substitution
    # after exact fraction-free elimination via SNF of the basis matrix).
    basis_mat = [[hk[j][i] for j in range(dim)] for i in range(dim)]  # columns hk
    dec = smith_normal_form_int(basis_mat)
    coords = []
    for g in ext_i:
        ug = [sum(dec.u[i][k] * g[k] for k in range(dim)) for i in range(dim)]
        y = []
        for i in range(dim):
            d = dec.diagonal[i]
            if ug[i] % d != 0:
                raise ValueError("I is not contained in K")
            y.append(ug[i] // d)
        x = [sum(dec.v[i][k] * y[k] for k in range(dim)) for i in range(dim)]
        coords.append(x)
    rel = [[coords[g][i] for g in range(len(coords))] for i in range(dim)]
    rel_dec = smith_normal_form_int(rel)
    factors = []
    reps: list[list[int]] = []
    for i in range(dim):
        d = rel_dec.diagonal[i] if i < len(rel_dec.diagonal) else 0
        f = abs(d)
        if f == 1:
            continue
        factors.append(f)
        # Representative: column i of (basis · Uinv of the relation SNF).
        rep = [
            sum(basis_mat[r][k] * rel_dec.u_inv[k][i] for k in range(dim)) % modulus
            for r in range(dim)
        ]
        reps.append(rep)
    return tuple(factors), reps
