"""Exact integer matrix algebra: Hermite and Smith normal forms, kernels,
lattice intersection, membership, saturation and quotient structure.

Matrices are plain lists of rows of Python ints, so entries never overflow.
Lattices are row lattices stored by their Hermite normal form, which makes
lattice equality the same as basis equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = list[list[int]]
Vector = Sequence[int]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _first_nonzero(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    return -1


class _Echelon:
    """Incrementally maintained row-echelon basis of a row lattice.

    Each inserted vector is merged into the basis with 2x2 unimodular
    operations, so the stored rows always generate the same lattice as
    everything inserted so far.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list[int]] = {}

    def insert(self, v: Vector) -> None:
        v = list(v)
        rows = self.rows
        c = _first_nonzero(v)
        while c >= 0:
            b = rows.get(c)
            if b is None:
                if v[c] < 0:
                    v = [-x for x in v]
                rows[c] = v
                return
            bc, vc = b[c], v[c]
            if vc % bc == 0:
                q = vc // bc
                v = [x - q * y for x, y in zip(v, b)]
            else:
                g, x, y = _egcd(bc, vc)
                p, q = bc // g, vc // g
                rows[c] = [x * s + y * t for s, t in zip(b, v)]
                v = [p * t - q * s for s, t in zip(b, v)]
            c = _first_nonzero(v)

    def hnf(self) -> IntMatrix:
        pivots = sorted(self.rows)
        rows = [list(self.rows[c]) for c in pivots]
        # reduce entries above each pivot into [0, pivot); going left to right
        # keeps earlier reductions intact since row i vanishes before its pivot
        for i in range(len(rows)):
            c = pivots[i]
            d = rows[i][c]
            for k in range(i):
                q = rows[k][c] // d
                if q:
                    rk, ri = rows[k], rows[i]
                    rows[k] = [a - q * b for a, b in zip(rk, ri)]
        return rows


def hnf(m: Sequence[Vector], ncols: int | None = None) -> IntMatrix:
    """Row-style Hermite normal form with zero rows removed."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    ech = _Echelon(ncols)
    for row in m:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        ech.insert(row)
    return ech.hnf()


def transpose(m: Sequence[Vector], nrows: int | None = None) -> IntMatrix:
    if not m:
        return [[] for _ in range(nrows or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Vector], b: Sequence[Vector]) -> IntMatrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(m: Sequence[Vector], ncols: int | None = None):
    """Smith normal form ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with d1 | d2 | ... and
    nonnegative entries.
    """
    u, d, v, _ = _snf(m, ncols, want_inverse=False)
    return u, d, v


def _snf(m: Sequence[Vector], ncols: int | None, want_inverse: bool):
    r = len(m)
    c = ncols if ncols is not None else (len(m[0]) if m else 0)
    a = [list(row) for row in m]
    u = identity(r)
    v = identity(c)
    vinv = identity(c) if want_inverse else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        if vinv is not None:
            vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]
        if vinv is not None:
            vinv[src] = [x - q * y for x, y in zip(vinv[src], vinv[dst])]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = a[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    q = a[i][t] // p
                    add_row(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, c):
                if a[t][j]:
                    q = a[t][j] // p
                    add_col(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                bad = next(
                    (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p), None
                )
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/col t to the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, r) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, c) if a[t][j]]
            _, i, j = min(cand)
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v, vinv


def smith_diagonal(m: Sequence[Vector], ncols: int | None = None) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, d, _, _ = _snf(m, ncols, want_inverse=False)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Z^free_rank + Z/d1 + ... + Z/dk with d1 | d2 | ... | dk, all di >= 2."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        from .groups import invariant_factors

        object.__setattr__(
            self, "torsion", tuple(d for d in invariant_factors(list(self.torsion)) if d > 1)
        )

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    def as_dict(self) -> dict:
        return {"rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class IntegerLattice:
    """A sublattice of Z^ambient_dim with basis rows in Hermite normal form."""

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Sequence[Vector], ambient_dim: int) -> "IntegerLattice":
        return cls(ambient_dim, tuple(tuple(r) for r in hnf(gens, ambient_dim)))

    @classmethod
    def full(cls, k: int) -> "IntegerLattice":
        return cls(k, tuple(tuple(r) for r in identity(k)))

    @classmethod
    def zero(cls, k: int) -> "IntegerLattice":
        return cls(k, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Vector) -> list[int] | None:
        """Integer coefficients of ``v`` in the basis, or None if ``v`` is not in the lattice."""
        if len(v) != self.ambient_dim:
            raise ValueError(f"vector of length {len(v)} in lattice of dimension {self.ambient_dim}")
        v = list(v)
        coeffs = []
        for row in self.basis:
            c = _first_nonzero(row)
            if any(v[:c]):
                return None
            q, rem = divmod(v[c], row[c])
            if rem:
                return None
            coeffs.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        if any(v):
            return None
        return coeffs

    def __contains__(self, v: Vector) -> bool:
        return self.coordinates(v) is not None

    def reduce(self, v: Vector) -> list[int]:
        """Canonical representative of ``v`` modulo the lattice."""
        v = list(v)
        for row in self.basis:
            c = _first_nonzero(row)
            q = v[c] // row[c]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return v


def kernel(m: Sequence[Vector], ncols: int | None = None) -> IntegerLattice:
    """The lattice {x in Z^cols : m x = 0}."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    nrows = len(m)
    if nrows == 0:
        return IntegerLattice.full(ncols)
    # echelonize [m^T | I]; rows with vanishing m^T-part span the kernel
    ech = _Echelon(nrows + ncols)
    for j in range(ncols):
        row = [m[i][j] for i in range(nrows)] + [0] * ncols
        row[nrows + j] = 1
        ech.insert(row)
    gens = [r[nrows:] for c, r in ech.rows.items() if c >= nrows]
    return IntegerLattice.from_generators(gens, ncols)


def row_lattice(m: Sequence[Vector], ncols: int) -> IntegerLattice:
    return IntegerLattice.from_generators(m, ncols)


def column_lattice(m: Sequence[Vector], nrows: int) -> IntegerLattice:
    return IntegerLattice.from_generators(transpose(m, nrows), nrows)


def contains(lat: IntegerLattice, v: Vector) -> bool:
    return v in lat


def intersect(a: IntegerLattice, b: IntegerLattice) -> IntegerLattice:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(f"dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    k = a.ambient_dim
    if not a.basis or not b.basis:
        return IntegerLattice.zero(k)
    # coefficient vectors (x, y) with x A + y B = 0 give x A in both lattices
    stacked = list(a.basis) + list(b.basis)
    rel = kernel(transpose(stacked, k), len(stacked))
    p = a.rank
    gens = []
    for coeffs in rel.basis:
        x = coeffs[:p]
        gens.append([sum(c * row[j] for c, row in zip(x, a.basis)) for j in range(k)])
    return IntegerLattice.from_generators(gens, k)


def saturate(lat: IntegerLattice) -> IntegerLattice:
    """{v : n v in lat for some n >= 1}."""
    k = lat.ambient_dim
    if not lat.basis:
        return IntegerLattice.zero(k)
    orth = kernel(lat.basis, k)
    if not orth.basis:
        return IntegerLattice.full(k)
    return kernel(orth.basis, k)


def is_sublattice(sub: IntegerLattice, ambient: IntegerLattice) -> bool:
    return all(row in ambient for row in sub.basis)


def _coordinate_matrix(ambient: IntegerLattice, sub: IntegerLattice) -> IntMatrix:
    coords = []
    for row in sub.basis:
        c = ambient.coordinates(row)
        if c is None:
            raise ValueError("sublattice is not contained in the ambient lattice")
        coords.append(c)
    return coords


def quotient_structure(ambient: IntegerLattice, sub: IntegerLattice) -> AbelianGroupStructure:
    """Invariant-factor decomposition of ambient / sub."""
    if ambient.ambient_dim != sub.ambient_dim:
        raise ValueError("lattices live in different ambient spaces")
    coords = _coordinate_matrix(ambient, sub)
    diag = smith_diagonal(coords, ambient.rank) if coords else []
    return AbelianGroupStructure(ambient.rank - len(diag), tuple(d for d in diag if d > 1))


def quotient_generators(
    ambient: IntegerLattice, sub: IntegerLattice
) -> list[tuple[int, list[int]]]:
    """Cyclic decomposition of ambient / sub as (order, generator) pairs.

    Order 0 marks an infinite cyclic summand; trivial summands are omitted.
    Generators are vectors of the ambient space.
    """
    coords = _coordinate_matrix(ambient, sub)
    n = ambient.rank
    _, d, _, vinv = _snf(coords, n, want_inverse=True)
    out = []
    for i in range(n):
        order = d[i][i] if i < len(d) else 0
        if order == 1:
            continue
        gen = [
            sum(c * ambient.basis[j][t] for j, c in enumerate(vinv[i]))
            for t in range(ambient.ambient_dim)
        ]
        out.append((order, gen))
    return out


def rank(m: Sequence[Vector], ncols: int | None = None) -> int:
    if ncols is None:
        ncols = len(m[0]) if m else 0
    return len(hnf(m, ncols)) if m else 0


def rank_mod2(rows: Sequence[Vector]) -> int:
    """Rank over GF(2) of an integer matrix reduced mod 2."""
    pivots: dict[int, int] = {}
    for row in rows:
        bits = 0
        for j, x in enumerate(row):
            if x & 1:
                bits |= 1 << j
        while bits:
            top = bits.bit_length() - 1
            if top in pivots:
                bits ^= pivots[top]
            else:
                pivots[top] = bits
                break
    return len(pivots)


def feasible_point(
    a_eq: Sequence[Sequence[int]], b_eq: Sequence[int], free: Sequence[bool]
) -> list[Fraction] | None:
    """A rational x with ``a_eq @ x == b_eq`` and x_j >= 0 unless ``free[j]``.

    Exact phase-one simplex with Bland's rule; returns None when infeasible.
    """
    rows = len(a_eq)
    n = len(free)
    # split each free variable into a difference of two nonnegative ones
    cols: list[tuple[int, int]] = []
    for j in range(n):
        cols.append((j, 1))
        if free[j]:
            cols.append((j, -1))
    width = len(cols)
    tab: list[list[Fraction]] = []
    for i in range(rows):
        sign = -1 if b_eq[i] < 0 else 1
        row = [Fraction(sign * sgn * a_eq[i][j]) for j, sgn in cols]
        row += [Fraction(int(k == i)) for k in range(rows)]
        row.append(Fraction(sign * b_eq[i]))
        tab.append(row)
    basis = [width + i for i in range(rows)]
    total = width + rows
    while True:
        # reduced costs for minimizing the sum of artificial variables
        entering = None
        for j in range(total):
            if j in basis:
                continue
            cost = (1 if j >= width else 0) - sum(
                tab[i][j] for i in range(rows) if basis[i] >= width
            )
            if cost < 0:
                entering = j
                break
        if entering is None:
            break
        leave = None
        best = None
        for i in range(rows):
            if tab[i][entering] > 0:
                ratio = tab[i][-1] / tab[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # pragma: no cover - phase one is bounded below
            break
        piv = tab[leave][entering]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(rows):
            if i != leave and tab[i][entering]:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        basis[leave] = entering
    if any(basis[i] >= width and tab[i][-1] != 0 for i in range(rows)):
        return None
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < width:
            j, sgn = cols[b]
            x[j] += sgn * tab[i][-1]
    return x
