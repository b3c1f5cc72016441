"""The complex Z(GxGxG) -> F_G -> ZG behind contraction supports.

``boundary2`` sends the pair {g,h} to g + h - gh in ZG and the relators are
the images of triples (g,h,k) -> {h,k}{g,hk}{g,h}^-1{gh,k}^-1, written
additively as integer vectors over the pair index.  For a subset S of pairs
this module computes the surviving identity lattice ker(A_S), the lattice
of surviving defining relations and the groups K_S, I_S and C_S.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Literal

from .groups import Element, GroupSpec, pair_index
from .lattice import (
    AbelianGroupStructure,
    IntegerLattice,
    _Echelon,
    kernel,
    quotient_structure,
)
from .supports import Support


@dataclass(frozen=True)
class RelatorVector:
    exponents: tuple[int, ...]
    triple: tuple[Element, Element, Element] | None = None

    @property
    def mask(self) -> int:
        bits = 0
        for i, x in enumerate(self.exponents):
            if x:
                bits |= 1 << i
        return bits


def boundary2(spec: GroupSpec) -> list[list[int]]:
    """|G| x |P_G| matrix whose column {g,h} is g + h - gh."""
    pidx = pair_index(spec)
    idx = spec.element_index
    n = spec.order
    a = [[0] * len(pidx) for _ in range(n)]
    for col, (g, h) in enumerate(pidx):
        a[idx[g]][col] += 1
        a[idx[h]][col] += 1
        a[idx[spec.mul(g, h)]][col] -= 1
    return a


def relators(spec: GroupSpec) -> list[RelatorVector]:
    """One exponent vector per triple, with zero vectors and duplicates removed."""
    pidx = pair_index(spec)
    table = pidx.by_element_index
    mt = spec.mul_table
    els = spec.elements
    n = spec.order
    m = len(pidx)
    seen: set[tuple[int, ...]] = set()
    out = []
    for g in range(n):
        for h in range(n):
            for k in range(n):
                v = [0] * m
                v[table[h][k]] += 1
                v[table[g][mt[h][k]]] += 1
                v[table[g][h]] -= 1
                v[table[mt[g][h]][k]] -= 1
                key = tuple(v)
                if not any(key) or key in seen:
                    continue
                seen.add(key)
                out.append(RelatorVector(key, (els[g], els[h], els[k])))
    return out


class RelationComplex:
    """Per-group data shared by every support computation."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.n = spec.order
        self.m = len(pair_index(spec))
        self.boundary = boundary2(spec)
        self.columns = [tuple(row[j] for row in self.boundary) for j in range(self.m)]
        self.relators = relators(spec)
        # sign-normalized and deduplicated generators for lattice building
        gens: dict[tuple[int, ...], int] = {}
        for r in self.relators:
            v = r.exponents
            if next(x for x in v if x) < 0:
                v = tuple(-x for x in v)
            gens.setdefault(v, r.mask)
        self._relator_gens = [(mask, v) for v, mask in gens.items()]

    @cached_property
    def image_lattice(self) -> IntegerLattice:
        return IntegerLattice.from_generators(self.columns, self.n)

    @cached_property
    def identity_lattice(self) -> IntegerLattice:
        return kernel(self.boundary, self.m)

    @cached_property
    def relator_lattice(self) -> IntegerLattice:
        return IntegerLattice.from_generators([v for _, v in self._relator_gens], self.m)

    def surviving_relators(self, bits: int) -> list[tuple[int, ...]]:
        return [v for mask, v in self._relator_gens if mask & ~bits == 0]


_COMPLEX_CACHE: dict[GroupSpec, RelationComplex] = {}


def relation_complex(spec: GroupSpec) -> RelationComplex:
    cx = _COMPLEX_CACHE.get(spec)
    if cx is None:
        cx = _COMPLEX_CACHE[spec] = RelationComplex(spec)
    return cx


def global_identity_lattice(spec: GroupSpec) -> IntegerLattice:
    """<R_G> = ker(boundary2); its rank is |P_G| - |G|."""
    return relation_complex(spec).identity_lattice


def restrict(vec, idx: list[int]) -> list[int]:
    return [vec[i] for i in idx]


@dataclass(frozen=True)
class SupportInvariants:
    """Invariants of a subset S of pairs; lattices live in Z^S (coordinates
    ordered by pair index)."""

    support: Support
    N: int
    N_prime: int
    N_doubleprime: int
    K_S: AbelianGroupStructure
    C_S: AbelianGroupStructure
    L_S: IntegerLattice
    R_S_lattice: IntegerLattice

    @property
    def I_S(self) -> AbelianGroupStructure:
        return AbelianGroupStructure(self.N_prime)

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "N_prime": self.N_prime,
            "N_doubleprime": self.N_doubleprime,
            "K_S": self.K_S.as_dict(),
            "I_S": self.I_S.as_dict(),
            "C_S": self.C_S.as_dict(),
        }


def identity_lattice_of(s: Support) -> IntegerLattice:
    """<R_G> intersected with F_S, computed as ker(A_S) in Z^S."""
    cx = relation_complex(s.group)
    cols = [cx.columns[i] for i in s]
    if not cols:
        return IntegerLattice.zero(0)
    return kernel([list(r) for r in zip(*cols)], len(cols))


def relator_lattice_of(s: Support) -> IntegerLattice:
    """<R_S>: relators whose nonzero coordinates all lie in S."""
    cx = relation_complex(s.group)
    idx = s.indices()
    ech = _Echelon(len(idx))
    for v in cx.surviving_relators(s.bits):
        ech.insert(restrict(v, idx))
    return IntegerLattice(len(idx), tuple(tuple(r) for r in ech.hnf()))


def support_invariants(s: Support) -> SupportInvariants:
    cx = relation_complex(s.group)
    size = len(s)
    l_s = identity_lattice_of(s)
    r_s = relator_lattice_of(s)
    k_s = quotient_structure(l_s, r_s)
    image_s = IntegerLattice.from_generators([cx.columns[i] for i in s], cx.n)
    c_s = quotient_structure(cx.image_lattice, image_s)
    return SupportInvariants(
        support=s,
        N=cx.n,
        N_prime=size - l_s.rank,
        N_doubleprime=size - r_s.rank,
        K_S=k_s,
        C_S=c_s,
        L_S=l_s,
        R_S_lattice=r_s,
    )


def independent_subset(
    s: Support, mode: Literal["independent", "quasi_independent"] = "independent"
) -> list[int]:
    """Greedy maximal subset of S with Z-independent image in F_S / L.

    L is <R_G> cap F_S for ``independent`` and <R_S> for ``quasi_independent``.
    Returns pair indices.
    """
    if mode == "independent":
        lat = identity_lattice_of(s)
    elif mode == "quasi_independent":
        lat = relator_lattice_of(s)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    idx = s.indices()
    ech = _Echelon(len(idx))
    for row in lat.basis:
        ech.insert(row)
    chosen = []
    for pos, p in enumerate(idx):
        before = len(ech.rows)
        unit = [0] * len(idx)
        unit[pos] = 1
        ech.insert(unit)
        if len(ech.rows) > before:
            chosen.append(p)
    return chosen
