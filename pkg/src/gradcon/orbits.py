"""Binomials, orbit-closure ideals and degeneration tests.

A surviving higher-order identity is an element u of the lattice
L_S = <R_G> cap F_S, read as the binomial relation x^(u+) = x^(u-).  The
vanishing ideal of the torus-orbit closure of a contraction is spanned by
such binomials, so ideal membership of a monic binomial is lattice
membership, and a point lies in the closure iff it satisfies every
identity.  For points with zeros the identities are evaluated with the
rule "both sides zero, or both sides equal and nonzero".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cohomology import Contraction, contraction_violation
from .complex import identity_lattice_of, relation_complex
from .groups import GroupSpec, pair_index, pair_key
from .lattice import feasible_point, kernel
from .supports import Support

Monomial = tuple[int, ...]  # exponent vector over the full pair index


@dataclass(frozen=True)
class Binomial:
    """c_lhs * x^lhs - c_rhs * x^rhs over the pair variables."""

    lhs: Monomial
    rhs: Monomial
    c_lhs: Fraction = Fraction(1)
    c_rhs: Fraction = Fraction(1)

    @property
    def degree(self) -> tuple[int, int]:
        return sum(self.lhs), sum(self.rhs)

    @property
    def is_monic(self) -> bool:
        return self.c_lhs == 1 and self.c_rhs == 1

    def variables(self) -> set[int]:
        return {i for i, e in enumerate(self.lhs) if e} | {i for i, e in enumerate(self.rhs) if e}

    def difference(self) -> list[int]:
        return [a - b for a, b in zip(self.lhs, self.rhs)]

    def evaluate(self, point: Contraction) -> Fraction:
        return self.c_lhs * _monomial_value(self.lhs, point) - self.c_rhs * _monomial_value(
            self.rhs, point
        )

    def format(self, group: GroupSpec) -> str:
        pidx = pair_index(group)

        def mono(exps: Monomial) -> str:
            parts = []
            for i, e in enumerate(exps):
                if e:
                    var = f"x[{pair_key(pidx[i])}]"
                    parts.append(var if e == 1 else f"{var}^{e}")
            return "*".join(parts) or "1"

        left = mono(self.lhs) if self.c_lhs == 1 else f"{self.c_lhs} * {mono(self.lhs)}"
        right = mono(self.rhs) if self.c_rhs == 1 else f"{self.c_rhs} * {mono(self.rhs)}"
        return f"{left} - {right}"


def _monomial_value(exps: Monomial, point: Contraction) -> Fraction:
    out = Fraction(1)
    for i, e in enumerate(exps):
        if e:
            out *= point.value(i) ** e
    return out


def _monomial(indices: list[int], m: int) -> Monomial:
    v = [0] * m
    for i in indices:
        v[i] += 1
    return tuple(v)


def defining_equations(spec: GroupSpec) -> list[Binomial]:
    """x{g,h} x{gh,k} - x{h,k} x{g,hk} over all triples, deduplicated up to sign.

    Monomials are kept as written (no cancellation of common factors); the
    lexicographically smaller monomial is placed on the left.
    """
    pidx = pair_index(spec)
    table = pidx.by_element_index
    mt = spec.mul_table
    n = spec.order
    m = len(pidx)
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for g in range(n):
        for h in range(n):
            for k in range(n):
                a = tuple(sorted((table[g][h], table[mt[g][h]][k])))
                b = tuple(sorted((table[h][k], table[g][mt[h][k]])))
                if a != b:
                    seen.add((min(a, b), max(a, b)))
    return [Binomial(_monomial(list(a), m), _monomial(list(b), m)) for a, b in sorted(seen)]


def _embed(u, idx: list[int], m: int) -> list[int]:
    full = [0] * m
    for e, i in zip(u, idx):
        full[i] = e
    return full


def _split(full: list[int]) -> tuple[Monomial, Monomial]:
    return tuple(max(x, 0) for x in full), tuple(max(-x, 0) for x in full)


def surviving_identity_basis(s: Support) -> list[Binomial]:
    """x^(u+) - x^(u-) for the HNF basis vectors u of L_S."""
    m = len(pair_index(s.group))
    idx = s.indices()
    out = []
    for u in identity_lattice_of(s).basis:
        lhs, rhs = _split(_embed(u, idx, m))
        out.append(Binomial(lhs, rhs))
    return out


def orbit_closure_ideal(c: Contraction) -> list[Binomial]:
    """Basis binomials eps(r2) r1 - eps(r1) r2 of the orbit closure of ``c``,
    scaled so the left coefficient is 1."""
    problem = contraction_violation(c)
    if problem:
        raise ValueError(f"invalid contraction: {problem}")
    out = []
    for b in surviving_identity_basis(c.support):
        e1 = _monomial_value(b.lhs, c)
        e2 = _monomial_value(b.rhs, c)
        out.append(Binomial(b.lhs, b.rhs, Fraction(1), e1 / e2))
    return out


def toric_membership(b: Binomial, s: Support) -> bool:
    """Membership of a monic binomial in the vanishing ideal of the orbit
    closure of the indicator of ``s``."""
    if not b.is_monic:
        raise ValueError("toric_membership expects a monic binomial")
    outside = b.variables() - set(s.indices())
    if outside:
        pidx = pair_index(s.group)
        names = ", ".join(pair_key(pidx[i]) for i in sorted(outside))
        raise ValueError(f"binomial uses variables outside the support: {names}")
    diff = b.difference()
    return [diff[i] for i in s.indices()] in identity_lattice_of(s)


def weak_violation(s: Support, t: Support) -> list[int] | None:
    """An identity u in L_S whose negative part lies in T but whose positive
    part does not, or None.

    Returned as an integer vector over the full pair index.  Found by the
    exact LP: v in ker(A_S) over Q, v >= 0 off T, sum of v off T equal to 1.
    """
    outside = [i for i in s.indices() if i not in t]
    if not outside:
        return None
    cx = relation_complex(s.group)
    idx = s.indices()
    a_eq = [[row[i] for i in idx] for row in cx.boundary]
    a_eq.append([int(i not in t) for i in idx])
    b_eq = [0] * cx.n + [1]
    free = [i in t for i in idx]
    sol = feasible_point(a_eq, b_eq, free)
    if sol is None:
        return None
    vals = sol
    scale = lcm(*(v.denominator for v in vals))
    u = [int(v * scale) for v in vals]
    return _embed(u, idx, len(pair_index(s.group)))


def _identities_hold(s: Support, t: Support, chi: dict[int, Fraction]) -> bool:
    """Every identity of L_S holds at the point with values ``chi`` on T and 0 on S \\ T."""
    if weak_violation(s, t) is not None:
        return False
    # identities with both sides inside T form ker(A_T) = L_S cap Z^T
    idx = t.indices()
    if not idx:
        return True
    cx = relation_complex(s.group)
    lat = kernel([[row[i] for i in idx] for row in cx.boundary], len(idx))
    for u in lat.basis:
        value = Fraction(1)
        for e, i in zip(u, idx):
            if e:
                value *= chi[i] ** e
        if value != 1:
            return False
    return True


def is_degeneration(c: Contraction, second_support: Support) -> bool:
    """Whether applying ``c`` to an algebra with this second support gives a
    graded degeneration, i.e. ``c`` satisfies every surviving identity."""
    s = second_support
    t = c.support & s
    return _identities_hold(s, t, {i: c.values[i] for i in t})


def orbit_inclusion(candidate: Contraction, base: Contraction) -> bool:
    """X(candidate) contained in X(base)."""
    for c in (candidate, base):
        problem = contraction_violation(c)
        if problem:
            raise ValueError(f"invalid contraction: {problem}")
    s, t = base.support, candidate.support
    if not t <= s:
        return False
    chi = {i: candidate.values[i] / base.values[i] for i in t}
    return _identities_hold(s, t, chi)


def identity_failures(c: Contraction, second_support: Support) -> list[str]:
    """Human-readable reasons why ``is_degeneration`` fails (empty when it holds)."""
    s = second_support
    t = c.support & s
    pidx = pair_index(s.group)
    out = []
    u = weak_violation(s, t)
    if u is not None:
        lhs, rhs = _split(u)
        out.append(f"weak violation: {Binomial(lhs, rhs).format(s.group)} has one side zero")
    idx = t.indices()
    if idx:
        cx = relation_complex(s.group)
        lat = kernel([[row[i] for i in idx] for row in cx.boundary], len(idx))
        m = len(pidx)
        for vec in lat.basis:
            lhs, rhs = _split(_embed(vec, idx, m))
            b = Binomial(lhs, rhs)
            l_val, r_val = _monomial_value(lhs, c), _monomial_value(rhs, c)
            if l_val != r_val:
                out.append(f"identity {b.format(s.group)} fails: {l_val} != {r_val}")
    return out
