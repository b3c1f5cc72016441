"""Slow, independent reference implementations used to cross-check the library.

Nothing here reuses the closure system, the lattice code or the relation
complex: each oracle works from the group multiplication directly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors


def pairs_of(spec):
    els = spec.elements
    return [(g, h) for i, g in enumerate(els) for h in els[i:]]


def pair_of(g, h):
    return (g, h) if g <= h else (h, g)


def closed_under_triples(spec, chosen: set) -> bool:
    """{g,h}, {gh,k} present forces {h,k}, {g,hk} present (and conversely)."""
    els = spec.elements
    for g in els:
        for h in els:
            gh = spec.mul(g, h)
            for k in els:
                left = pair_of(g, h) in chosen and pair_of(gh, k) in chosen
                right = pair_of(h, k) in chosen and pair_of(g, spec.mul(h, k)) in chosen
                if left != right:
                    return False
    return True


def brute_supports(spec) -> list[frozenset]:
    """All subsets of pairs closed under the triple rule, by exhaustion."""
    pairs = pairs_of(spec)
    out = []
    for mask in range(1 << len(pairs)):
        chosen = {p for i, p in enumerate(pairs) if mask >> i & 1}
        if closed_under_triples(spec, chosen):
            out.append(frozenset(chosen))
    return out


def satisfies_relations(spec, eps: dict) -> bool:
    """eps(g,h) eps(gh,k) == eps(h,k) eps(g,hk) for all triples; eps keyed by pair."""
    els = spec.elements

    def e(g, h):
        return eps.get(pair_of(g, h), 0)

    return all(
        e(g, h) * e(spec.mul(g, h), k) == e(h, k) * e(g, spec.mul(h, k))
        for g in els
        for h in els
        for k in els
    )


def sign_class_count(spec, chosen: list) -> int:
    """Number of +-1 valued contractions on ``chosen`` up to +-1 coboundaries."""
    els = spec.elements
    valid = []
    for signs in itertools.product((1, -1), repeat=len(chosen)):
        if satisfies_relations(spec, dict(zip(chosen, signs))):
            valid.append(signs)
    cobs = set()
    for values in itertools.product((1, -1), repeat=len(els)):
        a = dict(zip(els, values))
        cobs.add(tuple(a[g] * a[h] * a[spec.mul(g, h)] for g, h in chosen))
    seen: set = set()
    classes = 0
    for v in valid:
        if v in seen:
            continue
        classes += 1
        seen.update(tuple(x * y for x, y in zip(v, c)) for c in cobs)
    return classes


def snf_invariants(rows: list[list[int]], ncols: int) -> list[int]:
    """Nonzero invariant factors via sympy."""
    if not rows:
        return []
    return [int(d) for d in invariant_factors(Matrix(rows), domain=ZZ) if d]


def sympy_rank(rows: list[list[int]]) -> int:
    return Matrix(rows).rank() if rows else 0


def nullspace_rank(rows: list[list[int]], ncols: int) -> int:
    return ncols - sympy_rank(rows)


def brute_weak_violation(basis, idx: list[int], inside: set, reach: int = 2) -> bool:
    """Search small combinations of a lattice basis for a vector whose one
    side lies inside ``inside`` while the other does not."""
    for coefs in itertools.product(range(-reach, reach + 1), repeat=len(basis)):
        u = [sum(c * b[j] for c, b in zip(coefs, basis)) for j in range(len(idx))]
        pos = {idx[j] for j in range(len(idx)) if u[j] > 0}
        neg = {idx[j] for j in range(len(idx)) if u[j] < 0}
        if neg <= inside and not pos <= inside:
            return True
        if pos <= inside and not neg <= inside:
            return True
    return False


def jacobi_by_vectors(dim: int, bracket, x, y, z) -> list[Fraction]:
    """Jacobiator on dense vectors, with ``bracket`` acting on dense vectors."""
    terms = [bracket(bracket(x, y), z), bracket(bracket(y, z), x), bracket(bracket(z, x), y)]
    return [sum(t[i] for t in terms) for i in range(dim)]
