"""Contractions, their classification groups H^2_S and equivalence via normalization.

Contraction values are exact rationals.  "Algebraically closed" mode reads
them inside an algebraic closure of Q, so a character is a coboundary on S
exactly when it is trivial on the surviving identity lattice L_S.  "Real
closed" mode splits a character into its sign (checked over GF(2) against
the mod-2 coboundary space) and its absolute value (checked against L_S).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Mapping

from .complex import (
    SupportInvariants,
    identity_lattice_of,
    relation_complex,
    support_invariants,
)
from .groups import Element, GroupSpec, Pair, pair_index, pair_key, parse_pair_key
from .lattice import IntegerLattice, _Echelon, kernel, quotient_generators, rank_mod2
from .supports import Support, build_implications, enumerate_supports, is_support

FieldMode = Literal["algebraically_closed", "real_closed"]
FIELD_MODES: tuple[str, ...] = ("algebraically_closed", "real_closed")


def _check_mode(mode: str) -> None:
    if mode not in FIELD_MODES:
        raise ValueError(f"unknown field mode {mode!r}; expected one of {FIELD_MODES}")


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("contraction values must be exact; got a float")
    return Fraction(x)


@dataclass(frozen=True, eq=True)
class Contraction:
    """A function on unordered pairs, zero outside its support.

    ``values`` maps pair indices to nonzero rationals.
    """

    group: GroupSpec
    values: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        m = len(pair_index(self.group))
        clean = {}
        for i, v in self.values.items():
            if not 0 <= i < m:
                raise ValueError(f"pair index {i} out of range [0, {m})")
            v = _fraction(v)
            if v:
                clean[int(i)] = v
        object.__setattr__(self, "values", dict(sorted(clean.items())))

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_pairs(cls, group: GroupSpec, values: Mapping[Pair, object]) -> "Contraction":
        pidx = pair_index(group)
        return cls(group, {pidx.index_of(p): _fraction(v) for p, v in values.items()})

    @classmethod
    def indicator(cls, support: Support) -> "Contraction":
        return cls(support.group, {i: Fraction(1) for i in support})

    @classmethod
    def coboundary(
        cls, group: GroupSpec, alpha: Mapping[Element, object], support: Support | None = None
    ) -> "Contraction":
        """d(alpha)(g,h) = alpha(g) alpha(h) / alpha(gh), restricted to ``support``."""
        pidx = pair_index(group)
        a = {g: _fraction(alpha[g]) for g in group.elements}
        if any(v == 0 for v in a.values()):
            raise ValueError("alpha must take nonzero values")
        idx = support.indices() if support is not None else range(len(pidx))
        vals = {}
        for i in idx:
            g, h = pidx[i]
            vals[i] = a[g] * a[h] / a[group.mul(g, h)]
        return cls(group, vals)

    @classmethod
    def from_json(cls, obj: Mapping[str, object], group: GroupSpec) -> "Contraction":
        pidx = pair_index(group)
        vals = {}
        for key, raw in obj.items():
            pair = parse_pair_key(key, group)
            vals[pidx.index_of(pair)] = Fraction(str(raw))
        return cls(group, vals)

    def to_json(self) -> dict[str, str]:
        pidx = pair_index(self.group)
        return {pair_key(pidx[i]): str(v) for i, v in self.values.items()}

    @property
    def support(self) -> Support:
        return Support.from_indices(self.group, self.values)

    def value(self, i: int) -> Fraction:
        return self.values.get(i, Fraction(0))

    def at(self, g: Element, h: Element) -> Fraction:
        return self.value(pair_index(self.group).index(g, h))

    def __mul__(self, other: "Contraction") -> "Contraction":
        if other.group != self.group:
            raise ValueError("contractions over different groups")
        return Contraction(
            self.group,
            {i: v * other.values[i] for i, v in self.values.items() if i in other.values},
        )

    def restrict(self, support: Support) -> "Contraction":
        return Contraction(self.group, {i: v for i, v in self.values.items() if i in support})

    def evaluate(self, exponents: Iterable[int], coords: list[int]) -> Fraction:
        """Product of values raised to ``exponents`` (coordinates ``coords``).

        Only meaningful when every involved pair lies in the support.
        """
        out = Fraction(1)
        for e, i in zip(exponents, coords):
            if e:
                out *= self.values[i] ** e
        return out


def contraction_violation(c: Contraction) -> str | None:
    """Describe the first failed condition, or None for a valid contraction."""
    spec = c.group
    pidx = pair_index(spec)
    sys = build_implications(spec)
    s = c.support
    if not sys.is_closed_bits(s.bits):
        els = spec.elements
        for g in els:
            for h in els:
                gh = spec.mul(g, h)
                for k in els:
                    lhs = c.at(g, h) and c.at(gh, k)
                    rhs = c.at(h, k) and c.at(g, spec.mul(h, k))
                    if bool(lhs) != bool(rhs):
                        return (
                            f"support not closed: triple {(g, h, k)} has "
                            f"eps({g},{h}) eps({gh},{k}) = {c.at(g, h) * c.at(gh, k)} but "
                            f"eps({h},{k}) eps({g},{spec.mul(h, k)}) = "
                            f"{c.at(h, k) * c.at(g, spec.mul(h, k))}"
                        )
        return "support not closed"
    cx = relation_complex(spec)
    for r in cx.relators:
        if r.mask & ~s.bits:
            continue
        value = Fraction(1)
        for i, e in enumerate(r.exponents):
            if e:
                value *= c.values[i] ** e
        if value != 1:
            g, h, k = r.triple
            terms = " * ".join(
                f"eps{pidx[i]}^{e}" for i, e in enumerate(r.exponents) if e
            )
            return f"relation from triple {(g, h, k)} fails: {terms} = {value}, expected 1"
    return None


def validate_contraction(c: Contraction) -> bool:
    """True iff the support is closed and every surviving relation holds exactly."""
    return contraction_violation(c) is None


@dataclass(frozen=True)
class H2Descriptor:
    """Shape of H^2_S(F^x) for one support.

    ``continuous_rank`` counts F^x parameters (free rank of K_S),
    ``torsion_dual`` lists the cyclic orders of Hom(torsion of K_S, F^x),
    ``sign_rank`` is the GF(2)-dimension of Hom(I_S, {+-1}) / B^2_S({+-1}),
    and ``ks_sign_rank`` counts the signs carried by the K_S parameters over
    a real closed field.
    """

    field_mode: str
    continuous_rank: int
    torsion_dual: tuple[int, ...]
    sign_rank: int
    ks_sign_rank: int = 0

    def as_dict(self) -> dict:
        return {
            "field_mode": self.field_mode,
            "continuous_rank": self.continuous_rank,
            "torsion_dual": list(self.torsion_dual),
            "sign_rank": self.sign_rank,
            "ks_sign_rank": self.ks_sign_rank,
        }

    @property
    def is_trivial(self) -> bool:
        return not (self.continuous_rank or self.torsion_dual or self.sign_rank)


def coboundary_rows(s: Support) -> list[tuple[int, ...]]:
    """Rows of A_S (indexed by group elements) as vectors over S.

    Reduced mod 2 these span the sign coboundaries B^2_S({+-1}).
    """
    cx = relation_complex(s.group)
    idx = s.indices()
    return [tuple(row[i] for i in idx) for row in cx.boundary]


def sign_rank(inv: SupportInvariants) -> int:
    s = inv.support
    ann = len(s) - rank_mod2(inv.L_S.basis)
    return ann - rank_mod2(coboundary_rows(s))


def h2_descriptor(inv: SupportInvariants, mode: FieldMode) -> H2Descriptor:
    _check_mode(mode)
    k_s = inv.K_S
    if mode == "algebraically_closed":
        return H2Descriptor(mode, k_s.free_rank, k_s.torsion, 0, 0)
    return H2Descriptor(
        mode,
        k_s.free_rank,
        tuple(2 for d in k_s.torsion if d % 2 == 0),
        sign_rank(inv),
        k_s.free_rank,
    )


def _ratio(a: Contraction, b: Contraction) -> dict[int, Fraction]:
    return {i: b.values[i] / v for i, v in a.values.items()}


def _trivial_on(lattice: IntegerLattice, chi: Mapping[int, Fraction], idx: list[int]) -> bool:
    for u in lattice.basis:
        value = Fraction(1)
        for e, i in zip(u, idx):
            if e:
                value *= chi[i] ** e
        if value != 1:
            return False
    return True


def _in_span_mod2(rows: list[tuple[int, ...]], v: list[int]) -> bool:
    return rank_mod2(rows + [tuple(v)]) == rank_mod2(rows)


def equivalent_via_normalization(a: Contraction, b: Contraction, mode: FieldMode) -> bool:
    """Decide whether b = a * d(alpha) on the common support for some alpha."""
    _check_mode(mode)
    for c in (a, b):
        problem = contraction_violation(c)
        if problem:
            raise ValueError(f"invalid contraction: {problem}")
    if a.group != b.group or a.values.keys() != b.values.keys():
        return False
    s = a.support
    idx = s.indices()
    chi = _ratio(a, b)
    lat = identity_lattice_of(s)
    if mode == "algebraically_closed":
        return _trivial_on(lat, chi, idx)
    if not _trivial_on(lat, {i: abs(v) for i, v in chi.items()}, idx):
        return False
    signs = [int(chi[i] < 0) for i in idx]
    return _in_span_mod2(coboundary_rows(s), signs)


def satisfies_surviving_identities(c: Contraction) -> bool:
    """True iff c takes value 1 on every element of <R_G> cap F_S."""
    s = c.support
    return _trivial_on(identity_lattice_of(s), c.values, s.indices())


def _solve_combination(gens: list[tuple[int, ...]], target: list[int]) -> list[int] | None:
    """Integer w with sum_i w_i gens_i == target, or None."""
    dim = len(target)
    n = len(gens)
    ech = _Echelon(dim + n)
    for i, g in enumerate(gens):
        row = list(g) + [0] * n
        row[dim + i] = 1
        ech.insert(row)
    t = list(target) + [0] * n
    for c in sorted(ech.rows):
        if c >= dim:
            break
        row = ech.rows[c]
        if any(t[:c]):
            return None
        q, rem = divmod(t[c], row[c])
        if rem:
            return None
        if q:
            t = [x - q * y for x, y in zip(t, row)]
    if any(t[:dim]):
        return None
    return [-x for x in t[dim:]]


@dataclass(frozen=True)
class SignInvariants:
    """Sign invariants of the first kind.

    ``section`` holds, for each generator of the 2-torsion of C_S, the
    chosen lift xi(c) as a vector of Z^G (inside the image of boundary2);
    ``delta`` holds sgn(eps(xi(c)^2)) for the same generators.
    """

    section: tuple[tuple[int, ...], ...]
    delta: tuple[int, ...]
    witnesses: tuple[tuple[int, ...], ...] = ()


def two_torsion_section(s: Support) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(lift, w) for generators of (C_S)_[2], where A_S w = 2 * lift."""
    cx = relation_complex(s.group)
    cols = [cx.columns[i] for i in s]
    image_s = IntegerLattice.from_generators(cols, cx.n)
    out = []
    for order, gen in quotient_generators(cx.image_lattice, image_s):
        if order == 0 or order % 2:
            continue
        half = order // 2
        lift = image_s.reduce([half * x for x in gen])
        w = _solve_combination(cols, [2 * x for x in lift])
        if w is None:  # pragma: no cover - 2 * lift lies in im A_S by construction
            raise ArithmeticError("2-torsion lift does not square into the support image")
        out.append((tuple(lift), tuple(w)))
    return out


def sign_invariants(c: Contraction) -> SignInvariants:
    problem = contraction_violation(c)
    if problem:
        raise ValueError(f"invalid contraction: {problem}")
    if not satisfies_surviving_identities(c):
        raise ValueError("sign invariants need a contraction satisfying all surviving identities")
    s = c.support
    idx = s.indices()
    section, delta, witnesses = [], [], []
    for lift, w in two_torsion_section(s):
        negative = sum(e for e, i in zip(w, idx) if c.values[i] < 0)
        section.append(lift)
        witnesses.append(w)
        delta.append(-1 if negative % 2 else 1)
    return SignInvariants(tuple(section), tuple(delta), tuple(witnesses))


def random_contraction(s: Support, rng, height: int = 6) -> Contraction:
    """A random valid contraction with support exactly ``s``.

    Values are products t_1^w_1[p] ... t_k^w_k[p] over a basis w of the
    integer vectors orthogonal to every surviving relator, with random
    nonzero rationals t_j; every such assignment satisfies the relations.
    ``rng`` is a ``random.Random``.
    """
    if not is_support(s):
        raise ValueError(f"{s} is not a support")
    idx = s.indices()
    cx = relation_complex(s.group)
    rows = [[v[i] for i in idx] for v in cx.surviving_relators(s.bits)]
    if rows:
        basis = kernel(rows, len(idx)).basis
    else:
        basis = IntegerLattice.full(len(idx)).basis
    values = {i: Fraction(1) for i in idx}
    for w in basis:
        t = Fraction(rng.randint(1, height), rng.randint(1, height)) * rng.choice((1, -1))
        for e, i in zip(w, idx):
            if e:
                values[i] *= t**e
    return Contraction(s.group, values)


def _descriptor_row(args: tuple[GroupSpec, int, str]) -> H2Descriptor:
    spec, bits, mode = args
    return h2_descriptor(support_invariants(Support(spec, bits)), mode)  # type: ignore[arg-type]


def classify_all(
    spec: GroupSpec, mode: FieldMode, threads: int = 1
) -> list[tuple[Support, H2Descriptor]]:
    """One descriptor per support, in lectic support order."""
    _check_mode(mode)
    supports = list(enumerate_supports(spec))
    jobs = [(spec, s.bits, mode) for s in supports]
    if threads > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_descriptor_row, jobs, chunksize=max(1, len(jobs) // (8 * threads))))
    else:
        rows = [_descriptor_row(j) for j in jobs]
    return list(zip(supports, rows))


def class_count(desc: H2Descriptor) -> int | None:
    """Number of classes when H^2_S is finite (no continuous parameters)."""
    if desc.continuous_rank:
        return None
    return 2**desc.sign_rank * math.prod(desc.torsion_dual)


__all__ = [
    "Contraction",
    "H2Descriptor",
    "SignInvariants",
    "FIELD_MODES",
    "classify_all",
    "class_count",
    "contraction_violation",
    "equivalent_via_normalization",
    "random_contraction",
    "h2_descriptor",
    "satisfies_surviving_identities",
    "sign_invariants",
    "sign_rank",
    "two_torsion_section",
    "validate_contraction",
]
