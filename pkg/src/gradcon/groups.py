"""Finite abelian groups in invariant-factor form and the unordered-pair index."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

Element = tuple[int, ...]
Pair = tuple[Element, Element]

_FACTOR_RE = re.compile(r"z(\d+)")


def _prime_powers(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors(cyclic_orders: list[int]) -> tuple[int, ...]:
    """Normalize a product of cyclic groups to k1 | k2 | ... | kr."""
    by_prime: dict[int, list[int]] = {}
    for k in cyclic_orders:
        if k < 1:
            raise ValueError(f"cyclic factor must be positive, got {k}")
        for p, e in _prime_powers(k).items():
            by_prime.setdefault(p, []).append(p**e)
    if not by_prime:
        return ()
    r = max(len(v) for v in by_prime.values())
    factors = [1] * r
    for powers in by_prime.values():
        powers.sort()
        # largest prime powers go into the largest invariant factors
        for i, q in enumerate(reversed(powers)):
            factors[r - 1 - i] *= q
    return tuple(factors)


@dataclass(frozen=True)
class GroupSpec:
    """The group Z_k1 x ... x Z_kr with k1 | k2 | ... | kr.

    The trivial group has no factors.
    """

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        canon = invariant_factors(list(self.invariant_factors))
        object.__setattr__(self, "invariant_factors", canon)

    @classmethod
    def from_cyclic(cls, orders: list[int]) -> "GroupSpec":
        return cls(tuple(orders))

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        """All elements in lexicographic order of residue tuples."""
        return tuple(itertools.product(*(range(k) for k in self.invariant_factors)))

    @cached_property
    def element_index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def element(self, residues) -> Element:
        if isinstance(residues, int):
            residues = (residues,)
        residues = tuple(int(r) for r in residues)
        if len(residues) != self.rank:
            raise ValueError(
                f"element {residues} has {len(residues)} residues, group {self} needs {self.rank}"
            )
        return tuple(r % k for r, k in zip(residues, self.invariant_factors))

    def mul(self, g: Element, h: Element) -> Element:
        return mul(g, h, self)

    def inverse(self, g: Element) -> Element:
        return tuple((-a) % k for a, k in zip(g, self.invariant_factors))

    def two_rank(self) -> int:
        """Rank of the 2-torsion subgroup G_[2]."""
        return sum(1 for k in self.invariant_factors if k % 2 == 0)

    @cached_property
    def mul_table(self) -> tuple[tuple[int, ...], ...]:
        idx = self.element_index
        els = self.elements
        return tuple(tuple(idx[mul(g, h, self)] for h in els) for g in els)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "Z1"
        return "x".join(f"Z{k}" for k in self.invariant_factors)


def parse_group(text: str) -> GroupSpec:
    """Parse strings like ``Z2``, ``Z2xZ4`` or ``z6`` into a canonical GroupSpec."""
    cleaned = text.strip().lower().replace(" ", "")
    if not cleaned:
        raise ValueError("empty group string")
    parts = cleaned.split("x")
    orders = []
    for part in parts:
        m = _FACTOR_RE.fullmatch(part)
        if m is None:
            raise ValueError(f"malformed group factor {part!r} in {text!r}")
        k = int(m.group(1))
        if k < 2:
            if k == 1 and len(parts) == 1:
                return GroupSpec(())
            raise ValueError(f"cyclic factor must be >= 2, got Z{k}")
        orders.append(k)
    return GroupSpec.from_cyclic(orders)


def mul(g: Element, h: Element, spec: GroupSpec) -> Element:
    """Group operation (componentwise addition of residues)."""
    if len(g) != spec.rank or len(h) != spec.rank:
        raise ValueError(f"dimension mismatch: {g}, {h} in {spec}")
    return tuple((a + b) % k for a, b, k in zip(g, h, spec.invariant_factors))


def make_pair(g: Element, h: Element) -> Pair:
    return (g, h) if g <= h else (h, g)


@dataclass(frozen=True)
class PairIndex:
    """Canonical enumeration of the unordered pairs {g, h} of a group."""

    spec: GroupSpec
    pairs: tuple[Pair, ...] = field(init=False)
    _index: dict[Pair, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        els = self.spec.elements
        pairs = tuple((els[i], els[j]) for i in range(len(els)) for j in range(i, len(els)))
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(pairs)})

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)

    def __getitem__(self, i: int) -> Pair:
        return self.pairs[i]

    def index(self, g: Element, h: Element) -> int:
        return self._index[make_pair(g, h)]

    def index_of(self, pair: Pair) -> int:
        return self._index[make_pair(*pair)]

    @cached_property
    def by_element_index(self) -> tuple[tuple[int, ...], ...]:
        """Pair index looked up by (element index, element index)."""
        n = self.spec.order
        table = [[0] * n for _ in range(n)]
        idx = self.spec.element_index
        for p, (g, h) in enumerate(self.pairs):
            i, j = idx[g], idx[h]
            table[i][j] = table[j][i] = p
        return tuple(tuple(row) for row in table)


_PAIR_INDEX_CACHE: dict[GroupSpec, PairIndex] = {}


def pair_index(spec: GroupSpec) -> PairIndex:
    cached = _PAIR_INDEX_CACHE.get(spec)
    if cached is None:
        cached = _PAIR_INDEX_CACHE[spec] = PairIndex(spec)
    return cached


def format_element(g: Element) -> str:
    return ",".join(str(a) for a in g)


def parse_element(text: str, spec: GroupSpec) -> Element:
    text = text.strip()
    if spec.rank == 0:
        if text not in ("", "0", "e"):
            raise ValueError(f"bad element {text!r} for trivial group")
        return ()
    return spec.element([int(t) for t in text.split(",")])


def pair_key(pair: Pair) -> str:
    """The ``"g|h"`` key used in contraction files."""
    return f"{format_element(pair[0])}|{format_element(pair[1])}"


def parse_pair_key(key: str, spec: GroupSpec) -> Pair:
    try:
        a, b = key.split("|")
    except ValueError:
        raise ValueError(f"pair key {key!r} must look like 'g|h'") from None
    return make_pair(parse_element(a, spec), parse_element(b, spec))
