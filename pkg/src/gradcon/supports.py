"""Contraction supports as closed sets of a Horn implication system.

A subset S of the pair set is a support iff {g,h}, {gh,k} in S forces
{h,k}, {g,hk} in S for every triple (g, h, k).  Each triple gives one
implication with a premise of at most two pairs, so the supports are the
closed sets of a Horn closure system and can be listed with Next Closure.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .groups import GroupSpec, Pair, pair_index

DEFAULT_MAX_ORDER = 12
MAX_PAIRS = 4096


def max_order() -> int:
    value = os.environ.get("GRADCON_MAX_ORDER")
    return int(value) if value else DEFAULT_MAX_ORDER


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Support:
    """A set of pair indices stored as an integer bitmask (bit i = pair i)."""

    group: GroupSpec
    bits: int

    @classmethod
    def from_indices(cls, group: GroupSpec, indices: Iterable[int]) -> "Support":
        m = len(pair_index(group))
        bits = 0
        for i in indices:
            if not 0 <= i < m:
                raise ValueError(f"pair index {i} out of range [0, {m})")
            bits |= 1 << i
        return cls(group, bits)

    @classmethod
    def from_pairs(cls, group: GroupSpec, pairs: Iterable[Pair]) -> "Support":
        pidx = pair_index(group)
        return cls.from_indices(group, (pidx.index_of(p) for p in pairs))

    @classmethod
    def full(cls, group: GroupSpec) -> "Support":
        return cls(group, (1 << len(pair_index(group))) - 1)

    @classmethod
    def empty(cls, group: GroupSpec) -> "Support":
        return cls(group, 0)

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return _bits(self.bits)

    def indices(self) -> list[int]:
        return list(_bits(self.bits))

    def pairs(self) -> list[Pair]:
        pidx = pair_index(self.group)
        return [pidx[i] for i in _bits(self.bits)]

    def _check(self, other: "Support") -> None:
        if other.group != self.group:
            raise ValueError(f"supports over different groups: {self.group} vs {other.group}")

    def __and__(self, other: "Support") -> "Support":
        self._check(other)
        return Support(self.group, self.bits & other.bits)

    def __or__(self, other: "Support") -> "Support":
        self._check(other)
        return Support(self.group, self.bits | other.bits)

    def __le__(self, other: "Support") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __lt__(self, other: "Support") -> bool:
        return self <= other and self.bits != other.bits

    def lectic_key(self) -> int:
        """Sort key realizing the lectic order (pair 0 is most significant)."""
        m = len(pair_index(self.group))
        return int(format(self.bits, f"0{m}b")[::-1], 2) if m else 0

    def __repr__(self) -> str:
        return f"Support({self.group}, {self.indices()})"


class ImplicationSystem:
    """Deduplicated implications premise -> conclusions over pair indices.

    Premises are bitmasks with one or two bits; conclusions already in the
    premise are dropped and implications sharing a premise are merged.
    """

    def __init__(self, spec: GroupSpec, implications: dict[int, int]):
        self.spec = spec
        self.size = len(pair_index(spec))
        self.implications = dict(sorted(implications.items()))
        by_elem: list[list[tuple[int, int]]] = [[] for _ in range(self.size)]
        for premise, conclusion in self.implications.items():
            for p in _bits(premise):
                by_elem[p].append((premise, conclusion))
        self._by_elem = [tuple(v) for v in by_elem]

    def __len__(self) -> int:
        return len(self.implications)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.implications.items())

    def extend(self, closed: int, new: int) -> int:
        """Close ``closed | new`` assuming ``closed`` is already closed."""
        x = closed | new
        stack = list(_bits(new & ~closed))
        by_elem = self._by_elem
        while stack:
            p = stack.pop()
            for premise, conclusion in by_elem[p]:
                if premise & x == premise:
                    add = conclusion & ~x
                    if add:
                        x |= add
                        stack.extend(_bits(add))
        return x

    def close_bits(self, bits: int) -> int:
        return self.extend(0, bits)

    def is_closed_bits(self, bits: int) -> bool:
        for premise, conclusion in self.implications.items():
            if premise & bits == premise and conclusion & ~bits:
                return False
        return True


_IMPLICATION_CACHE: dict[GroupSpec, ImplicationSystem] = {}


def build_implications(spec: GroupSpec) -> ImplicationSystem:
    """One implication per triple: {g,h} and {gh,k} imply {h,k} and {g,hk}."""
    cached = _IMPLICATION_CACHE.get(spec)
    if cached is not None:
        return cached
    m = len(pair_index(spec))
    if m > MAX_PAIRS:
        raise ValueError(f"group {spec} has {m} pairs, more than the supported {MAX_PAIRS}")
    table = pair_index(spec).by_element_index
    mt = spec.mul_table
    n = spec.order
    merged: dict[int, int] = {}
    for g in range(n):
        for h in range(n):
            gh = mt[g][h]
            a = table[g][h]
            for k in range(n):
                premise = (1 << a) | (1 << table[gh][k])
                conclusion = ((1 << table[h][k]) | (1 << table[g][mt[h][k]])) & ~premise
                if conclusion:
                    merged[premise] = merged.get(premise, 0) | conclusion
    system = ImplicationSystem(spec, merged)
    _IMPLICATION_CACHE[spec] = system
    return system


def close(s: Support, sys: ImplicationSystem | None = None) -> Support:
    """Least support containing ``s``."""
    sys = sys or build_implications(s.group)
    if sys.spec != s.group:
        raise ValueError("support and implication system belong to different groups")
    return Support(s.group, sys.close_bits(s.bits))


def is_support(s: Support, sys: ImplicationSystem | None = None) -> bool:
    sys = sys or build_implications(s.group)
    return sys.is_closed_bits(s.bits)


def _check_bound(spec: GroupSpec) -> None:
    bound = max_order()
    if spec.order > bound:
        raise ValueError(
            f"group order {spec.order} exceeds the enumeration bound {bound} "
            "(set GRADCON_MAX_ORDER to raise it)"
        )


def _next_closure_bits(sys: ImplicationSystem) -> Iterator[int]:
    # Depth-first form of Next Closure.  For a closed set A generated by its
    # elements below i, the closed sets sharing that prefix are A itself and,
    # for each j >= i not in A taken from the largest down, the canonical
    # extensions close(A + j) that add nothing below j.
    m = sys.size
    below = [(1 << j) - 1 for j in range(m + 1)]

    def walk(a: int, i: int) -> Iterator[int]:
        yield a
        for j in range(m - 1, i - 1, -1):
            bit = 1 << j
            if a & bit:
                continue
            c = sys.extend(a, bit)
            if (c ^ a) & below[j] == 0:
                yield from walk(c, j + 1)

    yield from walk(sys.close_bits(0), 0)


def enumerate_supports(spec: GroupSpec) -> Iterator[Support]:
    """All supports of ``spec`` exactly once, in lectic order."""
    _check_bound(spec)
    sys = build_implications(spec)
    for bits in _next_closure_bits(sys):
        yield Support(spec, bits)


def count_supports(spec: GroupSpec) -> int:
    _check_bound(spec)
    return sum(1 for _ in _next_closure_bits(build_implications(spec)))


def meet(a: Support, b: Support) -> Support:
    """Intersection of two supports (always a support)."""
    sys = build_implications(a.group)
    for s in (a, b):
        if not sys.is_closed_bits(s.bits):
            raise ValueError(f"{s} is not a support")
    return a & b


def maximal_supports_avoiding(p: int, spec: GroupSpec) -> list[Support]:
    """Inclusion-maximal supports not containing pair ``p``.

    Supports avoiding ``p`` form a down-closed family under intersection, so
    the maximal ones are found among the enumerated supports by filtering.
    """
    m = len(pair_index(spec))
    if not 0 <= p < m:
        raise ValueError(f"pair index {p} out of range [0, {m})")
    bit = 1 << p
    avoiding = [s.bits for s in enumerate_supports(spec) if not s.bits & bit]
    avoiding.sort(key=int.bit_count, reverse=True)
    maximal: list[int] = []
    for b in avoiding:
        if not any(b & ~c == 0 for c in maximal):
            maximal.append(b)
    return sorted((Support(spec, b) for b in maximal), key=Support.lectic_key)
