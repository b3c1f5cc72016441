"""Graded Lie algebras given by structure constants, and contractions of them.

An algebra has a basis e_0..e_{n-1}, a degree per basis vector and a sparse
bracket table [e_i, e_j] = sum_k c_ij^k e_k stored for i < j only.  All
coefficients are exact rationals.  Loading checks degree compatibility,
antisymmetry and the Jacobi identity on every basis triple.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .cohomology import Contraction, contraction_violation
from .groups import Element, GroupSpec, Pair, format_element, make_pair, pair_index, parse_group
from .supports import Support

Terms = tuple[tuple[int, Fraction], ...]


class AlgebraError(ValueError):
    """An algebra failed to parse or validate.  ``triple`` names the basis
    indices involved when the failure is local to a bracket."""

    def __init__(self, message: str, triple: tuple[int, ...] | None = None):
        super().__init__(message)
        self.triple = triple


def _coef(raw) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise AlgebraError(f"coefficient {raw!r} must be an integer or a 'p/q' string")
    try:
        return Fraction(str(raw))
    except (ValueError, ZeroDivisionError):
        raise AlgebraError(f"bad coefficient {raw!r}") from None


@dataclass(frozen=True)
class GradedAlgebra:
    group: GroupSpec
    degrees: tuple[Element, ...]
    structure: Mapping[tuple[int, int], Terms] = field(default_factory=dict)
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        clean = {}
        for (i, j), terms in self.structure.items():
            kept = tuple(sorted((k, Fraction(c)) for k, c in terms if c))
            if kept:
                clean[(i, j)] = kept
        object.__setattr__(self, "structure", dict(sorted(clean.items())))
        object.__setattr__(self, "degrees", tuple(self.degrees))

    __hash__ = None  # type: ignore[assignment]

    @property
    def dimension(self) -> int:
        return len(self.degrees)

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """[e_i, e_j] as a sparse vector."""
        if i == j:
            return {}
        if i < j:
            return dict(self.structure.get((i, j), ()))
        return {k: -c for k, c in self.structure.get((j, i), ())}

    def bracket_vectors(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return {k: c for k, c in out.items() if c}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedAlgebra):
            return NotImplemented
        return (
            self.group == other.group
            and self.degrees == other.degrees
            and self.structure == other.structure
        )

    def to_json(self) -> dict:
        out = {
            "group": str(self.group),
            "degrees": [list(d) for d in self.degrees],
            "brackets": [
                {"i": i, "j": j, "terms": [{"k": k, "c": str(c)} for k, c in terms]}
                for (i, j), terms in self.structure.items()
            ],
        }
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out


def check_degrees(a: GradedAlgebra) -> None:
    elements = set(a.group.elements)
    for i, d in enumerate(a.degrees):
        if d not in elements:
            raise AlgebraError(f"degree {d} of e_{i} is not an element of {a.group}", (i,))
    for (i, j), terms in a.structure.items():
        if not (0 <= i < j < a.dimension):
            raise AlgebraError(f"bracket index ({i}, {j}) out of range or not i < j", (i, j))
        want = a.group.mul(a.degrees[i], a.degrees[j])
        for k, _ in terms:
            if not 0 <= k < a.dimension:
                raise AlgebraError(f"[e_{i}, e_{j}] has term index {k} out of range", (i, j, k))
            if a.degrees[k] != want:
                raise AlgebraError(
                    f"degree violation: [e_{i}, e_{j}] has a component on e_{k} of degree "
                    f"{format_element(a.degrees[k])}, expected {format_element(want)}",
                    (i, j, k),
                )


def jacobi_defect(a: GradedAlgebra, i: int, j: int, k: int) -> dict[int, Fraction]:
    """[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]."""
    out: dict[int, Fraction] = {}
    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
        for l, c in a.bracket(x, y).items():
            for m, d in a.bracket(l, z).items():
                out[m] = out.get(m, Fraction(0)) + c * d
    return {m: c for m, c in out.items() if c}


def jacobi(a: GradedAlgebra) -> tuple[int, int, int, dict[int, Fraction]] | None:
    """First basis triple i < j < k violating Jacobi, with its defect, or None.

    The Jacobiator is alternating, so triples with repeated indices vanish.
    Triples where no pair has a nonzero bracket are skipped.
    """
    n = a.dimension
    # j, k with [e_j, e_k] != 0, to skip triples that are trivially zero
    active = [[False] * n for _ in range(n)]
    for i, j in a.structure:
        active[i][j] = active[j][i] = True
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if not (active[i][j] or active[j][k] or active[i][k]):
                    continue
                defect = jacobi_defect(a, i, j, k)
                if defect:
                    return i, j, k, defect
    return None


def validate_algebra(a: GradedAlgebra) -> None:
    check_degrees(a)
    bad = jacobi(a)
    if bad is not None:
        i, j, k, defect = bad
        shown = " + ".join(f"({c})*e_{m}" for m, c in sorted(defect.items()))
        raise AlgebraError(f"Jacobi fails on (e_{i}, e_{j}, e_{k}): defect {shown}", (i, j, k))


def _parse_degree(raw, group: GroupSpec) -> Element:
    if isinstance(raw, int) and not isinstance(raw, bool):
        raw = [raw]
    if not isinstance(raw, list):
        raise AlgebraError(f"degree {raw!r} must be a list of residues")
    try:
        return group.element(raw)
    except (ValueError, TypeError) as exc:
        raise AlgebraError(f"bad degree {raw!r}: {exc}") from None


def algebra_from_json(obj: Mapping, group: GroupSpec | None = None) -> GradedAlgebra:
    """Build and validate an algebra from the JSON object form."""
    if not isinstance(obj, Mapping):
        raise AlgebraError("algebra JSON must be an object")
    try:
        spec = parse_group(str(obj["group"]))
        raw_degrees = obj["degrees"]
        raw_brackets = obj.get("brackets", [])
    except KeyError as exc:
        raise AlgebraError(f"algebra JSON is missing {exc}") from None
    if group is not None and spec != group:
        raise AlgebraError(f"algebra is graded by {spec}, expected {group}")
    degrees = [_parse_degree(d, spec) for d in raw_degrees]
    n = len(degrees)
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    given: dict[tuple[int, int], dict[int, Fraction]] = {}
    for entry in raw_brackets:
        try:
            i, j, terms = int(entry["i"]), int(entry["j"]), entry["terms"]
        except (KeyError, TypeError, ValueError):
            raise AlgebraError(f"bad bracket entry {entry!r}") from None
        if not (0 <= i < n and 0 <= j < n):
            raise AlgebraError(f"bracket ({i}, {j}) out of range for dimension {n}", (i, j))
        vec: dict[int, Fraction] = {}
        for t in terms:
            k = int(t["k"])
            vec[k] = vec.get(k, Fraction(0)) + _coef(t["c"])
        vec = {k: c for k, c in vec.items() if c}
        if (i, j) in given:
            raise AlgebraError(f"bracket ({i}, {j}) given twice", (i, j))
        given[(i, j)] = vec
        if i == j:
            if vec:
                raise AlgebraError(f"antisymmetry: [e_{i}, e_{i}] must be zero", (i, i))
            continue
        key = (min(i, j), max(i, j))
        oriented = vec if i < j else {k: -c for k, c in vec.items()}
        if key in table and table[key] != oriented:
            raise AlgebraError(
                f"antisymmetry: [e_{i}, e_{j}] and [e_{j}, e_{i}] are not negatives", (i, j)
            )
        table[key] = oriented
    labels = obj.get("labels")
    a = GradedAlgebra(
        spec,
        tuple(degrees),
        {key: tuple(v.items()) for key, v in table.items()},
        tuple(labels) if labels is not None else None,
    )
    validate_algebra(a)
    return a


def load_algebra(path: str | Path, group: GroupSpec | None = None) -> GradedAlgebra:
    """Read an algebra JSON file.  Raises OSError for unreadable files and
    AlgebraError for malformed or invalid content."""
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{path}: not valid JSON ({exc})") from None
    return algebra_from_json(obj, group)


def second_support(a: GradedAlgebra) -> Support:
    """Pairs {deg i, deg j} over the nonzero brackets."""
    pidx = pair_index(a.group)
    return Support.from_indices(
        a.group, {pidx.index(a.degrees[i], a.degrees[j]) for i, j in a.structure}
    )


def _rescale(a: GradedAlgebra, factor) -> GradedAlgebra:
    table = {}
    for (i, j), terms in a.structure.items():
        table[(i, j)] = tuple((k, c * factor(i, j, k)) for k, c in terms)
    return GradedAlgebra(a.group, a.degrees, table, a.labels)


def apply_contraction(a: GradedAlgebra, c: Contraction) -> GradedAlgebra:
    """Scale [e_i, e_j] by c(deg i, deg j).  The result is re-validated."""
    if c.group != a.group:
        raise ValueError(f"contraction over {c.group} applied to an algebra graded by {a.group}")
    problem = contraction_violation(c)
    if problem:
        raise ValueError(f"invalid contraction: {problem}")
    pidx = pair_index(a.group)
    deg = a.degrees
    out = _rescale(a, lambda i, j, k: c.value(pidx.index(deg[i], deg[j])))
    try:
        validate_algebra(out)
    except AlgebraError as exc:  # pragma: no cover - a valid contraction is generic
        raise RuntimeError(f"contracted algebra is not Lie: {exc}") from exc
    return out


def apply_normalization(a: GradedAlgebra, alpha: Mapping[Element, object]) -> GradedAlgebra:
    """Structure constants of the basis alpha(deg i) e_i: c_ij^k times
    alpha(deg i) alpha(deg j) / alpha(deg k)."""
    vals: dict[Element, Fraction] = {}
    for d in set(a.degrees):
        if d not in alpha:
            raise ValueError(f"alpha has no value at degree {format_element(d)}")
        v = Fraction(alpha[d])
        if not v:
            raise ValueError(f"alpha vanishes at degree {format_element(d)}")
        vals[d] = v
    deg = a.degrees
    return _rescale(a, lambda i, j, k: vals[deg[i]] * vals[deg[j]] / vals[deg[k]])


def witness_algebra(
    s: Support | Iterable[Pair], group: GroupSpec | None = None
) -> GradedAlgebra:
    """A 2-step nilpotent graded algebra whose second support is exactly ``s``.

    Basis: x_g and y_g for every g, then one central element of degree gh for
    each bracket between {x_g, y_g} and {x_h, y_h} with {g,h} in s.
    """
    if isinstance(s, Support):
        group = s.group
        pairs = s.pairs()
    else:
        if group is None:
            raise ValueError("witness_algebra needs a group when given plain pairs")
        pairs = sorted({make_pair(g, h) for g, h in s}, key=pair_index(group).index_of)
    els = group.elements
    n = len(els)
    degrees = list(els) + list(els)
    labels = [f"x[{format_element(g)}]" for g in els] + [f"y[{format_element(g)}]" for g in els]
    pos = group.element_index
    table: dict[tuple[int, int], Terms] = {}
    for g, h in pairs:
        gi, hi = pos[g], pos[h]
        if g == h:
            brackets = [(gi, gi + n)]
        else:
            brackets = [(a, b) for a in (gi, gi + n) for b in (hi, hi + n)]
        for a_idx, b_idx in brackets:
            z = len(degrees)
            degrees.append(group.mul(g, h))
            labels.append(f"[{labels[a_idx]},{labels[b_idx]}]")
            key = (min(a_idx, b_idx), max(a_idx, b_idx))
            table[key] = ((z, Fraction(1 if a_idx < b_idx else -1)),)
    return GradedAlgebra(group, tuple(degrees), table, tuple(labels))


__all__ = [
    "AlgebraError",
    "GradedAlgebra",
    "algebra_from_json",
    "apply_contraction",
    "apply_normalization",
    "check_degrees",
    "jacobi",
    "jacobi_defect",
    "load_algebra",
    "second_support",
    "validate_algebra",
    "witness_algebra",
]
