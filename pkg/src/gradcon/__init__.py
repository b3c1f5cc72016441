"""Generic graded contractions of Lie algebras graded by finite abelian groups."""

__version__ = "0.1.0"

from .groups import GroupSpec, parse_group  # noqa: E402
from .supports import Support, enumerate_supports, count_supports  # noqa: E402
from .cohomology import Contraction, equivalent_via_normalization, h2_descriptor  # noqa: E402
from .complex import support_invariants  # noqa: E402

__all__ = [
    "Contraction",
    "GroupSpec",
    "Support",
    "count_supports",
    "enumerate_supports",
    "equivalent_via_normalization",
    "h2_descriptor",
    "parse_group",
    "support_invariants",
]
