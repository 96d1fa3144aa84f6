"""Counting identities for the semiorthogonal decomposition.

n is assembled from the verified fixed locus (two objects per pointwise-fixed
curve, one per orbit of curves under alpha), r from the branch factorization,
and the total n + r + 1 is compared with the number of conjugacy classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .reps import CharacterTable


class CountMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SODCounts:
    r: int
    P: int
    C: int
    X: int
    n: int

    @property
    def total(self) -> int:
        return self.n + self.r + 1

    def formula(self) -> str:
        return f"{self.n}+{self.r}+1={self.total}"


def counts_from_geometry(r: int, P: int, C: int, X: int) -> SODCounts:
    if min(r, P, C, X) < 0 or 2 * X > C or P > C - 2 * X:
        raise CountMismatch(f"inconsistent fixed-locus counts P={P}, C={C}, X={X}")
    return SODCounts(r=r, P=P, C=C, X=X, n=2 * P + (C - X))


def sod_counts(r: int, outcomes: Iterable) -> SODCounts:
    """Counts from classified curves (objects with ``label`` and ``result``)."""
    outs = list(outcomes)
    P = sum(1 for o in outs if o.result.kind == "pointwise")
    pairs: set[frozenset[str]] = set()
    seen: set[str] = set()
    for o in outs:
        if o.result.kind != "exchanged":
            continue
        pair = frozenset((o.label, o.result.partner))
        if pair in pairs:
            continue
        if pair & seen:
            raise CountMismatch(f"curve {o.label} appears in two exchanged pairs")
        pairs.add(pair)
        seen |= pair
    return counts_from_geometry(r, P, len(outs), len(pairs))


@dataclass(frozen=True)
class IdentityResult:
    ok: bool
    detail: str


def theorem_a_check(counts: SODCounts, class_count: int) -> IdentityResult:
    ok = counts.total == class_count
    return IdentityResult(ok, f"{counts.formula()}" + ("" if ok else f" but there are {class_count} classes"))


def corollary_b_check(reflection_classes: int, r: int) -> IdentityResult:
    ok = reflection_classes == r
    return IdentityResult(ok, f"reflection classes {reflection_classes} {'=' if ok else '!='} branch components {r}")


def gmm2_counts(m: int) -> SODCounts:
    """Counts for the dihedral group G(m,m,2) of order 2m (type A_{m-1})."""
    if not 3 <= m <= 12:
        raise ValueError("m must lie in 3..12")
    if m % 2:
        return SODCounts(r=1, P=0, C=m - 1, X=(m - 1) // 2, n=(m - 1) // 2)
    return SODCounts(r=2, P=0, C=m - 1, X=(m - 2) // 2, n=m // 2)


def exchange_matches_reality(outcomes: Iterable, irreps: dict[str, int], table: CharacterTable) -> list[str]:
    """Curves where 'exchanged' disagrees with 'character not real-valued'."""
    bad = []
    for o in outcomes:
        real = table.irreducibles[irreps[o.label]].is_real()
        if (o.result.kind == "exchanged") == real:
            bad.append(o.label)
    return bad
