"""Exact sparse row reduction over a cyclotomic field.

Vectors are dicts from sortable keys (monomials, unknown indices) to CycNum.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping

from .cyclo import CycField, CycNum

Vec = dict[Hashable, CycNum]


def axpy(y: Vec, a: CycNum, x: Mapping[Hashable, CycNum]) -> None:
    """y += a*x in place, dropping zeros."""
    for k, v in x.items():
        s = y.get(k)
        s = a * v if s is None else s + a * v
        if s.is_zero():
            y.pop(k, None)
        else:
            y[k] = s


class Echelon:
    """Reduced row echelon basis built incrementally.

    Each stored row has pivot entry 1 and no other stored row has a nonzero
    entry in its pivot column.  With ``track=True`` every row also remembers
    the combination of inserted vectors that produced it.
    """

    def __init__(self, field: CycField, track: bool = False) -> None:
        self.field = field
        self.rows: dict[Hashable, Vec] = {}
        self.track = track
        self.combos: dict[Hashable, Vec] = {}
        self._count = 0

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping[Hashable, CycNum]) -> tuple[Vec, Vec]:
        """Remainder of v after elimination, plus the combination used."""
        r = dict(v)
        combo: Vec = {}
        for piv in [k for k in r if k in self.rows]:
            c = r.get(piv)
            if c is None:
                continue
            axpy(r, -c, self.rows[piv])
            if self.track:
                axpy(combo, -c, self.combos[piv])
        return r, combo

    def contains(self, v: Mapping[Hashable, CycNum]) -> bool:
        return not self.reduce(v)[0]

    def add(self, v: Mapping[Hashable, CycNum], label: Hashable | None = None) -> bool:
        """Insert v; returns True when the rank grew."""
        r, combo = self.reduce(v)
        if self.track:
            lab = self._count if label is None else label
            self._count += 1
            combo = dict(combo)
            axpy(combo, self.field.one, {lab: self.field.one})
        if not r:
            return False
        piv = min(r, key=_sort_key)
        inv = r[piv].inv()
        r = {k: c * inv for k, c in r.items()}
        if self.track:
            combo = {k: c * inv for k, c in combo.items()}
        for other_piv, row in self.rows.items():
            c = row.get(piv)
            if c is not None:
                axpy(row, -c, r)
                if self.track:
                    axpy(self.combos[other_piv], -c, combo)
        self.rows[piv] = r
        if self.track:
            self.combos[piv] = combo
        return True

    def coordinates(self, v: Mapping[Hashable, CycNum]) -> dict[Hashable, CycNum]:
        """Coefficients of v on the stored rows (keyed by pivot); v must lie in the span."""
        coords = {piv: v[piv] for piv in self.rows if piv in v}
        check: Vec = {}
        for piv, c in coords.items():
            axpy(check, c, self.rows[piv])
        diff = dict(v)
        axpy(diff, -self.field.one, check)
        if diff:
            raise ValueError("vector is not in the span")
        return coords

    def pivots(self) -> list[Hashable]:
        return sorted(self.rows, key=_sort_key)


def _sort_key(k: Hashable):
    return k


def solve_combination(
    field: CycField, columns: list[Vec], target: Vec
) -> list[CycNum] | None:
    """Find lambda with sum lambda_j columns[j] = target, or None."""
    ech = Echelon(field, track=True)
    for j, col in enumerate(columns):
        ech.add(col, label=j)
    r, combo = ech.reduce(target)
    if r:
        return None
    # target - sum(combo-expressed rows) = 0  =>  target = -combo as combination of inputs
    lam = [field.zero] * len(columns)
    for j, c in combo.items():
        lam[j] = -c
    # exact verification
    acc: Vec = {}
    for j, c in enumerate(lam):
        if not c.is_zero():
            axpy(acc, c, columns[j])
    axpy(acc, -field.one, target)
    if acc:
        raise ArithmeticError("solution failed verification")
    return lam


def matrix_rank(field: CycField, rows: Iterable[Mapping[Hashable, CycNum]]) -> int:
    ech = Echelon(field)
    for r in rows:
        ech.add(r)
    return ech.rank
