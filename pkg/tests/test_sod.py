import pytest

from mckayfix.catalog import get_case, verify_branch_factorization
from mckayfix.hilb import CurveActionResult
from mckayfix.sod import (
    CountMismatch,
    SODCounts,
    corollary_b_check,
    counts_from_geometry,
    exchange_matches_reality,
    gmm2_counts,
    sod_counts,
    theorem_a_check,
)
from oracles import dihedral_class_count
from conftest import context, locus


def _dihedral_reflection_classes(n: int) -> int:
    from sympy.combinatorics.named_groups import DihedralGroup

    return sum(1 for cls in DihedralGroup(n).conjugacy_classes()
               if len(cls) > 1 and next(iter(cls)).order() == 2)


class _Fake:
    def __init__(self, label: str, kind: str, partner: str | None = None) -> None:
        self.label = label
        self.result = CurveActionResult(kind=kind, partner=partner, fixed=[])


def _geometry(name, m=None) -> SODCounts:
    ctx = context(name, m)
    return sod_counts(verify_branch_factorization(ctx.case), locus(name, m).curves)


def test_g12_counts():
    c = _geometry("G12")
    assert (c.P, c.C, c.X, c.n, c.r, c.total) == (1, 6, 2, 6, 1, 8)
    assert c.formula() == "6+1+1=8"


def test_g22_counts():
    c = _geometry("G22")
    assert (c.P, c.C, c.X, c.n, c.r, c.total) == (4, 8, 0, 16, 1, 18)


def test_g2mm2_m5_counts():
    c = _geometry("G2mm2", 5)
    assert (c.P, c.C, c.X, c.n, c.r, c.total) == (2, 7, 1, 10, 2, 13)


def test_theorem_a_examples():
    g13 = _geometry("G13")
    assert theorem_a_check(g13, len(context("G13").G.conjugacy_classes())).ok
    assert g13.formula() == "13+2+1=16"
    m4 = _geometry("G2mm2", 4)
    assert m4.formula() == "10+3+1=14"
    assert theorem_a_check(m4, len(context("G2mm2", 4).G.conjugacy_classes())).ok


def test_trivial_group_sanity():
    c = counts_from_geometry(0, 0, 0, 0)
    assert c.formula() == "0+0+1=1" and theorem_a_check(c, 1).ok


def test_theorem_a_reports_both_numbers_on_mismatch():
    res = theorem_a_check(counts_from_geometry(1, 1, 6, 2), 9)
    assert not res.ok and "8" in res.detail and "9" in res.detail


@pytest.mark.parametrize("name,m,r", [("G12", None, 1), ("G13", None, 2), ("G2mm2", 3, 2), ("G2mm2", 5, 2)])
def test_corollary_b_examples(name, m, r):
    G = context(name, m).G
    assert G.reflection_classes() == r
    assert corollary_b_check(G.reflection_classes(), r).ok
    assert not corollary_b_check(r + 1, r).ok


@pytest.mark.parametrize("m,r,n,total", [(5, 1, 2, 4), (4, 2, 2, 5), (3, 1, 1, 3)])
def test_gmm2_counts_examples(m, r, n, total):
    c = gmm2_counts(m)
    assert (c.r, c.n, c.total) == (r, n, total)
    assert c.total == dihedral_class_count(m)


@pytest.mark.parametrize("m", range(3, 9))
def test_gmm2_against_dihedral_oracle(m):
    c = gmm2_counts(m)
    assert c.total == dihedral_class_count(m)
    assert c.r == _dihedral_reflection_classes(m)
    assert c.n - 2 * c.P == c.C - c.X >= 0


def test_gmm2_range():
    with pytest.raises(ValueError):
        gmm2_counts(2)
    with pytest.raises(ValueError):
        gmm2_counts(13)


def test_overlapping_pairs_are_rejected():
    outs = [_Fake("a", "exchanged", "b"), _Fake("b", "exchanged", "a"), _Fake("c", "exchanged", "a")]
    with pytest.raises(CountMismatch):
        sod_counts(1, outs)


def test_inconsistent_geometry_rejected():
    with pytest.raises(CountMismatch):
        counts_from_geometry(1, 3, 4, 1)
    with pytest.raises(CountMismatch):
        counts_from_geometry(1, 0, 3, 2)


@pytest.mark.parametrize("name,m", [("G12", None), ("G13", None), ("G22", None), ("G2mm2", 3), ("G2mm2", 4)])
def test_exchange_matches_reality(name, m):
    ctx = context(name, m)
    assert exchange_matches_reality(locus(name, m).curves, ctx.curve_irreps, ctx.ht) == []


def test_reality_detects_disagreement():
    ctx = context("G12")
    outs = [_Fake(o.label, "pointwise") for o in locus("G12").curves]
    assert "rho_1'" in exchange_matches_reality(outs, ctx.curve_irreps, ctx.ht)


def test_case_lookup_roundtrip():
    assert get_case("g2mm2", 5).label == "g2mm2_m5"
