"""Per-group case data: generators, the coset representative alpha,
invariants and their relation, exceptional-curve modules, families and
identities.  The exceptional groups are read from TOML files shipped with
the package; the two dihedral-type families are generated from closed forms.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from math import lcm
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .cyclo import CycField, CycNum, get_field
from .groups import FiniteMatrixGroup, closure, det_one_subgroup
from .hilb import InvariantIdeal, Span, uv_str
from .poly import Binding, Mat2, Poly, act, parse_poly, parse_scalar, standard_constants
from .reps import CharacterTable, character_table, mckay_quiver

CASE_NAMES = ("Gmm2", "G2mm2", "G12", "G13", "G22")
M_RANGE = range(3, 13)


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

Param = tuple[CycNum, CycNum]


@dataclass
class ExpectedAction:
    kind: str  # exchanged | pointwise | involution
    partner: str | None = None
    fixed: list[str] = field(default_factory=list)


@dataclass
class PencilSpec:
    A: list[Poly]
    B: list[Poly]
    points: list[Param] = field(default_factory=list)
    aliases: list[tuple[Param, str]] = field(default_factory=list)
    matrix: tuple[tuple[CycNum, CycNum], tuple[CycNum, CycNum]] | None = None
    fixed: list[Param] | None = None
    scalar: bool | None = None


@dataclass
class CurveSpec:
    """One exceptional curve E(rho); d = 0 marks the center."""

    label: str
    parent: str | None
    d: int
    low: list[Poly] = field(default_factory=list)
    high: list[Poly] = field(default_factory=list)
    ambient: list[Poly] | None = None
    probe: list[Poly] | None = None
    extras: dict[str, list[Poly]] = field(default_factory=dict)
    meets: dict[str, list[Poly]] = field(default_factory=dict)
    pencil: PencilSpec | None = None
    expect: ExpectedAction = field(default_factory=lambda: ExpectedAction("pointwise"))

    @property
    def is_center(self) -> bool:
        return self.d == 0


@dataclass
class FamilySpec:
    id: str
    direction: Param
    component: int
    limit: list[Poly]
    point: tuple[str, str] | None = None
    claims: list[Poly] = field(default_factory=list)
    values: dict[str, CycNum] = field(default_factory=dict)


@dataclass
class IdentitySpec:
    id: str
    kind: str  # poly | span | matrix
    g: str
    f: str = ""
    image: str = ""
    printed_image: str | None = None
    module: list[Poly] = field(default_factory=list)
    image_module: list[Poly] = field(default_factory=list)
    equal: bool = True
    h: str | None = None
    product: Mat2 | None = None


@dataclass
class GroupCase:
    name: str
    key: str
    m: int | None
    conductor: int
    field: CycField
    env: dict[str, Binding]
    matrices: dict[str, Mat2]
    G_gens: list[str]
    H_gens: list[str]
    alpha_name: str
    f1: Poly
    f2: Poly
    f3: Poly
    relation: Poly  # q(u, v) stored with u -> x, v -> y
    branch_factors: list[Poly]
    coxeter: int | None
    center: str | None
    dynkin: tuple[str, int]
    curves: list[CurveSpec]
    families: list[FamilySpec]
    identities: list[IdentitySpec]
    expected: dict[str, Any]
    source: dict[str, Any] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return self.key if self.m is None else f"{self.key}_m{self.m}"

    @property
    def alpha(self) -> Mat2:
        return self.matrices[self.alpha_name]

    @property
    def invariants(self) -> tuple[Poly, Poly, Poly]:
        return (self.f1, self.f2, self.f3)

    @property
    def count_only(self) -> bool:
        return not self.curves

    @property
    def h(self) -> int | None:
        return self.coxeter

    def curve(self, label: str) -> CurveSpec:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(label)

    def children(self, label: str) -> list[str]:
        return [c.label for c in self.curves if c.parent == label]

    def neighbors(self, label: str) -> list[str]:
        c = self.curve(label)
        out = self.children(label)
        return ([c.parent] if c.parent else []) + out

    def parse(self, text: str, extra: Mapping[str, Binding] | None = None) -> Poly:
        env = dict(self.env)
        if extra:
            env.update(extra)
        return parse_poly(text, self.field, env)

    def module_degree(self, spec: CurveSpec, which: str) -> int:
        assert self.coxeter is not None
        half = self.coxeter // 2
        return half - spec.d if which == "low" else half + spec.d


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def _scalar(text: Any, fld: CycField, env: Mapping[str, Binding]) -> CycNum:
    return parse_scalar(str(text), fld, env)


def _matrix(spec: Mapping[str, Any], fld: CycField, env: Mapping[str, Binding]) -> Mat2:
    rows = [[_scalar(v, fld, env) for v in row] for row in spec["rows"]]
    g = Mat2(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    if "scale" in spec:
        g = g.scale(_scalar(spec["scale"], fld, env))
    return g


def _polys(texts: list[str], fld: CycField, env: Mapping[str, Binding]) -> list[Poly]:
    return [parse_poly(t, fld, env) for t in texts]


def _param(pair: list[Any], fld: CycField, env: Mapping[str, Binding]) -> Param:
    return (_scalar(pair[0], fld, env), _scalar(pair[1], fld, env))


def _pencil(raw: Mapping[str, Any], fld: CycField, env: Mapping[str, Binding]) -> PencilSpec:
    mat = None
    if "matrix" in raw:
        (a, b), (c, d) = [[_scalar(v, fld, env) for v in row] for row in raw["matrix"]]
        mat = ((a, b), (c, d))
    return PencilSpec(
        A=_polys(raw["A"], fld, env),
        B=_polys(raw["B"], fld, env),
        points=[_param(p, fld, env) for p in raw.get("points", [])],
        aliases=[(_param(a["param"], fld, env), a["point"]) for a in raw.get("aliases", [])],
        matrix=mat,
        fixed=[_param(p, fld, env) for p in raw["fixed"]] if "fixed" in raw else None,
        scalar=raw.get("scalar"),
    )


def case_from_mapping(raw: Mapping[str, Any], m: int | None = None) -> GroupCase:
    """Build a GroupCase from the parsed data-file layout."""
    fld = get_field(int(raw["conductor"]))
    env: dict[str, Binding] = dict(standard_constants(fld))
    for name, text in raw.get("constants", {}).items():
        env[name] = _scalar(text, fld, env)
    matrices = {name: _matrix(spec, fld, env) for name, spec in raw["matrices"].items()}
    for name, text in raw.get("polys", {}).items():
        env[name] = parse_poly(text, fld, env)
    inv = raw["invariants"]
    f1, f2, f3 = (parse_poly(inv[k], fld, env) for k in ("f1", "f2", "f3"))
    uv_env = dict(env)
    uv_env.update({"u": Poly.x(fld), "v": Poly.y(fld)})
    relation = parse_poly(inv["relation"], fld, uv_env)
    factors = [parse_poly(t, fld, uv_env) for t in inv["branch_factors"]]

    curves = []
    for c in raw.get("curves", []):
        exp = c.get("expect", {"kind": "pointwise"})
        curves.append(CurveSpec(
            label=c["label"],
            parent=c.get("parent"),
            d=int(c["d"]),
            low=_polys(c.get("low", []), fld, env),
            high=_polys(c.get("high", []), fld, env),
            ambient=_polys(c["ambient"], fld, env) if "ambient" in c else None,
            probe=_polys(c["probe"], fld, env) if "probe" in c else None,
            extras={k: _polys(v, fld, env) for k, v in c.get("extras", {}).items()},
            meets={k: _polys(v, fld, env) for k, v in c.get("meets", {}).items()},
            pencil=_pencil(c["pencil"], fld, env) if "pencil" in c else None,
            expect=ExpectedAction(exp["kind"], exp.get("partner"), list(exp.get("fixed", []))),
        ))

    families = []
    for f in raw.get("families", []):
        pt = f.get("point")
        families.append(FamilySpec(
            id=f["id"],
            direction=_param(f["direction"], fld, env),
            component=int(f["component"]),
            limit=_polys(f["limit"], fld, env),
            point=(pt["curve"], pt["name"]) if pt else None,
            claims=_polys(f.get("claims", []), fld, env),
            values={k: _scalar(v, fld, env) for k, v in f.get("values", {}).items()},
        ))

    identities = []
    for ident in raw.get("identities", []):
        kind = ident.get("kind", "poly")
        spec = IdentitySpec(id=ident["id"], kind=kind, g=ident["g"])
        if kind == "poly":
            spec.f, spec.image = ident["f"], ident["image"]
            spec.printed_image = ident.get("printed_image")
        elif kind == "span":
            spec.module = _polys(ident["module"], fld, env)
            spec.image_module = _polys(ident["image"], fld, env)
            spec.equal = bool(ident.get("equal", True))
        elif kind == "matrix":
            spec.h = ident["h"]
            (a, b), (c, d) = [[_scalar(v, fld, env) for v in row] for row in ident["product"]]
            spec.product = Mat2(a, b, c, d)
        else:
            raise CatalogError(f"unknown identity kind {kind!r}")
        identities.append(spec)

    groups = raw["groups"]
    expected = dict(raw.get("expected", {}))
    if "center_order" in groups:
        expected["center_order"] = groups["center_order"]
    return GroupCase(
        name=raw["name"],
        key=raw["key"],
        m=m,
        conductor=fld.conductor,
        field=fld,
        env=env,
        matrices=matrices,
        G_gens=list(groups["G"]),
        H_gens=list(groups["H"]),
        alpha_name=groups["alpha"],
        f1=f1,
        f2=f2,
        f3=f3,
        relation=relation,
        branch_factors=factors,
        coxeter=raw.get("coxeter"),
        center=raw.get("center"),
        dynkin=(raw["dynkin"][0], int(raw["dynkin"][1])),
        curves=curves,
        families=families,
        identities=identities,
        expected=expected,
        source=dict(raw),
    )


def load_data_file(key: str) -> dict[str, Any]:
    text = resources.files("mckayfix.data").joinpath(f"{key}.toml").read_text(encoding="utf-8")
    return tomllib.loads(text)


# ---------------------------------------------------------------------------
# generated families
# ---------------------------------------------------------------------------

def _pow(var: str, k: int) -> str:
    return var if k == 1 else f"{var}^{k}"


def g2mm2_mapping(m: int) -> dict[str, Any]:
    """Closed-form data for G(2m, m, 2), type D_{m+2}."""
    N = lcm(2 * m, 4)
    X, Y = (lambda k: _pow("x", k)), (lambda k: _pow("y", k))
    curves: list[dict[str, Any]] = []
    curves.append({
        "label": "rho_1'", "parent": "rho_2", "d": m - 1,
        "low": ["x*y"], "high": [f"{X(2 * m)} - {Y(2 * m)}"],
        "probe": [f"x*y + {X(2 * m)} - {Y(2 * m)}"],
        "expect": {"kind": "involution", "fixed": ["low", "high"]},
    })
    for k in range(2, m):
        sign = "+" if k % 2 == 0 else "-"
        e = 2 * m - k + 1
        exp: dict[str, Any] = {"kind": "pointwise"} if k % 2 == 0 else {"kind": "involution", "fixed": ["low", "high"]}
        curves.append({
            "label": f"rho_{k}", "parent": f"rho_{k + 1}", "d": m - k,
            "low": [f"{X(k)}*y", f"x*{Y(k)}"], "high": [X(e), Y(e)],
            "probe": [f"{X(k)}*y + {Y(e)}", f"x*{Y(k)} {sign} {X(e)}"],
            "expect": exp,
        })
    center: dict[str, Any] = {
        "label": f"rho_{m}", "d": 0,
        "ambient": [X(m + 1), Y(m + 1), f"{X(m)}*y", f"x*{Y(m)}"],
        "extras": {"V'": [X(m + 1), Y(m + 1)]},
        "meets": {f"rho_{m - 1}": [f"{X(m)}*y", f"x*{Y(m)}"]},
    }
    if m % 2 == 0:
        center["expect"] = {"kind": "pointwise"}
    else:
        center["expect"] = {"kind": "involution", "fixed": [f"meet:rho_{m - 1}", "V'"]}
    curves.append(center)
    p1, p2 = f"rho_{m + 1}'", f"rho_{m + 2}'"
    for label, s_low, s_high, partner in ((p1, "-", "+", p2), (p2, "+", "-", p1)):
        low = f"{X(m)} {s_low} c*{Y(m)}"
        high = f"x*y*({X(m)} {s_high} c*{Y(m)})"
        curves.append({
            "label": label, "parent": f"rho_{m}", "d": 1,
            "low": [low], "high": [high], "probe": [f"{low} + {high}"],
            "expect": ({"kind": "exchanged", "partner": partner} if m % 2
                       else {"kind": "involution", "fixed": ["low", "high"]}),
        })

    half = m // 2
    if m % 2:
        factors = ["v", f"4*v^{m} - u^2"]
    else:
        factors = ["v", f"2*v^{half} - u", f"2*v^{half} + u"]
    families: list[dict[str, Any]] = [{
        "id": "branch_v", "direction": ["1", "0"], "component": 0,
        "point": {"curve": "rho_1'", "name": "low"}, "limit": ["x*y"],
    }]
    if m % 2:
        families.append({
            "id": "branch_diag", "direction": ["1", "1"], "component": 1,
            "point": {"curve": f"rho_{m}", "name": "V'"},
            "limit": [X(m + 1), Y(m + 1)],
            "claims": [f"{X(m + 1)} - t^2*{Y(m - 1)}", f"{Y(m + 1)} - t^2*{X(m - 1)}"],
            "values": {"f1": "2", "f2": "1", "f3": "0"},
        })
    else:
        # which of the two endpoint curves carries x^m - y^m flips with 4 | m;
        # the point is located by search and recorded in the report
        families.append({
            "id": "branch_minus", "direction": ["1", "1"], "component": 1,
            "limit": [f"{X(m)} - {Y(m)}"], "values": {"f1": "2", "f2": "1", "f3": "0"},
        })
        families.append({
            "id": "branch_plus", "direction": ["1", "eps"], "component": 2,
            "limit": [f"{X(m)} + {Y(m)}"],
        })

    identities: list[dict[str, Any]] = [{
        "id": "alpha.rho1p_probe", "kind": "span", "g": "alpha",
        "module": [f"x*y + ({X(2 * m)} - {Y(2 * m)})"], "image": [f"x*y - ({X(2 * m)} - {Y(2 * m)})"],
    }]
    for k in range(2, m):
        e = 2 * m - k + 1
        sgn = "" if k % 2 == 0 else "-"
        identities.append({
            "id": f"alpha.rho{k}_probe", "kind": "span", "g": "alpha",
            "module": [f"{X(k)}*y + {Y(e)}", f"x*{Y(k)} + (-1)^{k}*{X(e)}"],
            "image": [f"{sgn}{X(k)}*y + {Y(e)}", f"x*{Y(k)} + {X(e)}"],
        })
    if m % 2 == 0:
        for label, s1, s2 in (("p1", "-", "+"), ("p2", "+", "-")):
            low, high = f"{X(m)} {s1} c*{Y(m)}", f"x*y*({X(m)} {s2} c*{Y(m)})"
            identities.append({
                "id": f"alpha.{label}_probe", "kind": "span", "g": "alpha",
                "module": [f"({low}) + {high}"], "image": [f"({low}) - {high}"],
            })

    C = m + 2
    X_pairs = 0 if m % 2 == 0 else 1
    P = half if m % 2 == 0 else (m - 1) // 2
    r = len(factors)
    return {
        "name": f"G({2 * m},{m},2)", "key": "g2mm2", "conductor": N, "coxeter": 2 * m + 2,
        "center": f"rho_{m}", "dynkin": ["D", m + 2],
        "constants": {"eps": f"z^{N // (2 * m)}", "c": f"i^{m + 2}"},
        "matrices": {
            "r1": {"rows": [["0", "1"], ["1", "0"]]},
            "alpha": {"rows": [["-1", "0"], ["0", "1"]]},
            "s": {"rows": [["0", "eps^-1"], ["eps", "0"]]},
            "sigma": {"rows": [["eps", "0"], ["0", "eps^-1"]]},
            "tau": {"rows": [["0", "1"], ["-1", "0"]]},
        },
        "groups": {"G": ["r1", "alpha", "s"], "H": ["sigma", "tau"], "alpha": "alpha"},
        "invariants": {
            "f1": f"{X(2 * m)} + {Y(2 * m)}", "f2": "x^2*y^2",
            "f3": f"x*y*({X(2 * m)} - {Y(2 * m)})",
            "relation": f"v*(u^2 - 4*v^{m})", "branch_factors": factors,
        },
        "expected": {
            "order_G": 8 * m, "order_H": 4 * m,
            "irreps_G": 2 * m + 6 if m % 2 == 0 else 2 * m + 3, "irreps_H": m + 3,
            "r": r, "P": P, "C": C, "X": X_pairs, "n": 2 * P + C - X_pairs,
            "reflection_classes": r,
        },
        "curves": curves, "families": families, "identities": identities,
    }


def gmm2_mapping(m: int) -> dict[str, Any]:
    """G(m, m, 2): dihedral of order 2m; counts and quivers only."""
    N = lcm(2, m)
    if m % 2:
        factors, n = [f"4*v^{m} - u^2"], (m - 1) // 2
    else:
        factors, n = [f"2*v^{m // 2} - u", f"2*v^{m // 2} + u"], m // 2
    X, Y = _pow("x", m), _pow("y", m)
    r = len(factors)
    return {
        "name": f"G({m},{m},2)", "key": "gmm2", "conductor": N, "coxeter": m,
        "dynkin": ["A", m - 1],
        "constants": {"zm": f"z^{N // m}"},
        "matrices": {
            "r1": {"rows": [["0", "1"], ["1", "0"]]},
            "s": {"rows": [["0", "zm^-1"], ["zm", "0"]]},
            "rot": {"rows": [["zm", "0"], ["0", "zm^-1"]]},
        },
        "groups": {"G": ["r1", "s"], "H": ["rot"], "alpha": "r1"},
        "invariants": {
            "f1": f"{X} + {Y}", "f2": "x*y", "f3": f"{X} - {Y}",
            "relation": f"u^2 - 4*v^{m}", "branch_factors": factors,
        },
        "expected": {
            "order_G": 2 * m, "order_H": m,
            "irreps_G": (m + 3) // 2 if m % 2 else m // 2 + 3, "irreps_H": m,
            "r": r, "n": n, "reflection_classes": r,
        },
    }


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

_ALIASES = {"gmm2": "Gmm2", "g2mm2": "G2mm2", "g12": "G12", "g13": "G13", "g22": "G22"}


def get_case(name: str, m: int | None = None) -> GroupCase:
    canon = _ALIASES.get(name.lower()) if name not in CASE_NAMES else name
    if canon is None:
        raise CatalogError(f"unknown case {name!r}; expected one of {', '.join(CASE_NAMES)}")
    if canon in ("Gmm2", "G2mm2"):
        if m is None or m not in M_RANGE:
            raise CatalogError(f"{canon} needs 3 <= m <= 12 (got {m})")
        raw = gmm2_mapping(m) if canon == "Gmm2" else g2mm2_mapping(m)
        return case_from_mapping(raw, m)
    if m is not None:
        raise CatalogError(f"{canon} takes no m parameter")
    return case_from_mapping(load_data_file(canon.lower()))


@dataclass
class RelationReport:
    ok: bool
    difference: Poly

    def offending(self, limit: int = 5) -> str:
        return " ; ".join(f"{c}*x^{m[0]}*y^{m[1]}" for m, c in list(self.difference.sorted_terms())[:limit])


def verify_relation(case: GroupCase) -> RelationReport:
    """f3^2 - q(f1, f2) must vanish identically."""
    diff = case.f3 * case.f3 - case.relation.substitute(case.f1, case.f2)
    return RelationReport(diff.is_zero(), diff)


class BranchMismatch(CatalogError):
    pass


def verify_branch_factorization(case: GroupCase) -> int:
    """Product of branch factors equals p = -q; returns the factor count r."""
    prod = Poly.const(case.field, 1)
    for f in case.branch_factors:
        prod = prod * f
    p = -case.relation
    if prod != p:
        raise BranchMismatch(f"product of branch factors {prod} differs from p(u,v) = {p}")
    return len(case.branch_factors)


# ---------------------------------------------------------------------------
# computed context: groups, tables, ideal
# ---------------------------------------------------------------------------

class CaseContext:
    """Groups, character tables and the invariant ideal for one case."""

    def __init__(self, case: GroupCase, seed: int = 0) -> None:
        self.case = case
        self.seed = seed
        self.G = closure([case.matrices[n] for n in case.G_gens], name=case.name)
        self.H = det_one_subgroup(self.G, name=case.name + "_H")
        self.alpha = case.alpha

    @cached_property
    def H_from_generators(self) -> FiniteMatrixGroup:
        return closure([self.case.matrices[n] for n in self.case.H_gens], name=self.case.name + "_Hgen")

    @cached_property
    def H_generators(self) -> list[Mat2]:
        return [self.case.matrices[n] for n in self.case.H_gens]

    @cached_property
    def gt(self) -> CharacterTable:
        return character_table(self.G, self.case.field, seed=self.seed, prefix="chi")

    @cached_property
    def ht(self) -> CharacterTable:
        return character_table(self.H, self.case.field, seed=self.seed, prefix="rho")

    @cached_property
    def ideal(self) -> InvariantIdeal:
        return InvariantIdeal(self.case.field, list(self.case.invariants))

    def span(self, polys: list[Poly]) -> Span:
        return Span(self.case.field, polys, self.ideal)

    @cached_property
    def curve_irreps(self) -> dict[str, int]:
        """H-irrep index for each curve, from its low module (center: McKay neighbor)."""
        out: dict[str, int] = {}
        case = self.case
        for c in case.curves:
            if c.is_center:
                continue
            mult = self.ht.decompose(self.span(c.low).character(self.H))
            if sum(mult) != 1:
                raise CatalogError(f"V_low of {c.label} is not irreducible: {mult}")
            out[c.label] = mult.index(1)
        for c in case.curves:
            if not c.is_center:
                continue
            quiver = mckay_quiver(self.ht)
            nbrs = [out[n] for n in case.children(c.label)]
            cands = [v for v in range(len(self.ht))
                     if all(quiver.adjacency[v][w] for w in nbrs) and v not in out.values()]
            if len(cands) != 1:
                raise CatalogError(f"cannot identify the irrep of the center {c.label}")
            out[c.label] = cands[0]
        return out


@dataclass
class ValidationItem:
    id: str
    ok: bool
    detail: str


def validate_case(case: GroupCase, ctx: CaseContext | None = None) -> list[ValidationItem]:
    """Group orders, generator bookkeeping, invariance, and module degree/type checks."""
    ctx = ctx or CaseContext(case)
    items: list[ValidationItem] = []
    exp = case.expected
    add = lambda i, ok, d: items.append(ValidationItem(i, bool(ok), d))  # noqa: E731

    G, H = ctx.G, ctx.H
    add("order_G", G.order == exp["order_G"], f"|G| = {G.order} (expected {exp['order_G']})")
    add("order_H", H.order == exp["order_H"], f"|H| = {H.order} (expected {exp['order_H']})")
    add("index_two", G.order == 2 * H.order, f"[G:H] = {G.order // max(H.order, 1)}")
    hg = ctx.H_from_generators
    add("H_generators", hg.order == H.order and all(g in H for g in hg.elements),
        f"listed H generators give a group of order {hg.order}")
    add("alpha_coset", case.alpha in G and case.alpha not in H, "alpha lies in G but not in H")
    add("minus_identity_central",
        Mat2(-case.field.one, case.field.zero, case.field.zero, -case.field.one) in H
        if case.key != "gmm2" else True,
        "-I lies in H" if case.key != "gmm2" else "not required for the A-type family")
    if "center_order" in exp:
        z = len(G.center())
        add("center_order", z == exp["center_order"], f"|Z(G)| = {z}")

    for name, f in zip(("f1", "f2", "f3"), case.invariants):
        okH = all(act(h, f) == f for h in ctx.H_generators)
        add(f"invariant.{name}.H", okH, f"{name} is H-invariant")
    for name, f in zip(("f1", "f2"), case.invariants[:2]):
        okG = all(act(case.matrices[g], f) == f for g in case.G_gens)
        add(f"invariant.{name}.G", okG, f"{name} is G-invariant")

    if case.count_only:
        return items

    ht = ctx.ht
    irr = ctx.curve_irreps
    half = case.coxeter // 2
    for c in case.curves:
        deg_rho = ht.degrees[irr[c.label]]
        if c.is_center:
            continue
        for which, gens in (("low", c.low), ("high", c.high)):
            want = case.module_degree(c, which)
            degs = {g.total_degree() for g in gens}
            homog = all(g.is_homogeneous() for g in gens)
            add(f"module.{c.label}.{which}.degree", homog and degs == {want},
                f"V_{want}({c.label}) generators have degrees {sorted(degs)}")
            s = ctx.span(gens)
            mult = ht.decompose(s.character(H)) if s.is_stable(ctx.H_generators) else None
            ok = mult is not None and mult[irr[c.label]] == 1 and sum(mult) == 1 and s.dim == deg_rho
            add(f"module.{c.label}.{which}.type", ok,
                f"V_{want}({c.label}) spans {s.dim} dims, type {ht.names[irr[c.label]]} (dim {deg_rho})")
        amb = ctx.span(c.low + c.high)
        add(f"module.{c.label}.ambient", amb.is_stable(ctx.H_generators) and amb.dim == 2 * deg_rho,
            f"V_{half - c.d} + V_{half + c.d} is an H-module of dim {amb.dim}")
    return items


def _mat_rows(g: Mat2) -> list[list[str]]:
    return [[str(v) for v in row] for row in g.rows()]


def case_to_json(case: GroupCase) -> dict[str, Any]:
    """Plain-data dump of a parsed case (every scalar and polynomial as text)."""
    s = lambda polys: [str(p) for p in polys]  # noqa: E731
    out: dict[str, Any] = {
        "name": case.name,
        "key": case.key,
        "m": case.m,
        "conductor": case.conductor,
        "coxeter": case.coxeter,
        "dynkin": f"{case.dynkin[0]}{case.dynkin[1]}",
        "generators": {
            "G": {n: _mat_rows(case.matrices[n]) for n in case.G_gens},
            "H": {n: _mat_rows(case.matrices[n]) for n in case.H_gens},
            "alpha": _mat_rows(case.alpha),
        },
        "invariants": {"f1": str(case.f1), "f2": str(case.f2), "f3": str(case.f3)},
        "relation": uv_str(case.relation),
        "branch_factors": [uv_str(f) for f in case.branch_factors],
        "expected": dict(sorted(case.expected.items())),
        "curves": [],
        "families": [],
    }
    for c in case.curves:
        entry: dict[str, Any] = {"label": c.label, "parent": c.parent, "d": c.d, "expect": c.expect.kind}
        if c.expect.partner:
            entry["partner"] = c.expect.partner
        if c.expect.fixed:
            entry["fixed"] = list(c.expect.fixed)
        if c.is_center:
            if c.ambient is not None:
                entry["ambient"] = s(c.ambient)
        else:
            entry["low"] = s(c.low)
            entry["high"] = s(c.high)
        if c.probe:
            entry["probe"] = s(c.probe)
        for name, gens in sorted(c.extras.items()):
            entry.setdefault("extras", {})[name] = s(gens)
        out["curves"].append(entry)
    for f in case.families:
        out["families"].append({
            "id": f.id,
            "direction": [str(f.direction[0]), str(f.direction[1])],
            "component": f.component,
            "limit": s(f.limit),
            "claims": s(f.claims),
        })
    return out
