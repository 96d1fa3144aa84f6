"""Spans of polynomials modulo the invariant ideal, the alpha-action on the
exceptional curves, Moebius extraction, and flat-family limit membership.

Points of the exceptional locus are H-submodules of m/n, where n is the ideal
generated by positive-degree H-invariants.  All span comparisons therefore
happen after reducing modulo n degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .cyclo import CycField, CycNum, Scalar
from .groups import FiniteMatrixGroup
from .linalg import Echelon, Vec, axpy, solve_combination
from .poly import Mat2, Poly, _PowerCache, _dense_mul, act
from .reps import CharacterTable, ClassFunction


def poly_to_vec(f: Poly) -> Vec:
    if f.has_t():
        raise ValueError("spans only hold polynomials in x and y")
    return {(m[0] + m[1], m[1]): c for m, c in f.terms.items()}


def vec_to_poly(field: CycField, v: Vec) -> Poly:
    return Poly(field, {(d - j, j, 0): c for (d, j), c in v.items()})


class InvariantIdeal:
    """The ideal n = (f1, f2, f3), reduced one degree at a time."""

    def __init__(self, field: CycField, generators: Sequence[Poly]) -> None:
        self.field = field
        self.generators = [g for g in generators if not g.is_zero()]
        for g in self.generators:
            if not g.is_homogeneous() or g.has_t():
                raise ValueError("ideal generators must be homogeneous in x, y")
        self.echelon = Echelon(field)
        self._done: set[int] = set()

    def _ensure(self, d: int) -> None:
        if d in self._done:
            return
        self._done.add(d)
        for g in self.generators:
            k = d - g.total_degree()
            if k < 0:
                continue
            for j in range(k + 1):
                self.echelon.add(poly_to_vec(g * Poly.monomial(self.field, k - j, j)))

    def reduce(self, v: Vec) -> Vec:
        for d in {key[0] for key in v}:
            self._ensure(d)
        return self.echelon.reduce(v)[0]

    def normal_form(self, f: Poly) -> Vec:
        return self.reduce(poly_to_vec(f))


class Span:
    """Linear span of polynomials, optionally taken modulo an InvariantIdeal."""

    def __init__(self, field: CycField, basis: Iterable[Poly], ideal: InvariantIdeal | None = None) -> None:
        self.field = field
        self.ideal = ideal
        self.generators = list(basis)
        self.echelon = Echelon(field)
        for g in self.generators:
            self.echelon.add(self._vec(g))

    def _vec(self, f: Poly) -> Vec:
        v = poly_to_vec(f)
        return self.ideal.reduce(v) if self.ideal else v

    @property
    def dim(self) -> int:
        return self.echelon.rank

    @property
    def basis(self) -> list[Poly]:
        """Reduced echelon representatives."""
        return [vec_to_poly(self.field, self.echelon.rows[p]) for p in self.echelon.pivots()]

    def contains(self, f: Poly) -> bool:
        return self.echelon.contains(self._vec(f))

    def issubset(self, other: Span) -> bool:
        return all(other.echelon.contains(r) for r in self.echelon.rows.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Span):
            return NotImplemented
        return self.dim == other.dim and self.issubset(other)

    def __hash__(self) -> int:
        return hash(self.dim)

    def image(self, g: Mat2) -> Span:
        return Span(self.field, [act(g, b) for b in self.basis], self.ideal)

    def is_stable(self, gens: Iterable[Mat2]) -> bool:
        basis = self.basis
        return all(self.contains(act(g, b)) for g in gens for b in basis)

    def trace(self, g: Mat2) -> CycNum:
        """Trace of g on the span (which must be g-stable)."""
        acc = self.field.zero
        for piv in self.echelon.pivots():
            img = self._vec(act(g, vec_to_poly(self.field, self.echelon.rows[piv])))
            coords = self.echelon.coordinates(img)
            c = coords.get(piv)
            if c is not None:
                acc = acc + c
        return acc

    def character(self, H: FiniteMatrixGroup) -> ClassFunction:
        reps = H.conjugacy_classes().representatives
        return ClassFunction(tuple(self.trace(H.elements[r]) for r in reps))

    def intersection(self, other: Span) -> Span:
        ech = Echelon(self.field, track=True)
        own = self.basis
        for k, b in enumerate(own):
            ech.add(self._vec(b), label=("a", k))
        out: list[Poly] = []
        for k, b in enumerate(other.basis):
            r, combo = ech.reduce(other._vec(b))
            if not r:
                v: Vec = {}
                for (side, idx), c in combo.items():
                    if side == "a":
                        axpy(v, c, self._vec(own[idx]))
                out.append(vec_to_poly(self.field, v))
            else:
                ech.add(other._vec(b), label=("b", k))
        return Span(self.field, out, self.ideal)

    def __add__(self, other: Span) -> Span:
        return Span(self.field, self.basis + other.basis, self.ideal)

    def __repr__(self) -> str:
        return f"Span(dim={self.dim}, [{', '.join(str(b) for b in self.basis)}])"


# ---------------------------------------------------------------------------
# public single-purpose helpers
# ---------------------------------------------------------------------------

def span_contains(s: Span, f: Poly) -> bool:
    return s.contains(f)


def is_H_submodule(s: Span, H_generators: Iterable[Mat2]) -> bool:
    return s.is_stable(H_generators)


def span_rep_type(s: Span, H: FiniteMatrixGroup, table: CharacterTable) -> list[int]:
    """Multiplicity of every irreducible of ``table`` in the span."""
    if not s.is_stable(H.generator_matrices()):
        raise ValueError("span is not an H-submodule")
    return table.decompose(s.character(H))


def alpha_image(s: Span, alpha: Mat2) -> Span:
    return s.image(alpha)


def isotypic_component(
    polys: Sequence[Poly], H: FiniteMatrixGroup, table: CharacterTable, k: int,
    ideal: InvariantIdeal | None = None,
) -> Span:
    """Image of span(polys) under the projector onto the k-th isotypic part."""
    fld = table.field
    cc = H.conjugacy_classes()
    chi = table.irreducibles[k]
    weight = [chi.values[c].conj() for c in cc.class_of]
    scale = Fraction(chi.degree(), H.order)
    acc: list[dict] = [dict() for _ in polys]
    for idx, g in enumerate(H.elements):
        w = weight[idx]
        if w.is_zero():
            continue
        lx, ly = _PowerCache(g.a, g.c), _PowerCache(g.b, g.d)
        for n, f in enumerate(polys):
            for (i, j, e), coef in f.terms.items():
                if e:
                    raise ValueError("projection of a polynomial involving t")
                prod = _dense_mul(lx.get(i), ly.get(j), fld.zero)
                deg = i + j
                cw = coef * w
                for s, v in enumerate(prod):
                    if not v.is_zero():
                        key = (deg, s)
                        old = acc[n].get(key)
                        val = cw * v
                        acc[n][key] = val if old is None else old + val
    out = []
    for a in acc:
        out.append(vec_to_poly(fld, {key: v * scale for key, v in a.items() if not v.is_zero()}))
    return Span(fld, out, ideal)


def degree_monomials(field: CycField, d: int) -> list[Poly]:
    return [Poly.monomial(field, d - j, j) for j in range(d + 1)]


# ---------------------------------------------------------------------------
# curve classification
# ---------------------------------------------------------------------------

@dataclass
class CurvePoint:
    name: str
    span: Span
    role: str  # "low", "high", "intersection", "probe", "extra", "pencil"
    meets: str | None = None  # label of the other curve for intersection points


@dataclass
class CurveModel:
    label: str
    irrep: int
    ambient: Span
    points: list[CurvePoint]
    center: bool = False


@dataclass
class CurveActionResult:
    kind: str  # "exchanged" | "pointwise" | "involution"
    partner: str | None = None
    fixed: list[CurvePoint] = field(default_factory=list)
    moved: list[CurvePoint] = field(default_factory=list)

    def describe(self) -> str:
        if self.kind == "exchanged":
            return f"exchanged-with E({self.partner})"
        if self.kind == "pointwise":
            return "pointwise-fixed"
        return "involution, fixed points " + ", ".join(p.name for p in self.fixed)


class CurvePointError(ValueError):
    pass


def validate_point(curve: CurveModel, pt: CurvePoint, H: FiniteMatrixGroup, table: CharacterTable) -> None:
    """The conditions for a submodule to be a point of E(rho)."""
    s = pt.span
    if not s.issubset(curve.ambient):
        raise CurvePointError(f"{pt.name} is not inside the ambient module of E({curve.label})")
    if not s.is_stable(H.generator_matrices()):
        raise CurvePointError(f"{pt.name} is not an H-submodule")
    mult = table.decompose(s.character(H))
    want = [0] * len(table)
    want[curve.irrep] = 1
    if mult != want:
        raise CurvePointError(f"{pt.name} is not irreducible of the curve's type")


def classify_curve(
    curve: CurveModel, alpha: Mat2, others: Sequence[CurveModel],
    H: FiniteMatrixGroup | None = None, table: CharacterTable | None = None,
) -> CurveActionResult:
    """Exchange, pointwise fixing, or a nontrivial involution of E(rho)."""
    image = curve.ambient.image(alpha)
    if image != curve.ambient:
        for o in others:
            if o.label != curve.label and o.ambient == image:
                return CurveActionResult("exchanged", partner=o.label)
        raise CurvePointError(f"alpha moves E({curve.label}) to no catalogued curve")
    if H is not None and table is not None:
        for p in curve.points:
            validate_point(curve, p, H, table)
    distinct: list[CurvePoint] = []
    for p in curve.points:
        if all(p.span != q.span for q in distinct):
            distinct.append(p)
    fixed = [p for p in distinct if p.span.image(alpha) == p.span]
    moved = [p for p in distinct if p not in fixed]
    if len(fixed) >= 3:
        if moved:
            raise CurvePointError(f"E({curve.label}): three fixed points yet a moved point")
        return CurveActionResult("pointwise", fixed=fixed)
    if not moved:
        raise CurvePointError(f"E({curve.label}): fewer than three catalog points, cannot decide")
    return CurveActionResult("involution", fixed=fixed, moved=moved)


# ---------------------------------------------------------------------------
# Moebius extraction
# ---------------------------------------------------------------------------

@dataclass
class MobiusResult:
    matrix: tuple[tuple[CycNum, CycNum], tuple[CycNum, CycNum]]
    fixed_points: list[tuple[CycNum, CycNum]]
    scalar: bool


def pencil_point(A: Sequence[Poly], B: Sequence[Poly], a: Scalar, b: Scalar, ideal: InvariantIdeal | None) -> Span:
    fld = A[0].field
    return Span(fld, [p * a + q * b for p, q in zip(A, B)], ideal)


def _locate(A: Sequence[Poly], B: Sequence[Poly], target: Span, ideal) -> tuple[CycNum, CycNum]:
    """The [a:b] with point(a,b) == target."""
    fld = A[0].field
    line = Span(fld, [A[0], B[0]], ideal)
    meet = line.intersection(target)
    if meet.dim != 1:
        raise ValueError("image is not a point of the pencil")
    v = ideal.normal_form(meet.generators[0]) if ideal else poly_to_vec(meet.generators[0])
    va = ideal.normal_form(A[0]) if ideal else poly_to_vec(A[0])
    vb = ideal.normal_form(B[0]) if ideal else poly_to_vec(B[0])
    lam = solve_combination(fld, [va, vb], v)
    if lam is None:
        raise ValueError("pencil coordinates not found")
    a, b = lam
    if pencil_point(A, B, a, b, ideal) != target:
        raise ValueError("catalog parametrization is inconsistent with the alpha-image")
    return a, b


def _proportional(u: tuple[CycNum, CycNum], v: tuple[CycNum, CycNum]) -> bool:
    return (u[0] * v[1] - u[1] * v[0]).is_zero()


def _sqrt(u: CycNum) -> CycNum:
    fld = u.field
    if u.is_zero():
        return u
    n = fld.conductor
    radicals = [(1, fld.one)]
    if n % 8 == 0:
        radicals.append((2, fld.sqrt2))
    if n % 5 == 0:
        radicals.append((5, fld.sqrt5))
    for k in range(n):
        w = u * fld.root_of_unity(-2 * k)
        if not w.is_rational():
            continue
        q = w.to_fraction()
        for rad, rootrad in radicals:
            r = q / rad
            if r < 0:
                continue
            num, den = _isqrt_exact(r.numerator), _isqrt_exact(r.denominator)
            if num is not None and den is not None:
                s = fld.root_of_unity(k) * rootrad * Fraction(num, den)
                if s * s == u:
                    return s
    raise ValueError(f"no square root of {u} found in Q(zeta_{n})")


def _isqrt_exact(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


def mobius_matrix(A: Sequence[Poly], B: Sequence[Poly], alpha: Mat2, ideal: InvariantIdeal | None) -> MobiusResult:
    """M with alpha(point(a,b)) = point(M (a,b)), and its fixed points."""
    fld = A[0].field
    one, zero = fld.one, fld.zero

    def image_coords(a, b):
        return _locate(A, B, pencil_point(A, B, a, b, ideal).image(alpha), ideal)

    v1, v2, v3 = image_coords(one, zero), image_coords(zero, one), image_coords(one, one)
    # columns lam1*v1, lam2*v2 with lam1*v1 + lam2*v2 proportional to v3
    det = v1[0] * v2[1] - v1[1] * v2[0]
    if det.is_zero():
        raise ValueError("degenerate Moebius data")
    lam1 = (v3[0] * v2[1] - v3[1] * v2[0]) / det
    lam2 = (v1[0] * v3[1] - v1[1] * v3[0]) / det
    M = ((lam1 * v1[0], lam2 * v2[0]), (lam1 * v1[1], lam2 * v2[1]))
    # verify at a fourth parameter
    a4, b4 = fld(1), fld(2)
    v4 = image_coords(a4, b4)
    pred = (M[0][0] * a4 + M[0][1] * b4, M[1][0] * a4 + M[1][1] * b4)
    if not _proportional(v4, pred):
        raise ValueError("no consistent Moebius map for this pencil")
    tr = M[0][0] + M[1][1]
    dt = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    scalar = M[0][1].is_zero() and M[1][0].is_zero() and M[0][0] == M[1][1]
    if scalar:
        return MobiusResult(M, [], True)
    root = _sqrt(tr * tr - 4 * dt)
    fixed: list[tuple[CycNum, CycNum]] = []
    for ev in ((tr + root) / 2, (tr - root) / 2):
        if not M[0][1].is_zero():
            vec = (M[0][1], ev - M[0][0])
        else:
            vec = (ev - M[1][1], M[1][0])
        if vec[0].is_zero() and vec[1].is_zero():
            continue
        if not vec[0].is_zero():
            vec = (one, vec[1] / vec[0])
        else:
            vec = (zero, one)
        if all(not _proportional(vec, f) for f in fixed):
            fixed.append(vec)
    return MobiusResult(M, fixed, False)


# ---------------------------------------------------------------------------
# flat-family limits
# ---------------------------------------------------------------------------

def orbit_scalars(H: FiniteMatrixGroup, direction: tuple[Scalar, Scalar]) -> list[tuple[CycNum, CycNum]]:
    """Orbit of the row vector (c, d) under H, in group order; rejects non-free orbits."""
    c, d = direction
    pts = [g.row_apply(c, d) for g in H.elements]
    if pts[0][0].is_zero() and pts[0][1].is_zero():
        raise ValueError("direction must be nonzero")
    if len(set(pts)) != len(pts):
        raise ValueError("direction is not a free orbit")
    return pts


@dataclass
class FamilyProblem:
    """Linear system for gen + (multiple of t) vanishing on the orbit of (tc, td)."""

    field: CycField
    points: list[tuple[CycNum, CycNum]]
    paired: bool
    _powers: dict = field(default_factory=dict)

    @classmethod
    def build(cls, H: FiniteMatrixGroup, direction: tuple[Scalar, Scalar]) -> FamilyProblem:
        pts = orbit_scalars(H, direction)
        fld = pts[0][0].field
        minus = Mat2(-fld.one, fld.zero, fld.zero, -fld.one)
        paired = minus in H
        if paired:
            chosen: list[tuple[CycNum, CycNum]] = []
            seen: set = set()
            for p in pts:
                if p in seen:
                    continue
                chosen.append(p)
                seen.add(p)
                seen.add((-p[0], -p[1]))
            pts = chosen
        return cls(fld, pts, paired)

    def _pow(self, i: int, which: int, k: int) -> CycNum:
        key = (i, which, k)
        if key not in self._powers:
            base = self.points[i][which]
            self._powers[key] = base ** k if k < 2 else self._pow(i, which, k - 1) * base
        return self._powers[key]

    def correction_monomials(self, degree: int) -> list[tuple[int, int]]:
        out = []
        for k in range(degree):  # x,y-degree of the correction term, t-degree = degree - k >= 1
            if self.paired and (degree - k) % 2:
                continue
            out.extend((k - j, j) for j in range(k + 1))
        return out

    def solve(self, gen: Poly) -> Poly | None:
        """Correction h (a multiple of t) with gen + h vanishing on the orbit, or None."""
        if not gen.is_homogeneous() or gen.has_t():
            raise ValueError("generator must be homogeneous in x, y")
        if gen.is_zero():
            return Poly(self.field)
        D = gen.total_degree()
        unknowns = self.correction_monomials(D)
        cols = []
        for (p, q) in unknowns:
            cols.append({i: self._pow(i, 0, p) * self._pow(i, 1, q) for i in range(len(self.points))})
        cols = [{k: v for k, v in c.items() if not v.is_zero()} for c in cols]
        target = {}
        for i, (c, d) in enumerate(self.points):
            val = gen.evaluate(c, d)
            if not val.is_zero():
                target[i] = -val
        if not target:
            return Poly(self.field)
        lam = solve_combination(self.field, cols, target)
        if lam is None:
            return None
        h = Poly(self.field, {(p, q, D - p - q): l for (p, q), l in zip(unknowns, lam)})
        return h


def family_limit_contains(problem: FamilyProblem, gen: Poly) -> bool:
    """Whether gen lies in the t -> 0 limit of the orbit ideals."""
    return problem.solve(gen) is not None


def vanishes_on_orbit(problem: FamilyProblem, f: Poly, full: list[tuple[CycNum, CycNum]] | None = None) -> bool:
    """Check f(t c_i, t d_i, t) = 0 at t = 1 on every orbit point."""
    pts = full if full is not None else problem.points
    return all(f.evaluate(c, d, 1).is_zero() for c, d in pts)


# ---------------------------------------------------------------------------
# whole-case analysis
# ---------------------------------------------------------------------------
# The functions below take a catalog GroupCase and CaseContext.  They are
# duck-typed so that this module does not import the catalog.

IDENTITY_SAMPLES = ((2, 3), (5, -7), (-11, 13))


def slug(label: str) -> str:
    """Check-id form of a curve label: rho_3'' -> rho3pp."""
    return label.replace("_", "").replace("'", "p")


@dataclass
class Check:
    id: str
    ok: bool
    detail: str
    anchor: str = ""


def _proj_equal(u: Sequence[CycNum], v: Sequence[CycNum]) -> bool:
    """u and v are proportional nonzero vectors."""
    n = len(u)
    if all(a.is_zero() for a in u) or all(b.is_zero() for b in v):
        return False
    return all((u[i] * v[j] - u[j] * v[i]).is_zero() for i in range(n) for j in range(i + 1, n))


def uv_str(p: Poly) -> str:
    """Print a bivariate relation polynomial in u, v (stored in x, y)."""
    return str(p).replace("x", "u").replace("y", "v")


def _fmt_param(p: tuple[CycNum, CycNum]) -> str:
    return f"[{p[0]}:{p[1]}]"


def center_ambient(case, ctx) -> Span:
    """rho-isotypic part of degree h/2 modulo n, rho the center's irreducible."""
    k = ctx.curve_irreps[case.center]
    return isotypic_component(degree_monomials(case.field, case.coxeter // 2), ctx.H, ctx.ht, k, ctx.ideal)


def center_meet(case, ctx, ambient: Span, neighbor: str) -> Span:
    """Point of the center curve where it meets E(neighbor)."""
    x, y = Poly.x(case.field), Poly.y(case.field)
    low = case.curve(neighbor).low
    raised = ctx.span([x * g for g in low] + [y * g for g in low])
    return ambient.intersection(raised)


@dataclass
class CurveOutcome:
    label: str
    model: CurveModel
    result: CurveActionResult
    expected_kind: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def line(self) -> str:
        return f"E({self.label}): {self.result.describe()}"


@dataclass
class FamilyOutcome:
    id: str
    checks: list[Check]
    matched_point: tuple[str, str] | None = None


@dataclass
class FixedLocusReport:
    case_label: str
    curves: list[CurveOutcome]
    mobius: dict[str, MobiusResult]
    families: list[FamilyOutcome]
    checks: list[Check]
    isolated: list[tuple[str, str, str | None]]  # (curve, point, family id)

    def outcome(self, label: str) -> CurveOutcome:
        for c in self.curves:
            if c.label == label:
                return c
        raise KeyError(label)

    @property
    def P(self) -> int:
        return sum(1 for c in self.curves if c.result.kind == "pointwise")

    @property
    def C(self) -> int:
        return len(self.curves)

    @property
    def X(self) -> int:
        pairs = {frozenset((c.label, c.result.partner)) for c in self.curves if c.result.kind == "exchanged"}
        return len(pairs)

    def all_checks(self) -> list[Check]:
        out = list(self.checks)
        for c in self.curves:
            out.extend(c.checks)
        for f in self.families:
            out.extend(f.checks)
        return out


def build_curve_models(case, ctx) -> tuple[dict[str, CurveModel], list[Check]]:
    models: dict[str, CurveModel] = {}
    checks: list[Check] = []
    irr = ctx.curve_irreps
    parents = {c.label: c.parent for c in case.curves}
    for spec in case.curves:
        pts: list[CurvePoint] = []
        if spec.is_center:
            ambient = center_ambient(case, ctx)
            if spec.ambient is not None:
                listed = ctx.span(spec.ambient)
                checks.append(Check(f"curve.{case.label}.{slug(spec.label)}.ambient", listed == ambient,
                                    f"listed V_{case.coxeter // 2} module equals the computed isotypic part "
                                    f"(dim {ambient.dim})"))
            for nb in case.children(spec.label):
                meet = center_meet(case, ctx, ambient, nb)
                pts.append(CurvePoint(f"meet:{nb}", meet, "intersection", meets=nb))
                if nb in spec.meets:
                    listed = ctx.span(spec.meets[nb])
                    checks.append(Check(f"curve.{case.label}.{slug(spec.label)}.meet.{slug(nb)}", listed == meet,
                                        f"listed intersection with E({nb}) equals the computed one"))
        else:
            ambient = ctx.span(spec.low + spec.high)
            child = [c for c, p in parents.items() if p == spec.label]
            pts.append(CurvePoint("low", ctx.span(spec.low), "low", meets=child[0] if child else None))
            pts.append(CurvePoint("high", ctx.span(spec.high), "high", meets=spec.parent))
            if spec.probe:
                pts.append(CurvePoint("probe", ctx.span(spec.probe), "probe"))
        for name, gens in spec.extras.items():
            pts.append(CurvePoint(name, ctx.span(gens), "extra"))
        if spec.pencil is not None:
            for a, b in spec.pencil.points:
                pts.append(CurvePoint(f"pencil{_fmt_param((a, b))}",
                                      pencil_point(spec.pencil.A, spec.pencil.B, a, b, ctx.ideal), "pencil"))
        models[spec.label] = CurveModel(spec.label, irr[spec.label], ambient, pts, spec.is_center)
    return models, checks


def _point_generators(case, spec, pt: CurvePoint) -> list[Poly]:
    if pt.role == "low":
        return spec.low
    if pt.role == "high":
        return spec.high
    if pt.role == "probe":
        return spec.probe or []
    if pt.role == "extra":
        return spec.extras[pt.name]
    if pt.role == "intersection" and pt.meets in spec.meets:
        return spec.meets[pt.meets]
    return pt.span.basis


def point_witness(case, label: str, pt: CurvePoint) -> str:
    gens = _point_generators(case, case.curve(label), pt)
    return f"{pt.name} = (" + ", ".join(str(g) for g in gens) + ")"


def classify_all(case, ctx, models: dict[str, CurveModel]) -> list[CurveOutcome]:
    out = []
    all_models = list(models.values())
    for spec in case.curves:
        model = models[spec.label]
        cid = f"curve.{case.label}.{slug(spec.label)}"
        try:
            res = classify_curve(model, ctx.alpha, all_models, ctx.H, ctx.ht)
        except CurvePointError as exc:
            res = CurveActionResult("error")
            oc = CurveOutcome(spec.label, model, res, spec.expect.kind,
                              [Check(cid, False, f"E({spec.label}): {exc}")])
            out.append(oc)
            continue
        exp = spec.expect
        ok = res.kind == exp.kind
        detail = f"E({spec.label}): {res.describe()}"
        if ok and exp.kind == "exchanged":
            ok = res.partner == exp.partner
        if ok and exp.kind == "involution":
            got = {p.name for p in res.fixed}
            ok = got == set(exp.fixed) and 1 <= len(got) <= 2
            detail += f" (expected {', '.join(exp.fixed)})"
        if not ok and exp.kind != res.kind:
            detail += f" (expected {exp.kind})"
        checks = [Check(cid, ok, detail)]
        twice = model.ambient.image(ctx.alpha).image(ctx.alpha)
        checks.append(Check(cid + ".alpha_squared", twice == model.ambient,
                            "alpha^2 preserves the ambient module"))
        out.append(CurveOutcome(spec.label, model, res, exp.kind, checks))
    # exchange symmetry
    by_label = {o.label: o for o in out}
    for o in out:
        if o.result.kind == "exchanged":
            back = by_label.get(o.result.partner)
            sym = back is not None and back.result.kind == "exchanged" and back.result.partner == o.label
            o.checks.append(Check(f"curve.{case.label}.{slug(o.label)}.symmetric", sym,
                                  f"E({o.result.partner}) is exchanged back with E({o.label})"))
    return out


def mobius_checks(case, ctx, models: dict[str, CurveModel]) -> tuple[dict[str, MobiusResult], list[Check]]:
    results: dict[str, MobiusResult] = {}
    checks: list[Check] = []
    for spec in case.curves:
        pen = spec.pencil
        if pen is None:
            continue
        cid = f"mobius.{case.label}.{slug(spec.label)}"
        named = {p.name: p.span for p in models[spec.label].points}
        for param, name in pen.aliases:
            target = named.get(name)
            ok = target is not None and pencil_point(pen.A, pen.B, param[0], param[1], ctx.ideal) == target
            checks.append(Check(f"{cid}.alias.{slug(name)}", ok, f"pencil point {_fmt_param(param)} is {name}"))
        try:
            mob = mobius_matrix(pen.A, pen.B, ctx.alpha, ctx.ideal)
        except ValueError as exc:
            checks.append(Check(cid, False, str(exc)))
            continue
        results[spec.label] = mob
        (a, b), (c, d) = mob.matrix
        desc = f"[a:b] -> [{a}*a + {b}*b : {c}*a + {d}*b]"
        if pen.scalar is not None:
            checks.append(Check(cid + ".scalar", mob.scalar == pen.scalar,
                                f"map is {'scalar' if mob.scalar else 'not scalar'}: {desc}"))
        if pen.matrix is not None:
            (ea, eb), (ec, ed) = pen.matrix
            checks.append(Check(cid + ".matrix", _proj_equal([a, b, c, d], [ea, eb, ec, ed]), desc))
        if pen.fixed is not None:
            got, want = mob.fixed_points, pen.fixed
            ok = len(got) == len(want) and all(any(_proj_equal(g, w) for g in got) for w in want)
            checks.append(Check(cid + ".fixed", ok,
                                "fixed points " + ", ".join(_fmt_param(p) for p in got)))
    return results, checks


def _instantiate(case, text: str, a: int, b: int) -> Poly:
    return case.parse(text, {"a": a, "b": b})


def verify_structural_identities(case, ctx=None) -> list[Check]:
    """Every identity block of the case data, checked exactly."""
    checks: list[Check] = []
    ideal = ctx.ideal if ctx is not None else InvariantIdeal(case.field, list(case.invariants))
    for ident in case.identities:
        cid = f"identity.{case.label}.{ident.id}"
        g = case.matrices[ident.g]
        if ident.kind == "poly":
            ok = True
            printed_ok = True
            for a, b in IDENTITY_SAMPLES:
                lhs = act(g, _instantiate(case, ident.f, a, b))
                ok = ok and lhs == _instantiate(case, ident.image, a, b)
                if ident.printed_image is not None:
                    printed_ok = printed_ok and lhs == _instantiate(case, ident.printed_image, a, b)
            detail = f"{ident.g}({ident.f}) = {ident.image}"
            if ident.printed_image is not None:
                detail += "; printed form " + ("agrees" if printed_ok else f"{ident.printed_image} does not hold")
            checks.append(Check(cid, ok, detail))
        elif ident.kind == "span":
            img = Span(case.field, [act(g, f) for f in ident.module], ideal)
            want = Span(case.field, ident.image_module, ideal)
            same = img == want
            ok = same if ident.equal else not same
            rel = "equals" if ident.equal else "differs from"
            checks.append(Check(cid, ok, f"{ident.g}-image of the module {rel} the listed span"))
        elif ident.kind == "matrix":
            h = case.matrices[ident.h]
            prod = g * h.inv()
            checks.append(Check(cid, prod == ident.product, f"{ident.g} * {ident.h}^-1 = {ident.product}"))
    f1, f2, f3 = case.invariants
    alpha = case.alpha
    checks.append(Check(f"identity.{case.label}.alpha_invariants",
                        act(alpha, f1) == f1 and act(alpha, f2) == f2 and act(alpha, f3) == -f3,
                        "alpha fixes f1, f2 and negates f3"))
    return checks


def run_family(case, ctx, fam, models: dict[str, CurveModel],
               outcomes: dict[str, CurveOutcome]) -> FamilyOutcome:
    fid = f"family.{case.label}.{fam.id}"
    checks: list[Check] = []
    problem = FamilyProblem.build(ctx.H, fam.direction)
    full = orbit_scalars(ctx.H, fam.direction)
    c, d = fam.direction
    checks.append(Check(f"{fid}.orbit", len(full) == ctx.H.order, f"orbit of {_fmt_param(fam.direction)} has "
                                                                   f"{len(full)} points"))
    for k, gen in enumerate(fam.limit):
        ok = family_limit_contains(problem, gen)
        checks.append(Check(f"{fid}.limit{k}", ok, f"{gen} lies in the limit ideal"))
    for k, claim in enumerate(fam.claims):
        if claim.has_t():
            ok = vanishes_on_orbit(problem, claim, full)
        else:
            ok = family_limit_contains(problem, claim)
        checks.append(Check(f"{fid}.claim{k}", ok, f"{claim} lies in the family ideal"))
    vals = {name: f.evaluate(c, d) for name, f in zip(("f1", "f2", "f3"), case.invariants)}
    for name, want in fam.values.items():
        checks.append(Check(f"{fid}.value.{name}", vals[name] == want, f"{name}{_fmt_param(fam.direction)} = {vals[name]}"))
    factor = case.branch_factors[fam.component]
    on_branch = factor.evaluate(vals["f1"], vals["f2"]).is_zero()
    checks.append(Check(f"{fid}.branch", on_branch and vals["f3"].is_zero(),
                        f"image point lies on the branch component {uv_str(factor)}"))
    limit = ctx.span(fam.limit)
    matched: tuple[str, str] | None = None
    if fam.point is not None:
        label, name = fam.point
        pt = next((p for p in models[label].points if p.name == name), None)
        ok = pt is not None and pt.span == limit
        checks.append(Check(f"{fid}.point", ok, f"limit module is the point {name} of E({label})"))
        matched = (label, name) if ok else None
    else:
        for o in outcomes.values():
            for p in o.result.fixed:
                if p.span == limit:
                    matched = (o.label, p.name)
                    break
            if matched:
                break
        checks.append(Check(f"{fid}.point", matched is not None,
                            f"limit module found at {matched[1]} of E({matched[0]})" if matched
                            else "limit module is no fixed catalog point"))
    return FamilyOutcome(fam.id, checks, matched)


def isolated_points(outcomes: Iterable[CurveOutcome]) -> list[tuple[str, CurvePoint]]:
    """Fixed points on involution curves that are not on a pointwise-fixed curve."""
    outs = list(outcomes)
    pointwise = {o.label for o in outs if o.result.kind == "pointwise"}
    found = []
    for o in outs:
        if o.result.kind != "involution":
            continue
        for p in o.result.fixed:
            if p.meets is None or p.meets not in pointwise:
                found.append((o.label, p))
    return found


def isolated_point_resolution(case, outcomes: Sequence[CurveOutcome],
                              families: Sequence[FamilyOutcome]) -> tuple[list[tuple[str, str, str | None]], Check]:
    iso = isolated_points(outcomes)
    good = {f.matched_point: f.id for f in families if f.matched_point and all(c.ok for c in f.checks)}
    rows = []
    for label, p in iso:
        fam = good.get((label, p.name))
        if fam is None:
            # an isolated point may appear under another name with the same span
            for (fl, fn), fid in good.items():
                other = next((q for o in outcomes if o.label == fl for q in o.result.fixed if q.name == fn), None)
                if other is not None and other.span == p.span:
                    fam = fid
        rows.append((label, p.name, fam))
    unmatched = [f"{l}:{n}" for l, n, f in rows if f is None]
    ok = not unmatched and len(rows) == case.expected.get("r", len(rows))
    detail = f"{len(rows)} isolated fixed points, all matched to families" if ok else \
        f"{len(rows)} isolated fixed points; unmatched: {', '.join(unmatched) or 'none'}"
    return rows, Check(f"isolated.{case.label}", ok, detail)


def analyze_fixed_locus(case, ctx) -> FixedLocusReport:
    """Classify the alpha-action on every exceptional curve and resolve isolated points."""
    models, checks = build_curve_models(case, ctx)
    outcomes = classify_all(case, ctx, models)
    mob, mchecks = mobius_checks(case, ctx, models)
    checks.extend(mchecks)
    checks.extend(verify_structural_identities(case, ctx))
    by_label = {o.label: o for o in outcomes}
    fams = [run_family(case, ctx, f, models, by_label) for f in case.families]
    rows, iso_check = isolated_point_resolution(case, outcomes, fams)
    checks.append(iso_check)
    return FixedLocusReport(case.label, outcomes, mob, fams, checks, rows)
