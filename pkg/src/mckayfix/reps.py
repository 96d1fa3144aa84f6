"""Character tables (Dixon-Schneider modulo p), induction, and McKay quivers."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm
from typing import Sequence

import networkx as nx

from .cyclo import CycField, CycNum, descend, get_field
from .groups import FiniteMatrixGroup


@dataclass(frozen=True)
class ClassFunction:
    values: tuple[CycNum, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> CycNum:
        return self.values[i]

    def __mul__(self, other: ClassFunction) -> ClassFunction:
        return ClassFunction(tuple(a * b for a, b in zip(self.values, other.values)))

    def __add__(self, other: ClassFunction) -> ClassFunction:
        return ClassFunction(tuple(a + b for a, b in zip(self.values, other.values)))

    def conj(self) -> ClassFunction:
        return ClassFunction(tuple(v.conj() for v in self.values))

    def is_real(self) -> bool:
        return all(v == v.conj() for v in self.values)

    def degree(self) -> int:
        return self.values[0].to_int()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p = 1 mod exponent with p > 2 sqrt(order)."""
    p = exponent + 1
    while not (_is_prime(p) and p * p > 4 * order):
        p += exponent
    return p


def _primitive_root(p: int) -> int:
    phi = p - 1
    factors = {q for q in range(2, phi + 1) if phi % q == 0 and _is_prime(q)}
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in factors):
            return g
    raise ArithmeticError("no primitive root")


def _nullspace_mod(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {v : rows * v = 0} over F_p."""
    m = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(m)) if m[k][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [v * inv % p for v in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] % p:
                f = m[k][c]
                m[k] = [(a - f * b) % p for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for k, pc in enumerate(pivots):
            v[pc] = -m[k][fc] % p
        basis.append(v)
    return basis


def _coords_mod(basis: list[list[int]], v: list[int], p: int) -> list[int]:
    """Coordinates of v in the given (independent) basis over F_p."""
    n = len(basis[0])
    rows = [[basis[j][i] for j in range(len(basis))] + [v[i]] for i in range(n)]
    k = len(basis)
    m = rows
    r = 0
    where = [-1] * k
    for c in range(k):
        piv = next((t for t in range(r, n) if m[t][c] % p), None)
        if piv is None:
            raise ArithmeticError("dependent basis")
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [a * inv % p for a in m[r]]
        for t in range(n):
            if t != r and m[t][c] % p:
                f = m[t][c]
                m[t] = [(a - f * b) % p for a, b in zip(m[t], m[r])]
        where[c] = r
        r += 1
    return [m[where[c]][k] for c in range(k)]


@dataclass
class CharacterTable:
    group: FiniteMatrixGroup
    field: CycField
    irreducibles: list[ClassFunction]
    class_sizes: list[int]
    prefix: str = "chi"

    @property
    def degrees(self) -> list[int]:
        return [c.degree() for c in self.irreducibles]

    @property
    def names(self) -> list[str]:
        return [f"{self.prefix}{k}" for k in range(len(self.irreducibles))]

    def __len__(self) -> int:
        return len(self.irreducibles)

    def inner(self, a: ClassFunction, b: ClassFunction) -> CycNum:
        acc = self.field.zero
        for s, u, v in zip(self.class_sizes, a.values, b.values):
            acc = acc + u * v.conj() * s
        return acc / self.group.order

    def decompose(self, chi: ClassFunction) -> list[int]:
        """Multiplicities of each irreducible; raises on non-characters."""
        out = []
        for irr in self.irreducibles:
            ip = self.inner(chi, irr)
            out.append(ip.to_int())
        return out

    def identify(self, chi: ClassFunction) -> int:
        """Index of an irreducible character."""
        for k, irr in enumerate(self.irreducibles):
            if irr == chi:
                return k
        raise ValueError("not an irreducible character of this table")

    def natural_character(self) -> ClassFunction:
        G = self.group
        reps = G.conjugacy_classes().representatives
        return ClassFunction(tuple(G.elements[r].trace() for r in reps))

    def trivial_index(self) -> int:
        return self.identify(ClassFunction(tuple(self.field.one for _ in self.class_sizes)))

    def inverse_class(self) -> list[int]:
        G = self.group
        cc = G.conjugacy_classes()
        return [cc.class_of[G.inverse_index[r]] for r in cc.representatives]

    def orthogonality_holds(self) -> bool:
        n = len(self.irreducibles)
        for i in range(n):
            for j in range(i, n):
                ip = self.inner(self.irreducibles[i], self.irreducibles[j])
                if ip != (1 if i == j else 0):
                    return False
        # columns: sum_chi chi(g) conj(chi(h)) = |C_G(g)| delta
        order = self.group.order
        for a in range(len(self.class_sizes)):
            for b in range(len(self.class_sizes)):
                s = self.field.zero
                for irr in self.irreducibles:
                    s = s + irr.values[a] * irr.values[b].conj()
                want = order // self.class_sizes[a] if a == b else 0
                if s != want:
                    return False
        return True


def character_table(
    G: FiniteMatrixGroup, field: CycField | None = None, seed: int = 0, prefix: str = "chi"
) -> CharacterTable:
    """Exact irreducible characters of G with values in ``field``.

    Central characters are found as common eigenvectors of the class
    multiplication matrices over F_p; the values are lifted to sums of
    e-th roots of unity and then rewritten inside ``field``.
    """
    field = field or G.elements[0].field
    cc = G.conjugacy_classes()
    r = len(cc)
    sizes = cc.sizes()
    order = G.order
    e = G.exponent
    p = dixon_prime(order, e)

    # a[j][k][l] = #{x in C_j : x^-1 z_l in C_k}
    A = [[[0] * r for _ in range(r)] for _ in range(r)]
    inv = G.inverse_index
    for l, zl in enumerate(cc.representatives):
        z = G.elements[zl]
        for xi, x in enumerate(G.elements):
            k = cc.class_of[G.index(G.elements[inv[xi]] * z)]
            A[cc.class_of[xi]][k][l] += 1

    rng = random.Random(seed)
    spaces: list[list[list[int]]] = [[[int(i == j) for j in range(r)] for i in range(r)]]

    def split(mat: list[list[int]]) -> None:
        nonlocal spaces
        out = []
        for basis in spaces:
            if len(basis) == 1:
                out.append(basis)
                continue
            d = len(basis)
            images = [[sum(mat[k][l] * b[l] for l in range(r)) % p for k in range(r)] for b in basis]
            # restricted matrix, column c = coords of image of basis vector c
            coords = [_coords_mod(basis, img, p) for img in images]
            res = [[coords[c][rr] for c in range(d)] for rr in range(d)]
            pieces = []
            for lam in range(p):
                shifted = [[(res[i][j] - (lam if i == j else 0)) % p for j in range(d)] for i in range(d)]
                ns = _nullspace_mod(shifted, d, p)
                if ns:
                    vecs = [[sum(c[t] * basis[t][k] for t in range(d)) % p for k in range(r)] for c in ns]
                    pieces.append(vecs)
                if sum(len(x) for x in pieces) == d:
                    break
            if sum(len(x) for x in pieces) != d:
                raise ArithmeticError("class matrix not diagonalizable mod p")
            out.extend(pieces)
        spaces = out

    combo = [[0] * r for _ in range(r)]
    for j in range(1, r):
        c = rng.randrange(1, p)
        for k in range(r):
            for l in range(r):
                combo[k][l] = (combo[k][l] + c * A[j][k][l]) % p
    split(combo)
    for j in range(1, r):
        if all(len(b) == 1 for b in spaces):
            break
        split(A[j])
    if len(spaces) != r:
        raise ArithmeticError("failed to separate central characters")

    inv_class = [cc.class_of[inv[g]] for g in cc.representatives]
    gen = _primitive_root(p)
    zp = pow(gen, (p - 1) // e, p)
    big = get_field(lcm(field.conductor, e))
    roots = [big.root_of_unity((big.conductor // e) * k) for k in range(e)]
    powmap = [[cc.class_of[G.power_index(g, l)] for l in range(e)] for g in cc.representatives]
    inv_e = pow(e, p - 2, p)

    chars: list[ClassFunction] = []
    for (w,) in spaces:
        w0 = pow(w[0], p - 2, p)
        w = [v * w0 % p for v in w]
        s = sum(w[j] * w[inv_class[j]] * pow(sizes[j], p - 2, p) for j in range(r)) % p
        d2 = order * pow(s, p - 2, p) % p
        d = next((d for d in range(1, isqrt(order) + 1) if d * d % p == d2), None)
        if d is None:
            raise ArithmeticError("no degree matches modulo p")
        modvals = [w[j] * d * pow(sizes[j], p - 2, p) % p for j in range(r)]
        vals = []
        for j in range(r):
            acc = big.zero
            for k in range(e):
                m = sum(modvals[powmap[j][l]] * pow(zp, (-k * l) % e, p) for l in range(e)) * inv_e % p
                if m > p // 2:
                    raise ArithmeticError("negative eigenvalue multiplicity")
                if m:
                    acc = acc + roots[k] * m
            vals.append(descend(acc, field) if big is not field else acc)
        chars.append(ClassFunction(tuple(vals)))

    def sort_key(ch: ClassFunction) -> tuple:
        trivial = all(v == 1 for v in ch.values)
        return (ch.degree(), not trivial, tuple(str(v) for v in ch.values))

    chars.sort(key=sort_key)
    table = CharacterTable(G, field, chars, sizes, prefix)
    if sum(d * d for d in table.degrees) != order:
        raise ArithmeticError("degrees do not satisfy sum d^2 = |G|")
    return table


# ---------------------------------------------------------------------------
# index-two bookkeeping
# ---------------------------------------------------------------------------

def fusion(G: FiniteMatrixGroup, H: FiniteMatrixGroup) -> list[int]:
    """For each H-class, the G-class containing it."""
    gc, hc = G.conjugacy_classes(), H.conjugacy_classes()
    return [gc.class_of[G.index(H.elements[r])] for r in hc.representatives]


def restrict(chi: ClassFunction, G: FiniteMatrixGroup, H: FiniteMatrixGroup) -> ClassFunction:
    return ClassFunction(tuple(chi.values[c] for c in fusion(G, H)))


def induce(chi: ClassFunction, G: FiniteMatrixGroup, H: FiniteMatrixGroup, field: CycField) -> ClassFunction:
    gc, hc = G.conjugacy_classes(), H.conjugacy_classes()
    fus = fusion(G, H)
    hsizes = hc.sizes()
    vals = []
    for c, members in enumerate(gc.classes):
        acc = field.zero
        for k, gcls in enumerate(fus):
            if gcls == c:
                acc = acc + chi.values[k] * hsizes[k]
        # Ind chi(g) = |G| / (|H| |C|) * sum over H-classes inside C
        vals.append(acc * Fraction(G.order, H.order * len(members)))
    return ClassFunction(tuple(vals))


def epsilon_character(G: FiniteMatrixGroup, H: FiniteMatrixGroup, field: CycField) -> ClassFunction:
    gc = G.conjugacy_classes()
    vals = tuple(field.one if G.elements[r] in H else -field.one for r in gc.representatives)
    return ClassFunction(vals)


def alpha_twist(chi: ClassFunction, H: FiniteMatrixGroup, alpha) -> ClassFunction:
    """chi^alpha(h) = chi(alpha h alpha^-1)."""
    hc = H.conjugacy_classes()
    ai = alpha.inv()
    return ClassFunction(
        tuple(chi.values[hc.class_of[H.index(alpha * H.elements[r] * ai)]] for r in hc.representatives)
    )


def inverse_class_function(chi: ClassFunction, table: CharacterTable) -> ClassFunction:
    """g -> chi(g^-1); equals the complex conjugate for genuine characters."""
    inv = table.inverse_class()
    return ClassFunction(tuple(chi.values[inv[j]] for j in range(len(inv))))


@dataclass
class InductionRecord:
    h_index: int
    self_contragredient: bool
    alpha_stable: bool
    induced_norm: int
    ok: bool
    detail: str


def verify_induction_pattern(
    G: FiniteMatrixGroup,
    H: FiniteMatrixGroup,
    gt: CharacterTable,
    ht: CharacterTable,
    alpha=None,
) -> list[InductionRecord]:
    """Ind of a self-dual H-irrep splits as chi' + eps*chi'; otherwise it is irreducible and eps-fixed."""
    eps = epsilon_character(G, H, gt.field)
    records = []
    for k, chi in enumerate(ht.irreducibles):
        dual = inverse_class_function(chi, ht)
        selfdual = dual == chi and chi.conj() == chi
        stable = None if alpha is None else alpha_twist(chi, H, alpha) == chi
        ind = induce(chi, G, H, gt.field)
        mult = gt.decompose(ind)
        norm = sum(m * m for m in mult)
        if selfdual:
            parts = [i for i, m in enumerate(mult) if m]
            ok = norm == 2 and len(parts) == 2 and gt.irreducibles[parts[0]] * eps == gt.irreducibles[parts[1]]
            detail = f"Ind rho{k} = {' + '.join(gt.names[i] for i in parts)}"
        else:
            ok = norm == 1 and ind * eps == ind
            detail = f"Ind rho{k} irreducible"
        # restriction, dually: Res of each constituent contains chi
        for i, m in enumerate(mult):
            if m:
                res = ht.decompose(restrict(gt.irreducibles[i], G, H))
                if res[k] != 1:
                    ok = False
        if stable is not None and stable != selfdual:
            ok = False
            detail += "; alpha-twist disagrees with contragredient"
        records.append(InductionRecord(k, selfdual, bool(stable) if stable is not None else selfdual, norm, ok, detail))
    return records


# ---------------------------------------------------------------------------
# quivers
# ---------------------------------------------------------------------------

@dataclass
class Quiver:
    names: list[str]
    degrees: list[int]
    adjacency: list[list[int]]

    def is_symmetric(self) -> bool:
        n = len(self.names)
        return all(self.adjacency[i][j] == self.adjacency[j][i] for i in range(n) for j in range(n))

    def null_vector_holds(self) -> bool:
        return all(
            sum(a * d for a, d in zip(row, self.degrees)) == 2 * self.degrees[i]
            for i, row in enumerate(self.adjacency)
        )

    def graph(self) -> nx.Graph:
        """Underlying undirected graph, multiplicities in the 'weight' attribute."""
        if not self.is_symmetric():
            raise ValueError("quiver is not symmetric")
        g = nx.Graph()
        g.add_nodes_from(range(len(self.names)))
        n = len(self.names)
        for i in range(n):
            for j in range(i, n):
                if self.adjacency[i][j]:
                    g.add_edge(i, j, weight=self.adjacency[i][j])
        return g

    def to_dot(self, name: str = "mckay") -> str:
        lines = [f"graph {name} {{" if self.is_symmetric() else f"digraph {name} {{"]
        for v, d in zip(self.names, self.degrees):
            lines.append(f'  {v} [label="{v} (dim {d})"];')
        n = len(self.names)
        for i in range(n):
            for j in range(n):
                a = self.adjacency[i][j]
                if not a:
                    continue
                if a == self.adjacency[j][i]:
                    if i <= j:
                        lines.extend([f"  {self.names[i]} -- {self.names[j]};"] * a if self.is_symmetric()
                                     else [f"  {self.names[i]} -> {self.names[j]} [dir=both];"] * a)
                else:
                    lines.extend([f"  {self.names[i]} -> {self.names[j]};"] * a)
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {"vertices": [{"name": n, "dim": d} for n, d in zip(self.names, self.degrees)],
             "adjacency": self.adjacency},
            indent=2,
        ) + "\n"


def mckay_quiver(table: CharacterTable) -> Quiver:
    nat = table.natural_character()
    adj = []
    for chi in table.irreducibles:
        prod = nat * chi
        row = []
        for psi in table.irreducibles:
            ip = table.inner(prod, psi)
            if not ip.is_rational() or ip.to_fraction().denominator != 1 or ip.to_fraction() < 0:
                raise ArithmeticError(f"non-integral McKay multiplicity {ip}")
            row.append(ip.to_int())
        adj.append(row)
    return Quiver(table.names, table.degrees, adj)


def affine_template(kind: str, n: int) -> nx.Graph:
    """Affine Dynkin diagram of type A_n, D_n (n >= 4), E_6, E_7, E_8 with n+1 vertices."""
    g = nx.Graph()
    if kind == "A":
        if n == 1:
            g.add_edge(0, 1, weight=2)
        else:
            for i in range(n + 1):
                g.add_edge(i, (i + 1) % (n + 1), weight=1)
        return g
    if kind == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        chain = list(range(n - 3))  # n-3 internal vertices
        if len(chain) == 1:
            for leaf in range(1, 5):
                g.add_edge(0, leaf, weight=1)
            return g
        for a, b in zip(chain, chain[1:]):
            g.add_edge(a, b, weight=1)
        nxt = len(chain)
        for end in (chain[0], chain[-1]):
            g.add_edge(end, nxt, weight=1)
            g.add_edge(end, nxt + 1, weight=1)
            nxt += 2
        return g
    arms = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}
    if kind == "E" and n in arms:
        nxt = 1
        for length in arms[n]:
            prev = 0
            for _ in range(length):
                g.add_edge(prev, nxt, weight=1)
                prev = nxt
                nxt += 1
        return g
    raise ValueError(f"unknown diagram {kind}{n}")


def matches_template(q: Quiver, kind: str, n: int) -> bool:
    if not q.is_symmetric():
        return False
    em = nx.algorithms.isomorphism.numerical_edge_match("weight", 1)
    return nx.is_isomorphic(q.graph(), affine_template(kind, n), edge_match=em)
