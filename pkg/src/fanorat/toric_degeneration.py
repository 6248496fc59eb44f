"""The torus-invariant (1,1,1,1) divisor in (P^1)^4 and its six double points.

Coordinates on the i-th P^1 are (u_i : v_i).  A multidegree (1,1,1,1) form is
sum_S c_S m_S with m_S = prod_{i in S} u_i * prod_{i not in S} v_i.
The torus T0 = {t1 t2 t3 t4 = 1} acts by u_i -> u_i, v_i -> t_i v_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .exact_algebra import GF, QQ, FFElement, MultiPoly, normalize_projective, projective_points, rank

INDICES = (1, 2, 3, 4)
SUBSETS = tuple(frozenset(c) for k in range(5) for c in itertools.combinations(INDICES, k))
Y0 = ((1, 1),) * 4
BLOCKS = tuple((f"{c}{i}", 1) for i in INDICES for c in "uv")
KLEIN_PATTERNS = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))


def _subset(s) -> frozenset:
    s = frozenset(int(i) for i in s)
    if not s <= set(INDICES):
        raise ValueError(f"subset {sorted(s)} is not contained in {{1,2,3,4}}")
    return s


@dataclass
class QuadrilinearForm:
    coeffs: dict = dc_field(default_factory=dict)
    field: object = QQ

    def __post_init__(self):
        self.coeffs = {_subset(s): self.field(c) for s, c in dict(self.coeffs).items() if c != 0}

    def coefficient(self, s) -> object:
        return self.coeffs.get(_subset(s), self.field.zero)

    def __add__(self, other: "QuadrilinearForm") -> "QuadrilinearForm":
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, self.field.zero) + c
        return QuadrilinearForm(out, self.field)

    def scale(self, c) -> "QuadrilinearForm":
        return QuadrilinearForm({s: c * v for s, v in self.coeffs.items()}, self.field)

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, point) -> object:
        """point = ((u1, v1), ..., (u4, v4))."""
        total = self.field.zero
        for s, c in self.coeffs.items():
            term = c
            for i in INDICES:
                u, v = point[i - 1]
                term = term * (u if i in s else v)
            total = total + term
        return total

    def polynomial(self) -> MultiPoly:
        f = MultiPoly(BLOCKS, field=self.field)
        for s, c in self.coeffs.items():
            e = [0] * 8
            for i in INDICES:
                e[2 * (i - 1) + (0 if i in s else 1)] = 1
            f = f + MultiPoly(BLOCKS, {tuple(e): c}, self.field)
        return f

    def to_field(self, F) -> "QuadrilinearForm":
        lift = lambda c: F(c.code) if isinstance(c, FFElement) else F(c)    # noqa: E731
        return QuadrilinearForm({s: lift(c) for s, c in self.coeffs.items()}, F)

    def to_json(self) -> dict:
        return {"field": self.field.spec(),
                "coeffs": [[sorted(s), self.field.format(c)] for s, c in sorted(self.coeffs.items(), key=_key)]}

    @classmethod
    def from_json(cls, data: dict) -> "QuadrilinearForm":
        from .exact_algebra import parse_field
        F = parse_field(data.get("field", "Q"))
        return cls({frozenset(s): F(c) for s, c in data["coeffs"]}, F)


def _key(item):
    s = item[0]
    return (len(s), sorted(s))


@dataclass(frozen=True)
class TorusWeight:
    vector: tuple

    @classmethod
    def of(cls, v: Sequence[int]) -> "TorusWeight":
        if len(v) != 4:
            raise ValueError("weights are 4-vectors")
        return cls(tuple(int(x) - int(v[3]) for x in v))

    def __str__(self):
        return "(" + ",".join(map(str, self.vector)) + ")"


def monomial_weight(s) -> TorusWeight:
    s = _subset(s)
    return TorusWeight.of([0 if i in s else 1 for i in INDICES])


def weight_decomposition() -> dict:
    out: dict = {}
    for s in SUBSETS:
        out.setdefault(monomial_weight(s), []).append(s)
    return out


def x0_form(field=QQ) -> QuadrilinearForm:
    return QuadrilinearForm({frozenset(INDICES): 1, frozenset(): -1}, field)


def invariant_divisor_through(y0=Y0, field=QQ) -> QuadrilinearForm:
    """Zero-weight form vanishing at y0, normalized to coefficient 1 on u1u2u3u4.

    A form through y0 that is T0-invariant up to a character lies in a single
    weight space; singleton weight spaces give monomials, nonzero at y0.
    """
    y0 = tuple(tuple(field(x) for x in p) for p in y0)
    if any(a == 0 or b == 0 for a, b in y0):
        raise ValueError("y0 must lie in the open torus orbit")
    zero = [s for w, ss in weight_decomposition().items() if w.vector == (0, 0, 0, 0) for s in ss]
    vals = [QuadrilinearForm({s: 1}, field).evaluate(y0) for s in zero]
    # one linear condition on a 2-dimensional space; solution with c_{1234} = 1
    full, empty = frozenset(INDICES), frozenset()
    cf, ce = dict(zip(zero, vals))[full], dict(zip(zero, vals))[empty]
    return QuadrilinearForm({full: 1, empty: -cf / ce}, field)


def monomials_through(y0=Y0, field=QQ) -> list:
    y0 = tuple(tuple(field(x) for x in p) for p in y0)
    return [s for s in SUBSETS if QuadrilinearForm({s: 1}, field).evaluate(y0) == 0]


# ---------------------------------------------------------------------------
# singular points


def point_x(p: int, q: int, field=QQ):
    """u_i = 0 for i in {p, q}, v_i = 0 otherwise."""
    pq = {p, q}
    return tuple((field.zero, field.one) if i in pq else (field.one, field.zero) for i in INDICES)


def label(point) -> str | None:
    zeros = [i for i in INDICES if point[i - 1][0] == 0]
    if len(zeros) == 2 and all(point[i - 1][1] == 0 for i in INDICES if i not in zeros):
        return f"x_{zeros[0]}{zeros[1]}"
    return None


@dataclass(frozen=True)
class ODPCertificate:
    label: str
    point: tuple
    chart_variables: tuple
    local_equation: MultiPoly
    constant_term: object
    linear_part_zero: bool
    quadratic_rank: int

    @property
    def ok(self) -> bool:
        return self.constant_term == 0 and self.linear_part_zero and self.quadratic_rank == 4


def local_equation(form: QuadrilinearForm, p: int, q: int):
    """Restrict to the chart v_i = 1 (i in {p,q}), u_i = 1 (otherwise) around x_{p,q}."""
    F = form.field
    pq = {p, q}
    names = tuple(f"u{i}" if i in pq else f"v{i}" for i in INDICES)
    blocks = tuple((n, 1) for n in names)
    g = MultiPoly(blocks, field=F)
    for s, c in form.coeffs.items():
        e = [0] * 4
        for k, i in enumerate(INDICES):
            # u_i survives as a variable if i in pq, v_i survives otherwise
            if i in pq and i in s:
                e[k] = 1
            elif i not in pq and i not in s:
                e[k] = 1
        g = g + MultiPoly(blocks, {tuple(e): c}, F)
    return names, g


def _quadratic_rank(g: MultiPoly) -> int:
    F = g.field
    n = g.nvars
    H = [[F.zero] * n for _ in range(n)]
    for e, c in g.terms.items():
        if sum(e) != 2:
            continue
        idx = [k for k, x in enumerate(e) for _ in range(x)]
        a, b = idx
        if a == b:
            H[a][a] = H[a][a] + 2 * c
        else:
            H[a][b] = H[a][b] + c
            H[b][a] = H[b][a] + c
    return rank(H, F)


def odp_certificate(form: QuadrilinearForm, p: int, q: int) -> ODPCertificate:
    names, g = local_equation(form, p, q)
    const = g.terms.get((0, 0, 0, 0), form.field.zero)
    lin_zero = all(sum(e) != 1 for e in g.terms)
    return ODPCertificate(f"x_{p}{q}", point_x(p, q, form.field), names, g, const, lin_zero,
                          _quadratic_rank(g))


def singular_points(field=QQ) -> list[ODPCertificate]:
    form = x0_form(field)
    return [odp_certificate(form, p, q) for p, q in itertools.combinations(INDICES, 2)]


def gradient(form: QuadrilinearForm, point) -> list:
    f = form.polynomial()
    flat = [x for uv in point for x in uv]
    return [f.partial(k).evaluate(flat) for k in range(8)]


# ---------------------------------------------------------------------------
# orbit curves


@dataclass(frozen=True)
class OrbitCurve:
    pattern: tuple
    parametrization: tuple      # per factor: (u, v) polynomials in t, s (homogenized)
    on_x0: bool
    limits: dict
    incidence: frozenset


def orbit_curve(pattern, field=QQ) -> OrbitCurve:
    """Closure of t -> ((t:1) on the first pair, (1:t) on the second) through y0."""
    pattern = tuple(tuple(sorted(int(i) for i in pr)) for pr in pattern)
    key = tuple(sorted(pattern))
    if key not in KLEIN_PATTERNS:
        raise ValueError(f"{pattern} is not a pairing of {{1,2,3,4}} into two pairs")
    first, second = pattern
    blocks = (("t", 1), ("s", 1))
    t = MultiPoly.variable(blocks, "t", field)
    s = MultiPoly.variable(blocks, "s", field)
    par = [None] * 4
    for i in first:
        par[i - 1] = (t, s)          # (t : 1)
    for i in second:
        par[i - 1] = (s, t)          # (1 : t)
    # substitute into u1u2u3u4 - v1v2v3v4
    prod_u = par[0][0] * par[1][0] * par[2][0] * par[3][0]
    prod_v = par[0][1] * par[1][1] * par[2][1] * par[3][1]
    on_x0 = (prod_u - prod_v).is_zero()
    limits = {}
    for name, (tv, sv) in (("t->0", (0, 1)), ("t->inf", (1, 0))):
        pt = tuple(tuple(field(x.evaluate([field(tv), field(sv)])) for x in uv) for uv in par)
        limits[name] = label(tuple(tuple(normalize_projective(uv)) for uv in pt))
    return OrbitCurve(pattern, tuple(par), on_x0, limits, frozenset(limits.values()))


def orbit_incidence_partition(field=QQ) -> dict:
    curves = [orbit_curve(p, field) for p in KLEIN_PATTERNS]
    labels = [c.label for c in singular_points(field)]
    hits = [x for c in curves for x in c.incidence]
    return {"curves": curves, "all_on_x0": all(c.on_x0 for c in curves),
            "partition": sorted(hits) == sorted(labels) and all(len(c.incidence) == 2 for c in curves)}


# ---------------------------------------------------------------------------
# pencil probe


def _hyperdeterminant(a) -> object:
    """Cayley hyperdeterminant of a 2x2x2 array a[i][j][k]."""
    A = {(i, j, k): a[i][j][k] for i in range(2) for j in range(2) for k in range(2)}
    g = lambda *x: A[x]     # noqa: E731
    return (g(0, 0, 0) ** 2 * g(1, 1, 1) ** 2 + g(0, 0, 1) ** 2 * g(1, 1, 0) ** 2
            + g(0, 1, 0) ** 2 * g(1, 0, 1) ** 2 + g(1, 0, 0) ** 2 * g(0, 1, 1) ** 2
            - 2 * (g(0, 0, 0) * g(0, 0, 1) * g(1, 1, 0) * g(1, 1, 1)
                   + g(0, 0, 0) * g(0, 1, 0) * g(1, 0, 1) * g(1, 1, 1)
                   + g(0, 0, 0) * g(1, 0, 0) * g(0, 1, 1) * g(1, 1, 1)
                   + g(0, 0, 1) * g(0, 1, 0) * g(1, 0, 1) * g(1, 1, 0)
                   + g(0, 0, 1) * g(1, 0, 0) * g(0, 1, 1) * g(1, 1, 0)
                   + g(0, 1, 0) * g(1, 0, 0) * g(0, 1, 1) * g(1, 0, 1))
            + 4 * (g(0, 0, 0) * g(0, 1, 1) * g(1, 0, 1) * g(1, 1, 0)
                   + g(0, 0, 1) * g(0, 1, 0) * g(1, 0, 0) * g(1, 1, 1)))


def _tensor(form: QuadrilinearForm):
    """T[e1][e2][e3][e4] with index 0 for u, 1 for v."""
    F = form.field
    T = {}
    for e in itertools.product(range(2), repeat=4):
        s = frozenset(i for i, x in zip(INDICES, e) if x == 0)
        T[e] = form.coefficient(s) if s in form.coeffs else F.zero
    return T


def _contract_first(T, x, F):
    return [[[x[0] * T[(0, j, k, l)] + x[1] * T[(1, j, k, l)] for l in range(2)] for k in range(2)]
            for j in range(2)]


def _kernel_2x2(B, F):
    """Nonzero x with B x = 0 (as a list of projective points), or None if B = 0."""
    if all(x == 0 for r in B for x in r):
        return None
    for r in B:
        if r[0] != 0 or r[1] != 0:
            return [normalize_projective([-r[1], r[0]])]
    return None


def singular_scheme_points(form: QuadrilinearForm, F) -> list:
    """Singular points of {form = 0} in (P^1)^4 over the finite field F.

    Singular points satisfy T(., x2, x3, x4) = 0 (the x1-derivatives) and the
    analogous conditions; x1 is then a root of the hyperdeterminant of
    T(x1, ., ., .), which cuts the search down to a few lines.
    """
    T = _tensor(form)
    P1 = [tuple(p) for p in projective_points(F, 1)]
    out = set()

    def contract(x1, x2, x3, x4, skip):
        pts = [x1, x2, x3, x4]
        total = F.zero
        res = [F.zero, F.zero]
        for e in itertools.product(range(2), repeat=4):
            c = T[e]
            if c == 0:
                continue
            term = c
            for k in range(4):
                if k != skip:
                    term = term * pts[k][e[k]]
            res[e[skip]] = res[e[skip]] + term
            total = total + term
        return res

    for x1 in P1:
        A = _contract_first(T, x1, F)       # A[j][k][l]
        if _hyperdeterminant(A) != 0:
            continue
        for x2 in P1:
            B = [[x2[0] * A[0][k][l] + x2[1] * A[1][k][l] for l in range(2)] for k in range(2)]
            det = B[0][0] * B[1][1] - B[0][1] * B[1][0]
            if det != 0:
                continue
            ker = _kernel_2x2(B, F)
            kerT = _kernel_2x2([[B[0][0], B[1][0]], [B[0][1], B[1][1]]], F)
            x3s = kerT if kerT is not None else P1
            x4s = ker if ker is not None else P1
            for x3 in x3s:
                for x4 in x4s:
                    x3, x4 = tuple(x3), tuple(x4)
                    if all(all(v == 0 for v in contract(x1, x2, x3, x4, k)) for k in range(4)):
                        out.add((x1, x2, x3, x4))
    return sorted(out, key=lambda p: [[F.format(c) for c in uv] for uv in p])


@dataclass(frozen=True)
class ProbeRow:
    t: object
    degenerate: bool
    singular_points: dict       # extension degree -> count of points over GF(p^d)

    @property
    def smooth(self) -> bool:
        return not self.degenerate and not any(self.singular_points.values())


def pencil_smoothness_probe(second_form: QuadrilinearForm, p: int, ts: Sequence | None = None,
                            max_degree: int = 2) -> list[ProbeRow]:
    """Singular points of X0 + t * second_form over GF(p^d), d <= max_degree."""
    F = GF(p)
    g = second_form.to_field(F)
    if g.evaluate(tuple((F.one, F.one) for _ in INDICES)) != 0:
        raise ValueError("the second form must vanish at y0 = (1:1)^4")
    base = x0_form(F)
    ts = list(F.elements()) if ts is None else [F(t) for t in ts]
    rows = []
    for t in ts:
        member = base + g.scale(t)
        if member.is_zero():
            rows.append(ProbeRow(t, True, {}))
            continue
        counts = {}
        for d in range(1, max_degree + 1):
            E = GF(p, d)
            counts[d] = len(singular_scheme_points(member.to_field(E) if d > 1 else member, E))
        rows.append(ProbeRow(t, False, counts))
    return rows


def random_form_through_y0(F, rng) -> QuadrilinearForm:
    coeffs = {s: F.random_element(rng) for s in SUBSETS}
    val = QuadrilinearForm(coeffs, F).evaluate(tuple((F.one, F.one) for _ in INDICES))
    coeffs[frozenset()] = coeffs[frozenset()] - val
    return QuadrilinearForm(coeffs, F)
