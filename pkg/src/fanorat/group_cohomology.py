"""Integral cohomology of finite groups with coefficients in lattices.

Cochains are normalized inhomogeneous cochains f: (G - {e})^n -> M with the left
action, so C^n has rank (|G| - 1)^n * rank(M).  H^n is read off invariant factors
of the coboundary matrices.

The norm-one torus obstruction is evaluated as H^3(G, Z).  For the norm-one
torus T of a Galois extension with group G one has H^1(G, Pic V) = H^3(G, Z) for
a smooth compactification V (Voskresenskii, Colliot-Thelene and Sansuc).  This is
quoted, not derived here.
"""

from __future__ import annotations

import itertools

from .exact_algebra import IntMatrix, invariant_factors
from .galois_picard import (NOT_TRANSITIVE, PermGroup, compose, contains_klein, permutation_matrix,
                            classify_transitive_s4)

MAX_ORDER = 24
MAX_DEGREE = 3


class ActionError(ValueError):
    pass


class GModule:
    """A lattice Z^n with a left action of a finite group.

    `group` is a PermGroup or a list of hashable elements together with `mul`;
    `action` maps each element to an n x n IntMatrix (or list of rows).
    """

    def __init__(self, group, action, mul=None, identity=None, check: bool = True):
        if isinstance(group, PermGroup):
            self.group = group
            self.elements = sorted(group.elements)
            self.mul = compose
            self.identity = tuple(range(group.degree))
        else:
            if mul is None or identity is None:
                raise ValueError("an abstract group needs mul and identity")
            self.group = None
            self.elements = list(group)
            self.mul = mul
            self.identity = identity
        if len(self.elements) > MAX_ORDER:
            raise ValueError(f"group order {len(self.elements)} exceeds {MAX_ORDER}")
        self.action = {g: a if isinstance(a, IntMatrix) else IntMatrix(a) for g, a in dict(action).items()}
        if set(self.action) != set(self.elements):
            raise ActionError("action must be given on every group element")
        self.rank = self.action[self.identity].rows
        if check:
            self._check()

    def _check(self):
        n = self.rank
        if self.action[self.identity] != IntMatrix.identity(n):
            raise ActionError("identity does not act trivially")
        for g, a in self.action.items():
            if a.rows != n or a.cols != n:
                raise ActionError("action matrices have inconsistent sizes")
            if abs(a.det()) != 1:
                raise ActionError(f"action matrix of {g} is not unimodular")
        for g in self.elements:
            for h in self.elements:
                if self.action[g] @ self.action[h] != self.action[self.mul(g, h)]:
                    raise ActionError(f"action is not a homomorphism at ({g}, {h})")

    @property
    def order(self) -> int:
        return len(self.elements)


def trivial_module(group, rank: int = 1, **kw) -> GModule:
    elems = sorted(group.elements) if isinstance(group, PermGroup) else list(group)
    return GModule(group, {g: IntMatrix.identity(rank) for g in elems}, **kw)


def permutation_module(group: PermGroup) -> GModule:
    """Z^r with G permuting the basis vectors, r the permutation degree."""
    return GModule(group, {g: IntMatrix(permutation_matrix(g)) for g in group.elements})


def _chains(m: GModule, n: int):
    nonid = [g for g in m.elements if g != m.identity]
    return list(itertools.product(nonid, repeat=n))


def coboundary(m: GModule, n: int):
    """Sparse matrix of d^n: C^n -> C^{n+1}; returns (rows as dicts, ncols)."""
    src = _chains(m, n)
    tgt = _chains(m, n + 1)
    k = m.rank
    col = {c: i for i, c in enumerate(src)}
    act = {g: a.entries for g, a in m.action.items()}
    rows = []
    for chain in tgt:
        terms: list[tuple[int, tuple]] = []     # (sign, source chain) for f-evaluations without action
        g1 = chain[0]
        acted = chain[1:]
        for i in range(n):
            prod = m.mul(chain[i], chain[i + 1])
            if prod != m.identity:
                terms.append(((-1) ** (i + 1), chain[:i] + (prod,) + chain[i + 2:]))
        terms.append(((-1) ** (n + 1), chain[:n]))
        a = act[g1]
        for r in range(k):
            row: dict[int, int] = {}
            # g1 . f(g2, ..., g_{n+1})
            base = col[acted] * k
            for s in range(k):
                if a[r][s]:
                    row[base + s] = row.get(base + s, 0) + a[r][s]
            for sign, c in terms:
                idx = col[c] * k + r
                row[idx] = row.get(idx, 0) + sign
            rows.append({c: v for c, v in row.items() if v})
    return rows, len(src) * k


def dense(rows, ncols) -> list[list[int]]:
    out = [[0] * ncols for _ in rows]
    for i, r in enumerate(rows):
        for c, v in r.items():
            out[i][c] = v
    return out


def compose_sparse(a_rows, b_rows):
    """Matrix product A * B for sparse row dicts (columns of A index rows of B)."""
    out = []
    for r in a_rows:
        acc: dict[int, int] = {}
        for j, v in r.items():
            for c, w in b_rows[j].items():
                acc[c] = acc.get(c, 0) + v * w
        out.append({c: v for c, v in acc.items() if v})
    return out


def _rank(rows, ncols) -> int:
    return len(invariant_factors(rows, ncols))


def cohomology(m: GModule, n: int) -> list[int]:
    """H^n(G, M) as invariant factors: a 0 per free summand, d > 1 per Z/d; [] if trivial.

    For n >= 1 the group is killed by |G|, so it equals the torsion of coker d^{n-1}.
    """
    if not 0 <= n <= MAX_DEGREE:
        raise ValueError(f"degree must lie in 0..{MAX_DEGREE}")
    if n == 0:
        rows, ncols = coboundary(m, 0)
        return [0] * (ncols - _rank(rows, ncols))
    rows, ncols = coboundary(m, n - 1)
    return [abs(d) for d in invariant_factors(rows, ncols) if abs(d) > 1]


def cohomology_of(group, n: int, module: str = "trivial") -> list[int]:
    m = permutation_module(group) if module == "permutation" else trivial_module(group)
    return cohomology(m, n)


def format_groups(factors: list[int]) -> str:
    if not factors:
        return "0"
    return " + ".join("Z" if d == 0 else f"Z/{d}" for d in factors)


def norm_one_obstruction(g: PermGroup) -> bool:
    """Whether H^1(G, Pic) of the norm-one torus compactification is nonzero, via H^3(G, Z)."""
    if classify_transitive_s4(g) == NOT_TRANSITIVE:
        raise ValueError("the group must act transitively on 4 letters")
    return bool(cohomology(trivial_module(g), 3))


def obstruction_report(g: PermGroup) -> dict:
    h3 = cohomology(trivial_module(g), 3)
    return {"class": classify_transitive_s4(g), "order": g.order, "H3": h3,
            "obstruction": bool(h3), "contains_klein": contains_klein(g),
            "note": "consistent with the Klein-group hypothesis; the vanishing for C4 is computed here"}
