"""Galois images acting on Picard lattices, the six Fano families and the rationality verdict."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .chow_blowup import ci_anticanonical_degree, fano_index
from .exact_algebra import QQ, rank


def perm_from_cycles(degree: int, cycles: Iterable[Sequence[int]]) -> tuple[int, ...]:
    """Permutation of {0..degree-1} from 1-based cycles, e.g. [(1, 2), (3, 4)]."""
    img = list(range(degree))
    for cyc in cycles:
        cyc = [c - 1 for c in cyc]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a] = b
    return tuple(img)


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse ``"(1 2)(3 4)"`` or ``"(1,2,3,4)"``; ``"()"`` or ``"e"`` is the identity."""
    text = text.strip()
    if text in ("", "()", "e", "id"):
        return tuple(range(degree))
    cycles = []
    for chunk in text.replace(")", "(").split("("):
        chunk = chunk.replace(",", " ").split()
        if chunk:
            cycles.append([int(c) for c in chunk])
    for c in cycles:
        if any(not 1 <= x <= degree for x in c) or len(set(c)) != len(c):
            raise ValueError(f"invalid cycle {c} for degree {degree}")
    return perm_from_cycles(degree, cycles)


def compose(g: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    """g after h."""
    return tuple(g[i] for i in h)


def inverse(g: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def cycle_type(g: Sequence[int]) -> tuple[int, ...]:
    seen, lengths = set(), []
    for i in range(len(g)):
        if i in seen:
            continue
        n, j = 0, i
        while j not in seen:
            seen.add(j)
            j = g[j]
            n += 1
        lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def cycle_string(g: Sequence[int]) -> str:
    seen, parts = set(), []
    for i in range(len(g)):
        if i in seen or g[i] == i:
            seen.add(i)
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = g[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


class PermGroup:
    """Subgroup of the symmetric group on {0..degree-1} given by generators."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]] = ()):
        self.degree = int(degree)
        gens = [tuple(g) for g in generators]
        for g in gens:
            if sorted(g) != list(range(self.degree)):
                raise ValueError(f"{g} is not a permutation of degree {self.degree}")
        ident = tuple(range(self.degree))
        self.generators = tuple(dict.fromkeys(g for g in gens if g != ident))
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = compose(g, x)
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        self.elements = tuple(sorted(elems))
        self.identity = ident
        self._verify()

    @classmethod
    def from_cycles(cls, degree: int, *gens: str) -> "PermGroup":
        return cls(degree, [parse_cycles(g, degree) for g in gens])

    def _verify(self):
        s = set(self.elements)
        for a in self.elements:
            if inverse(a) not in s:
                raise AssertionError("element set is not closed under inverses")
            for g in self.generators:
                if compose(a, g) not in s:
                    raise AssertionError("element set is not closed under composition")
        fact = 1
        for k in range(2, self.degree + 1):
            fact *= k
        if fact % len(self.elements):
            raise AssertionError("group order does not divide degree!")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return tuple(g) in set(self.elements)

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.degree == other.degree \
            and self.elements == other.elements

    def __hash__(self):
        return hash((self.degree, self.elements))

    def orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen:
                continue
            orb = sorted({g[i] for g in self.elements})
            seen.update(orb)
            out.append(orb)
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def describe(self) -> str:
        return "<" + ", ".join(cycle_string(g) for g in self.generators) + ">" if self.generators else "<()>"

    def __repr__(self):
        return f"PermGroup({self.degree}, {self.describe()}, order={self.order})"


def permutation_matrix(g: Sequence[int]) -> list[list[int]]:
    """Matrix sending e_i to e_{g(i)}; g -> matrix is a homomorphism for `compose`."""
    n = len(g)
    m = [[0] * n for _ in range(n)]
    for i, x in enumerate(g):
        m[x][i] = 1
    return m


def invariant_rank(g: PermGroup) -> int:
    """Rank of the sublattice of Z^r fixed by the permutation action.

    Computed as r minus the rank of the stacked matrices P_g - I; the orbit
    count is the independent check used in the tests.
    """
    n = g.degree
    rows = []
    for e in g.generators:
        p = permutation_matrix(e)
        for i in range(n):
            rows.append([Fraction(p[i][j] - (i == j)) for j in range(n)])
    return n - (rank(rows, QQ) if rows else 0)


def symmetric_group(n: int) -> PermGroup:
    if n < 2:
        return PermGroup(n)
    gens = [perm_from_cycles(n, [(1, 2)]), perm_from_cycles(n, [tuple(range(1, n + 1))])]
    return PermGroup(n, gens)


def cyclic_group(n: int) -> PermGroup:
    return PermGroup(n, [perm_from_cycles(n, [tuple(range(1, n + 1))])] if n > 1 else [])


def subgroups_s4() -> list[PermGroup]:
    """All subgroups of S4, each once (every subgroup of S4 is 2-generated)."""
    elems = symmetric_group(4).elements
    found = {}
    for a, b in itertools.combinations_with_replacement(elems, 2):
        grp = PermGroup(4, [a, b])
        found.setdefault(grp.elements, grp)
    return sorted(found.values(), key=lambda G: (G.order, G.elements))


DOUBLE_TRANSPOSITIONS = tuple(perm_from_cycles(4, c) for c in
                              ([(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)]))

NOT_TRANSITIVE = "not transitive"


def classify_transitive_s4(g: PermGroup) -> str:
    if g.degree != 4:
        raise ValueError("classification needs a subgroup of S4")
    if not g.is_transitive():
        return NOT_TRANSITIVE
    census = {cycle_type(x) for x in g.elements}
    labels = {24: "S4", 12: "A4", 8: "D4"}
    if g.order in labels:
        return labels[g.order]
    if g.order == 4:
        return "C4" if (4,) in census else "V4"
    raise AssertionError(f"unexpected transitive subgroup of order {g.order}")


def contains_klein(g: PermGroup) -> bool:
    if g.degree != 4:
        raise ValueError("contains_klein needs a subgroup of S4")
    return all(t in g for t in DOUBLE_TRANSPOSITIONS)


def standard_transitive_s4() -> dict[str, PermGroup]:
    return {
        "S4": symmetric_group(4),
        "A4": PermGroup.from_cycles(4, "(1 2 3)", "(1 2)(3 4)"),
        "D4": PermGroup.from_cycles(4, "(1 2 3 4)", "(1 3)"),
        "V4": PermGroup.from_cycles(4, "(1 2)(3 4)", "(1 3)(2 4)"),
        "C4": PermGroup.from_cycles(4, "(1 2 3 4)"),
    }


# ---------------------------------------------------------------------------
# the six families


@dataclass(frozen=True)
class FanoType:
    tag: tuple[int, ...]
    index: int
    rho: int
    degree: int
    genus: int
    h12: int
    ambient: tuple[int, ...]
    divisors: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.degree != 2 * self.genus - 2:
            raise ValueError(f"type {self.tag}: degree {self.degree} != 2*genus - 2")

    @property
    def name(self) -> str:
        return "(" + ",".join(map(str, self.tag)) + ")"

    def computed_degree(self) -> int:
        return ci_anticanonical_degree(self.ambient, self.divisors)

    def computed_index(self) -> int:
        return fano_index(self.ambient, self.divisors)

    @property
    def r(self) -> int:
        return self.rho


def _ft(tag, index, rho, degree, genus, h12, ambient, divisors):
    return FanoType(tuple(tag), index, rho, degree, genus, h12, tuple(ambient),
                    tuple(tuple(d) for d in divisors))


FAMILIES: dict[tuple[int, ...], FanoType] = {
    ft.tag: ft for ft in (
        _ft((3, 3), 1, 2, 20, 11, 3, (3, 3), [(1, 1)] * 3),
        _ft((1, 1, 1, 1), 1, 4, 24, 13, 1, (1, 1, 1, 1), [(1, 1, 1, 1)]),
        # (4,4) lives in a product of two quadric threefolds, not in a product of
        # projective spaces; its degree comes from the blowup model instead.
        _ft((4, 4), 1, 2, 28, 15, 0, (), []),
        _ft((2, 2, 2), 1, 3, 30, 16, 0, (2, 2, 2), [(0, 1, 1), (1, 0, 1), (1, 1, 0)]),
        _ft((2, 2), 2, 2, 48, 25, 0, (2, 2), [(1, 1)]),
        _ft((1, 1, 1), 2, 3, 48, 25, 0, (1, 1, 1), []),
    )
}


def fano_type(tag) -> FanoType:
    if isinstance(tag, str):
        tag = tuple(int(x) for x in tag.strip("() ").replace(" ", "").split(","))
    tag = tuple(tag)
    if tag not in FAMILIES:
        raise KeyError(f"unknown Fano type {tag}; expected one of {sorted(FAMILIES)}")
    return FAMILIES[tag]


def recomputed_degree(t: FanoType) -> int:
    """Anticanonical degree recomputed from geometry, not from the stored constant."""
    if t.tag == (4, 4):
        from .chow_blowup import QUADRIC_QUARTIC, cube_on_blowup, curve_blowup_products
        kcube, kc, g, idx = QUADRIC_QUARTIC
        return cube_on_blowup(curve_blowup_products(kcube, kc, g), 1, -1)
    return t.computed_degree()


def recomputed_index(t: FanoType) -> int:
    if t.tag == (4, 4):
        return 1  # -K = 3H - E on the blowup of a quadric is primitive
    return t.computed_index()


class UnsupportedType(ValueError):
    pass


def _require_index1(t: FanoType):
    if t.index != 1:
        raise UnsupportedType(f"type {t.name} has index {t.index}; only index-1 types are supported")


@dataclass(frozen=True)
class HilbertCounts:
    lines_components: int
    conics_components: int
    cubics_through_point_components: int


_CONICS = {(2, 2, 2): 3, (4, 4): 1, (3, 3): 1, (1, 1, 1, 1): 6}
_CUBICS = {(2, 2, 2): 1, (4, 4): 2, (3, 3): 2, (1, 1, 1, 1): 8}


def hilbert_component_counts(t: FanoType) -> HilbertCounts:
    _require_index1(t)
    return HilbertCounts(t.rho, _CONICS[t.tag], _CUBICS[t.tag])


def lines_through_point_length(t: FanoType, any_line_through_x: bool) -> int:
    _require_index1(t)
    return t.rho if any_line_through_x else 0


# ---------------------------------------------------------------------------
# verdicts

YES, NO, OPEN = "yes", "no", "open"


@dataclass(frozen=True)
class Verdict:
    tag: tuple[int, ...]
    has_k_point: bool
    unirational: bool
    rational: str
    reason: str
    invariants: FanoType

    def __post_init__(self):
        if self.rational == YES and not self.unirational:
            raise AssertionError("a rational variety is unirational")
        if self.rational not in (YES, NO, OPEN):
            raise ValueError(self.rational)

    def summary(self) -> str:
        if self.rational == YES:
            return "rational"
        uni = "unirational" if self.unirational else "not unirational"
        if self.rational == NO:
            return f"{uni}; not rational"
        return f"{uni}; rationality open (conjecturally not rational)"


RATIONAL_WITH_POINT = {(4, 4), (2, 2, 2), (2, 2), (1, 1, 1)}


def verdict(t: FanoType, has_k_point: bool) -> Verdict:
    """Rationality status over k, assuming Picard rank one over k.

    The caller certifies rank one, e.g. with ``invariant_rank(G) == 1`` for the
    Galois image G.
    """
    if not has_k_point:
        return Verdict(t.tag, False, False, NO, "no k-point: not unirational, hence not rational", t)
    if t.tag in RATIONAL_WITH_POINT:
        return Verdict(t.tag, True, True, YES, "k-point: rational", t)
    if t.tag == (3, 3):
        return Verdict(t.tag, True, True, NO,
                       "k-point: unirational; conic bundle with non-split discriminant cover: never rational", t)
    if t.tag == (1, 1, 1, 1):
        return Verdict(t.tag, True, True, OPEN,
                       "k-point: unirational; rationality open, expected never rational; "
                       "not stably rational over suitable k(t) when the Galois image contains V4", t)
    raise KeyError(t.tag)
