"""The toric birational link between a blown-up product of projective spaces and a
blown-up projective bundle over the product of the projections.

Source side: Y = P(V_1) x ... x P(V_r) blown up at y = ([v_1], ..., [v_r]), with
exceptional divisor E.  Target side: the bundle P(Ecal) over Y+ = prod P(Vbar_i),
Ecal = sum of O(-h_I) over |I| >= r-1, blown up along the sections s_j for the
P^1 factors j.  Factors are 0-indexed in code and 1-indexed in printed labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .chow_blowup import BasisMismatch, DivClass
from .exact_algebra import QQ, IntMatrix, normalize_projective

INDETERMINATE = "indeterminate"


class CenterError(ValueError):
    """The point is the center of the blowup."""


# ---------------------------------------------------------------------------
# configuration and splittings


@dataclass(frozen=True)
class LinkConfig:
    dims: tuple[int, ...]
    field: object
    base: tuple[tuple, ...]
    pivots: tuple[int, ...] = dc_field(init=False)
    p: int = dc_field(init=False)
    q: int = dc_field(init=False)

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        object.__setattr__(self, "dims", dims)
        r = len(dims)
        if r < 2:
            raise ValueError("the link needs at least two factors")
        p = sum(1 for n in dims if n >= 2)
        # only the split into n_i >= 2 followed by n_i = 1 matters; order within the first block is free
        if any(n != 1 for n in dims[p:]) or any(n < 1 for n in dims):
            raise ValueError(f"dims {dims} must list the factors with n_i >= 2 first, then the 1s")
        if len(self.base) != r:
            raise ValueError("one base vector per factor is required")
        F = self.field
        base, pivots = [], []
        for n, v in zip(dims, self.base):
            v = [F(x) for x in v]
            if len(v) != n + 1:
                raise ValueError(f"base vector {v} should have {n + 1} coordinates")
            piv = next((k for k, x in enumerate(v) if x != 0), None)
            if piv is None:
                raise ValueError("base vectors must be nonzero")
            inv = 1 / v[piv]
            base.append(tuple(x * inv for x in v))
            pivots.append(piv)
        object.__setattr__(self, "base", tuple(base))
        object.__setattr__(self, "pivots", tuple(pivots))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", r - p)

    @classmethod
    def standard(cls, dims, field=QQ) -> "LinkConfig":
        """Base point (1:1:...:1) on every factor."""
        return cls(tuple(dims), field, tuple((field.one,) * (n + 1) for n in dims))

    @property
    def r(self) -> int:
        return len(self.dims)

    def complement(self, i: int) -> list[int]:
        """Coordinates spanning Vbar_i: every standard index except the pivot of v_i."""
        return [k for k in range(self.dims[i] + 1) if k != self.pivots[i]]

    def split(self, i: int, u: Sequence) -> tuple:
        """Write u = a v_i + ubar; returns (a, ubar in Vbar_i coordinates)."""
        F = self.field
        u = [F(x) for x in u]
        a = u[self.pivots[i]]
        rest = [x - a * y for x, y in zip(u, self.base[i])]
        return a, tuple(rest[k] for k in self.complement(i))

    def embed(self, i: int, ubar: Sequence) -> tuple:
        """Vbar_i coordinates back to V_i."""
        out = [self.field.zero] * (self.dims[i] + 1)
        for k, x in zip(self.complement(i), ubar):
            out[k] = x
        return tuple(out)

    def summands(self) -> list[tuple[int, ...]]:
        """Index sets I of Ecal in storage order: the full set, then I = {all} - {j}."""
        r = self.r
        full = tuple(range(r))
        return [full] + [tuple(k for k in full if k != j) for j in range(r)]


# ---------------------------------------------------------------------------
# divisor classes


def source_basis(r: int) -> tuple[str, ...]:
    return tuple(f"H{i + 1}" for i in range(r)) + ("E",)


def target_basis(dims: Sequence[int]) -> tuple[str, ...]:
    return tuple((f"h{i + 1}" if n >= 2 else f"e{i + 1}") for i, n in enumerate(dims)) + ("h",)


@dataclass(frozen=True)
class DivisorClassMap:
    source: tuple[str, ...]
    target: tuple[str, ...]
    forward: IntMatrix
    backward: IntMatrix


def divisor_class_map(dims: Sequence[int]) -> DivisorClassMap:
    """Both change-of-basis matrices, each assembled from its own set of relations.

    backward columns: h_i = H_i - E (likewise e_j), h = H - (r-1)E.
    forward columns:  E = h - sum h_i - sum e_j, H_i = h_i + E (likewise e_j + E).
    """
    r = len(dims)
    src, tgt = source_basis(r), target_basis(dims)
    back = [[0] * (r + 1) for _ in range(r + 1)]
    for i in range(r):
        back[i][i] = 1
        back[r][i] = -1
    for i in range(r):
        back[i][r] = 1
    back[r][r] = -(r - 1)
    e_col = [-1] * r + [1]
    fwd = [[0] * (r + 1) for _ in range(r + 1)]
    for i in range(r + 1):
        fwd[i][r] = e_col[i]
    for j in range(r):
        for i in range(r + 1):
            fwd[i][j] = e_col[i] + (1 if i == j else 0)
    return DivisorClassMap(src, tgt, IntMatrix(fwd), IntMatrix(back))


def _apply(m: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m.entries)


def class_forward(c: DivClass, cfg) -> DivClass:
    dims = cfg.dims if isinstance(cfg, LinkConfig) else tuple(cfg)
    cmap = divisor_class_map(dims)
    if c.basis != cmap.source:
        raise BasisMismatch(f"class_forward expects a class over {cmap.source}, got {c.basis}")
    return DivClass(cmap.target, _apply(cmap.forward, c.coeffs))


def class_backward(c: DivClass, cfg) -> DivClass:
    dims = cfg.dims if isinstance(cfg, LinkConfig) else tuple(cfg)
    cmap = divisor_class_map(dims)
    if c.basis != cmap.target:
        raise BasisMismatch(f"class_backward expects a class over {cmap.target}, got {c.basis}")
    return DivClass(cmap.source, _apply(cmap.backward, c.coeffs))


def source_class(dims, H: Sequence[int], E: int = 0) -> DivClass:
    return DivClass(source_basis(len(dims)), tuple(H) + (E,))


def target_class(dims, lower: Sequence[int], h: int = 0) -> DivClass:
    return DivClass(target_basis(dims), tuple(lower) + (h,))


def source_canonical(dims: Sequence[int]) -> DivClass:
    """K of Bl_y(Y): pullback of K_Y plus (dim Y - 1) E."""
    return source_class(dims, [-(n + 1) for n in dims], sum(dims) - 1)


def target_canonical(dims: Sequence[int]) -> DivClass:
    """K of the blown-up projective bundle, from the bundle and blowup formulas.

    With P(Ecal) the bundle of lines and h = c1(O(1)):
    K = pi^*(K_{Y+} - c1(Ecal)) - (rank Ecal) h, and blowing up a section of
    codimension r adds (r - 1) e_j.
    """
    r = len(dims)
    p = sum(1 for n in dims if n >= 2)
    lower = [0] * r
    for i in range(p):
        lower[i] -= dims[i]                      # K of P^{n_i - 1}
    full = tuple(range(r))
    subsets = [full] + [tuple(k for k in full if k != j) for j in range(r)]
    for I in subsets:                            # -c1(Ecal) = sum over summands of h_I
        for i in I:
            if i < p:
                lower[i] += 1
    for j in range(p, r):
        lower[j] += r - 1
    return target_class(dims, lower, -len(subsets))


def canonical_class_check(cfg) -> bool:
    dims = cfg.dims if isinstance(cfg, LinkConfig) else tuple(cfg)
    return class_forward(source_canonical(dims), dims) == target_canonical(dims)


def descent_certificate(cfg) -> list[dict]:
    """Pull back the three target classes used for descent and express each as
    aH + bH' + cE, with H' = H_1 + ... + H_p; all three classes are Galois-stable
    exactly when such integers exist.
    """
    dims = cfg.dims if isinstance(cfg, LinkConfig) else tuple(cfg)
    r = len(dims)
    p = sum(1 for n in dims if n >= 2)
    q = r - p
    rows = []
    targets = (
        ("sum h_i", target_class(dims, [1] * p + [0] * q, 0), (0, 1, -p)),
        ("h", target_class(dims, [0] * r, 1), (1, 0, -(r - 1))),
        # e_j = H_j - E, so -sum e_j = -(H - H') + qE
        ("-sum e_j", target_class(dims, [0] * p + [-1] * q, 0), (-1, 1, q)),
    )
    for name, tc, (a, b, c) in targets:
        got = class_backward(tc, dims)
        exp = source_class(dims, [a + b] * p + [a] * q, c)
        rows.append({"target": name, "pullback": str(got), "combination": (a, b, c),
                     "ok": got == exp})
    return rows


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class SourcePoint:
    """kind "Y": coords are vectors u_i in V_i.  kind "E": coords are ubar_i in Vbar_i,
    together a direction at y."""

    kind: str
    coords: tuple[tuple, ...]


@dataclass(frozen=True)
class TargetPoint:
    """A point of the target model.

    base:   normalized ubar_i for the factors with n_i >= 2 (None if undefined);
    fiber:  concatenated per-summand tensors in ``cfg.summands()`` order,
            jointly normalized;
    normal: for a point on the exceptional divisor over the section s_j,
            (j, normal direction) with the direction stored like ``fiber`` but
            with the I = {all} - {j} summand removed.
    """

    base: tuple
    fiber: tuple
    normal: tuple | None = None


def _kron(vectors: Sequence[Sequence], field) -> list:
    out = [field.one]
    for v in vectors:
        out = [a * b for a in out for b in v]
    return out


def summand_sizes(cfg: LinkConfig) -> list[int]:
    sizes = []
    for I in cfg.summands():
        s = 1
        for i in I:
            s *= cfg.dims[i]
        sizes.append(s)
    return sizes


def unpack_fiber(cfg: LinkConfig, flat: Sequence, skip: int | None = None) -> dict:
    """Split a concatenated fiber (or normal direction) back into summands."""
    out, pos = {}, 0
    for k, (I, s) in enumerate(zip(cfg.summands(), summand_sizes(cfg))):
        if skip is not None and k == skip + 1:
            continue
        out[I] = tuple(flat[pos:pos + s])
        pos += s
    return out


def _components(cfg: LinkConfig, ubars, coeffs, zero_slots):
    """Per-summand (tensor, epsilon order); zero_slots hold eps * generator."""
    F = cfg.field
    out = []
    for k, I in enumerate(cfg.summands()):
        c = coeffs[k]
        vecs = []
        order = 0
        for i in I:
            if i in zero_slots:
                vecs.append((F.one,))
                order += 1
            else:
                vecs.append(ubars[i])
        tensor = [c * x for x in _kron(vecs, F)] if c != 0 else [F.zero] * len(_kron(vecs, F))
        out.append((tensor, order))
    return out


def _assemble(cfg: LinkConfig, ubars, coeffs):
    F = cfg.field
    p, r = cfg.p, cfg.r
    zero_slots = {j for j in range(p, r) if all(x == 0 for x in ubars[j])}
    comps = _components(cfg, ubars, coeffs, zero_slots)
    live = [o for t, o in comps if any(x != 0 for x in t)]
    if not live:
        return INDETERMINATE
    m0 = min(live)
    lead = [t if o == m0 else [F.zero] * len(t) for t, o in comps]
    base = tuple(normalize_projective(ubars[i]) if any(x != 0 for x in ubars[i]) else None
                 for i in range(p))
    support = [k for k, t in enumerate(lead) if any(x != 0 for x in t)]
    normal = None
    if len(support) == 1 and support[0] >= 1 and support[0] - 1 >= p:
        j = support[0] - 1
        nxt = [t if o == m0 + 1 else [F.zero] * len(t) for k, (t, o) in enumerate(comps) if k != j + 1]
        flat = [x for t in nxt for x in t]
        if any(x != 0 for x in flat):
            normal = (j, normalize_projective(flat))
    fiber = normalize_projective([x for t in lead for x in t])
    return TargetPoint(base, fiber, normal)


def point_forward(x, cfg: LinkConfig):
    """Image of a point of Y (off the center) in the target model, or INDETERMINATE.

    The summand I of Ecal receives the I-component of u_1 (x) ... (x) u_r in the
    splitting, i.e. (prod_{i not in I} a_i) * (x)_{i in I} ubar_i.  A P^1 factor
    with ubar_j = 0 is treated to first order, which places the point on the
    exceptional divisor over s_j with its normal direction.
    """
    coords = x.coords if isinstance(x, SourcePoint) else x
    if isinstance(x, SourcePoint) and x.kind != "Y":
        raise ValueError("point_forward takes a point of Y; use exceptional_forward on E")
    if len(coords) != cfg.r:
        raise ValueError("wrong number of factors")
    splits = [cfg.split(i, u) for i, u in enumerate(coords)]
    for i, u in enumerate(coords):
        if all(cfg.field(c) == 0 for c in u):
            raise ValueError(f"factor {i + 1} has the zero vector")
    ubars = [s[1] for s in splits]
    if all(all(c == 0 for c in ub) for ub in ubars):
        raise CenterError("the point is the center of the blowup")
    if any(all(c == 0 for c in ubars[i]) for i in range(cfg.p)):
        return INDETERMINATE
    a = [s[0] for s in splits]
    coeffs = []
    for I in cfg.summands():
        c = cfg.field.one
        for i in range(cfg.r):
            if i not in I:
                c = c * a[i]
        coeffs.append(c)
    return _assemble(cfg, ubars, coeffs)


def exceptional_forward(direction, cfg: LinkConfig):
    """Image of a tangent direction (ubar_1, ..., ubar_r) at y: only the |I| = r-1 summands."""
    coords = direction.coords if isinstance(direction, SourcePoint) else direction
    F = cfg.field
    ubars = [tuple(F(c) for c in u) for u in coords]
    if len(ubars) != cfg.r or any(len(u) != n for u, n in zip(ubars, cfg.dims)):
        raise ValueError("direction must have one Vbar_i component per factor")
    if all(c == 0 for u in ubars for c in u):
        raise ValueError("zero direction")
    coeffs = [F.zero] + [F.one] * cfg.r
    return _assemble(cfg, ubars, coeffs)


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class StratumLabel:
    side: str
    kind: str              # source: "Y", "E"; target: "open", "YJ", "Ei", "EiJ"
    subset: tuple[int, ...] = ()
    index: int | None = None

    def __str__(self):
        s = "{" + ",".join(str(i + 1) for i in self.subset) + "}"
        if self.side == "source":
            return f"Y~_{s}°" if self.kind == "Y" else f"E_{s}°"
        if self.kind == "open":
            return "(Y~+)°"
        if self.kind == "YJ":
            return f"(Y~+_{s})°"
        if self.kind == "Ei":
            return f"E_{self.index + 1}°"
        return f"E_{self.index + 1},{s}°"


def _zero_set_target(cfg: LinkConfig, comps: dict, skip: int | None = None) -> tuple:
    J = []
    for j in range(cfg.r):
        if j == skip:
            continue
        I = tuple(k for k in range(cfg.r) if k != j)
        if all(x == 0 for x in comps[I]):
            J.append(j)
    return tuple(J)


def classify_stratum(point, side: str, cfg: LinkConfig) -> StratumLabel:
    full = tuple(range(cfg.r))
    if side == "source":
        if not isinstance(point, SourcePoint):
            point = SourcePoint("Y", tuple(point))
        if point.kind == "Y":
            zero = tuple(i for i, u in enumerate(point.coords)
                         if all(c == 0 for c in cfg.split(i, u)[1]))
            if len(zero) == cfg.r:
                raise CenterError("the point is the center of the blowup")
            return StratumLabel("source", "Y", zero)
        zero = tuple(i for i, u in enumerate(point.coords) if all(cfg.field(c) == 0 for c in u))
        if len(zero) == cfg.r:
            raise ValueError("zero direction")
        return StratumLabel("source", "E", zero)
    if side != "target":
        raise ValueError("side must be 'source' or 'target'")
    if point == INDETERMINATE:
        raise ValueError("cannot classify an indeterminate image")
    if point.normal is None:
        comps = unpack_fiber(cfg, point.fiber)
        if any(x != 0 for x in comps[full]):
            return StratumLabel("target", "open")
        return StratumLabel("target", "YJ", _zero_set_target(cfg, comps))
    j, direction = point.normal
    comps = unpack_fiber(cfg, direction, skip=j)
    if any(x != 0 for x in comps[full]):
        return StratumLabel("target", "Ei", (), j)
    return StratumLabel("target", "EiJ", _zero_set_target(cfg, comps, skip=j), j)


# ---------------------------------------------------------------------------
# sampling


def random_source_point(cfg: LinkConfig, rng, zero_set: Sequence[int] = ()) -> SourcePoint:
    """Random point of Y whose coincidence set {i : [u_i] = [v_i]} is exactly zero_set."""
    F = cfg.field
    coords = []
    for i, n in enumerate(cfg.dims):
        while True:
            a = F.random_element(rng)
            ubar = [F.random_element(rng) for _ in range(n)]
            if i in zero_set:
                if a != 0:
                    ubar = [F.zero] * n
                    break
            elif any(x != 0 for x in ubar):
                break
        v = cfg.base[i]
        u = [a * c for c in v]
        for k, x in zip(cfg.complement(i), ubar):
            u[k] = u[k] + x
        coords.append(tuple(u))
    return SourcePoint("Y", tuple(coords))


def random_direction(cfg: LinkConfig, rng, zero_set: Sequence[int] = ()) -> SourcePoint:
    F = cfg.field
    coords = []
    for i, n in enumerate(cfg.dims):
        if i in zero_set:
            coords.append((F.zero,) * n)
            continue
        while True:
            ubar = tuple(F.random_element(rng) for _ in range(n))
            if any(x != 0 for x in ubar):
                break
        coords.append(ubar)
    return SourcePoint("E", tuple(coords))


def normalize_source(cfg: LinkConfig, x: SourcePoint) -> tuple:
    return tuple(normalize_projective(u) for u in x.coords)


def stratum_census(cfg: LinkConfig, rng, samples: int) -> dict:
    """Codimension 0/1 correspondence on random points; returns counts and violations."""
    report = {"open": 0, "section": 0, "exceptional": 0, "violations": [], "collisions": 0}
    seen: dict = {}
    for _ in range(samples):
        x = random_source_point(cfg, rng)
        lab = classify_stratum(x, "source", cfg)
        img = point_forward(x, cfg)
        tl = classify_stratum(img, "target", cfg)
        if lab.subset != () or tl.kind != "open":
            report["violations"].append(("open", str(lab), str(tl)))
        key = img
        src = normalize_source(cfg, x)
        if key in seen and seen[key] != src:
            report["collisions"] += 1
        seen[key] = src
        report["open"] += 1
    for j in range(cfg.p, cfg.r):
        for _ in range(max(1, samples // max(1, cfg.q))):
            x = random_source_point(cfg, rng, zero_set=(j,))
            lab = classify_stratum(x, "source", cfg)
            tl = classify_stratum(point_forward(x, cfg), "target", cfg)
            if lab.subset != (j,) or tl.kind != "Ei" or tl.index != j:
                report["violations"].append(("section", str(lab), str(tl)))
            report["section"] += 1
    for _ in range(samples):
        d = random_direction(cfg, rng)
        lab = classify_stratum(d, "source", cfg)
        tl = classify_stratum(exceptional_forward(d, cfg), "target", cfg)
        if lab.subset != () or tl.kind != "YJ" or tl.subset != ():
            report["violations"].append(("exceptional", str(lab), str(tl)))
        report["exceptional"] += 1
    return report
