"""Command-line entry point: `fanorat <command> ...`.

Exit codes: 0 success, 1 mismatch against stored values, 2 malformed input,
3 a mathematical precondition fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import determinantal_pipelines as dp
from . import galois_picard as gp
from . import group_cohomology as gc
from . import toric_degeneration as td
from . import toric_link as tl
from .exact_algebra import FieldSizeError, parse_field, poly_to_json

OK, MISMATCH, BAD_INPUT, PRECONDITION = 0, 1, 2, 3


class InputError(ValueError):
    pass


class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, s: str = ""):
        self.lines.append(s)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _parse_dims(s: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in s.strip("()").replace(" ", "").split(",") if x)
    except ValueError:
        raise InputError(f"cannot parse dimensions {s!r}")
    if not dims:
        raise InputError("empty dimension list")
    return dims


def _field(spec: str):
    try:
        return parse_field(spec)
    except (ValueError, FieldSizeError) as e:
        raise InputError(str(e))


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}")


def _group(text: str, degree: int = 4) -> gp.PermGroup:
    named = gp.standard_transitive_s4()
    if text in named:
        return named[text]
    if text.startswith("C") and text[1:].isdigit():
        return gp.cyclic_group(int(text[1:]))
    if text.startswith("S") and text[1:].isdigit():
        return gp.symmetric_group(int(text[1:]))
    gens = [g for g in text.replace(";", ",").split(",") if g.strip()]
    try:
        return gp.PermGroup(degree, [gp.parse_cycles(g, degree) for g in gens])
    except (ValueError, AssertionError) as e:
        raise InputError(f"cannot parse group {text!r}: {e}")


# ---------------------------------------------------------------------------
# commands


def cmd_table(args, rep: Report) -> int:
    stored = {t: (ft.index, ft.rho, ft.degree, ft.genus) for t, ft in gp.FAMILIES.items()}
    if args.constants:
        raw = _load_json(args.constants)
        try:
            stored = {tuple(json.loads(k.replace("(", "[").replace(")", "]"))): tuple(v) for k, v in raw.items()}
        except (ValueError, TypeError) as e:
            raise InputError(f"malformed constants file: {e}")
    rep.line(f"{'type':<12}{'index':>6}{'rho':>5}{'(-K)^3':>8}{'genus':>7}{'h12':>5}  status")
    bad = 0
    rows = []
    for tag, ft in gp.FAMILIES.items():
        got = (gp.recomputed_index(ft), ft.rho, gp.recomputed_degree(ft), gp.recomputed_degree(ft) // 2 + 1)
        want = stored.get(tag)
        status = "OK" if want == got else f"MISMATCH stored={want}"
        bad += status != "OK"
        rep.line(f"{ft.name:<12}{got[0]:>6}{got[1]:>5}{got[2]:>8}{got[3]:>7}{ft.h12:>5}  {status}")
        rows.append({"type": ft.name, "index": got[0], "rho": got[1], "degree": got[2], "genus": got[3],
                     "h12": ft.h12, "ok": status == "OK"})
    rep.data["table"] = rows
    return MISMATCH if bad else OK


def _compact(c) -> str:
    """Also show classes like 3h - 2e1 - ... - 2e4 as 3h - 2Σe_i."""
    lower = [(n, v) for n, v in zip(c.basis, c.coeffs) if n != "h"]
    es = [v for n, v in lower if n.startswith("e")]
    hs = [v for n, v in lower if n.startswith("h")]
    parts = [f"{c['h']}h" if c["h"] not in (0, 1) else ("h" if c["h"] == 1 else "")]
    for letter, vals in (("h", hs), ("e", es)):
        if vals and len(set(vals)) == 1 and vals[0] and len(vals) > 1:
            v = vals[0]
            parts.append(f"{'-' if v < 0 else '+'} {'' if abs(v) == 1 else abs(v)}Σ{letter}_i")
        elif any(vals):
            return str(c)
    return " ".join(p for p in parts if p).lstrip("+ ")


def cmd_link(args, rep: Report) -> int:
    dims = _parse_dims(args.dims)
    F = _field(args.field)
    try:
        cfg = tl.LinkConfig.standard(dims, F)
    except ValueError as e:
        raise InputError(str(e))
    r = len(dims)
    rep.line(f"link for dims {dims} over {F.spec()}")
    rep.line("class map (source -> target):")
    classes = [("H_i", tl.source_class(dims, [1 if k == i else 0 for k in range(r)], 0)) for i in range(r)]
    classes.append(("E", tl.source_class(dims, [0] * r, 1)))
    classes.append(("sum H_i - E", tl.source_class(dims, [1] * r, -1)))
    classes.append(("-K", -tl.source_canonical(dims)))
    out = []
    for name, c in classes:
        img = tl.class_forward(c, dims)
        back = tl.class_backward(img, dims)
        rep.line(f"  {str(c):<32} -> {str(img):<40} ({_compact(img)})  roundtrip={'OK' if back == c else 'FAIL'}")
        out.append({"source": str(c), "target": str(img), "roundtrip": back == c})
    canon = tl.canonical_class_check(dims)
    rep.line(f"canonical classes: K_source -> {tl.class_forward(tl.source_canonical(dims), dims)}; "
             f"K_target = {tl.target_canonical(dims)}; {'OK' if canon else 'FAIL'}")
    cert = tl.descent_certificate(dims)
    for row in cert:
        rep.line(f"descent: {row['target']:<9} pulls back to {row['pullback']:<40} {'OK' if row['ok'] else 'FAIL'}")
    census = tl.stratum_census(cfg, random.Random(args.seed), args.samples)
    rep.line(f"strata ({args.samples} samples, seed {args.seed}): open={census['open']} "
             f"section={census['section']} exceptional={census['exceptional']} "
             f"violations={census['violations']} collisions={census['collisions']}")
    rep.data.update(classes=out, canonical=canon, descent=cert, census=census)
    ok = canon and all(row["ok"] for row in cert) and all(o["roundtrip"] for o in out) \
        and not census["violations"] and not census["collisions"]
    return OK if ok else MISMATCH


def _net33_input(args):
    if args.path:
        try:
            return dp.net33_from_json(_load_json(args.path))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, dp.PreconditionError):
                raise
            raise InputError(f"malformed net file: {e}")
    F = _field(args.field)
    net, x0, _, _ = dp.search_smooth_net33(F, args.seed, args.kind)
    return net, x0


def cmd_net33(args, rep: Report) -> int:
    net, x0 = _net33_input(args)
    x0 = dp.validate_base_point(net, x0)
    F = net.field
    disc = dp.discriminant_quartic(net)
    sm = dp.is_smooth_quartic(disc) if not disc.degenerate else None
    lines = dp.lines_through_base_point(net, x0)
    xp = dp.xplus_equation(net, x0)
    rep.line(f"net over {F.spec()}")
    rep.line(f"discriminant quartic: degree {disc.poly.total_degree()}, "
             f"{'degenerate' if disc.degenerate else ('smooth' if sm.smooth else 'singular')}"
             + (f" (witness {[F.format(x) for x in sm.witness]})" if sm and sm.witness else ""))
    rep.line(f"lines through x0: kernel dims ({lines.left_kernel_dim}, {lines.right_kernel_dim}), "
             f"has_line = {str(lines.has_line).lower()}")
    rep.line(f"det xi: bidegree {xp.bidegree}")
    rep.data.update(smooth=bool(sm and sm.smooth), kernel_dims=[lines.left_kernel_dim, lines.right_kernel_dim],
                    has_line=lines.has_line, xplus_bidegree=xp.bidegree, discriminant=poly_to_json(disc.poly))
    if lines.has_line:
        rep.line("conic bundle skipped: the base point lies on a line")
        return PRECONDITION
    rng = random.Random(args.seed)
    lams = [dp.random_projective_point(F, 2, rng) for _ in range(args.samples)]
    if F.order is not None and F.order ** 2 < 20000:
        lams += [list(p) for p in dp.points_on_discriminant(net, limit=args.samples)]
    cen = dp.discriminant_census(net, x0, lams)
    rep.line(f"conic fibers: {cen['samples']} sampled, {cen['singular']} singular, "
             f"{len(cen['violations'])} disagreements with the discriminant")
    rep.data["census"] = {k: (len(v) if isinstance(v, list) else v) for k, v in cen.items()}
    return MISMATCH if cen["violations"] else OK


def cmd_net222(args, rep: Report) -> int:
    if args.path:
        try:
            net = dp.net222_from_json(_load_json(args.path))
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed net file: {e}")
    else:
        net = dp.random_net222(_field(args.field), random.Random(args.seed))
    xi = dp.build_xi_222(net, random.Random(args.seed))
    rep.line(f"xi column multidegrees: {list(xi.column_degrees)}")
    ok = list(xi.column_degrees) == list(dp.XI222_COLUMN_TWISTS)
    for name, c in xi.certificates.items():
        rep.line(f"  {name}: rank-2 point {'found' if c['ok'] else 'NOT found'}")
        ok = ok and c["ok"]
    rep.data.update(column_degrees=xi.column_degrees, certificates=xi.certificates)
    return OK if ok else MISMATCH


def _bool(s: str) -> bool:
    s = s.lower()
    if s in ("1", "true", "yes", "y"):
        return True
    if s in ("0", "false", "no", "n"):
        return False
    raise InputError(f"expected a boolean, got {s!r}")


def cmd_verdict(args, rep: Report) -> int:
    try:
        t = gp.fano_type(args.type)
    except (KeyError, ValueError) as e:
        raise InputError(f"unknown type {args.type!r}: {e}")
    has_point = _bool(args.has_point)
    if args.group:
        g = _group(args.group, t.r)
        rho_k = gp.invariant_rank(g)
        rep.line(f"Galois image {g.describe()}: rank of invariant Picard lattice {rho_k}")
        if rho_k != 1:
            rep.line("Picard rank over k is not 1: the classification does not apply")
            return PRECONDITION
    v = gp.verdict(t, has_point)
    rep.line(v.summary())
    rep.line(f"reason: {v.reason}")
    rep.data.update(type=t.name, has_k_point=has_point, unirational=v.unirational, rational=v.rational,
                    summary=v.summary())
    return OK


def cmd_cohomology(args, rep: Report) -> int:
    g = _group(args.group)
    if args.module not in ("trivial", "permutation"):
        raise InputError("module must be 'trivial' or 'permutation'")
    if not 0 <= args.degree <= gc.MAX_DEGREE:
        raise InputError(f"degree must lie in 0..{gc.MAX_DEGREE}")
    h = gc.cohomology_of(g, args.degree, args.module)
    rep.line(str(h))
    rep.line(f"H^{args.degree}({g.describe()}, {args.module}) = {gc.format_groups(h)}")
    rep.data.update(group=g.describe(), degree=args.degree, module=args.module, factors=h)
    if args.degree == 3 and args.module == "trivial" and g.degree == 4 and g.is_transitive():
        rep.line(f"norm-one obstruction: {'nonzero' if h else 'zero'}; contains V4: {gp.contains_klein(g)}"
                 " (consistent with the Klein-group hypothesis)")
    return OK


def cmd_degeneration(args, rep: Report) -> int:
    sub = args.sub
    status = OK
    if sub in ("weights", "all"):
        wd = td.weight_decomposition()
        zero = [v for w, v in wd.items() if w.vector == (0, 0, 0, 0)][0]
        rep.line(f"weights: {len(wd)} distinct, {sum(map(len, wd.values()))} monomials, "
                 f"zero-weight multiplicity {len(zero)}")
        f = td.invariant_divisor_through()
        rep.line(f"invariant divisor through y0: {f.polynomial()}")
    if sub in ("singular", "all"):
        for c in td.singular_points():
            rep.line(f"{c.label}: local equation {c.local_equation} in {','.join(c.chart_variables)}; "
                     f"quadratic rank {c.quadratic_rank}; {'ODP' if c.ok else 'FAIL'}")
            status = status if c.ok else MISMATCH
    if sub in ("curves", "all"):
        inc = td.orbit_incidence_partition()
        for c in inc["curves"]:
            rep.line(f"curve {c.pattern}: on X0 {c.on_x0}; limits {c.limits}")
        rep.line(f"incidence partitions the six points: {inc['partition']}")
        status = status if inc["partition"] and inc["all_on_x0"] else MISMATCH
    if sub == "probe":
        F = _field(args.field)
        if F.degree != 1:
            raise InputError("the probe runs over a prime field")
        if args.form:
            try:
                form = td.QuadrilinearForm.from_json(_load_json(args.form)).to_field(F)
            except (KeyError, TypeError, ValueError) as e:
                raise InputError(f"malformed form file: {e}")
        else:
            form = td.random_form_through_y0(F, random.Random(args.seed))
        try:
            rows = td.pencil_smoothness_probe(form, F.p, max_degree=args.degree)
        except ValueError as e:
            raise dp.PreconditionError(str(e))
        smooth = 0
        for r in rows:
            desc = "zero form" if r.degenerate else ("smooth" if r.smooth else f"singular {r.singular_points}")
            rep.line(f"t = {F.format(r.t)}: {desc}")
            smooth += r.smooth
        rep.line(f"{smooth} of {len(rows)} members smooth up to degree {args.degree}")
        rep.data["probe"] = [{"t": F.format(r.t), "degenerate": r.degenerate,
                              "singular_points": r.singular_points} for r in rows]
    return status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="101", help="Q, p or p^d")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=100)
    common.add_argument("--out", help="write the report to this file")
    common.add_argument("--json", help="write a machine-readable sidecar to this file")

    ap = argparse.ArgumentParser(prog="fanorat", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("table", parents=[common], help="recompute the six families")
    p.add_argument("--constants", help="JSON file of stored (index, rho, degree, genus) to compare with")
    p = sub.add_parser("link", parents=[common], help="toric link class map and strata")
    p.add_argument("--dims", required=True, help="e.g. 1,1,1,1")
    for name in ("net33", "net222"):
        p = sub.add_parser(name, parents=[common], help=f"type ({'3,3' if name == 'net33' else '2,2,2'}) pipeline")
        p.add_argument("path", nargs="?", help="net JSON file; omitted: seeded random net")
        if name == "net33":
            p.add_argument("--kind", default="generic", choices=("generic", "has_line"))
    p = sub.add_parser("verdict", parents=[common], help="rationality verdict")
    p.add_argument("type", help="e.g. (3,3)")
    p.add_argument("has_point", help="true or false")
    p.add_argument("--group", help="Galois image, cycles such as '(1 2)' or a name S4, A4, D4, V4, C4")
    p = sub.add_parser("cohomology", parents=[common], help="group cohomology")
    p.add_argument("group")
    p.add_argument("module", nargs="?", default="trivial")
    p.add_argument("degree", type=int)
    p = sub.add_parser("degeneration", parents=[common], help="toric degeneration checks")
    p.add_argument("sub", choices=("weights", "singular", "curves", "probe", "all"))
    p.add_argument("--form", help="JSON coefficients of the second form")
    p.add_argument("--degree", type=int, default=2, help="largest extension degree for the probe")
    return ap


COMMANDS = {"table": cmd_table, "link": cmd_link, "net33": cmd_net33, "net222": cmd_net222,
            "verdict": cmd_verdict, "cohomology": cmd_cohomology, "degeneration": cmd_degeneration}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return BAD_INPUT if e.code else OK
    rep = Report()
    try:
        code = COMMANDS[args.command](args, rep)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except (dp.PreconditionError, tl.CenterError, gp.UnsupportedType, gc.ActionError) as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return PRECONDITION
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    text = rep.text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(json.dumps(rep.data, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return code


def _jsonable(x):
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    return str(x)


if __name__ == "__main__":
    sys.exit(main())
