"""Regenerate the shipped net fixtures in src/fanorat/data (seeded, deterministic)."""

import json
import random
from pathlib import Path

from fanorat import determinantal_pipelines as dp
from fanorat.exact_algebra import GF

DATA = Path(__file__).resolve().parents[1] / "src" / "fanorat" / "data"


def write(name, payload):
    (DATA / f"{name}.json").write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print(name, payload.get("certificate", ""))


def main():
    DATA.mkdir(exist_ok=True)
    F = GF(101)
    for k, seed in enumerate((11, 12, 13), start=1):
        net, x0, cert, tries = dp.search_smooth_net33(F, seed)
        write(f"net33_generic_{k}", dp.net33_to_json(net, x0, cert, seed=seed, kind="generic", tries=tries))
    net, x0, cert, tries = dp.search_smooth_net33(F, 21, "has_line")
    write("net33_has_line", dp.net33_to_json(net, x0, cert, seed=21, kind="has_line", tries=tries))
    net, x0, cert, tries = dp.search_smooth_net33(GF(7, 2), 31, "twisted")
    write("net33_twisted", dp.net33_to_json(net, x0, cert, seed=31, kind="twisted", tries=tries))
    net, x0, cert, tries = dp.search_smooth_net33(GF(5), 41)
    write("net33_small", dp.net33_to_json(net, x0, cert, seed=41, kind="generic", tries=tries))
    net, x0, (u, w) = dp.singular_net33(F, random.Random(51))
    write("net33_singular", dp.net33_to_json(net, x0, dp.net33_certificate(net, x0), seed=51, kind="singular",
                                              kernel_pair=[[F.format(x) for x in u], [F.format(x) for x in w]]))
    for k, seed in enumerate((61, 62), start=1):
        net = dp.random_net222(F, random.Random(seed))
        xi = dp.build_xi_222(net, random.Random(seed))
        write(f"net222_generic_{k}", dp.net222_to_json(net, seed=seed, certificate={
            "column_degrees": [list(c) for c in xi.column_degrees],
            "rank2": {n: c["ok"] for n, c in xi.certificates.items()}}))


if __name__ == "__main__":
    main()
