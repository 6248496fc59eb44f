"""The torus-invariant divisor X0 in (P^1)^4, its double points and a pencil through it."""

import random

from fanorat import toric_degeneration as td
from fanorat.exact_algebra import GF


def main():
    print(f"X0 = {td.invariant_divisor_through().polynomial()}")
    for c in td.singular_points():
        print(f"  {c.label}: {c.local_equation} (rank {c.quadratic_rank})")
    for c in td.orbit_incidence_partition()["curves"]:
        print(f"  orbit curve {c.pattern} meets {sorted(c.incidence)}")
    g = td.random_form_through_y0(GF(7), random.Random(1))
    for r in td.pencil_smoothness_probe(g, 7, max_degree=2):
        print(f"  t = {r.t}: {'smooth' if r.smooth else r.singular_points}")


if __name__ == "__main__":
    main()
