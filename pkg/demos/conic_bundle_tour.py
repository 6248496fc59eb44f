"""Walk through the (3,3) pipeline on shipped fixtures."""

import random

from fanorat import determinantal_pipelines as dp


def main():
    net, x0 = dp.load_fixture("net33_generic_1")
    F = net.field
    disc = dp.discriminant_quartic(net)
    print(f"net over {F.spec()}, base point v1={x0.v1} v2={x0.v2}")
    print(f"discriminant quartic has {len(disc.poly.terms)} terms; smooth: {dp.is_smooth_quartic(disc).smooth}")
    print(f"det xi bidegree: {dp.xplus_equation(net, x0).bidegree}")

    pts = dp.points_on_discriminant(net, limit=3)
    for lam in pts:
        comps = dp.singular_fiber_components(net, x0, lam)
        print(f"lambda = {[F.format(c) for c in lam]}: fiber splits into rulings {[c.ruling for c in comps]}")

    rng = random.Random(0)
    lams = [dp.random_projective_point(F, 2, rng) for _ in range(200)] + [list(p) for p in pts]
    cen = dp.discriminant_census(net, x0, lams)
    print(f"census: {cen['samples']} fibers, {cen['singular']} singular, {len(cen['violations'])} violations")

    tw, tx0 = dp.load_fixture("net33_twisted")
    rows = [dp.frobenius_swap(tw, tx0, lam) for lam in dp.points_on_discriminant(tw)
            if all(tw.field.in_prime_field(c) for c in lam)]
    print(f"twisted net over {tw.field.spec()}: {sum(r['swapped'] for r in rows)} of {len(rows)} "
          "rational discriminant points have Frobenius swapping the two components")


if __name__ == "__main__":
    main()
