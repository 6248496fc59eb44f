"""H^3(G, Z) for the transitive subgroups of S4 against the Klein-group test."""

from fanorat.galois_picard import contains_klein, standard_transitive_s4
from fanorat.group_cohomology import cohomology, format_groups, permutation_module, trivial_module


def main():
    print(f"{'G':<4}{'|G|':>5}  {'H^3(G,Z)':<10}{'H^1(G,Z^4)':<12}contains V4")
    for name, g in standard_transitive_s4().items():
        h3 = cohomology(trivial_module(g), 3)
        h1 = cohomology(permutation_module(g), 1)
        print(f"{name:<4}{g.order:>5}  {format_groups(h3):<10}{format_groups(h1):<12}{contains_klein(g)}")


if __name__ == "__main__":
    main()
