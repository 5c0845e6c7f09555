#!/usr/bin/env python3
"""Sweep the sphere-graph angle slack and compare measured densities with the targets.

For each setting the script reports the cross density, the inner density of
side A, and whether a triangle or a short odd cycle inside a side was found.
"""

import argparse

from rtlab.certify import find_short_odd_cycle, has_clique
from rtlab.constructions import SphereGraphParams, cross_density_target, inner_density_target, sides, sphere_graph
from rtlab.graph import induced, mask_of


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=150)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'cross':>6} {'inner':>6} {'e(A,B)/N^2':>11} {'target':>7} {'inner':>7} {'target':>7} {'K3':>4} {'oddA':>5}")
    for cross in (0.05, 0.1, 0.15, 0.25, 0.35):
        for inner in (0.1, 0.3, 0.6):
            p = SphereGraphParams(dim=args.dim, points_per_side=args.points, cross_angle_slack=cross,
                                  inner_angle_slack=inner, seed=args.seed)
            g = sphere_graph(p)
            a, b = sides(g)
            n = len(a)
            cd = g.edges_between(mask_of(a), mask_of(b)) / (n * n)
            ga, _ = induced(g, a)
            idn = ga.num_edges() / (n * (n - 1) / 2)
            tri = has_clique(g, 3).found
            odd = find_short_odd_cycle(ga, 7).found
            print(f"{cross:6.2f} {inner:6.2f} {cd:11.4f} {cross_density_target(p):7.4f} "
                  f"{idn:7.4f} {inner_density_target(p):7.4f} {'yes' if tri else 'no':>4} {'yes' if odd else 'no':>5}")


if __name__ == "__main__":
    main()
