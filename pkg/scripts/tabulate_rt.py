#!/usr/bin/env python3
"""Tabulate exact RT(n, m, K_t) for small n and optionally store the rows in a catalog."""

import argparse

from rtlab.certify import search_budget
from rtlab.rt import Catalog, RTQuery, rt_exact, solve_into_catalog


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--t", type=int, default=3)
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--catalog", help="JSONL catalog to fill")
    ap.add_argument("--budget", type=int, default=10**7)
    args = ap.parse_args()

    ms = list(range(2, args.max_m + 1))
    cat = Catalog(args.catalog) if args.catalog else None
    print(f"RT(n, m, K{args.t})")
    print("n   " + "".join(f"m={m:<6}" for m in ms))
    with search_budget(args.budget):
        for n in range(1, args.max_n + 1):
            row = []
            for m in ms:
                q = RTQuery(n, m, args.t)
                rec = solve_into_catalog(cat, q) if cat else rt_exact(q)
                cell = "-" if rec.value is None else str(rec.value)
                if rec.status == "inconclusive":
                    cell += "?"
                row.append(f"{cell:<8}")
            print(f"{n:<4}" + "".join(row))


if __name__ == "__main__":
    main()
