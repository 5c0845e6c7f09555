#!/usr/bin/env python3
"""Run the acceptance battery and print one line per criterion."""

import argparse
import json
import sys

from rtlab.suite import run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--criteria", help="comma separated numbers (default: all)")
    ap.add_argument("--catalog")
    ap.add_argument("--json", action="store_true", help="print details as JSON too")
    args = ap.parse_args()
    nums = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    results = run_suite(nums, catalog=args.catalog)
    for res in results:
        print(res.line())
        if args.json:
            print(json.dumps(res.to_json(), sort_keys=True, default=str))
    return 0 if all(r.status == "pass" for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
