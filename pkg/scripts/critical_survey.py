"""Survey of critical section directions across dimensions.

Runs the multistart scan for each requested dimension and prints one
JSON object per dimension with the deduplicated critical classes, their
classifications and basin sizes.
"""

import argparse
import json
import time

from cube_sections import ScanConfig, scan


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    parser.add_argument("--seeds", type=int, default=500)
    parser.add_argument("--rng", type=int, default=0)
    args = parser.parse_args()

    for dim in args.dims:
        start = time.monotonic()
        points = scan(ScanConfig(dimension=dim, seed_count=args.seeds, rng_seed=args.rng))
        elapsed = time.monotonic() - start
        print(
            json.dumps(
                {
                    "dimension": dim,
                    "seconds": round(elapsed, 2),
                    "points": [p.to_dict() for p in points],
                }
            )
        )


if __name__ == "__main__":
    main()
