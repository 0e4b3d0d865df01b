#!/usr/bin/env python3
"""Run the first worked example (Q(sqrt -710), R = Z[1/7] o_K) and print PASS/FAIL per check.

    python3 scripts/run_example1.py [ring.toml]
"""

import sys

from nrc.pipelines import example1_checks


def main(argv):
    path = argv[1] if len(argv) > 1 else "rings/example1.toml"
    checks = example1_checks(path)
    for c in checks:
        print(c.line())
        if not c.ok:
            for k, v in c.detail.items():
                print(f"      {k}: {v}")
    return 0 if all(c.ok for c in checks) else 3


if __name__ == "__main__":
    sys.exit(main(sys.argv))
