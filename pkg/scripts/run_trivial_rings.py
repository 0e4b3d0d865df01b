#!/usr/bin/env python3
"""R = o_K for both example fields and Q(i): Pic(R) must equal Cl_K."""

import sys

from nrc.pipelines import trivial_ring_checks

if __name__ == "__main__":
    checks = trivial_ring_checks()
    for c in checks:
        print(c.line())
    sys.exit(0 if all(c.ok for c in checks) else 3)
