#!/usr/bin/env python3
"""Run the full identity suite and print the human-readable report.

Equivalent to `toruszeta identities`; kept as a script so the suite can be
run straight from a checkout.  Pass --filter/--format/--tol-override through.
"""

import sys

from toruszeta.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["identities", *sys.argv[1:]]))
