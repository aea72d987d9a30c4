#!/usr/bin/env python3
"""Regenerate every figure-sweep data series into a single output directory.

Usage: python scripts/run_figure_sweeps.py [OUT_DIR]

Writes one CSV (plus metadata sidecar) per preset, and the combined
delta-family series. All sweeps run in exact mode and are byte-reproducible.
"""

import sys
from pathlib import Path

from polarsim.cli import main as cli_main

PRESET_NAMES = ["fig4", "fig6", "fig8", "fig10", "delta-family"]


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out/figures")
    for preset in PRESET_NAMES:
        code = cli_main(["sweep", "--preset", preset, "--mode", "exact", "--out", str(out_dir)])
        if code != 0:
            return code
    print(f"all sweeps written to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
