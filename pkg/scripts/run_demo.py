#!/usr/bin/env python3
"""Generate demo data and run the whole scoring and reporting pipeline on it."""

from __future__ import annotations

import argparse
from pathlib import Path

from make_demo_data import generate

from sumsim.cli import main as sumsim_main


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("demo_run"), help="working directory")
    parser.add_argument("--items", type=int, default=60)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    config_path = generate(args.out, items=args.items, seed=args.seed)
    rc = sumsim_main(["report", "--config", str(config_path)])
    if rc != 0:
        return rc

    report_path = args.out / "reports" / "correlation_report.txt"
    print()
    print(report_path.read_text(encoding="utf-8"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
