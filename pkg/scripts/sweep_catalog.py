"""Verify every family of a catalog over a parameter grid and summarize.

    python3 scripts/sweep_catalog.py --catalog modality3 --rmax 5 --smax 5 --kmax 4
"""

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from singspec import catalog
from singspec.cli import default_jobs, run_items


@dataclass
class SweepConfig:
    catalog: str = "modality3"
    rmax: int = 5
    smax: int = 5
    kmax: int = 4
    jobs: int = 0


def sweep(cfg: SweepConfig) -> list[dict]:
    cat = catalog.load(cfg.catalog)
    items = [(cfg.catalog, fam.name, p) for fam in cat for p in catalog.parameter_grid(fam, cfg.rmax, cfg.smax, cfg.kmax)]
    return run_items(items, cfg.jobs or default_jobs())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(SweepConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    cfg = SweepConfig(**vars(ap.parse_args()))
    start = time.time()
    rows = sweep(cfg)
    per_family = Counter(r["family"] for r in rows)
    failed = [r for r in rows if not r["ok"]]
    for fam, n in per_family.items():
        bad = sum(1 for r in failed if r["family"] == fam)
        print(f"{fam:22s} {n:4d} instances  {'ok' if not bad else f'{bad} FAILED'}")
    for r in failed:
        print("FAIL", r["family"], r["params"], r["mismatches"])
    print(f"{len(rows)} instances, {len(failed)} failures, {time.time() - start:.1f}s")


if __name__ == "__main__":
    main()
