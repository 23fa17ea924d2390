"""Hertling inequality over the modality-3 catalog, with the tightest cases.

Spectra are computed from the Newton filtration, not read from the catalog closed forms.

    python3 scripts/hertling_grid.py --cap 10 --show 10
"""

import argparse
from dataclasses import dataclass

from singspec import catalog
from singspec.hertling import hertling_check
from singspec.spectrum import spectrum_newton


@dataclass
class GridConfig:
    cap: int = 10
    show: int = 10


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(GridConfig()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    cfg = GridConfig(**vars(ap.parse_args()))
    rows = []
    for fam in catalog.load():
        for params in catalog.parameter_grid(fam, cfg.cap, cfg.cap, cfg.cap):
            sp = spectrum_newton(catalog.instantiate(fam, params, check_mu=False))
            v = hertling_check(sp)
            # compare slack relative to the range so families of different size line up
            rows.append((v.slack / v.rhs if v.rhs else 0, fam.name, params, v))
    rows.sort(key=lambda r: r[0])
    violations = [r for r in rows if not r[3].holds]
    print(f"{len(rows)} instances, {len(violations)} violations")
    print("tightest (slack / rhs):")
    for rel, name, params, v in rows[: cfg.show]:
        print(f"  {name:22s} {str(params):22s} mu={v.count:3d} slack={v.slack} ({float(rel):.4f})")


if __name__ == "__main__":
    main()
