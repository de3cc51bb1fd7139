"""Minimum PAPR of good codes at P=100, n=1e4, eps=1e-3 for each root-equation variant.

Usage: python scripts/reproduce_remark.py [--config FILE]
"""
import argparse

from paprbounds.cli import reproduce_remark_rows
from paprbounds.config import load_config
from paprbounds.papr_converse import VARIANTS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=None)
    cfg = load_config(ap.parse_args().config)
    rows = reproduce_remark_rows(cfg)
    cols = list(VARIANTS) + ["as-printed,log2-radius"]
    print(f"{'fraction':>9} {'reference':>10} " + " ".join(f"{c:>24}" for c in cols))
    for r in rows:
        cells = []
        for c in cols:
            db = r[f"papr_db[{c}]"]
            # a bound below 0 dB is vacuous (PAPR >= 1 always); -inf means A = 0
            txt = "A = 0" if db == float("-inf") else f"{db:.2f} dB" + (" (vacuous)" if db < 0 else "")
            cells.append(f"{txt:>24}")
        print(f"{r['fraction']:>9} {r['paper_db']:>7.2f} dB " + " ".join(cells))


if __name__ == "__main__":
    main()
