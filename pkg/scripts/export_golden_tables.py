"""
Golden-table exporter.
Computes the Poincaré table of every catalogue knot and writes one JSON file
per knot, plus an index CSV, into the output directory.
"""

import argparse
import json
import os
import sys
import time

import pandas as pd

# Add parent directory to path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from braid import parse_braid
from config import DEFAULT_DEGREE_CAP, KNOT_CATALOGUE
from homology import compute_table, generator_counts
from oracle import burau_alexander, equal_up_to_unit


def export_knot(key: str, out_dir: str, degree_cap: int) -> dict:
    """Compute one knot and write ``<key>.json``; returns the index row."""
    entry = KNOT_CATALOGUE[key]
    w = parse_braid(entry["braid"])
    started = time.time()
    C, table = compute_table(w, degree_cap=degree_cap)
    delta = burau_alexander(w)
    payload = {
        "knot": key,
        "name": entry["name"],
        "braid": str(w),
        **table.to_dict(),
        "alexander": [[e, c] for e, c in delta.terms],
        "verdict": "MATCH" if equal_up_to_unit(table.euler, delta.doubled()) else "MISMATCH",
        "generators": generator_counts(C, table),
    }
    path = os.path.join(out_dir, f"{key}.json")
    with open(path, "w") as f:
        json.dump(payload, f, indent=2, ensure_ascii=False)
    return {
        "knot": key,
        "braid": str(w),
        "total_rank": table.total_rank,
        "verdict": payload["verdict"],
        "seconds": round(time.time() - started, 2),
        "file": path,
    }


def export_catalogue(keys, out_dir: str, degree_cap: int = DEFAULT_DEGREE_CAP) -> pd.DataFrame:
    print("=" * 60)
    print("📊 Exporting golden tables")
    print(f"   Knots: {keys}")
    print(f"   Output: {out_dir}")
    print("=" * 60)

    os.makedirs(out_dir, exist_ok=True)
    rows = []
    for key in keys:
        print(f"\n🔍 {key} ({KNOT_CATALOGUE[key]['braid']})...")
        try:
            row = export_knot(key, out_dir, degree_cap)
        except Exception as e:
            print(f"  ❌ Error processing {key}: {e}")
            continue
        icon = "✅" if row["verdict"] == "MATCH" else "⚠️"
        print(f"  {icon} rank {row['total_rank']}, {row['verdict']} in {row['seconds']}s")
        rows.append(row)

    index = pd.DataFrame(rows, columns=["knot", "braid", "total_rank", "verdict", "seconds", "file"])
    index.to_csv(os.path.join(out_dir, "index.csv"), index=False)
    return index


def main(argv=None):
    ap = argparse.ArgumentParser(description="Write golden homology tables for the knot catalogue.")
    ap.add_argument("--out", default="golden", help="output directory")
    ap.add_argument("--knot", action="append", choices=sorted(KNOT_CATALOGUE), help="restrict to these knots")
    ap.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    args = ap.parse_args(argv)

    print("🚀 Golden-table exporter")
    index = export_catalogue(args.knot or list(KNOT_CATALOGUE), args.out, args.degree_cap)

    print("\n" + "=" * 60)
    print(f"🎉 Exported {len(index)} table(s)")
    print("=" * 60)
    return 0 if len(index) == len(args.knot or KNOT_CATALOGUE) else 1


if __name__ == "__main__":
    sys.exit(main())
