"""Write a schema-valid synthetic stand-in csv (NOT the real BCCD data).

    python scripts/make_synthetic_bccd.py out/synthetic_bccd.csv --seed 0
"""
import argparse
from pathlib import Path

from pcamlp.dataio import render_bccd
from pcamlp.synthetic import synthetic_bccd

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("path", type=Path)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    a.path.parent.mkdir(parents=True, exist_ok=True)
    a.path.write_text(render_bccd(synthetic_bccd(a.seed)))
    print(f"wrote {a.path}")
