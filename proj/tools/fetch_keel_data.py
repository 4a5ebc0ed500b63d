#!/usr/bin/env python3
"""Populate data/keel/ with the 64 two-class KEEL datasets used by the benchmarks.

The .dat files are taken from the `imbalanced-databases` wheel, which redistributes
the KEEL imbalanced collection unchanged. Each dataset lands in
data/keel/<name>/<name>.dat, the layout the roced CLI expects.
"""
import argparse
import pathlib
import shutil
import subprocess
import sys
import tempfile
import zipfile

# name, instances, features, imbalance ratio, safe minority percentage
CATALOG = pathlib.Path(__file__).resolve().parent.parent / "data" / "keel_catalog.csv"

# the wheel stores a few datasets under a different directory/file name
ALIASES = {
    "newthyroid2": "new_thyroid2/new_thyroid2.dat",
    "new-thyroid1": "new_thyroid1/new-thyroid1.dat",
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(CATALOG.parent / "keel"))
    ap.add_argument("--wheel", help="pre-downloaded imbalanced_databases wheel")
    args = ap.parse_args()

    names = [line.split(",")[0] for line in CATALOG.read_text().splitlines()[1:] if line]
    out = pathlib.Path(args.out)

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel
        if wheel is None:
            subprocess.run([sys.executable, "-m", "pip", "download", "imbalanced-databases==0.1.1",
                            "--no-deps", "-d", tmp], check=True)
            wheel = next(pathlib.Path(tmp).glob("*.whl"))
        zf = zipfile.ZipFile(wheel)
        for name in names:
            member = "imbalanced_databases/data/" + ALIASES.get(name, f"{name}/{name}.dat")
            target = out / name / f"{name}.dat"
            target.parent.mkdir(parents=True, exist_ok=True)
            with zf.open(member) as src, open(target, "wb") as dst:
                shutil.copyfileobj(src, dst)
    print(f"wrote {len(names)} datasets to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
