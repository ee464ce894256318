"""Shared output helper for the experiment scripts."""

import argparse
import csv
from pathlib import Path


def out_dir(description: str) -> Path:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--out", default="out/scripts", help="directory for the CSV output")
    path = Path(parser.parse_args().out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(path: Path, header, rows) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path}")
