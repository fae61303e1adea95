#!/usr/bin/env python3
"""Writes the bundled 200-row AVA-layout and Photo.net-layout sample files.

The rows are generated, not copied from either dataset: vote counts come from
a rounded-normal rater model so the files exercise the parsers with realistic
shapes and totals.
"""
import random
import sys
from pathlib import Path


def votes(rng, bins, total, centre, spread):
    counts = [0] * bins
    for _ in range(total):
        s = round(rng.gauss(centre, spread))
        counts[min(max(s, 1), bins) - 1] += 1
    return counts


def main(out_dir: Path) -> None:
    rng = random.Random(20240611)
    out_dir.mkdir(parents=True, exist_ok=True)

    with open(out_dir / "ava_sample.txt", "w") as f:
        for row in range(1, 201):
            image = 950000 + rng.randrange(0, 50000) * 7 + row
            total = rng.randint(78, 549)
            counts = votes(rng, 10, total, rng.uniform(3.0, 7.5), rng.uniform(0.8, 2.0))
            tags = (rng.randrange(0, 66), rng.randrange(0, 66))
            challenge = rng.randrange(1, 1400)
            f.write(" ".join(map(str, [row, image, *counts, *tags, challenge])) + "\n")

    with open(out_dir / "photonet_sample.csv", "w") as f:
        for row in range(1, 201):
            total = rng.randint(10, 60)
            counts = votes(rng, 7, total, rng.uniform(3.5, 6.0), rng.uniform(0.6, 1.4))
            f.write(",".join([f"pn{row:05d}", *map(str, counts)]) + "\n")

    with open(out_dir / "photonet_split.csv", "w") as f:
        for row in range(1, 201):
            f.write(f"pn{row:05d},{'test' if row % 10 == 0 else 'train'}\n")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
