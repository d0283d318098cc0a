"""Generate the bundled synthetic categorical dataset.

Labels follow a noisy linear rule over the feature indices, tuned so a
trained model sits near 88% self-accuracy and abductive explanations
average around twelve features: long enough that the benchmark's size
targets actually force trimming.

Usage: python3 scripts/make_dataset.py [--rows N] [--features M]
                                       [--seed S] [--out PATH]
"""

from __future__ import annotations

import argparse
import math
import random
from pathlib import Path

from nbxplain import Dataset, FeatureSpec, save_dataset


def build(rows: int, features: int, seed: int) -> Dataset:
    rng = random.Random(seed)
    sizes = [rng.choice([2, 3, 3, 4]) for _ in range(features)]
    specs = tuple(
        FeatureSpec(f"f{i:02d}", tuple(f"v{k}" for k in range(d)))
        for i, d in enumerate(sizes)
    )
    coef = [rng.uniform(0.3, 1.4) for _ in range(features)]
    data = []
    for _ in range(rows):
        x = tuple(rng.randrange(d) for d in sizes)
        score = sum(
            coef[i] * (x[i] / (sizes[i] - 1) - 0.5) for i in range(features)
        )
        p = 1 / (1 + math.exp(-3.5 * score))
        data.append((x, 1 if rng.random() < p else 0))
    return Dataset(features=specs, classes=("no", "yes"), rows=tuple(data))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=1200)
    parser.add_argument("--features", type=int, default=24)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", default="data/synth.csv")
    args = parser.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    data = build(args.rows, args.features, args.seed)
    save_dataset(data, out)
    positives = sum(label for _, label in data.rows)
    print(
        f"wrote {len(data.rows)} rows x {len(data.features)} features to {out} "
        f"({positives} positive / {len(data.rows) - positives} negative)"
    )


if __name__ == "__main__":
    main()
