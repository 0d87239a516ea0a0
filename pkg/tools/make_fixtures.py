"""Regenerate the JSON setups shipped in ``grasstensor/fixtures``."""

import json
from pathlib import Path

from grasstensor.geometry import DimensionInvariants, ProjectionSetup, canonical_setup, nongeneric_example

OUT = Path(__file__).resolve().parent.parent / "src" / "grasstensor" / "fixtures"

CANONICAL_DIMS = [
    (7, (6, 4, 4), (3, 3, 2)),
    (6, (5, 4, 3), (3, 2, 2)),
    (9, (8, 6, 4), (4, 3, 3)),
    (5, (2, 4, 4), (2, 2, 2)),
    (8, (5, 5, 5), (1, 4, 4)),
    (12, (7, 8, 8), (1, 6, 6)),
    (9, (3, 8, 8), (3, 3, 4)),
]

WORKED = (
    [[2, 0, 3, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]],
    [[-1, -1, 1], [0, 1, 0], [0, 0, 0], [0, 0, 0], [1, 0, 0]],
    [[0, 0, 0], [0, 0, 0], [1, 0, 0], [-1, 1, 0], [0, 0, 1]],
)

NONGENERIC = {
    "free": dict(a=2, b=3, c=5, d=7, e=11, f=13, g=17, h=19, k=23),
    "degenerate": dict(a=2, b=3, c=5, d=7, e=2, f=1, g=17, h=6, k=3),
}


def tag(k, h, a):
    return f"k{k}_h{''.join(map(str, h))}_a{''.join(map(str, a))}"


def dump(name, setup, **extra):
    obj = setup.to_json()
    obj.update(extra)
    (OUT / f"{name}.json").write_text(json.dumps(obj, indent=1) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    for k, h, a in CANONICAL_DIMS:
        dump(f"canonical_{tag(k, h, a)}", canonical_setup(DimensionInvariants.from_dims(k, h, a)))
    dump(f"setup_{tag(4, (3, 2, 2), (2, 2, 1))}", ProjectionSetup.from_transposes(4, WORKED, (2, 2, 1)))
    for label, params in NONGENERIC.items():
        dump(f"nongeneric_{label}", nongeneric_example(**params), parameters=params)


if __name__ == "__main__":
    main()
