"""Regenerate the product fixtures grid.kg and cube.kg from the grid construction."""
import argparse
from pathlib import Path

from kgraph.constructions import grid
from kgraph.io import dump_spec

PRODUCTS = {
    "grid": ((3, 1), "# Product of a line with three edges and a line with one edge."),
    "cube": ((1, 1, 1), "# Product of three one-edge lines: a 3-graph on the vertices of a cube."),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parents[1] / "src" / "kgraph" / "fixtures"))
    args = ap.parse_args()
    Path(args.dir).mkdir(parents=True, exist_ok=True)
    for name, (lengths, header) in PRODUCTS.items():
        path = Path(args.dir) / f"{name}.kg"
        path.write_text(header + "\n" + dump_spec(grid(lengths).spec()), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
