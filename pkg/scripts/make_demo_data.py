"""Write small demo inputs for the CLI into a directory.

    python3 scripts/make_demo_data.py demo/
"""

import argparse
from pathlib import Path

import numpy as np

from kzcoreset.instances import acceptance_family, grid_planar
from kzcoreset.io import write_graph, write_points


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("outdir")
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)

    fam = acceptance_family(args.seed)
    eu, gr = fam[6], fam[5]  # 10 of 11 ambient points; graph with k=2, z=1
    # Euclidean: data points plus the remaining ambient ids as candidates
    ids = eu.X.points
    write_points(out / "points.csv", ids, eu.X.weights, coords=eu.metric.coords[ids])
    rest = np.setdiff1d(np.arange(eu.metric.size), ids)
    if len(rest):
        write_points(out / "ambient.csv", rest, np.ones(len(rest)), coords=eu.metric.coords[rest])

    write_graph(out / "graph.txt", gr.metric.size, gr.metric.edges)
    write_points(out / "graph_points.csv", np.arange(gr.X.size), gr.X.weights, vertices=gr.X.points)

    G, _ = grid_planar(4, 5, seed=1)
    write_graph(out / "grid.txt", G.n, G.edges, G.edge_rotation())
    write_graph(out / "triangle.txt", 3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], {0: [0, 2], 1: [1, 0], 2: [2, 1]})
    print(f"wrote demo inputs to {out}")


if __name__ == "__main__":
    main()
