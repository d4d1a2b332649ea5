"""Write a synthetic SNAP-format directed edge list.

Defaults match the largest p2p-Gnutella graph (36,682 nodes, 88,328 edges):

    python scripts/make_snap_file.py gnutella_like.txt
"""
import argparse
import random


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("path")
    p.add_argument("--nodes", type=int, default=36_682)
    p.add_argument("--edges", type=int, default=88_328)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    if a.edges > a.nodes * (a.nodes - 1):
        p.error("too many edges for that many nodes")
    rng = random.Random(a.seed)
    edges = set()
    while len(edges) < a.edges:
        u, v = rng.randrange(a.nodes), rng.randrange(a.nodes)
        if u != v:
            edges.add((u, v))
    with open(a.path, "w") as fh:
        fh.write(f"# Directed synthetic graph\n# Nodes: {a.nodes} Edges: {a.edges}\n")
        fh.write("# FromNodeId\tToNodeId\n")
        for u, v in sorted(edges):
            fh.write(f"{u}\t{v}\n")


if __name__ == "__main__":
    main()
