#!/usr/bin/env python3
"""Convert a Planetoid citation dataset (ind.<name>.* pickles) into the text
formats this toolkit reads:

  edges.txt     one undirected "u v" pair per line
  features.txt  sparse triplets with a "# shape R C" header
  labels.txt    "node label" per labeled node
  train.txt / val.txt / test.txt   one node id per line

Usage: prepare_planetoid.py --input DIR --name cora --output DIR
The input directory must hold ind.<name>.{x,y,tx,ty,allx,ally,graph} and
ind.<name>.test.index.
"""
import argparse
import os
import pickle
import sys

import numpy as np
import scipy.sparse as sp


def load_part(path):
    with open(path, "rb") as f:
        return pickle.load(f, encoding="latin1")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", required=True, help="directory with ind.<name>.* files")
    ap.add_argument("--name", default="cora", help="dataset name (cora, citeseer, pubmed)")
    ap.add_argument("--output", required=True, help="output directory")
    args = ap.parse_args()

    def part(p):
        return load_part(os.path.join(args.input, f"ind.{args.name}.{p}"))

    x, y = part("x"), part("y")
    tx, ty = part("tx"), part("ty")
    allx, ally = part("allx"), part("ally")
    graph = part("graph")
    test_idx = np.loadtxt(
        os.path.join(args.input, f"ind.{args.name}.test.index"), dtype=int
    )
    test_idx_sorted = np.sort(test_idx)

    # Test rows arrive permuted; restore positional order. Citeseer has gaps
    # in the test index range (isolated nodes): give them zero rows/labels.
    full_range = np.arange(test_idx_sorted[0], test_idx_sorted[-1] + 1)
    tx_full = sp.lil_matrix((len(full_range), x.shape[1]))
    tx_full[test_idx - test_idx_sorted[0], :] = sp.lil_matrix(tx)
    ty_full = np.zeros((len(full_range), y.shape[1]), dtype=ty.dtype)
    ty_full[test_idx - test_idx_sorted[0], :] = ty

    features = sp.vstack((sp.csr_matrix(allx), sp.csr_matrix(tx_full))).tocoo()
    labels_onehot = np.vstack((ally, ty_full))
    n = features.shape[0]

    os.makedirs(args.output, exist_ok=True)

    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            if u != v:
                edges.add((min(u, v), max(u, v)))
    with open(os.path.join(args.output, "edges.txt"), "w") as f:
        for u, v in sorted(edges):
            f.write(f"{u} {v}\n")

    with open(os.path.join(args.output, "features.txt"), "w") as f:
        f.write(f"# shape {n} {features.shape[1]}\n")
        order = np.lexsort((features.col, features.row))
        for i in order:
            f.write(f"{features.row[i]} {features.col[i]} {features.data[i]:.17g}\n")

    labeled = labels_onehot.sum(axis=1) > 0
    label_ids = labels_onehot.argmax(axis=1)
    with open(os.path.join(args.output, "labels.txt"), "w") as f:
        for i in range(n):
            if labeled[i]:
                f.write(f"{i} {label_ids[i]}\n")

    splits = {
        "train.txt": np.arange(len(y)),
        "val.txt": np.arange(len(y), len(y) + 500),
        "test.txt": test_idx_sorted,
    }
    for fname, ids in splits.items():
        with open(os.path.join(args.output, fname), "w") as f:
            for i in ids:
                if labeled[i]:
                    f.write(f"{i}\n")

    print(
        f"{args.name}: {n} nodes, {len(edges)} undirected edges, "
        f"{features.shape[1]} features, {labels_onehot.shape[1]} classes, "
        f"splits {len(splits['train.txt'])}/{len(splits['val.txt'])}/{len(splits['test.txt'])}",
        file=sys.stderr,
    )


if __name__ == "__main__":
    main()
