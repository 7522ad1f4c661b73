"""Randomly glued k-ary trees and their exact reduction to the biased path.

Two height-n k-ary trees are joined leaf-to-leaf through a uniformly random
matching of attachment slots (k slots per leaf, so the gluing is a k-regular
bipartite multigraph; parallel edges are allowed, with a rejection-sampled
simple variant available).  Height classes of the simple random walk on the
glued graph are strongly lumpable, so projecting onto them reproduces the
biased walk on the 2n-path exactly; verify_lumping certifies this.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .jacobi import WalkParams

__all__ = [
    "Vertex",
    "GluedTree",
    "PathChain",
    "vertex_label",
    "build_glued_tree",
    "tree_walk_probabilities",
    "path_transition_matrix",
    "path_class_index",
    "class_projection",
    "verify_lumping",
    "edge_lines",
]

Vertex = tuple[int, int, int]  # (side, height, index within its level)


def vertex_label(v: Vertex) -> str:
    """Stable text label used by edge-list exports."""
    return f"s{v[0]}h{v[1]}i{v[2]}"


@dataclass(frozen=True)
class GluedTree:
    """Immutable glued-tree graph: vertex list, edge multiset and the seed
    that produced the gluing."""

    k: int
    n: int
    seed: int
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[Vertex, Vertex], ...]
    simple: bool = False


@dataclass(frozen=True, eq=False)
class PathChain:
    """Row-stochastic transition matrix of the biased walk on the 2n-path."""

    n: int
    transition: np.ndarray


def build_glued_tree(k: int, n: int, seed: int, simple: bool = False) -> GluedTree:
    """Build two k-ary trees of height n glued by a seeded uniform matching.

    Each leaf carries k attachment slots; a uniform permutation pairs the
    side-1 slots with the side-2 slots, which makes the glue multigraph
    k-regular on both leaf sets.  With simple=True the permutation is
    redrawn until no leaf pair is joined twice.  Deterministic given seed.
    """
    if k < 2:
        raise ValueError(f"arity k must be >= 2, got {k}")
    if n < 2:
        raise ValueError(f"height n must be >= 2, got {n}")
    vertices = tuple(
        (s, h, i) for s in (1, 2) for h in range(1, n + 1) for i in range(k ** (h - 1))
    )
    edges: list[tuple[Vertex, Vertex]] = []
    for s in (1, 2):
        for h in range(1, n):
            for i in range(k ** (h - 1)):
                for c in range(k):
                    edges.append(((s, h, i), (s, h + 1, i * k + c)))
    slots1 = [(1, n, i) for i in range(k ** (n - 1)) for _ in range(k)]
    slots2 = [(2, n, i) for i in range(k ** (n - 1)) for _ in range(k)]
    rng = np.random.default_rng(seed)
    for _ in range(10000):
        perm = rng.permutation(len(slots2))
        glue = [(slots1[j], slots2[perm[j]]) for j in range(len(slots1))]
        if not simple or len(set(glue)) == len(glue):
            break
    else:
        raise RuntimeError("could not sample a simple gluing after 10000 attempts")
    return GluedTree(
        k=k,
        n=n,
        seed=seed,
        vertices=vertices,
        edges=tuple(edges) + tuple(glue),
        simple=simple,
    )


def tree_walk_probabilities(tree: GluedTree) -> sparse.csr_matrix:
    """Simple-random-walk transition matrix on the glued tree.

    Each incident edge is chosen uniformly; parallel glue edges count with
    multiplicity.  Rows/columns follow tree.vertices order.
    """
    index = {v: j for j, v in enumerate(tree.vertices)}
    m = len(tree.vertices)
    multiplicity: dict[tuple[int, int], int] = {}
    for u, v in tree.edges:
        a, b = index[u], index[v]
        multiplicity[(a, b)] = multiplicity.get((a, b), 0) + 1
        multiplicity[(b, a)] = multiplicity.get((b, a), 0) + 1
    degree = np.zeros(m)
    for (a, _), count in multiplicity.items():
        degree[a] += count
    rows, cols, vals = [], [], []
    for (a, b), count in sorted(multiplicity.items()):
        rows.append(a)
        cols.append(b)
        vals.append(count / degree[a])
    return sparse.csr_matrix((vals, (rows, cols)), shape=(m, m))


def path_transition_matrix(params: WalkParams) -> PathChain:
    """The 2n-state chain the glued-tree walk lumps onto: reflecting ends,
    up-probability q on the first half and p on the second."""
    n, p, q = params.n, params.p, params.q
    size = 2 * n
    t = np.zeros((size, size))
    t[0, 1] = 1.0
    t[size - 1, size - 2] = 1.0
    for i in range(2, n + 1):
        t[i - 1, i] = q
        t[i - 1, i - 2] = p
    for i in range(n + 1, 2 * n):
        t[i - 1, i] = p
        t[i - 1, i - 2] = q
    return PathChain(n=n, transition=t)


def path_class_index(v: Vertex, n: int) -> int:
    """0-based path position of a tree vertex: height h on side 1 maps to
    path vertex h, height h on side 2 to path vertex 2n + 1 - h."""
    side, h, _ = v
    return h - 1 if side == 1 else 2 * n - h


def class_projection(tree: GluedTree) -> np.ndarray:
    """Indicator matrix (num vertices x 2n) of the height classes."""
    proj = np.zeros((len(tree.vertices), 2 * tree.n))
    for j, v in enumerate(tree.vertices):
        proj[j, path_class_index(v, tree.n)] = 1.0
    return proj


def verify_lumping(tree: GluedTree, steps: int) -> float:
    """Maximum discrepancy between height-class projections of the tree walk
    and the path chain, over all single-vertex starts and all times <= steps.

    Distributions are evolved exactly (dense vectors, no sampling), so on a
    correct build the returned error is pure roundoff regardless of the
    gluing drawn.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    walk = tree_walk_probabilities(tree).toarray()
    proj = class_projection(tree)
    params = WalkParams.from_arity(tree.n, tree.k)
    path = path_transition_matrix(params).transition
    classes = np.array([path_class_index(v, tree.n) for v in tree.vertices])
    tree_dist = np.eye(len(tree.vertices))
    path_dist = np.eye(2 * tree.n)
    worst = 0.0
    for _ in range(steps):
        tree_dist = tree_dist @ walk
        path_dist = path_dist @ path
        diff = tree_dist @ proj - path_dist[classes]
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def edge_lines(tree: GluedTree) -> list[str]:
    """One `u v` line per edge, in build order, with stable labels."""
    return [f"{vertex_label(u)} {vertex_label(v)}" for u, v in tree.edges]
