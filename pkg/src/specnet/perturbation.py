"""Exact effect of one edge addition/deletion on the Laplacian moments.

Only closed walks touching an endpoint change, and those of length at most
2r+1 live inside the union of the two endpoints' r-balls, so the moment
increments are trace differences of two small submatrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .graph import Graph, GraphError, NodeSet, bfs_distances, canonical
from .spectra import local_laplacian, power_traces

Kind = Literal["add", "delete"]


@dataclass(frozen=True)
class EdgeEditDelta:
    edge: tuple[int, int]
    kind: Kind
    delta: np.ndarray  # m_k(G +- e) - m_k(G), k = 1..2r+1
    union_size: int


def union_ball(g: Graph, i: int, j: int, r: int) -> NodeSet:
    members = set(bfs_distances(g, i, r)) | set(bfs_distances(g, j, r))
    return NodeSet.anchored(i, members)


def trace_delta(g: Graph, e: tuple[int, int], kind: Kind, r: int,
                union: NodeSet | None = None,
                L: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    """Integer-valued ``Trace(U'^k) - Trace(U^k)`` for k = 1..2r+1, and |union|.

    ``L`` is an optional precomputed full Laplacian of ``g`` to gather ``U``
    from; without it ``U`` is built from the adjacency of the union only.
    """
    i, j = canonical(*e)
    if union is None:
        union = union_ball(g, i, j, r)
    if L is None:
        U = local_laplacian(g, union)
    else:
        idx = list(union.nodes)
        U = L[np.ix_(idx, idx)]
    pos = union.position
    a, b = pos[i], pos[j]
    sign = 1.0 if kind == "add" else -1.0
    Up = U.copy()
    Up[a, a] += sign
    Up[b, b] += sign
    Up[a, b] -= sign
    Up[b, a] -= sign
    K = 2 * r + 1
    # entries are small integers, so float traces are exact
    return power_traces(Up, K) - power_traces(U, K), len(union)


def moment_delta(g: Graph, e: tuple[int, int], kind: Kind, r: int,
                 n: int | None = None) -> EdgeEditDelta:
    if r < 1:
        raise ValueError("radius must be >= 1")
    i, j = canonical(*e)
    present = g.has_edge(i, j)
    if kind == "add":
        if present:
            raise GraphError(f"cannot add ({i}, {j}): edge present")
        if j not in bfs_distances(g, i, r):
            raise GraphError(f"cannot add ({i}, {j}): endpoints farther apart than r={r}")
    elif kind == "delete":
        if not present:
            raise GraphError(f"cannot delete ({i}, {j}): edge absent")
    else:
        raise ValueError(f"unknown edit kind {kind!r}")
    n = g.n if n is None else n
    dtr, size = trace_delta(g, (i, j), kind, r)
    return EdgeEditDelta((i, j), kind, dtr / n, size)


def first_order_eig_shift(L: np.ndarray, e: tuple[int, int],
                          vectors: np.ndarray | None = None) -> np.ndarray:
    """First-order eigenvalue shifts ``(v_k[i] - v_k[j])^2`` for adding ``e``.

    Diagnostic baseline only; eigenvectors come from :func:`sym_eig` unless
    supplied.
    """
    from .spectra import sym_eig

    if vectors is None:
        vectors = sym_eig(L).vectors
    i, j = e
    return (vectors[i, :] - vectors[j, :]) ** 2
