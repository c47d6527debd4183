"""Moments from myopic views: each node sees only its r-ball.

The k-th moment equals the average over nodes of the anchor diagonal entry
of ``L_{i,r}^k``, for every k up to 2r+1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, neighborhood
from .spectra import local_laplacian


@dataclass(frozen=True)
class NodeContribution:
    node: int
    mu: np.ndarray  # mu[k-1] = [L_{i,r}^k]_{00}, k = 1..2r+1


def node_contribution(g: Graph, i: int, r: int, K: int | None = None) -> NodeContribution:
    if r < 1:
        raise ValueError("radius must be >= 1")
    K = 2 * r + 1 if K is None else K
    s = neighborhood(g, i, r)
    L = local_laplacian(g, s)
    mu = np.empty(K)
    # only row 0 of each power is needed
    row = L[0]
    mu[0] = row[0]
    for k in range(1, K):
        row = row @ L
        mu[k] = row[0]
    return NodeContribution(i, mu)


def aggregate_moments(contribs: Sequence[NodeContribution]) -> np.ndarray:
    if not contribs:
        raise ValueError("no contributions")
    lengths = {c.mu.size for c in contribs}
    if len(lengths) != 1:
        raise ValueError(f"mismatched contribution lengths {sorted(lengths)}")
    return np.mean([c.mu for c in contribs], axis=0)


def local_moments(g: Graph, r: int, K: int | None = None) -> np.ndarray:
    """Global moments ``m_1..m_K`` (K <= 2r+1) from per-node r-ball views."""
    K = 2 * r + 1 if K is None else K
    if K > 2 * r + 1:
        raise ValueError(f"K={K} exceeds 2r+1={2 * r + 1}: local views cannot resolve it")
    return aggregate_moments([node_contribution(g, i, r, K) for i in range(g.n)])
