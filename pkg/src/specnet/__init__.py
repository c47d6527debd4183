"""Decentralized design of network topologies by Laplacian spectral moments."""

from .graph import Graph, NodeSet, bridges, is_connected, local_subgraph, neighborhood
from .spectra import (graph_moments, laplacian, moments_from_spectrum, moments_via_trace,
                      spectral_pseudodistance, spectrum, sym_eig)
from .local_moments import aggregate_moments, local_moments, node_contribution
from .perturbation import moment_delta
from .controller import RunConfig, SpectralTarget, design_step, run_design

__all__ = [
    "Graph", "NodeSet", "bridges", "is_connected", "local_subgraph", "neighborhood",
    "graph_moments", "laplacian", "moments_from_spectrum", "moments_via_trace",
    "spectral_pseudodistance", "spectrum", "sym_eig",
    "aggregate_moments", "local_moments", "node_contribution",
    "moment_delta", "RunConfig", "SpectralTarget", "design_step", "run_design",
]
