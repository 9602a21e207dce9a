"""Congested clique simulation of the block-greedy maximal independent set algorithm."""

from cliquemis.algorithm2 import Algo2Config, Algo2Result, Algo2Stats, run_algorithm2
from cliquemis.graph import Graph, gnp_random, random_regular
from cliquemis.greedy import GreedyTrace, VertexOrder, check_residual_sparsity, greedy_mis, uniform_order
from cliquemis.kernels import BACKEND
from cliquemis.verify import brute_force_all_mis, verify_mis

__version__ = "0.1.0"

__all__ = [
    "Algo2Config",
    "Algo2Result",
    "Algo2Stats",
    "BACKEND",
    "Graph",
    "GreedyTrace",
    "VertexOrder",
    "brute_force_all_mis",
    "check_residual_sparsity",
    "gnp_random",
    "greedy_mis",
    "random_regular",
    "run_algorithm2",
    "uniform_order",
    "verify_mis",
]
