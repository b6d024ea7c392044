"""Steiner rooted k-arc-connected orientations of multigraphs."""
from .connectivity import CutCertificate, SteinerInstance, Verdict, lam, min_cut, verify
from .graph import AS_LISTED, REVERSED, UNDECIDED, DiGraph, GraphError, MultiGraph, build_multigraph, orient
from .solver import RInstance, SolveResult, brute_force_solve, solve, solve_r, solve_with_preoriented

__all__ = [
    "AS_LISTED", "REVERSED", "UNDECIDED", "CutCertificate", "DiGraph", "GraphError", "MultiGraph",
    "RInstance", "SolveResult", "SteinerInstance", "Verdict", "brute_force_solve", "build_multigraph",
    "lam", "min_cut", "orient", "solve", "solve_r", "solve_with_preoriented", "verify",
]
