"""Coverage certification, projection and influence maximization toolkit.

The heavy lifting lives in the compiled extension ``subdiff._core``; this
package re-exports its public surface.
"""

from ._core import (
    ActivationTable,
    CoverageCertificate,
    GreedyTrace,
    Network,
    ProjectionResult,
    apply_connection,
    brute_force_opt,
    certify_model,
    certify_vertex,
    connection_matrix,
    estimate_spread,
    exact_distribution,
    exact_multi_spread,
    exact_spread,
    falsify_equivalence,
    greedy_select,
    load_network,
    load_network_file,
    mobius_transform,
    project_model,
    project_vertex,
    simulate_multi,
    simulate_once,
    theorem2_check,
    zeta_transform,
)

__all__ = [
    "ActivationTable",
    "CoverageCertificate",
    "GreedyTrace",
    "Network",
    "ProjectionResult",
    "apply_connection",
    "brute_force_opt",
    "certify_model",
    "certify_vertex",
    "connection_matrix",
    "estimate_spread",
    "exact_distribution",
    "exact_multi_spread",
    "exact_spread",
    "falsify_equivalence",
    "greedy_select",
    "load_network",
    "load_network_file",
    "mobius_transform",
    "project_model",
    "project_vertex",
    "simulate_multi",
    "simulate_once",
    "theorem2_check",
    "zeta_transform",
]

__version__ = "0.1.0"
