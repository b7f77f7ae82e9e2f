"""Simultaneous-message protocol simulation and the random-access-code bound."""

from .protocols import (
    EXACT, FAIL, P1_FALLBACK, P1_PROBLEM, P2_PROBLEM, Message, P1Input, P2Input, Transcript,
    edges_inside, estimate_success, gen_matching, gf2_dot, non_garbage_probability,
    p1_private_sqrt, p1_private_sqrt_exact, p1_pub_exact, p1_pub_protocol,
    p2_entangled, p2_entangled_exact, p2_entangled_success, p2_sublinear,
    p2_sublinear_exact, to_one_based, validate_p1, validate_p2,
)
from .rac import PredictorSpec, binary_entropy, rac_bound
from .statevector import StateVector, n_qubits

__all__ = [
    "EXACT", "FAIL", "P1_FALLBACK", "P1_PROBLEM", "P2_PROBLEM", "Message", "P1Input", "P2Input",
    "PredictorSpec", "StateVector", "Transcript", "binary_entropy", "edges_inside",
    "estimate_success", "gen_matching", "gf2_dot", "non_garbage_probability",
    "p1_private_sqrt", "p1_private_sqrt_exact", "p1_pub_exact", "p1_pub_protocol",
    "p2_entangled", "p2_entangled_exact", "p2_entangled_success", "p2_sublinear",
    "p2_sublinear_exact", "rac_bound", "to_one_based", "validate_p1", "validate_p2", "n_qubits",
]
