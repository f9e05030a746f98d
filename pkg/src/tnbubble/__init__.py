"""Tensor-network evaluation by bubbling, with additive-approximation simulation.

The package evaluates fully contracted tensor networks exactly (by labeling
enumeration or sequential contraction), analyzes bubblings and their
swallowing-operator norms, and simulates the sampling algorithm that estimates
a network's value to within ``epsilon`` times the product of those norms.
Builders are included for q-state partition-function networks, proper-coloring
counters, and quantum-circuit acceptance probabilities.
"""

from . import circuits, statmech
from .bubbling import Bubbling, ScaleReport, SwallowingOperator, frontiers, greedy_bubbling, operator_norm, scale, swallowing_operator
from .errors import GuardError, NetworkFormatError, NumericError
from .netcore import (
    Tensor,
    TensorNetwork,
    contract_pair,
    eval_contract,
    eval_labeling_sum,
    labeling_weight,
    network_from_json,
    network_to_json,
    reduce_degree,
    tensor_product,
)
from .qsim import ApproxResult, approximate, evolve, evolve_statevector, hadamard_test, shots_for
from .unitarize import SubUnitary, embed_rect, embed_square

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "Bubbling",
    "GuardError",
    "NetworkFormatError",
    "NumericError",
    "ScaleReport",
    "SubUnitary",
    "SwallowingOperator",
    "Tensor",
    "TensorNetwork",
    "approximate",
    "contract_pair",
    "embed_rect",
    "embed_square",
    "eval_contract",
    "eval_labeling_sum",
    "evolve",
    "evolve_statevector",
    "frontiers",
    "greedy_bubbling",
    "hadamard_test",
    "labeling_weight",
    "network_from_json",
    "network_to_json",
    "operator_norm",
    "reduce_degree",
    "scale",
    "shots_for",
    "swallowing_operator",
    "tensor_product",
]
