"""Dataset compression on rank-1 lattices.

Compress N weighted samples into L lattice nodes and two weight
vectors, so that (regularised) mean-squared losses of trigonometric
models evaluate in O(L) with a computable error bound.
"""

from .analysis import (
    BoundQuery,
    BoundReport,
    EnvelopeReport,
    constants,
    loss_gap_envelope,
    select_parameter,
    total_bound,
)
from .compression import (
    Dataset,
    WeightSet,
    compress,
    dirichlet_kernel,
    weights_general_fft,
    weights_lattice_data,
    weights_naive,
    weights_rectangle,
    weights_step_cross,
    weights_step_cross_pair,
)
from .index_sets import (
    DEFAULT_CAP,
    CapExceeded,
    IndexSet,
    cardinality_bound_cross,
    enumerate_cross,
    enumerate_rectangle,
    enumerate_shape_vectors,
    enumerate_step_cross,
    r_alpha,
    rectangle_halfwidths,
)
from .lattice import (
    LatticeRule,
    ProductWeights,
    bound_constant_C,
    cbc_construct,
    generate_points,
    phi_alpha,
    worst_case_error,
)
from .model import (
    LossReport,
    TrigModel,
    compressed_loss,
    eval_model,
    eval_model_on_lattice,
    exact_loss,
    korobov_norm,
    lattice_alias_offenders,
    model_squared,
    regularizer,
    wiener_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BoundQuery",
    "BoundReport",
    "CapExceeded",
    "Dataset",
    "DEFAULT_CAP",
    "EnvelopeReport",
    "IndexSet",
    "LatticeRule",
    "LossReport",
    "ProductWeights",
    "TrigModel",
    "WeightSet",
    "bound_constant_C",
    "cardinality_bound_cross",
    "cbc_construct",
    "compress",
    "compressed_loss",
    "constants",
    "dirichlet_kernel",
    "enumerate_cross",
    "enumerate_rectangle",
    "enumerate_shape_vectors",
    "enumerate_step_cross",
    "eval_model",
    "eval_model_on_lattice",
    "exact_loss",
    "generate_points",
    "korobov_norm",
    "lattice_alias_offenders",
    "loss_gap_envelope",
    "model_squared",
    "phi_alpha",
    "r_alpha",
    "rectangle_halfwidths",
    "regularizer",
    "select_parameter",
    "total_bound",
    "weights_general_fft",
    "weights_lattice_data",
    "weights_naive",
    "weights_rectangle",
    "weights_step_cross",
    "weights_step_cross_pair",
    "wiener_norm",
    "worst_case_error",
    "__version__",
]
