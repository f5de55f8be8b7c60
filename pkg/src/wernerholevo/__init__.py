"""Werner-Holevo channel: exact product-channel output spectra and entropy certificates."""

from .channel import (
    apply_channel,
    apply_product_channel,
    choi_matrix,
    holevo_capacity,
    output_pure,
    product_output_matrix,
)
from .entropy import EntropyDecomposition, entropy_batch, entropy_decomposition
from .errors import InputError, NumericalError, WernerHolevoError
from .linalg import eig_hermitian, von_neumann_entropy
from .minimize import MinimizationReport, minimize_over_simplex
from .spectrum import OutputSpectrum, cubic_roots_d3, full_spectrum, secular_roots

__version__ = "0.1.0"

__all__ = [
    "EntropyDecomposition",
    "InputError",
    "MinimizationReport",
    "NumericalError",
    "OutputSpectrum",
    "WernerHolevoError",
    "apply_channel",
    "apply_product_channel",
    "choi_matrix",
    "cubic_roots_d3",
    "eig_hermitian",
    "entropy_batch",
    "entropy_decomposition",
    "full_spectrum",
    "holevo_capacity",
    "minimize_over_simplex",
    "output_pure",
    "product_output_matrix",
    "secular_roots",
    "von_neumann_entropy",
]
