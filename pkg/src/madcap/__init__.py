"""Multi-level amplitude damping channels: construction, degradability and capacities."""
from .channel import (
    InvalidRatesError,
    KrausSet,
    RateMatrix,
    RateVector3,
    apply,
    complement,
    compose_rates,
    kraus_set,
    validate_rates,
)
from .degradability import classify, classify_effective
from .capacity import (
    CapacityEstimate,
    Status,
    cp,
    max_diag_coherent_info,
    q_bounds,
    qe,
)

__version__ = "0.1.0"
