"""Entanglement measured as distance to the separable states."""

from .errors import EntDistError
from .locc import KrausChannel, apply, random_locc, validate
from .measures import (
    bures_distance,
    fidelity,
    measurement_fidelity_bound,
    mutual_information,
    relative_entropy,
    von_neumann_entropy,
)
from .separable import (
    ProductEnsemble,
    ProductTerm,
    Status,
    bell_diagonal_ree,
    max_entangled_overlap,
    ppt_test,
    realize,
)
from .solver import (
    MeasureResult,
    SolverConfig,
    bures_entanglement,
    product_oracle,
    quantum_classical_split,
    ree,
    tripartite_ree,
)
from .states import (
    BellDiagonalSpec,
    DensityMatrix,
    PureState,
    bell_diagonal,
    bell_state,
    random_density,
    werner_state,
)

__version__ = "0.1.0"
