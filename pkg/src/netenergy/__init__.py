"""Control energy of complex networks.

Gramian-based energy metrics for steering networked linear systems, random
network ensembles, coupled-oscillator models and driver-node placement.
"""

__version__ = "0.1.0"

from .control import (
    ControlLaw,
    TransferTask,
    bounded_controllability_class,
    min_energy_control,
    refocus_control,
    simulate,
    transfer_cost,
)
from .exceptions import (
    AxisEigenvalueError,
    HorizonOverflowError,
    InfeasibleCoverageError,
    InvalidInputError,
    NetEnergyError,
    NonProportionalDampingError,
    NotStableError,
    NumericalFailureError,
    SingularGramianError,
    StabilityMismatchError,
    UncontrollableError,
    ZeroFrequencyError,
)
from .gramian import (
    EnergyMetrics,
    GramianResult,
    LinearSystem,
    energy_metrics,
    finite_gramian,
    infinite_gramian,
    mixed_gramian_finite,
    mixed_gramian_infinite,
    modal_diag_gramian,
)
from .matfun import (
    SpectralSplit,
    expm,
    generalized_modes,
    solve_are_via_lyapunov,
    solve_lyapunov,
    split_stable_antistable,
)
from .netgen import (
    EnsembleSpec,
    random_graph_sf,
    random_matrix_circular,
    random_matrix_elliptic,
    random_matrix_er,
    repair_strong_connectivity,
    weighted_degrees,
)
from .oscillators import (
    ModalDecomposition,
    OscillatorNetwork,
    build_state_space,
    build_swing_grid,
    modal_decomposition,
)
from .placement import (
    PlacementResult,
    brute_force_placement,
    exact_trace_placement,
    greedy_maxmin,
    greedy_trinv,
    mode_power_placement,
    random_placement,
    rank_by_rw,
    ranking_overlap,
)
