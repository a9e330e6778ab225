"""qregsim: exact dissipative dynamics of a qubit register in a bosonic bath.

The register-bath coupling conserves the total excitation number, so the
one-excitation sector (dimension N + N_b) carries the full zero-temperature
dynamics: build the Hamiltonian, diagonalize it once, and evaluate fidelity,
decoherence function, populations, and entropies on any time grid. Sector
combinatorics, the secular-equation spectrum of the permutation-symmetric
sector, scenario presets, and an acceptance suite round out the package.
"""

from .config import (
    BellMixPrep,
    ConfigError,
    ExplicitPrep,
    MomentumPrep,
    MSuperpositionPrep,
    RunConfig,
    SymmetricPrep,
    format_config,
    parse_config,
    parse_config_file,
    prep_vector,
)
from .dynamics import (
    ReducedState,
    RelatedEntropies,
    RelaxationFit,
    RelaxationFitError,
    TimeGrid,
    TimeSeries,
    TimeSeriesRecord,
    binary_entropy_bits,
    decoherence_function,
    entropy,
    evolve,
    fidelity,
    fit_relaxation_time,
    initial_amplitudes,
    quadratic_decay_coefficient,
    reduce_state,
    related_entropies,
    run_time_series,
    series_to_csv,
)
from .matexp import expm, expm_evolve
from .model import (
    CosineCoupling,
    ExplicitCoupling,
    ExplicitDispersion,
    LinearDispersion,
    ModelParams,
    UniformCoupling,
    build_h1,
    coupling_matrix,
    coupling_value,
    mode_frequencies,
)
from .presets import PRESET_NAMES, build_preset
from .sector import (
    BasisLabel,
    RegisterShape,
    SectorBasis,
    dimension,
    enumerate_basis,
    m_superposition,
    momentum_state,
    su2_multiplicity,
    su2_spin_ladder,
    symmetric_state,
)
from .spectral import (
    BracketError,
    DiagonalizationError,
    SpectralDecomposition,
    diagonalize,
    secular_function,
    secular_roots,
)

__version__ = "0.1.0"
