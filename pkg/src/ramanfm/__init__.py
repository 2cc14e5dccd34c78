"""Frequency modulation and compression of a probe pulse by a multimode Raman medium."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .observables import (
    ConservationReport,
    ResolutionError,
    conservation_report,
    count_oscillations,
    energy,
    instantaneous_frequency,
    mean_frequency,
    photon_number,
    pulse_area,
)
from .propagation import (
    CascadeStage,
    FieldTrace,
    ProbePulse,
    compare_factors,
    make_grid,
    propagate_cascade,
    propagate_mixture,
    sample_input,
)
from .spectrum import (
    Spectrum,
    dft_spectrum,
    modulation_depth,
    phase_compensate,
    predict_sidebands,
    spectral_extent,
)
from .susceptibility import (
    FrameConvention,
    RamanMode,
    SusceptibilityProfile,
    eval_psi,
    eval_psi_prime,
    find_zeros,
)
from .timemap import (
    MapNonConvergence,
    MapSolverConfig,
    TimeMapResult,
    approx_compression,
    check_validity,
    local_linearized_map,
    single_mode_map,
    solve_map,
    solve_map_array,
)
