"""Simulator and verification toolkit for multiboson correlation sampling:
time- and polarization-resolved N-photon detection statistics at the output
of a linear interferometer, with permanent-based probabilities, exact
seeded sampling, and analytic cross-checks."""

from .distribution import (
    POL_INSENSITIVE,
    POL_RESOLVED,
    Distribution,
    bunched_mass,
    bunching_oracle,
    distinguishable_marginal,
    enumeration_size,
    full_distribution,
    time_marginal,
)
from .errors import (
    DimensionError,
    MbcsError,
    ResolutionError,
    SingularInputError,
    SizeGuardError,
    ValidationError,
)
from .events import DetectionEvent, TimeGrid, covering_grid, sinc_tiled_grid
from .permanent import permanent_fast, permanent_naive, set_thread_count
from .photons import (
    Polarization,
    SpectralAmplitude,
    TemporalAmplitude,
    check_interference_condition,
    interference_matrix,
    max_integration_time,
    rect,
    spectral_overlap,
    temporal_amplitude,
)
from .probabilities import (
    MBCSInstance,
    detection_matrix,
    different_colors_probability,
    equal_time_pol_probability,
    event_probability,
    event_rate,
    pol_insensitive_probability,
)
from .sampling import (
    PhaseInvarianceReport,
    SampleBatch,
    SampleRecord,
    empirical_distribution,
    exact_sample,
    gaussian_phase_test,
    total_variation,
)
from .unitaries import (
    embed_scaled,
    ginibre,
    haar_unitary,
    spectral_norm,
    submatrix,
    unitarity_defect,
)

__version__ = "0.1.0"

__all__ = [
    "POL_INSENSITIVE",
    "POL_RESOLVED",
    "Distribution",
    "DetectionEvent",
    "DimensionError",
    "MBCSInstance",
    "MbcsError",
    "PhaseInvarianceReport",
    "Polarization",
    "ResolutionError",
    "SampleBatch",
    "SampleRecord",
    "SingularInputError",
    "SizeGuardError",
    "SpectralAmplitude",
    "TemporalAmplitude",
    "TimeGrid",
    "ValidationError",
    "bunched_mass",
    "bunching_oracle",
    "check_interference_condition",
    "covering_grid",
    "detection_matrix",
    "different_colors_probability",
    "distinguishable_marginal",
    "embed_scaled",
    "empirical_distribution",
    "enumeration_size",
    "equal_time_pol_probability",
    "event_probability",
    "event_rate",
    "exact_sample",
    "full_distribution",
    "gaussian_phase_test",
    "ginibre",
    "haar_unitary",
    "interference_matrix",
    "max_integration_time",
    "permanent_fast",
    "permanent_naive",
    "pol_insensitive_probability",
    "rect",
    "set_thread_count",
    "sinc_tiled_grid",
    "spectral_norm",
    "spectral_overlap",
    "submatrix",
    "temporal_amplitude",
    "time_marginal",
    "total_variation",
    "unitarity_defect",
]
