"""Which-way detectors, quantum erasers and random momentum kicks."""
from .errors import KicksimError, NumericalGuardError
from .kicks import fourier_kick_equivalence, kick_spectrum
from .patterns import conditioned_pattern, fringe_report, intensity
from .propagate import PropagationSpec, evolve_entangled, to_far_field
from .qstate import (
    EntangledState,
    Grid,
    SlitArray,
    WaveFunction,
    change_basis,
    entangle,
    make_slit_states,
)
from .ubasis import fourier_basis, general_two_slit_basis, three_slit_basis

__version__ = "0.1.0"
