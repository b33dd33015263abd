"""Multi-level quantum Otto heat engines.

Submodules
----------
spectrum     energy spectra and the harmonic / box families
thermo       Gibbs states, entropy, work/heat split of a Hamiltonian change
cycle        four-stroke Otto cycle: work, heat, efficiency, critical T_h
three_level  case classification and positive-work regions of 3-level engines
dark_state   driven Lambda atom realizing a tunable 3-level spectrum
scans        grid sweeps behind the ``qhe`` command line
"""
from ._backend import NAME as BACKEND
from .cycle import (
    CycleReport,
    OttoCycle,
    critical_hot_temperature,
    cycle_report,
    efficiency,
    heat_absorbed,
    heat_released,
    high_temperature_threshold,
    net_work,
    pwc_holds,
    strokes,
)
from .spectrum import Box, Explicit, Harmonic, LevelSpectrum, family_spectrum, from_spacings, spacings, uniform_scale
from .thermo import ThermalState, entropy, gibbs_populations, internal_energy, partition_function
from .three_level import Case, Region, SpacingEndpoints, Subcase

__version__ = "0.1.0"
