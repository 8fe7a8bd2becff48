"""Rényi-alpha quantum thermodynamics: thermal states, free energies, cycles and channels."""

from .channels import (
    Channel,
    apply_channel,
    build_measure_prepare_fixing,
    depolarizing_channel,
    dpi_check,
    identity_channel,
    qubit_fixing_map,
    random_thermal_fixing_channel,
)
from .clausius import ClausiusRecord, rotated_pair_closed_form, clausius_sweep
from .errors import *  # noqa: F401,F403
from .free_energy import free_energy_report, minimality_certificate
from .measures import (
    delta_terms,
    renyi_entropy,
    renyi_internal_energy,
    sandwiched_relative_entropy,
    trad_relative_entropy,
    von_neumann_entropy,
    von_neumann_relative_entropy,
)
from .operators import PowerPolicy, spectral_power, trace_distance, validate_density
from .processes import (
    CycleReport,
    HamiltonianFamily,
    StateFamily,
    StrokeReport,
    coherent_mixing_factory,
    isotherm_decomposition,
    qubit_gap_family,
    qubit_rotation,
    run_carnot_cycle,
    solve_adiabat,
    step_first_law,
)
from .thermal import ThermalState, gibbs_state, qubit_beta_closed_form, solve_thermal_state

__version__ = "0.1.0"
