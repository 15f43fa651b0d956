"""Transport efficiency switching in sink-coupled site networks.

The library models excitation transfer through small site networks that
leak irreversibly into two asymmetric sinks. Increasing the sink coupling
drives superradiance transitions where one eigenstate absorbs nearly the
entire decay width of its sink; between the two transitions the transfer
efficiency switches from the strongly coupled sink to the weak one, a
genuinely quantum effect absent from the classical hopping limit and
robust against thermal dephasing.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .bath import (BathSpec, LindbladGenerators, bath_rate, bohr_energies,
                   bose_occupation, build_generators, dissipator_superoperator,
                   homogeneous_broadening, spectral_density, thermal_state)
from .dynamics import (LAWS, EvolutionResult, bare_rates, classical_evolve,
                       default_timestep, efficiency, evolve, evolve_lindblad,
                       evolve_von_neumann, final_efficiencies,
                       lindblad_superoperator, semiclassical_rates,
                       vn_superoperator)
from .errors import NumericalError, SrswitchError, ValidationError
from .network import (CouplingRatios, Sink, SiteNetwork, build_multimer,
                      closed_hamiltonian, coupling_ratios,
                      effective_hamiltonian, initial_state, load_network,
                      network_from_dict, network_to_dict, reference_coupling,
                      save_network, validate_density_matrix,
                      with_sink_strengths)
from .spectral import (SpectralResult, TransitionReport, detect_transitions,
                       eigendecompose, mean_level_spacing, partial_widths,
                       participation_ratio, subradiant_average_width,
                       superradiant_indices, switching_point_estimate)
from .sweep import (AxisSpec, ContourLine, EfficiencyRecord, SpectralScanResult,
                    SweepResult, SweepSpec, TransitionScanResult,
                    contour_extract, default_axes_2d, default_axis_1d,
                    find_crossings, primary_crossing, scan_spectral, sweep_1d,
                    sweep_2d, transition_scan)
