"""wavemech: one numerical chain from ray optics and classical action waves
to quantum wave mechanics.

The package follows a single storyline across its modules:

- `optics`: the ray limit of scalar waves — eikonal phases versus marched
  Helmholtz solutions, and how superposition fails for ray phases.
- `classical`: Hamilton's action S, the unimodular wave exp(iS/hbar) that
  satisfies a nonlinear wave equation, and trajectories recovered from
  p = dS/dq.
- `quantum`: discretized Hamiltonians, spectra, unitary propagation, and the
  complex action -i hbar log(psi) whose dynamics differ from the classical
  action by one hbar-sized term.
- `operators`, `measurement`: Hermiticity, expansions, completeness, Born
  probabilities, observable fields, and projective sampling.
- `pauli`: two-component spinors precessing in a magnetic field.
- `cli`: every capability as a deterministic batch experiment.
"""

from .grids import (
    ComplexField,
    Grid1D,
    NumericalError,
    PhysicalConstants,
    derivative,
    inner_product,
    make_state,
    norm,
    normalize,
    trapezoid_weights,
)
from .optics import (
    EikonalSolution,
    LimitStudyResult,
    RefractiveProfile,
    eikonal_integrate,
    eikonal_limit_study,
    em_eikonal_residual,
    helmholtz_solve,
    optical_path_from_field,
)
from .classical import (
    ActionFunction,
    Trajectory,
    classical_energy_field,
    classical_wave_residual,
    classical_wavefunction,
    integrate_trajectory,
)
from .quantum import (
    Hamiltonian1D,
    LinearizationResult,
    PotentialSpec,
    SpectralDecomposition,
    build_hamiltonian,
    eigensolve,
    harmonic_grid,
    linearization_demo,
    propagate,
    propagate_recorded,
    quantum_action,
    quantum_hj_residual,
)
from .operators import (
    ExpansionCoefficients,
    LinearOperatorSpec,
    completeness_kernel,
    continuum_momentum_density,
    expand,
    gram_schmidt,
    hermiticity_check,
    kernel_apply,
    momentum_basis,
    momentum_eigenfunction_box,
    position_eigenfunction,
    reconstruct,
)
from .measurement import (
    ObservableField,
    ProbabilityTable,
    born_density,
    eigenvalue_probabilities,
    expectation_field,
    expectation_operator,
    measure_and_collapse,
    observable_field,
    sample_outcomes,
)
from .pauli import (
    EMFieldConfig,
    PauliPropagator,
    SpinorField,
    pauli_propagate,
    pauli_step,
    spin_expectations,
    spin_magnetic_moment,
    uniform_spinor,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # grids
    "ComplexField", "Grid1D", "NumericalError", "PhysicalConstants",
    "derivative", "inner_product", "make_state", "norm", "normalize",
    "trapezoid_weights",
    # optics
    "EikonalSolution", "LimitStudyResult", "RefractiveProfile",
    "eikonal_integrate", "eikonal_limit_study", "em_eikonal_residual",
    "helmholtz_solve", "optical_path_from_field",
    # classical
    "ActionFunction", "Trajectory", "classical_energy_field",
    "classical_wave_residual", "classical_wavefunction", "integrate_trajectory",
    # quantum
    "Hamiltonian1D", "LinearizationResult", "PotentialSpec",
    "SpectralDecomposition", "build_hamiltonian", "eigensolve", "harmonic_grid",
    "linearization_demo", "propagate", "propagate_recorded", "quantum_action",
    "quantum_hj_residual",
    # operators
    "ExpansionCoefficients", "LinearOperatorSpec", "completeness_kernel",
    "continuum_momentum_density", "expand", "gram_schmidt", "hermiticity_check",
    "kernel_apply", "momentum_basis", "momentum_eigenfunction_box",
    "position_eigenfunction", "reconstruct",
    # measurement
    "ObservableField", "ProbabilityTable", "born_density",
    "eigenvalue_probabilities", "expectation_field", "expectation_operator",
    "measure_and_collapse", "observable_field", "sample_outcomes",
    # pauli
    "EMFieldConfig", "PauliPropagator", "SpinorField", "pauli_propagate",
    "pauli_step", "spin_expectations", "spin_magnetic_moment", "uniform_spinor",
]
