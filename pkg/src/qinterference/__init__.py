"""Multimode second-quantized fields with inter-mode interference.

Scalar bosons, photons and Dirac fermions expanded over phase-bearing plane
wave modes; energy, momentum, particle number and charge expectation values
including the cross-mode terms, plus brute-force oracles to check them.
"""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    CANONICAL, CROSS_UNIT, AlgebraPolicy, Channel, Kind, LadderOp, OperatorExpr, Variant,
    annihilate, bracket, create, cross_phase, normal_order,
)
from .errors import (  # noqa: E402
    ConfigError, DegenerateModeError, OrderingError, PauliViolationError, RegistryError,
    SpeciesMismatchError, TruncationError, UnsupportedDegreeError,
)
from .fields import BoxDomain, FieldExpansion, build_field, overlap_integral  # noqa: E402
from .hamiltonian import (  # noqa: E402
    HamiltonianSpec, Quantity, build_hamiltonian, build_observable, classical_energy,
    cross_term, diagonal_term,
)
from .modes import ModeLabel, Species, dispersion  # noqa: E402
from .observables import (  # noqa: E402
    Contraction, FockState, ObservableReport, PhaseResponse, expect, expectation,
    phase_sweep, report,
)
from .oracle import MergedMode, TruncatedFockSpace, matrix_expectation, merged_energy  # noqa: E402
from .config import ScenarioConfig  # noqa: E402
from .scenarios import (  # noqa: E402
    audit_conservation, run_aharonov_bohm, run_dicke, run_incoherent, run_young,
)
