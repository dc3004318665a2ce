"""Resonance Casimir-Polder interactions of an entangled atom pair.

Computes the separation-dependent energy shift of the symmetric and
antisymmetric two-atom states for a conformally coupled massless scalar
field, either in the static patch of de Sitter spacetime or in a thermal
Minkowski bath, and classifies sweeps by their envelope decay law: the
curved far zone falls off as 1/L^2, the flat/thermal law always as 1/L.
"""

__version__ = "0.1.0"

from .correlators import (
    CorrelatorQuery,
    Pair,
    TruncatedSum,
    wightman_desitter_cross,
    wightman_desitter_same,
    wightman_thermal_minkowski,
)
from .dicke import DickeState
from .discriminator import (
    Classification,
    InsufficientOscillationsError,
    PowerLawFit,
    SweepRecord,
    Verdict,
    classify,
    extract_envelope,
    fit_power_law,
)
from .geometry import (
    AtomPairGeometry,
    DeSitterPatch,
    SpacetimeConfig,
    TemperatureDecomposition,
    ThermalBath,
    embed,
    euclidean_separation,
    kappa,
    local_temperature,
    ricci_scalar,
)
from .liouvillian import (
    CoefficientSet,
    EvolutionError,
    GeneratorMatrices,
    Trajectory,
    TwoQubitState,
    assemble_generator,
    build_coefficients,
    dissipator_coefficients,
    evolve,
    hamiltonian_coefficients,
)
from .quadrature import (
    IntegralResult,
    PVIntegralSpec,
    QuadratureError,
    oscillatory_tail,
    principal_value,
    rcpi_integral,
)
from .shifts import (
    Method,
    Regime,
    ShiftResult,
    force_closed,
    levelshift_general,
    rcpi_asymptotic,
    rcpi_closed,
    rcpi_closed_desitter,
    rcpi_closed_minkowski,
    rcpi_quadrature,
)
from .spectral import (
    fourier_desitter_cross,
    fourier_desitter_same,
    fourier_thermal_minkowski,
    geometric_factor_f,
)
