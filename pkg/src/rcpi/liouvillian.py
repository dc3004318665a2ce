"""Markovian generator of the two-atom reduced dynamics and its integrator.

The weak-coupling master equation is
    d rho / d tau = -i [H_eff, rho] + L[rho],
with H_eff the free two-atom Hamiltonian plus a field-induced correction
bilinear in Pauli operators, and L[rho] the dissipator built from the 3x3
coefficient matrices of the same tensor structure.  The coefficients come
from the spectral functions at +/- omega0 (dissipator side) and from their
principal-value frequency transforms (Hamiltonian side).

Convention: the Hamiltonian-side matrices carry an overall factor -i times
a real coefficient, which is what makes the correction Hermitian; the stored
scalars a1, b1, a2, b2 are those real coefficients.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .correlators import Pair
from .dicke import DickeState, ket, projector
from .geometry import DeSitterPatch, SpacetimeConfig, ThermalBath, kappa
from .quadrature import IntegralResult, PVIntegralSpec, oscillatory_tail, principal_value
from .spectral import geometric_factor_f, oscillation_scale, sinc, spectral_density

__all__ = [
    "CoefficientSet",
    "TwoQubitState",
    "GeneratorMatrices",
    "EvolutionError",
    "Trajectory",
    "dissipator_coefficients",
    "hamiltonian_coefficients",
    "hamiltonian_cross_coefficients",
    "hamiltonian_same_coefficients",
    "build_coefficients",
    "assemble_generator",
    "h_ls_matrix",
    "h_eff_matrix",
    "superoperator",
    "dicke_population_rate",
    "evolve",
]

# Pauli matrices in single-atom basis order (|g>, |e>), so that the product
# basis comes out as (gg, ge, eg, ee) and sigma_3 |e> = +|e>.
_S1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_S2 = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
_S3 = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
_PAULI = (_S1, _S2, _S3)

# _SIG[atom][i] = sigma_{i+1} acting on the given atom of the pair.
_SIG = (
    tuple(np.kron(p, _I2) for p in _PAULI),
    tuple(np.kron(_I2, p) for p in _PAULI),
)


class EvolutionError(RuntimeError):
    """The master-equation integrator failed."""


@dataclass(frozen=True)
class CoefficientSet:
    """The eight scalars feeding the generator.

    a*/b* are the (real) Hamiltonian-side coefficients, at*/bt* the
    dissipator-side ones; subscript 1 is same-atom, 2 is cross-atom.  The
    cross dissipator coefficients are bounded by the same-atom ones because
    the separation factor has magnitude at most one.
    """

    a1: float
    b1: float
    a2: float
    b2: float
    at1: float
    bt1: float
    at2: float
    bt2: float

    def __post_init__(self) -> None:
        slack = 1e-12 * max(abs(self.at1), 1.0)
        if self.at1 <= 0:
            raise ValueError(f"same-atom dissipator coefficient must be positive, got at1={self.at1}")
        if abs(self.at2) > abs(self.at1) + slack or abs(self.bt2) > abs(self.bt1) + slack:
            raise ValueError("cross dissipator coefficients must not exceed the same-atom ones")


@dataclass(frozen=True)
class TwoQubitState:
    """4x4 density matrix over the product basis (gg, ge, eg, ee)."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {rho.shape}")
        object.__setattr__(self, "rho", rho)
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
            raise ValueError("density matrix trace must equal 1 within 1e-12")
        if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -1e-10:
            raise ValueError("density matrix has an eigenvalue below -1e-10")

    @classmethod
    def from_dicke(cls, state: DickeState) -> "TwoQubitState":
        return cls(projector(state))

    def dicke_populations(self) -> np.ndarray:
        """Populations (pG, pE, pS, pA)."""
        return np.array(
            [np.real(ket(s).conj() @ self.rho @ ket(s)) for s in (DickeState.G, DickeState.E, DickeState.S, DickeState.A)]
        )


@dataclass(frozen=True)
class GeneratorMatrices:
    """3x3 coefficient matrices of the generator plus the transition frequency."""

    H_same: np.ndarray
    H_cross: np.ndarray
    C_same: np.ndarray
    C_cross: np.ndarray
    omega0: float


def dissipator_coefficients(
    spacetime: SpacetimeConfig, omega0: float, mu: float, L: float
) -> tuple[float, float, float, float]:
    """Dissipator scalars (at1, bt1, at2, bt2) from the spectral functions at +/- omega0."""
    if omega0 <= 0 or mu <= 0 or L <= 0:
        raise ValueError("omega0, mu and L must all be positive")
    quarter_mu_sq = 0.25 * mu * mu
    gs_p = spectral_density(spacetime, omega0, Pair.SAME)
    gs_m = spectral_density(spacetime, -omega0, Pair.SAME)
    gc_p = spectral_density(spacetime, omega0, Pair.CROSS, L)
    gc_m = spectral_density(spacetime, -omega0, Pair.CROSS, L)
    return (
        quarter_mu_sq * (gs_p + gs_m),
        quarter_mu_sq * (gs_p - gs_m),
        quarter_mu_sq * (gc_p + gc_m),
        quarter_mu_sq * (gc_p - gc_m),
    )


def _detailed_balance_weight(spacetime: SpacetimeConfig, w: float) -> float:
    """n(w) - n(-w) for the occupation factor of the given bath: coth of half the
    frequency in units of the bath temperature; identically 1 in the vacuum."""
    if isinstance(spacetime, DeSitterPatch):
        beta = 2.0 * math.pi * kappa(spacetime)
    elif isinstance(spacetime, ThermalBath):
        if spacetime.temperature == 0.0:
            return 1.0
        beta = 1.0 / spacetime.temperature
    else:
        raise TypeError(f"unsupported spacetime configuration: {spacetime!r}")
    return 1.0 / math.tanh(0.5 * beta * w)


def hamiltonian_cross_coefficients(
    spacetime: SpacetimeConfig,
    omega0: float,
    mu: float,
    L: float,
    abs_tol: float = 1e-9,
    rel_tol: float = 1e-7,
) -> tuple[float, float]:
    """Cross-atom Hamiltonian coefficients (a2, b2) by convergent PV + tail quadrature.

    The occupation factors at +/- w fold onto the half line exactly: the a2
    integrand carries no occupation weight at all, the b2 integrand carries
    coth(beta w / 2).  Both are cutoff-free.
    """
    if omega0 <= 0 or mu <= 0 or L <= 0:
        raise ValueError("omega0, mu and L must all be positive")
    if isinstance(spacetime, DeSitterPatch):
        k = kappa(spacetime)
        half_L = L / 2.0

        def shape(w: float) -> float:
            return geometric_factor_f(w, half_L, k)

    else:

        def shape(w: float) -> float:
            return sinc(w * L)

    sigma = oscillation_scale(spacetime, L)
    half_period = math.pi / sigma
    pref = mu * mu / (8.0 * math.pi**2)

    def integrand_a(w: float) -> float:
        return (w / (w - omega0) + w / (w + omega0)) * shape(w)

    def integrand_b(w: float) -> float:
        return (w / (w - omega0) - w / (w + omega0)) * _detailed_balance_weight(spacetime, w) * shape(w)

    a2 = pref * _pv_plus_tail(integrand_a, omega0, half_period, abs_tol, rel_tol).value
    b2 = pref * _pv_plus_tail(integrand_b, omega0, half_period, abs_tol, rel_tol).value
    return a2, b2


def _pv_plus_tail(integrand, pole, half_period, abs_tol, rel_tol) -> IntegralResult:
    """Half-line PV integral with oscillatory tail, split at a zero of the oscillation."""
    target = max(2.0 * pole, pole + 2.0 * half_period)
    m = max(1, math.ceil(target / half_period))
    W = m * half_period
    while W - pole < 0.25 * min(pole, half_period):
        m += 1
        W = m * half_period
    spec = PVIntegralSpec(pole=pole, abs_tol=abs_tol / 4.0, rel_tol=rel_tol / 4.0)
    delta0 = 0.5 * min(pole, half_period, W - pole)
    pv = principal_value(integrand, spec, (0.0, W), delta=delta0)
    tail = oscillatory_tail(
        integrand, first_zero=W, asymptotic_period=half_period, start=W,
        abs_tol=abs_tol / 4.0, rel_tol=rel_tol / 4.0,
    )
    return IntegralResult(
        value=pv.value + tail.value,
        error=pv.error + tail.error,
        evaluations=pv.evaluations + tail.evaluations,
        lobes=tail.lobes,
    )


def hamiltonian_same_coefficients(
    spacetime: SpacetimeConfig,
    omega0: float,
    mu: float,
    cutoff: float,
    abs_tol: float = 1e-9,
    rel_tol: float = 1e-7,
) -> tuple[float, float]:
    """Same-atom Hamiltonian coefficients (a1, b1) with an explicit frequency cutoff.

    Both integrals diverge as the cutoff grows (linearly and logarithmically);
    the cutoff regularizes the separation-independent self-energy in the
    spirit of Bethe's treatment, and the result is only meaningful together
    with the cutoff used.
    """
    if omega0 <= 0 or mu <= 0:
        raise ValueError("omega0 and mu must be positive")
    if cutoff is None:
        raise ValueError("a frequency cutoff is required for the same-atom coefficients")
    if cutoff <= omega0:
        raise ValueError(f"cutoff must exceed the pole frequency, got cutoff={cutoff}, omega0={omega0}")
    pref = mu * mu / (8.0 * math.pi**2)

    def integrand_a(w: float) -> float:
        return w / (w - omega0) + w / (w + omega0)

    def integrand_b(w: float) -> float:
        return (w / (w - omega0) - w / (w + omega0)) * _detailed_balance_weight(spacetime, w)

    spec = PVIntegralSpec(pole=omega0, cutoff=cutoff, abs_tol=abs_tol, rel_tol=rel_tol)
    a1 = pref * principal_value(integrand_a, spec, (0.0, cutoff), delta=omega0 / 2.0).value
    b1 = pref * principal_value(integrand_b, spec, (0.0, cutoff), delta=omega0 / 2.0).value
    return a1, b1


def hamiltonian_coefficients(
    spacetime: SpacetimeConfig,
    omega0: float,
    mu: float,
    L: float,
    cutoff: float | None = None,
    abs_tol: float = 1e-9,
    rel_tol: float = 1e-7,
) -> tuple[float, float, float, float]:
    """All four Hamiltonian-side coefficients (a1, b1, a2, b2).

    The cross pair is cutoff-free; the same-atom pair requires ``cutoff`` and
    raises without it.
    """
    if cutoff is None:
        raise ValueError("a frequency cutoff is required for the same-atom coefficients")
    a1, b1 = hamiltonian_same_coefficients(spacetime, omega0, mu, cutoff, abs_tol, rel_tol)
    a2, b2 = hamiltonian_cross_coefficients(spacetime, omega0, mu, L, abs_tol, rel_tol)
    return a1, b1, a2, b2


def build_coefficients(
    spacetime: SpacetimeConfig,
    omega0: float,
    mu: float,
    L: float,
    cutoff: float | None = None,
    abs_tol: float = 1e-9,
    rel_tol: float = 1e-7,
) -> CoefficientSet:
    """Assemble the full coefficient set for one configuration.

    Without a cutoff the separation-independent Hamiltonian terms are set to
    zero: they shift all four collective levels but never contribute to the
    interatomic interaction, so dropping them is the default for interaction
    studies; pass a cutoff to re-include them for exploratory dynamics.
    """
    at1, bt1, at2, bt2 = dissipator_coefficients(spacetime, omega0, mu, L)
    a2, b2 = hamiltonian_cross_coefficients(spacetime, omega0, mu, L, abs_tol, rel_tol)
    if cutoff is not None:
        a1, b1 = hamiltonian_same_coefficients(spacetime, omega0, mu, cutoff, abs_tol, rel_tol)
    else:
        a1, b1 = 0.0, 0.0
    return CoefficientSet(a1=a1, b1=b1, a2=a2, b2=b2, at1=at1, bt1=bt1, at2=at2, bt2=bt2)


def _h_block(a: float, b: float) -> np.ndarray:
    # (-i a) delta_ij - i (-i b) eps_ij3 - (-i a) delta_3i delta_3j
    return np.array(
        [[-1j * a, -b, 0.0], [b, -1j * a, 0.0], [0.0, 0.0, 0.0]],
        dtype=complex,
    )


def _c_block(at: float, bt: float) -> np.ndarray:
    # at delta_ij - i bt eps_ij3 - at delta_3i delta_3j
    return np.array(
        [[at, -1j * bt, 0.0], [1j * bt, at, 0.0], [0.0, 0.0, 0.0]],
        dtype=complex,
    )


def assemble_generator(coeffs: CoefficientSet, omega0: float) -> GeneratorMatrices:
    """Materialize the 3x3 coefficient matrices of the master equation."""
    if omega0 <= 0:
        raise ValueError(f"transition frequency must be positive, got {omega0}")
    return GeneratorMatrices(
        H_same=_h_block(coeffs.a1, coeffs.b1),
        H_cross=_h_block(coeffs.a2, coeffs.b2),
        C_same=_c_block(coeffs.at1, coeffs.bt1),
        C_cross=_c_block(coeffs.at2, coeffs.bt2),
        omega0=omega0,
    )


def _blocks(gen: GeneratorMatrices, cross_only: bool):
    zero = np.zeros((3, 3), dtype=complex)
    same = zero if cross_only else gen.H_same
    return {(0, 0): same, (1, 1): same, (0, 1): gen.H_cross, (1, 0): gen.H_cross}


def h_ls_matrix(gen: GeneratorMatrices, cross_only: bool = False) -> np.ndarray:
    """Field-induced Hamiltonian correction as a 4x4 matrix,
    -(i/2) sum_{ab,ij} H^{(ab)}_{ij} sigma_i^{(a)} sigma_j^{(b)}."""
    out = np.zeros((4, 4), dtype=complex)
    for (a, b), block in _blocks(gen, cross_only).items():
        for i in range(3):
            for j in range(3):
                coeff = block[i, j]
                if coeff != 0.0:
                    out += coeff * (_SIG[a][i] @ _SIG[b][j])
    return -0.5j * out


def h_eff_matrix(gen: GeneratorMatrices, cross_only: bool = False) -> np.ndarray:
    """Effective Hamiltonian: free splitting plus the field-induced correction."""
    free = 0.5 * gen.omega0 * (_SIG[0][2] + _SIG[1][2])
    return free + h_ls_matrix(gen, cross_only)


def superoperator(gen: GeneratorMatrices, cross_only_hamiltonian: bool = False) -> np.ndarray:
    """16x16 matrix generating d vec(rho)/d tau in row-major vectorization."""
    eye4 = np.eye(4, dtype=complex)
    h = h_eff_matrix(gen, cross_only_hamiltonian)
    m = -1j * (np.kron(h, eye4) - np.kron(eye4, h.T))
    c_blocks = {(0, 0): gen.C_same, (1, 1): gen.C_same, (0, 1): gen.C_cross, (1, 0): gen.C_cross}
    for (a, b), block in c_blocks.items():
        for i in range(3):
            for j in range(3):
                c = block[i, j]
                if c == 0.0:
                    continue
                si = _SIG[a][i]
                sj = _SIG[b][j]
                sisj = si @ sj
                m += 0.5 * c * (
                    2.0 * np.kron(sj, si.T) - np.kron(sisj, eye4) - np.kron(eye4, sisj.T)
                )
    return m


def dicke_population_rate(gen: GeneratorMatrices, state: DickeState) -> float:
    """Instantaneous d p_state / d tau with the system prepared in that Dicke state."""
    m = superoperator(gen)
    drho = (m @ projector(state).reshape(16)).reshape(4, 4)
    v = ket(state)
    return float(np.real(v.conj() @ drho @ v))


@dataclass(frozen=True)
class Trajectory:
    """Solution of the master equation on a fixed output grid, with diagnostics.

    The trace and hermiticity defects and the minimum eigenvalue are recorded
    per point rather than silently repaired; drift in them is the cheapest
    global error meter for the integration.
    """

    tau: np.ndarray
    rho: np.ndarray  # (n, 4, 4) complex
    populations: np.ndarray  # (n, 4) order G, E, S, A
    trace: np.ndarray
    hermiticity_defect: np.ndarray
    min_eigenvalue: np.ndarray

    def to_csv(self, path_or_buf) -> None:
        """Write tau, Dicke populations, trace and minimum eigenvalue as CSV."""
        own = isinstance(path_or_buf, (str, bytes))
        fh = open(path_or_buf, "w", newline="") if own else path_or_buf
        try:
            writer = csv.writer(fh)
            writer.writerow(["tau", "pG", "pE", "pS", "pA", "trace", "min_eig"])
            for i in range(self.tau.size):
                writer.writerow(
                    [format(x, ".17g") for x in (
                        self.tau[i], *self.populations[i], self.trace[i], self.min_eigenvalue[i],
                    )]
                )
        finally:
            if own:
                fh.close()


def evolve(
    rho0,
    gen: GeneratorMatrices,
    tau_grid,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> Trajectory:
    """Integrate the master equation over the given output grid.

    Uses adaptive explicit Runge-Kutta stepping (DOP853) on the vectorized
    density matrix.  No per-step renormalization is applied; trace drift is
    reported, not hidden.  A positivity violation beyond -1e-8 in the minimum
    eigenvalue triggers a warning.
    """
    rho_init = rho0.rho if isinstance(rho0, TwoQubitState) else np.asarray(rho0, dtype=complex)
    if rho_init.shape != (4, 4):
        raise ValueError(f"initial state must be 4x4, got shape {rho_init.shape}")
    tau = np.asarray(tau_grid, dtype=float)
    if tau.ndim != 1 or tau.size < 2 or np.any(np.diff(tau) <= 0):
        raise ValueError("tau_grid must be a strictly increasing 1D grid with at least two points")

    m = superoperator(gen)

    def rhs(_t, y):
        return m @ y

    sol = solve_ivp(
        rhs,
        (tau[0], tau[-1]),
        rho_init.reshape(16),
        method="DOP853",
        t_eval=tau,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise EvolutionError(f"master-equation integration failed: {sol.message}")

    rhos = sol.y.T.reshape(-1, 4, 4)
    n = rhos.shape[0]
    kets = [ket(s) for s in (DickeState.G, DickeState.E, DickeState.S, DickeState.A)]
    pops = np.empty((n, 4))
    trace = np.empty(n)
    herm = np.empty(n)
    min_eig = np.empty(n)
    for i, r in enumerate(rhos):
        trace[i] = np.trace(r).real
        herm[i] = np.max(np.abs(r - r.conj().T))
        min_eig[i] = np.min(np.linalg.eigvalsh(0.5 * (r + r.conj().T)))
        pops[i] = [np.real(v.conj() @ r @ v) for v in kets]
    if np.min(min_eig) < -1e-8:
        warnings.warn(
            f"trajectory leaves the positive cone: min eigenvalue {np.min(min_eig):.3e}",
            RuntimeWarning,
            stacklevel=2,
        )
    return Trajectory(
        tau=tau, rho=rhos, populations=pops, trace=trace,
        hermiticity_defect=herm, min_eigenvalue=min_eig,
    )
