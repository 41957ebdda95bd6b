"""Subtraction-recipe assembly of physical quantities and RG flows.

The module realizes both renormalization paths and checks they agree:

* the *subtraction* path drops every pole and keeps finite bare
  parameters (``physical_mass_sq``, ``amplitude_T``, ``energy_density``,
  ``propagator_inverse``);
* the *standard* path assembles bare-parameter series whose poles must
  cancel identically (``bare_coupling_standard``,
  ``pole_cancellation_report``).

Scale independence of the physical quantities defines the
renormalization-group equations operationally: ``beta_functions``
measures the ``ln mu`` drift of each finite part by central differences
(exact here, since every finite part is linear in ``ln mu`` at fixed
couplings) and solves the stationarity conditions at leading order.
``rg_flow`` integrates them with a fixed-step classical Runge–Kutta
scheme so trajectories are bit-for-bit reproducible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError, LandauPoleWarning, StepCountInsufficient
from .graphs import (
    FOUR_PI_SQ,
    KinematicPoint,
    double_scoop,
    fish,
    fish_closed_form,
    setting_sun,
    tadpole,
)
from .laurent import DEFAULT_MAX_ORDER, EpsilonSeries, ms_split, series_add

__all__ = [
    "CouplingSet",
    "PoleReport",
    "physical_mass_sq",
    "amplitude_T",
    "bare_coupling_standard",
    "energy_density",
    "scheme_offset",
    "propagator_inverse",
    "beta_functions",
    "rg_flow",
    "pole_cancellation_report",
    "superficial_divergence",
]

#: central-difference step in ln mu for the stationarity derivatives
_LN_MU_STEP = 1e-4

#: Landau-pole guard: trajectories are truncated once lambda0 exceeds this
LANDAU_GUARD = 10.0

#: relative endpoint tolerance of the step-doubling convergence check
_ENDPOINT_RTOL = 1e-8


@dataclass(frozen=True)
class CouplingSet:
    """Running parameters (lambda0, m0_sq, Lambda0) at the scale mu."""

    lambda0: float
    m0_sq: float
    Lambda0: float
    mu: float

    def __post_init__(self) -> None:
        if self.lambda0 < 0.0:
            raise DomainError("CouplingSet: lambda0 must be >= 0")
        if self.mu <= 0.0:
            raise DomainError("CouplingSet: mu must be > 0")

    def kinematic_point(self) -> KinematicPoint:
        return KinematicPoint(
            m_sq=self.m0_sq, lambda0=self.lambda0, mu=self.mu, Lambda0=self.Lambda0
        )

    def at(self, *, lambda0=None, m0_sq=None, Lambda0=None, mu=None) -> "CouplingSet":
        return CouplingSet(
            self.lambda0 if lambda0 is None else lambda0,
            self.m0_sq if m0_sq is None else m0_sq,
            self.Lambda0 if Lambda0 is None else Lambda0,
            self.mu if mu is None else mu,
        )


@dataclass(frozen=True)
class PoleReport:
    """Residual pole coefficients of an assembled quantity.

    ``is_finite`` holds when every residual is below 1e-10 relative to
    the finite part (exact zero required if the finite part vanishes).
    """

    quantity_name: str
    residuals: dict[int, complex]
    finite: complex
    is_finite: bool

    @classmethod
    def from_series(cls, name: str, series: EpsilonSeries) -> "PoleReport":
        residuals = {
            g: series.coeff(-g) for g in range(1, -series.min_order + 1)
        }
        finite = series.coeff(0)
        tolerance = 1e-10 * abs(finite)
        ok = all(abs(r) <= tolerance for r in residuals.values())
        return cls(name, residuals, finite, ok)


# ------------------------------------------------------------- finite assembly


def _tadpole_finite(c: CouplingSet) -> float:
    return tadpole(c.kinematic_point()).split.finite.real


def physical_mass_sq(c: CouplingSet) -> float:
    """``m0^2 + (1/2) lambda0 * (tadpole finite part)``."""
    return c.m0_sq + 0.5 * c.lambda0 * _tadpole_finite(c)


def _fish_finite(s: float, c: CouplingSet) -> complex:
    """Finite bubble value at Mandelstam ``s``: closed form where valid,
    the Euclidean quadrature inside ``[0, 4 m^2)``."""
    k = c.kinematic_point()
    if 0.0 <= s < 4.0 * c.m0_sq:
        return fish(-s, k).split.finite
    return fish_closed_form(s, k)


def _fish_finite_sum(c: CouplingSet, s: float, t: float, u: float) -> complex:
    # canonical argument order makes crossing symmetry bit-exact
    total = 0j
    for x in sorted((s, t, u)):
        total += _fish_finite(x, c)
    return total


def amplitude_T(c: CouplingSet, s: float, t: float, u: float) -> complex:
    """Subtraction-path four-point amplitude
    ``lambda0 + (1/2) lambda0^2 [F(s) + F(t) + F(u)]``."""
    if c.lambda0 == 0.0:
        return 0j
    return c.lambda0 + 0.5 * c.lambda0**2 * _fish_finite_sum(c, s, t, u)


def bare_coupling_standard(
    lambda_ren: float, mu: float, epsilon: float = 0.0,
    order: int = DEFAULT_MAX_ORDER,
) -> EpsilonSeries:
    """Standard-path bare coupling ``mu^{-eps} lambda (1 - 3 lambda/(4 pi)^2 * 1/eps)``.

    The dimensionful ``mu`` power is attached as the exact scalar
    ``mu**(-epsilon)``; with ``epsilon = 0`` (the default) the series is in
    the adimensional convention used by every assembly, and the residue of
    the ``1/eps`` term is ``-3 lambda^2/(4 pi)^2``.
    """
    prefactor = mu ** (-epsilon)
    return EpsilonSeries.from_terms(
        {
            -1: -3.0 * lambda_ren**2 / FOUR_PI_SQ * prefactor,
            0: lambda_ren * prefactor,
        },
        max_order=order,
    )


def energy_density(
    c: CouplingSet, perturbative_order: int = 1, path: str = "subtraction"
) -> float:
    """Vacuum energy density at the given perturbative order.

    subtraction path, order 1:
        ``(m^4/(4 (4 pi)^2)) (L + gamma - 1) - Lambda0``,  L = ln(m^2/4 pi mu^2)
    order 2 adds ``(lambda0/8) (m^4/(4 pi)^2) (L + gamma - 1)^2``.

    The renormalization path replaces the first constant by ``-3/2``
    (its ``L + gamma - 3/2`` combination), shifting the result by the
    scheme offset ``-m^4/(8 (4 pi)^2)``; see :func:`scheme_offset`.
    """
    if perturbative_order not in (1, 2):
        raise DomainError("energy_density: perturbative_order must be 1 or 2")
    if path not in ("subtraction", "renormalization"):
        raise DomainError(
            "energy_density: path must be 'subtraction' or 'renormalization'"
        )
    tad_fin = _tadpole_finite(c)
    value = 0.25 * c.m0_sq * tad_fin - c.Lambda0
    if path == "renormalization":
        value -= c.m0_sq**2 / (8.0 * FOUR_PI_SQ)
    if perturbative_order == 2:
        value += (c.lambda0 / 8.0) * FOUR_PI_SQ * tad_fin**2
    return value


def scheme_offset(c: CouplingSet, perturbative_order: int = 1) -> float:
    """Measured difference (renormalization path) - (subtraction path)."""
    return energy_density(c, perturbative_order, "renormalization") - energy_density(
        c, perturbative_order, "subtraction"
    )


def propagator_inverse(p_sq: float, c: CouplingSet) -> float:
    """Subtraction-path inverse propagator at Euclidean ``p_sq``.

    ``p^2 + m0^2 + (1/2) lambda0 tad_fin + (double-scoop finite)
    + (setting-sun finite)(p^2)``; the wave-function factor is unity
    (the standard path's z1^2 is pure pole, so dropping poles gives z1 = 1).
    """
    if p_sq <= 0.0:
        raise DomainError("propagator_inverse: p_sq must be > 0")
    k = c.kinematic_point()
    value = p_sq + c.m0_sq + 0.5 * c.lambda0 * _tadpole_finite(c)
    if c.lambda0 > 0.0:
        value += double_scoop(k).split.finite.real
        total = setting_sun(p_sq, k).split.finite
        if abs(total.imag) > 1e-12 * max(1.0, abs(total.real)):
            raise DomainError("propagator_inverse: unexpected imaginary part")
        value += total.real
    return value


# ----------------------------------------------------------------- RG machinery


def _lnmu_derivative(fn, c: CouplingSet, h: float = _LN_MU_STEP) -> float:
    """Central difference d(fn)/d ln mu at fixed couplings."""
    up = fn(c.at(mu=c.mu * math.exp(h)))
    down = fn(c.at(mu=c.mu * math.exp(-h)))
    return (up - down) / (2.0 * h)


def beta_functions(c: CouplingSet) -> dict[str, float]:
    """Leading-order RG derivatives from stationarity of the finite parts.

    Each physical quantity is linear in ``ln mu`` at fixed couplings, so
    the central differences are exact; solving the stationarity
    conditions at leading order gives

    * ``beta_lambda = -dT/dln mu``         (amplitude stationarity),
    * ``gamma_m    = -(lambda0/2) d(tad_fin)/dln mu`` (mass stationarity),
    * ``beta_Lambda = d(m^4-term)/dln mu`` (vacuum-energy stationarity).
    """
    if c.lambda0 == 0.0:
        beta_lambda = 0.0
    else:
        # the amplitude's mu-slope is mass independent (each bubble finite
        # part is linear in ln mu with a universal coefficient), so a
        # massive probe point is always usable
        probe_m_sq = c.m0_sq if c.m0_sq > 0.0 else c.mu**2
        probe = c.at(m0_sq=probe_m_sq)
        s_ref = -probe_m_sq

        def t_at(cc: CouplingSet) -> float:
            return amplitude_T(cc, s_ref, s_ref, s_ref).real

        beta_lambda = -_lnmu_derivative(t_at, probe)

    def half_tad(cc: CouplingSet) -> float:
        return 0.5 * cc.lambda0 * _tadpole_finite(cc)

    gamma_m = -_lnmu_derivative(half_tad, c)

    def vacuum_term(cc: CouplingSet) -> float:
        return 0.25 * cc.m0_sq * _tadpole_finite(cc)

    beta_Lambda = _lnmu_derivative(vacuum_term, c)
    return {
        "beta_lambda": beta_lambda,
        "gamma_m": gamma_m,
        "beta_Lambda": beta_Lambda,
    }


def _flow_rhs(lambda0: float, m0_sq: float, Lambda0: float, mu: float):
    b = beta_functions(CouplingSet(lambda0, m0_sq, Lambda0, mu))
    return b["beta_lambda"], b["gamma_m"], b["beta_Lambda"]


def _integrate(start: CouplingSet, ln_mu_end: float, steps: int):
    """Fixed-step RK4 in ln mu; returns (trajectory, guard_tripped)."""
    ln_mu0 = math.log(start.mu)
    h = (ln_mu_end - ln_mu0) / steps
    trajectory = [start]
    y = (start.lambda0, start.m0_sq, start.Lambda0)
    for i in range(steps):
        x = ln_mu0 + i * h

        def rhs(state, lnmu):
            return _flow_rhs(state[0], state[1], state[2], math.exp(lnmu))

        k1 = rhs(y, x)
        y2 = tuple(y[j] + 0.5 * h * k1[j] for j in range(3))
        k2 = rhs(y2, x + 0.5 * h)
        y3 = tuple(y[j] + 0.5 * h * k2[j] for j in range(3))
        k3 = rhs(y3, x + 0.5 * h)
        y4 = tuple(y[j] + h * k3[j] for j in range(3))
        k4 = rhs(y4, x + h)
        y = tuple(
            y[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            for j in range(3)
        )
        point = CouplingSet(y[0], y[1], y[2], math.exp(x + h))
        trajectory.append(point)
        if point.lambda0 > LANDAU_GUARD:
            return trajectory, True
    return trajectory, False


def rg_flow(start: CouplingSet, mu_end: float, steps: int = 64) -> list[CouplingSet]:
    """Integrate the couplings from ``start.mu`` to ``mu_end``.

    Fixed-step classical RK4 in ``ln mu`` (reproducible trajectories); a
    step-doubling rerun guards the endpoint to 1e-8 relative, raising
    :class:`StepCountInsufficient` otherwise.  If the running coupling
    exceeds :data:`LANDAU_GUARD` the trajectory is truncated at the
    offending point and a :class:`LandauPoleWarning` is emitted.
    """
    if mu_end <= 0.0:
        raise DomainError("rg_flow: mu_end must be > 0")
    if steps < 16:
        raise DomainError("rg_flow: steps must be >= 16")
    ln_mu_end = math.log(mu_end)
    trajectory, tripped = _integrate(start, ln_mu_end, steps)
    if tripped:
        warnings.warn(
            f"rg_flow: lambda0 exceeded {LANDAU_GUARD} at mu = "
            f"{trajectory[-1].mu}; trajectory truncated",
            LandauPoleWarning,
            stacklevel=2,
        )
        return trajectory
    fine, fine_tripped = _integrate(start, ln_mu_end, 2 * steps)
    if fine_tripped:
        warnings.warn(
            "rg_flow: Landau guard tripped only on the doubled-step rerun",
            LandauPoleWarning,
            stacklevel=2,
        )
        return trajectory
    end, end2 = trajectory[-1], fine[-1]
    for a, b in (
        (end.lambda0, end2.lambda0),
        (end.m0_sq, end2.m0_sq),
        (end.Lambda0, end2.Lambda0),
    ):
        denom = max(abs(a), abs(b))
        if denom > 0.0 and abs(a - b) / denom > _ENDPOINT_RTOL:
            raise StepCountInsufficient(
                f"rg_flow: endpoint moved by {abs(a - b) / denom:.3e} relative "
                f"under step doubling (> {_ENDPOINT_RTOL}); increase steps"
            )
    return trajectory


# -------------------------------------------------------- pole cancellation


def _standard_amplitude_series(c: CouplingSet, s: float, t: float, u: float,
                               order: int = DEFAULT_MAX_ORDER) -> EpsilonSeries:
    """Standard-path amplitude with the bare-coupling series inserted.

    Order-lambda^2 truncation: the one-loop terms multiply the
    renormalized ``lambda**2`` directly, so the surviving pole of the
    bare coupling cancels the one-loop ``+3 lambda^2/(4 pi)^2 /eps``
    counterterm identically.
    """
    lam = c.lambda0
    series = bare_coupling_standard(lam, c.mu, 0.0, order)
    if lam == 0.0:
        return series
    fsum = _fish_finite_sum(c, s, t, u)
    one_loop = EpsilonSeries.from_terms(
        {-1: 3.0 * lam**2 / FOUR_PI_SQ, 0: 0.5 * lam**2 * fsum},
        max_order=order,
    )
    return series_add(series, one_loop)


def _standard_propagator_series(c: CouplingSet, p_sq: float,
                                order: int = DEFAULT_MAX_ORDER) -> EpsilonSeries:
    """Standard-path inverse propagator assembled to order lambda^2.

    Assembles the two-loop pole bookkeeping term by term: the bare-mass
    series ``m0^2 = m^2 (1 - X/eps + X^2 (2/eps^2 + 5/12 /eps))``, the
    one-loop tadpole series, the literal two-loop mass poles
    ``-X^2 m^2 (2/eps^2 + 1/2 /eps)``, the setting-sun series, the
    double-scoop finite part, and the wave-function factor
    ``z1^2 = 1 + (1/12) X^2/eps`` applied to the lambda^0 part only
    (its product with one-loop poles is order lambda^3, beyond scope).
    """
    lam, m_sq = c.lambda0, c.m0_sq
    if lam == 0.0:
        return EpsilonSeries.from_terms(
            {-2: 0.0, -1: 0.0, 0: p_sq + m_sq}, max_order=order
        )
    k = c.kinematic_point()
    x = lam / FOUR_PI_SQ
    two_loop_mass = x * x * m_sq
    bare_mass = EpsilonSeries.from_terms(
        {
            -2: 2.0 * two_loop_mass,
            -1: -x * m_sq + (5.0 / 12.0) * two_loop_mass,
            0: m_sq,
        },
        max_order=order,
    )
    tad_term = tadpole(k, order).series * (0.5 * lam)
    literal_two_loop = EpsilonSeries.from_terms(
        {-2: -2.0 * two_loop_mass, -1: -0.5 * two_loop_mass}, max_order=order
    )
    wave_function = EpsilonSeries.from_terms(
        {-1: (1.0 / 12.0) * x * x * (p_sq + m_sq), 0: p_sq}, max_order=order
    )
    ss = setting_sun(p_sq, k, order).series
    ds_finite = double_scoop(k).split.finite
    total = series_add(bare_mass, tad_term)
    total = series_add(total, literal_two_loop)
    total = series_add(total, wave_function)
    total = series_add(total, ss)
    return total + ds_finite


def pole_cancellation_report(
    c: CouplingSet,
    s: float | None = None,
    p_sq: float | None = None,
) -> list[PoleReport]:
    """Assemble the standard-path T and G^-1 series and report residual poles.

    Defaults probe the symmetric spacelike amplitude point
    ``s = t = u = -m0^2`` and the propagator at ``p_sq = m0^2``.
    A failing report is data, not an error.
    """
    if c.lambda0 > 0.0 and c.m0_sq <= 0.0:
        raise DomainError(
            "pole_cancellation_report: m0_sq > 0 required at nonzero coupling"
        )
    s_ref = -c.m0_sq if s is None else s
    p_ref = c.m0_sq if p_sq is None else p_sq
    t_series = _standard_amplitude_series(c, s_ref, s_ref, s_ref)
    g_series = _standard_propagator_series(c, p_ref)
    return [
        PoleReport.from_series("T_standard", t_series),
        PoleReport.from_series("G_inv_standard", g_series),
    ]


def superficial_divergence(external_legs: int) -> int:
    """Superficial divergence degree ``D = 4 - N`` of an N-point graph."""
    if external_legs < 0:
        raise DomainError("superficial_divergence: external_legs must be >= 0")
    return 4 - external_legs
