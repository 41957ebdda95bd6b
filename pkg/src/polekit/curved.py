"""Curved-space heat-kernel coefficients and gravitational-constant renormalization.

Curvature invariants are *inputs* (no metric differentiation happens
here): the DeWitt coefficients, the singular/regular split of the
effective Lagrangian, and the renormalized Newton and cosmological
constants are all algebraic in ``R``, ``R_ab R^ab``, ``R_abcd R^abcd``,
``Box R`` and the conformal coupling ``xi``.

The heat-kernel coefficients ``a_j`` for ``j >= 3`` come from external
recursion relations and are caller-supplied tail values:

* in the regular coincidence limit the j-th tail term is
  ``Gamma(j-2)/2^(j-3) * a_j / m^(2(j-1))`` (in the ``1/(4 pi)^2``
  normalization);
* in the regular Lagrangian it is
  ``Gamma(j-2)/(2^(j-3) (j-2)) * a_j / m^(2(j-2))`` (in the
  ``1/32 pi^2`` normalization), fixed by the consistency condition
  ``dL/dm^2 = -(1/2) * (coincidence limit)`` that relates the two
  expansions term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DenominatorVanishes, DomainError
from .graphs import FOUR_PI_SQ
from .laurent import DEFAULT_MAX_ORDER, EpsilonSeries

__all__ = [
    "CurvatureInvariants",
    "GravitationalConstants",
    "dewitt_coefficients",
    "effective_lagrangian_split",
    "regular_coincidence_limit",
    "renormalized_constants",
    "dimreg_diagnostics",
]

#: relative threshold below which the Newton-constant denominator counts as zero
_DENOM_TOL = 1e-12


@dataclass(frozen=True)
class CurvatureInvariants:
    """Curvature scalars at a point: R (length^-2), the quadratic
    invariants and Box R (length^-4), and the dimensionless coupling xi.

    Flat space is the all-zeros case.
    """

    R: float = 0.0
    RicciSq: float = 0.0
    RiemannSq: float = 0.0
    BoxR: float = 0.0
    xi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("R", "RicciSq", "RiemannSq", "BoxR", "xi"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"CurvatureInvariants: {name} must be finite")

    @classmethod
    def flat(cls, xi: float = 0.0) -> "CurvatureInvariants":
        return cls(xi=xi)


@dataclass(frozen=True)
class GravitationalConstants:
    """Bare gravitational parameters and the finite-ambiguity coefficients.

    ``l`` and ``g`` shift the vacuum and Einstein terms; ``alpha_abc``
    holds the three finite coefficients (a, b, c) of the quadratic
    H-terms (carried for bookkeeping; the constants path below does not
    consume them).
    """

    G0: float
    Lambda0: float = 0.0
    l: float = 0.0
    g: float = 0.0
    alpha_abc: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if self.G0 <= 0.0:
            raise DomainError("GravitationalConstants: G0 must be > 0")
        if len(self.alpha_abc) != 3:
            raise DomainError("GravitationalConstants: alpha_abc needs 3 entries")


def dewitt_coefficients(c: CurvatureInvariants) -> dict[str, float]:
    """First three diagonal DeWitt coefficients.

    ``a0 = 1``; ``a1 = (1/6 - xi) R``;
    ``a2 = RiemannSq/180 - RicciSq/180 - (1/6)(1/5 - xi) BoxR
    + (1/2)(1/6 - xi)^2 R^2``.
    """
    conformal = 1.0 / 6.0 - c.xi
    a2 = (
        c.RiemannSq / 180.0
        - c.RicciSq / 180.0
        - (1.0 / 6.0) * (0.2 - c.xi) * c.BoxR
        + 0.5 * conformal**2 * c.R**2
    )
    return {"a0": 1.0, "a1": conformal * c.R, "a2": a2}


def _pole_log_base(m_sq: float, mu: float, order: int) -> EpsilonSeries:
    """``1/eps + (1/2)[gamma + ln(m^2/mu^2)]`` as a series."""
    return EpsilonSeries.from_terms(
        {-1: 1.0, 0: 0.5 * (np.euler_gamma + math.log(m_sq / mu**2))},
        max_order=order,
    )


def _lagrangian_tail(m_sq: float, tail) -> float:
    """Regular-Lagrangian tail ``sum_j Gamma(j-2)/(2^(j-3)(j-2)) a_j/m^(2(j-2))``."""
    total = 0.0
    for offset, a_j in enumerate(tail):
        j = 3 + offset
        total += (
            math.factorial(j - 3) / (2.0 ** (j - 3) * (j - 2)) * a_j / m_sq ** (j - 2)
        )
    return total


def effective_lagrangian_split(
    c: CurvatureInvariants,
    m: float,
    mu: float,
    order: int = DEFAULT_MAX_ORDER,
    tail=(),
    l: float = 0.0,
    g: float = 0.0,
) -> dict:
    """Split the effective Lagrangian into pole channels and a finite value.

    The singular part is a bundle of three EpsilonSeries, one per DeWitt
    channel::

        channel_i = -(1/(4 pi)^2) w_i a_i [1/eps + (1/2)(gamma + ln(m^2/mu^2))]

    with the weights ``(w_0, w_1, w_2) = (m^4/2, -m^2, 1)`` (the
    ``n(n-2)`` and ``n-2`` denominators evaluated at the physical
    dimension; the remaining dimension dependence is dropped with the
    other vanishing-at-4 terms).

    The regular value is
    ``(1/32 pi^2)[2 l m^4 + g m^2 a1 + a2 ln(m^2) + tail]``; the scale
    implicit in ``ln(m^2)`` is the unit reference absorbed by the
    arbitrary coefficients hidden in the a2 channel.  ``tail`` lists
    ``(a_3, a_4, ...)``; empty truncates the series.
    """
    if m <= 0.0:
        raise DomainError("effective_lagrangian_split: m must be > 0")
    if mu <= 0.0:
        raise DomainError("effective_lagrangian_split: mu must be > 0")
    m_sq = m * m
    a = dewitt_coefficients(c)
    base = _pole_log_base(m_sq, mu, order)
    weights = {"a0": 0.5 * m_sq**2, "a1": -m_sq, "a2": 1.0}
    singular = {
        name: base * (-weights[name] * a[name] / FOUR_PI_SQ) for name in weights
    }
    regular = (
        2.0 * l * m_sq**2
        + g * m_sq * a["a1"]
        + a["a2"] * math.log(m_sq)
        + _lagrangian_tail(m_sq, tail)
    ) / (32.0 * math.pi**2)
    return {"singular": singular, "regular": regular}


def regular_coincidence_limit(
    c: CurvatureInvariants,
    m: float,
    l: float = 0.0,
    g: float = 0.0,
    tail=(),
) -> complex:
    """Coincidence limit of the regular two-point function.

    ``(i/(4 pi)^2) {4 l m^2 + g a1 + a2/m^2 + Gamma(j-2)/2^(j-3) a_j/m^(2(j-1)) ...}``
    — the Feynman-function value; tests apply the ``-i`` Euclidean
    conversion when bridging to the flat-space tadpole.
    """
    if m <= 0.0:
        raise DomainError("regular_coincidence_limit: m must be > 0")
    m_sq = m * m
    a = dewitt_coefficients(c)
    bracket = 4.0 * l * m_sq + g * a["a1"] + a["a2"] / m_sq
    for offset, a_j in enumerate(tail):
        j = 3 + offset
        bracket += math.factorial(j - 3) / 2.0 ** (j - 3) * a_j / m_sq ** (j - 1)
    return 1j * bracket / FOUR_PI_SQ


def renormalized_constants(gc: GravitationalConstants, m: float) -> dict[str, float]:
    """Finite renormalization of the gravitational constants.

    ``G_phys = G0/(1 + (1/6) G0 g m^2)`` and
    ``Lambda_phys = Lambda0 - (1/2) G0 m^2 l``; the bare constants are
    already finite and coincide with the physical ones at ``l = g = 0``.
    """
    m_sq = m * m
    denominator = 1.0 + gc.G0 * gc.g * m_sq / 6.0
    if abs(denominator) < _DENOM_TOL:
        raise DenominatorVanishes(
            "renormalized_constants: 1 + (1/6) G0 g m^2 vanishes"
        )
    return {
        "G_phys": gc.G0 / denominator,
        "Lambda_phys": gc.Lambda0 - 0.5 * gc.G0 * m_sq * gc.l,
    }


def dimreg_diagnostics(
    gc: GravitationalConstants,
    c: CurvatureInvariants,
    m: float,
    mu: float,
    order: int = DEFAULT_MAX_ORDER,
) -> dict[str, EpsilonSeries]:
    """Dimensional-regularization forms of the constants, as pole series.

    Diagnostics only (the production path is :func:`renormalized_constants`):

    * ``Lambda_phys = Lambda0 + (m^2 G0/(4 pi)) [1/eps + (1/2)(gamma + ln(m^2/mu^2))]``
    * ``G_phys = G0 (1 - G0 m^2 (1/6 - xi)/pi^2 [1/eps + ...])`` — the
      denominator form linearized in the bare constant (its squared
      terms are dropped).

    The n-dependent weights are evaluated at the physical dimension,
    mirroring the pole-report convention.
    """
    if m <= 0.0 or mu <= 0.0:
        raise DomainError("dimreg_diagnostics: m and mu must be > 0")
    m_sq = m * m
    base = _pole_log_base(m_sq, mu, order)
    lambda_series = base * (m_sq * gc.G0 / (4.0 * math.pi)) + gc.Lambda0
    conformal = 1.0 / 6.0 - c.xi
    g_series = base * (-(gc.G0**2) * m_sq * conformal / math.pi**2) + gc.G0
    return {"Lambda_phys": lambda_series, "G_phys": g_series}
