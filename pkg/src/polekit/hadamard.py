"""Short-distance expansion of the DeWitt-Schwinger-Feynman function.

The two-point function near coincidence is a combination of structural
functions of ``sigma`` (half the squared geodesic distance): a contact
term ``delta(sigma)``, step terms ``theta(sigma) {1, sigma, sigma^2}``,
``1/sigma``, scaled-log terms ``log((e^gamma/2)|2 m^2 sigma|) {1, sigma,
sigma^2}`` and plain polynomial terms ``{1, sigma, sigma^2}``.
Distributions are never sampled numerically: each structural function is
a *tag* and the expansion is pure coefficient bookkeeping.

Every coefficient lives in one place, the ``_TERM_TABLE`` catalog below,
and is kept exactly as tabulated — including two entries that look
anomalous next to their channel partners and are flagged rather than
corrected (``log_sigma`` lacks the factor 2 on its a2 piece that its
real-channel partner has, flag ``missing-2``; the ``linear_sigma`` entry
contains a bare ``(5/4) m^4`` with no visible a0, flag ``a0-dropped``).
The ``log_sigma_sq`` row is completed by the series pattern of its
theta-channel partner (its a3 piece is pinned by the regular-part
totals), flag ``pattern-completed``.

The imaginary-unit prefactor of the second channel is an explicit
``channel`` attribute (``real`` / ``imag``), never a complex
coefficient, so the singular/regular split stays an exact partition.
Per-term provenance (which ``a_j`` sourced each contribution) is stored
at construction; ``hadamard_split`` partitions by source index and
``reconstruct`` re-merges provenance, so split-and-recombine is
bit-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "BASIS_TAGS",
    "CHANNEL",
    "REGULAR_CLASS_TAGS",
    "COEFFICIENT_FLAGS",
    "HadamardInput",
    "SingularBasisExpansion",
    "hadamard_expand",
    "hadamard_split",
    "reconstruct",
]

#: the eleven structural basis functions, in catalog order
BASIS_TAGS = (
    "delta_sigma",
    "theta_const",
    "theta_sigma",
    "theta_sigma_sq",
    "inv_sigma",
    "log_const",
    "log_sigma",
    "log_sigma_sq",
    "const",
    "linear_sigma",
    "quad_sigma",
)

#: which of the two channels of the decomposition each tag lives in;
#: "imag" tags carry the explicit (1/2)i prefactor of the second channel
CHANNEL = {
    "delta_sigma": "real",
    "theta_const": "real",
    "theta_sigma": "real",
    "theta_sigma_sq": "real",
    "inv_sigma": "imag",
    "log_const": "imag",
    "log_sigma": "imag",
    "log_sigma_sq": "imag",
    "const": "imag",
    "linear_sigma": "imag",
    "quad_sigma": "imag",
}

#: tags whose structural function is finite with finite first derivative
#: at sigma = 0: the polynomial terms plus theta(sigma) sigma^2 and
#: sigma^2 log sigma (both vanish with vanishing first derivative)
REGULAR_CLASS_TAGS = frozenset(
    {"const", "linear_sigma", "quad_sigma", "theta_sigma_sq", "log_sigma_sq"}
)

#: catalog caveats (see module docstring)
COEFFICIENT_FLAGS = {
    "log_sigma": ("missing-2",),
    "linear_sigma": ("a0-dropped",),
    "log_sigma_sq": ("pattern-completed",),
}


def _term_table(m: float) -> list[tuple[str, int, float, bool]]:
    """The coefficient catalog, kept exactly as tabulated.

    Rows are ``(tag, source_index, weight, uses_a)``: the contribution
    is ``prefactor * weight * a[source_index]`` (or ``prefactor *
    weight`` alone when ``uses_a`` is false, used by the flagged bare
    ``(5/4) m^4`` term, which sits in the a0 slot of the pattern).
    Prefactors: real channel ``vanvleck/8 pi``, imaginary channel
    ``vanvleck/2 pi^2`` (with ``1/sigma`` carrying ``1/2`` of it).
    """
    m2 = m * m
    m4 = m2 * m2
    m6 = m4 * m2
    return [
        # -- real channel -----------------------------------------------------
        ("delta_sigma", 0, 1.0, True),
        ("theta_const", 0, -0.5 * m2, True),
        ("theta_const", 1, 0.5, True),
        ("theta_sigma", 0, m4 / 8.0, True),
        ("theta_sigma", 1, -2.0 * m2 / 8.0, True),
        ("theta_sigma", 2, 2.0 / 8.0, True),
        ("theta_sigma_sq", 0, -m6 / 96.0, True),
        ("theta_sigma_sq", 1, 3.0 * m4 / 96.0, True),
        ("theta_sigma_sq", 2, -6.0 * m2 / 96.0, True),
        ("theta_sigma_sq", 3, 6.0 / 96.0, True),
        # -- imaginary channel ------------------------------------------------
        ("inv_sigma", 0, -0.5, True),
        ("log_const", 0, 0.5 * m2, True),
        ("log_const", 1, -0.5, True),
        ("log_sigma", 0, -m4 / 8.0, True),
        ("log_sigma", 1, 2.0 * m2 / 8.0, True),
        ("log_sigma", 2, -1.0 / 8.0, True),  # flagged: missing-2
        ("log_sigma_sq", 0, m6 / 96.0, True),  # flagged: pattern-completed
        ("log_sigma_sq", 1, -3.0 * m4 / 96.0, True),
        ("log_sigma_sq", 2, 6.0 * m2 / 96.0, True),
        ("log_sigma_sq", 3, -6.0 / 96.0, True),
        ("const", 0, -0.25 * m2, True),
        ("const", 2, 0.25 / m2, True),
        ("const", 3, 0.25 / m4, True),
        ("const", 4, 0.125 / m6, True),
        ("linear_sigma", 0, 1.25 * m4 / 8.0, False),  # flagged: a0-dropped
        ("linear_sigma", 1, -2.0 * m2 / 8.0, True),
        ("linear_sigma", 2, -1.0 / 8.0, True),
        ("linear_sigma", 3, -1.0 / (8.0 * m2), True),
        ("linear_sigma", 4, -1.0 / (8.0 * m4), True),
        ("quad_sigma", 0, -(5.0 / 3.0) * m6 / 96.0, True),
        ("quad_sigma", 1, 4.5 * m4 / 96.0, True),
        ("quad_sigma", 2, -7.5 * m2 / 96.0, True),
        ("quad_sigma", 3, 4.5 / 96.0, True),
    ]


@dataclass(frozen=True)
class HadamardInput:
    """Expansion point: sigma (any sign), mass, a-coefficient list, and
    the van Vleck square-root factor (1 at coincidence).

    ``a[0] = 1`` in the conventional normalization; other leading values are
    accepted but leave that convention.
    """

    sigma: float
    m: float
    a: tuple[float, ...]
    vanvleck: float = 1.0

    def __post_init__(self) -> None:
        if self.m <= 0.0:
            raise DomainError("HadamardInput: m must be > 0")
        if len(self.a) == 0:
            raise DomainError("HadamardInput: a-list must not be empty")
        if not all(math.isfinite(x) for x in self.a):
            raise DomainError("HadamardInput: a-list entries must be finite")
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))


@dataclass(frozen=True)
class SingularBasisExpansion:
    """Coefficients on the structural basis, with per-source provenance.

    ``coefficients[tag]`` is the total weight of that structural
    function; ``provenance[tag][j]`` the part sourced by ``a_j``
    (``uses_a`` = false rows are attributed to their pattern slot);
    ``dropped_terms`` lists ``"tag:a_j"`` for catalog rows that needed
    ``a_j`` beyond the supplied list; ``truncation_order`` is the
    highest source index actually consumed.
    """

    coefficients: dict[str, float]
    truncation_order: int
    provenance: dict[str, dict[int, float]] = field(default_factory=dict)
    dropped_terms: tuple[str, ...] = ()

    def channel(self, tag: str) -> str:
        return CHANNEL[tag]

    def flags(self, tag: str) -> tuple[str, ...]:
        return COEFFICIENT_FLAGS.get(tag, ())


def _from_provenance(
    provenance: dict[str, dict[int, float]],
    truncation_order: int,
    dropped: tuple[str, ...] = (),
) -> SingularBasisExpansion:
    coefficients = {
        tag: math.fsum(contribs[j] for j in sorted(contribs))
        for tag, contribs in provenance.items()
    }
    for tag in BASIS_TAGS:
        coefficients.setdefault(tag, 0.0)
    return SingularBasisExpansion(
        coefficients, truncation_order, provenance, dropped
    )


def hadamard_expand(inp: HadamardInput) -> SingularBasisExpansion:
    """Populate every basis coefficient from the term catalog.

    Terms requiring ``a_j`` beyond the supplied list are dropped and
    reported in ``dropped_terms``.
    """
    real_prefactor = inp.vanvleck / (8.0 * math.pi)
    imag_prefactor = inp.vanvleck / (2.0 * math.pi**2)
    provenance: dict[str, dict[int, float]] = {tag: {} for tag in BASIS_TAGS}
    dropped: list[str] = []
    used = 0
    for tag, j, weight, uses_a in _term_table(inp.m):
        if j >= len(inp.a):
            dropped.append(f"{tag}:a_{j}")
            continue
        prefactor = real_prefactor if CHANNEL[tag] == "real" else imag_prefactor
        contribution = prefactor * weight * (inp.a[j] if uses_a else 1.0)
        provenance[tag][j] = provenance[tag].get(j, 0.0) + contribution
        used = max(used, j)
    return _from_provenance(provenance, used, tuple(dropped))


def hadamard_split(
    e: SingularBasisExpansion, a_count: int = 3
) -> dict[str, SingularBasisExpansion]:
    """Partition by coefficient provenance.

    Contributions sourced by the first ``a_count`` DeWitt coefficients
    (the ones whose poles drive dimensional regularization) form the
    singular part; everything sourced by ``a_{a_count}`` and beyond is
    the regular remainder.  The two parts reconstruct the input exactly.
    """
    if a_count < 3:
        raise DomainError("hadamard_split: a_count must be >= 3")
    if not e.provenance:
        raise DomainError(
            "hadamard_split: expansion carries no provenance; "
            "build it with hadamard_expand"
        )
    singular: dict[str, dict[int, float]] = {}
    regular: dict[str, dict[int, float]] = {}
    for tag, contribs in e.provenance.items():
        singular[tag] = {j: v for j, v in contribs.items() if j < a_count}
        regular[tag] = {j: v for j, v in contribs.items() if j >= a_count}
    return {
        "singular": _from_provenance(singular, e.truncation_order, e.dropped_terms),
        "regular": _from_provenance(regular, e.truncation_order),
    }


def reconstruct(
    singular: SingularBasisExpansion, regular: SingularBasisExpansion
) -> SingularBasisExpansion:
    """Merge two provenance-disjoint parts back into one expansion.

    Because coefficients are re-summed from the merged provenance in
    canonical order, ``reconstruct(split(e))`` equals ``e`` bit-exactly.
    """
    merged: dict[str, dict[int, float]] = {}
    for part in (singular, regular):
        for tag, contribs in part.provenance.items():
            slot = merged.setdefault(tag, {})
            for j, value in contribs.items():
                if j in slot:
                    raise DomainError(
                        f"reconstruct: overlapping provenance for {tag}:a_{j}"
                    )
                slot[j] = value
    order = max(singular.truncation_order, regular.truncation_order)
    return _from_provenance(merged, order, singular.dropped_terms)
