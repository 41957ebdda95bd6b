"""Spectral pairings for diagonal-plus-regular operators and states.

The objects here model observables and states that carry a distinguished
diagonal channel alongside a regular two-point kernel, paired by quadrature
over a truncated frequency window.  A pairing never multiplies two
distributions: diagonal channels meet only each other and regular kernels
meet only each other, so the ill-defined products drop out by construction.
Under time evolution only the off-diagonal term acquires a phase, and for
smooth kernels it decays (an oscillatory-integral effect), while the
diagonal term is exactly stationary — the decoherence mechanism.

A graded generalization represents observables and states over small point
tuples with explicit pole-order sectors.  Their pairing reports the
sector-matched pole terms instead of throwing: the result is physical
exactly when every reported pole term vanishes, which happens whenever
either side is regular.  ``regularize`` is the projection that empties the
singular sectors — the subtraction recipe in functional form.

Numerical choices (recorded, not configurable):

* spectral window ``[omega_min, omega_max]`` with ``omega_max = 20`` by
  default; supplied kernels are expected to decay below ``1e-6`` of their
  peak at the window boundary (``BoundaryDecayWarning`` otherwise);
* composite-Simpson quadrature (odd node counts); the refinement oracle is
  the same rule at 4x the interval count;
* tuple sectors are capped at 3 points and 16 nodes per axis — this is a
  desk-scale structure check, not a field-theory engine.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AliasingWarning,
    BoundaryDecayWarning,
    DomainError,
    GridMismatch,
)

__all__ = [
    "ALIASING_LIMIT",
    "BOUNDARY_DECAY_TOL",
    "DEFAULT_OMEGA_MAX",
    "MAX_TUPLE_POINTS",
    "MAX_TUPLE_NODES",
    "SpectrumGrid",
    "VHOperator",
    "VHState",
    "GradedSector",
    "GradedObservable",
    "GradedState",
    "GradedPairing",
    "pairing",
    "diagonal_term",
    "off_diagonal_term",
    "evolve_pairing",
    "qft_pairing",
    "regularize",
    "analytic_profile",
    "kernel_from_csv",
    "kernel_to_csv",
]

DEFAULT_OMEGA_MAX = 20.0
BOUNDARY_DECAY_TOL = 1e-6
ALIASING_LIMIT = math.pi / 4.0
MAX_TUPLE_POINTS = 3
MAX_TUPLE_NODES = 16

_HERMITICITY_TOL = 1e-12
_NORMALIZATION_TOL = 1e-10


def _frozen_array(values, dtype) -> np.ndarray:
    out = np.array(values, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def _simpson_weights(lo: float, hi: float, count: int) -> np.ndarray:
    h = (hi - lo) / (count - 1)
    w = np.ones(count)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def _require_hermitian(kernel: np.ndarray, what: str) -> None:
    if kernel.size == 0:
        return
    scale = max(1.0, float(np.max(np.abs(kernel))))
    defect = float(np.max(np.abs(kernel - kernel.conj().T)))
    if defect > _HERMITICITY_TOL * scale:
        raise DomainError(
            f"{what} is not self-adjoint: max |K - K^dagger| = {defect:g}"
        )


def _require_real(values: np.ndarray, what: str) -> np.ndarray:
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        if arr.size and float(np.max(np.abs(arr.imag))) > 0.0:
            raise DomainError(f"{what} must be real-valued")
        arr = arr.real
    return arr.astype(float)


def _warn_boundary_decay(kernel: np.ndarray, what: str) -> None:
    peak = float(np.max(np.abs(kernel))) if kernel.size else 0.0
    if peak == 0.0:
        return
    edges = (kernel[0, :], kernel[-1, :], kernel[:, 0], kernel[:, -1])
    boundary = max(float(np.max(np.abs(edge))) for edge in edges)
    if boundary > BOUNDARY_DECAY_TOL * peak:
        warnings.warn(
            f"{what} reaches {boundary / peak:.3g} of its peak at the window "
            f"boundary (want < {BOUNDARY_DECAY_TOL:g}); the truncated window "
            "may dominate the quadrature error",
            BoundaryDecayWarning,
            stacklevel=3,
        )


# --------------------------------------------------------------------- grids


@dataclass(frozen=True, eq=False)
class SpectrumGrid:
    """Uniform frequency window ``[omega_min, omega_max]`` with quadrature.

    ``nodes`` must be odd (composite Simpson) and at least 9.  The node
    positions and positive weights are derived fields; the weights sum to
    the window length.
    """

    omega_min: float = 0.0
    omega_max: float = DEFAULT_OMEGA_MAX
    nodes: int = 161

    omega: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.nodes, int) or isinstance(self.nodes, bool):
            raise DomainError("nodes must be an integer")
        if not (math.isfinite(self.omega_min) and self.omega_min >= 0.0):
            raise DomainError("omega_min must be finite and >= 0")
        if not (math.isfinite(self.omega_max) and self.omega_max > self.omega_min):
            raise DomainError("omega_max must be finite and exceed omega_min")
        if self.nodes < 8:
            raise DomainError("need at least 8 nodes")
        if self.nodes % 2 == 0:
            raise DomainError("composite Simpson quadrature needs an odd node count")
        omega = np.linspace(self.omega_min, self.omega_max, self.nodes)
        weights = _simpson_weights(self.omega_min, self.omega_max, self.nodes)
        length = self.omega_max - self.omega_min
        if abs(float(weights.sum()) - length) > 1e-12 * max(1.0, length):
            raise DomainError("quadrature weights fail to sum to the window length")
        omega.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "weights", weights)

    @property
    def spacing(self) -> float:
        return (self.omega_max - self.omega_min) / (self.nodes - 1)

    def matches(self, other: "SpectrumGrid") -> bool:
        return (
            self.omega_min == other.omega_min
            and self.omega_max == other.omega_max
            and self.nodes == other.nodes
        )

    def refine(self, factor: int = 4) -> "SpectrumGrid":
        """Same window and rule with ``factor`` times as many intervals."""
        if not isinstance(factor, int) or factor < 1:
            raise DomainError("refinement factor must be a positive integer")
        return SpectrumGrid(
            self.omega_min, self.omega_max, factor * (self.nodes - 1) + 1
        )


def _require_same_grid(rho: "VHState", operator: "VHOperator") -> None:
    if not rho.grid.matches(operator.grid):
        raise GridMismatch(
            "state and observable live on different spectral grids: "
            f"({rho.grid.omega_min}, {rho.grid.omega_max}, {rho.grid.nodes}) vs "
            f"({operator.grid.omega_min}, {operator.grid.omega_max}, "
            f"{operator.grid.nodes})"
        )


# ------------------------------------------------------------ VH kernel pairs


@dataclass(frozen=True, eq=False)
class VHOperator:
    """Observable ``O`` = real diagonal ``O_w`` plus regular kernel ``O_ww'``."""

    grid: SpectrumGrid
    diagonal: np.ndarray
    regular: np.ndarray

    def __post_init__(self) -> None:
        n = self.grid.nodes
        diagonal = _require_real(self.diagonal, "operator diagonal")
        regular = np.asarray(self.regular, dtype=complex)
        if diagonal.shape != (n,):
            raise DomainError(f"operator diagonal must have shape ({n},)")
        if regular.shape != (n, n):
            raise DomainError(f"operator kernel must have shape ({n}, {n})")
        if not np.all(np.isfinite(diagonal)) or not np.all(np.isfinite(regular)):
            raise DomainError("operator samples must be finite")
        _require_hermitian(regular, "operator kernel")
        _warn_boundary_decay(regular, "operator kernel")
        object.__setattr__(self, "diagonal", _frozen_array(diagonal, float))
        object.__setattr__(self, "regular", _frozen_array(regular, complex))

    @classmethod
    def identity_like(cls, grid: SpectrumGrid) -> "VHOperator":
        return cls(grid, np.ones(grid.nodes), np.zeros((grid.nodes, grid.nodes)))


@dataclass(frozen=True, eq=False)
class VHState:
    """State ``rho`` = nonnegative diagonal ``rho_w`` plus regular kernel."""

    grid: SpectrumGrid
    diagonal: np.ndarray
    regular: np.ndarray
    normalized: bool = False

    def __post_init__(self) -> None:
        n = self.grid.nodes
        diagonal = _require_real(self.diagonal, "state diagonal")
        regular = np.asarray(self.regular, dtype=complex)
        if diagonal.shape != (n,):
            raise DomainError(f"state diagonal must have shape ({n},)")
        if regular.shape != (n, n):
            raise DomainError(f"state kernel must have shape ({n}, {n})")
        if not np.all(np.isfinite(diagonal)) or not np.all(np.isfinite(regular)):
            raise DomainError("state samples must be finite")
        if diagonal.size and float(diagonal.min()) < 0.0:
            raise DomainError("state diagonal must be nonnegative")
        _require_hermitian(regular, "state kernel")
        if self.normalized:
            total = float(np.sum(self.grid.weights * diagonal))
            if abs(total - 1.0) > _NORMALIZATION_TOL:
                raise DomainError(
                    f"state flagged normalized but integrates to {total!r}"
                )
        _warn_boundary_decay(regular, "state kernel")
        object.__setattr__(self, "diagonal", _frozen_array(diagonal, float))
        object.__setattr__(self, "regular", _frozen_array(regular, complex))

    def normalize(self) -> "VHState":
        """Rescale so the diagonal integrates to one."""
        total = float(np.sum(self.grid.weights * self.diagonal))
        if total <= 0.0:
            raise DomainError("cannot normalize a state with vanishing weight")
        return VHState(
            self.grid,
            self.diagonal / total,
            self.regular / total,
            normalized=True,
        )


def diagonal_term(rho: VHState, operator: VHOperator) -> complex:
    """The diagonal integral of the pairing; exactly time-independent."""
    _require_same_grid(rho, operator)
    return complex(np.sum(rho.grid.weights * rho.diagonal * operator.diagonal))


def off_diagonal_term(rho: VHState, operator: VHOperator, t: float = 0.0) -> complex:
    """Off-diagonal kernel quadrature, with phase ``exp(-i(w - w')t)``.

    Warns ``AliasingWarning`` when ``|t| * spacing`` exceeds pi/4: the phase
    then turns by more than a quarter cycle per grid step and the quadrature
    no longer resolves it.
    """
    _require_same_grid(rho, operator)
    if not math.isfinite(t):
        raise DomainError("evolution time must be finite")
    grid = rho.grid
    if abs(t) * grid.spacing > ALIASING_LIMIT:
        warnings.warn(
            f"phase advances {abs(t) * grid.spacing:.3g} rad per grid step "
            f"(limit {ALIASING_LIMIT:.3g}); refine the grid or shorten t",
            AliasingWarning,
            stacklevel=2,
        )
    w = grid.weights
    integrand = rho.regular * operator.regular.T
    if t != 0.0:
        phase = np.exp(-1j * t * (grid.omega[:, None] - grid.omega[None, :]))
        integrand = integrand * phase
    return complex(w @ integrand @ w)


def pairing(rho: VHState, operator: VHOperator) -> complex:
    """Mean value: diagonal-by-diagonal plus kernel-by-kernel quadrature.

    The diagonal channels pair only with each other and the regular kernels
    only with each other, so no product of two distributions ever forms.
    """
    return diagonal_term(rho, operator) + off_diagonal_term(rho, operator)


def evolve_pairing(rho: VHState, operator: VHOperator, t: float) -> complex:
    """Pairing after time ``t``: only the off-diagonal term turns a phase."""
    return diagonal_term(rho, operator) + off_diagonal_term(rho, operator, t)


# -------------------------------------------------------- graded tuple objects


def _axis_weights(axis: np.ndarray) -> np.ndarray:
    count = axis.size
    h = (float(axis[-1]) - float(axis[0])) / (count - 1)
    if not np.allclose(np.diff(axis), h, rtol=1e-8, atol=1e-12):
        raise DomainError("tuple axes must be uniformly spaced")
    return _simpson_weights(float(axis[0]), float(axis[-1]), count)


def _integrate(values: np.ndarray, axes: tuple[np.ndarray, ...]) -> complex:
    total = np.asarray(values, dtype=complex)
    for axis in reversed(axes[: total.ndim]):
        total = total @ _axis_weights(axis)
    return complex(total)


@dataclass(frozen=True, eq=False)
class GradedSector:
    """One singular sector: a pole order and its coefficient samples.

    ``values`` samples the coefficient on the leading axes of the owning
    object (the surviving points of a coincidence limit); a 0-d array means
    every point has coalesced.  ``channel`` optionally tags the underlying
    distribution (e.g. a derivative-of-delta tag): sectors pair only when
    both the order and the channel agree — tagged channels are matched, not
    numerically convolved.
    """

    order: int
    values: np.ndarray
    channel: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.order, int) or isinstance(self.order, bool):
            raise DomainError("pole order must be an integer")
        if self.order < 1:
            raise DomainError("pole order must be >= 1")
        values = np.asarray(self.values, dtype=complex)
        if not np.all(np.isfinite(values)):
            raise DomainError("sector samples must be finite")
        if self.channel is not None and not isinstance(self.channel, str):
            raise DomainError("channel must be a string tag or None")
        object.__setattr__(self, "values", _frozen_array(values, complex))


@dataclass(frozen=True, eq=False)
class _GradedObject:
    axes: tuple[np.ndarray, ...]
    regular: np.ndarray
    singular_sectors: tuple[GradedSector, ...] = ()

    def __post_init__(self) -> None:
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        if not 1 <= len(axes) <= MAX_TUPLE_POINTS:
            raise DomainError(
                f"tuple objects support 1..{MAX_TUPLE_POINTS} points"
            )
        for axis in axes:
            if axis.ndim != 1 or axis.size < 3 or axis.size % 2 == 0:
                raise DomainError("each axis needs an odd node count >= 3")
            if axis.size > MAX_TUPLE_NODES:
                raise DomainError(f"axes are capped at {MAX_TUPLE_NODES} nodes")
            if not np.all(np.isfinite(axis)) or not np.all(np.diff(axis) > 0):
                raise DomainError("axes must be finite and strictly increasing")
            _axis_weights(axis)
        shape = tuple(axis.size for axis in axes)
        regular = np.asarray(self.regular, dtype=complex)
        if regular.shape != shape:
            raise DomainError(
                f"regular sector has shape {regular.shape}, grid wants {shape}"
            )
        if not np.all(np.isfinite(regular)):
            raise DomainError("regular samples must be finite")
        sectors = tuple(self.singular_sectors)
        for sector in sectors:
            if not isinstance(sector, GradedSector):
                raise DomainError("singular_sectors must hold GradedSector items")
            if sector.values.ndim > len(axes):
                raise DomainError("sector has more points than the object")
            if sector.values.shape != shape[: sector.values.ndim]:
                raise DomainError(
                    "sector samples must live on the leading axes of the object"
                )
        object.__setattr__(
            self, "axes", tuple(_frozen_array(a, float) for a in axes)
        )
        object.__setattr__(self, "regular", _frozen_array(regular, complex))
        object.__setattr__(self, "singular_sectors", sectors)


@dataclass(frozen=True, eq=False)
class GradedObservable(_GradedObject):
    """Observable over point tuples: regular coefficients + pole sectors."""


@dataclass(frozen=True, eq=False)
class GradedState(_GradedObject):
    """State over point tuples: regular coefficients + pole sectors."""


@dataclass(frozen=True, eq=False)
class GradedPairing:
    """Result of a graded pairing: the finite part and reported pole terms.

    ``pole_terms`` maps each matched pole order to its coefficient; no entry
    is ever thrown away.  The pairing is physical exactly when every pole
    term vanishes.
    """

    finite: complex
    pole_terms: dict[int, complex]

    def __getitem__(self, key: str):
        if key == "finite":
            return self.finite
        if key == "pole_terms":
            return self.pole_terms
        raise KeyError(key)

    @property
    def is_physical(self) -> bool:
        return all(value == 0 for value in self.pole_terms.values())


def _require_compatible_axes(rho: _GradedObject, operator: _GradedObject) -> None:
    if len(rho.axes) != len(operator.axes):
        raise GridMismatch(
            f"tuple ranks differ: {len(rho.axes)} vs {len(operator.axes)}"
        )
    for k, (a, b) in enumerate(zip(rho.axes, operator.axes)):
        if a.size != b.size or not np.allclose(a, b, rtol=0.0, atol=1e-12):
            raise GridMismatch(f"tuple axis {k} differs between the arguments")


def qft_pairing(rho: GradedState, operator: GradedObservable) -> GradedPairing:
    """Graded pairing: regular X regular quadrature plus matched pole terms.

    The finite part integrates ``rho.regular * operator.regular`` over the
    tuple grid.  Each pair of singular sectors with equal pole order and
    channel contributes its integrated coefficient product to
    ``pole_terms[order]``.  Pole terms are reported, never raised; they are
    empty or all zero exactly when either argument's sectors all vanish.
    """
    _require_compatible_axes(rho, operator)
    finite = _integrate(rho.regular * operator.regular, rho.axes)
    pole_terms: dict[int, complex] = {}
    for rho_sector in rho.singular_sectors:
        for op_sector in operator.singular_sectors:
            if rho_sector.order != op_sector.order:
                continue
            if rho_sector.channel != op_sector.channel:
                continue
            if rho_sector.values.shape != op_sector.values.shape:
                raise GridMismatch(
                    f"order-{rho_sector.order} sectors have shapes "
                    f"{rho_sector.values.shape} vs {op_sector.values.shape}"
                )
            value = _integrate(rho_sector.values * op_sector.values, rho.axes)
            order = rho_sector.order
            pole_terms[order] = pole_terms.get(order, 0j) + value
    return GradedPairing(
        finite=finite, pole_terms=dict(sorted(pole_terms.items()))
    )


def regularize(x):
    """Project onto the regular part by emptying the singular sectors.

    A purely regular object is returned unchanged in content (fixed point),
    and the projection is idempotent.  After regularizing either argument,
    ``qft_pairing`` reports no pole terms at all.
    """
    return dataclasses.replace(x, singular_sectors=())


# ------------------------------------------------------------- kernel sources


def analytic_profile(
    omega: np.ndarray, family: str, center: float, width: float
) -> np.ndarray:
    """Sample a named profile; kernels are outer products of profiles.

    ``gaussian``: exp(-(w - center)^2 / (2 width^2));
    ``lorentzian``: width^2 / ((w - center)^2 + width^2).  Both peak at 1.
    """
    if not (math.isfinite(center) and math.isfinite(width) and width > 0.0):
        raise DomainError("profile needs finite center and width > 0")
    omega = np.asarray(omega, dtype=float)
    if family == "gaussian":
        return np.exp(-((omega - center) ** 2) / (2.0 * width**2))
    if family == "lorentzian":
        return width**2 / ((omega - center) ** 2 + width**2)
    raise DomainError(f"unknown profile family {family!r}")


def kernel_to_csv(path, values) -> None:
    """Write a sampled diagonal or kernel as CSV: header ``omega``, row-major."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DomainError("CSV kernels must be 1-d or 2-d")
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["omega"])
        for row in arr:
            writer.writerow([repr(float(v)) for v in row])


def kernel_from_csv(path, grid: SpectrumGrid) -> np.ndarray:
    """Read a diagonal (one row) or kernel (``nodes`` rows) sampled on ``grid``."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DomainError(f"{path}: empty kernel file") from None
        if header != ["omega"]:
            raise DomainError(f"{path}: expected header row 'omega'")
        rows = []
        for row in reader:
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError as exc:
                raise DomainError(f"{path}: non-numeric kernel entry") from exc
    n = grid.nodes
    if any(len(row) != n for row in rows):
        raise GridMismatch(f"{path}: rows must carry {n} values each")
    if len(rows) == 1:
        return np.asarray(rows[0])
    if len(rows) == n:
        return np.asarray(rows)
    raise GridMismatch(
        f"{path}: expected 1 row (diagonal) or {n} rows (kernel), got {len(rows)}"
    )
