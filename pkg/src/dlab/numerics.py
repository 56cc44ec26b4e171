"""Uniform frequency grids and principal-value quadrature.

The quadrature evaluates integrals of the form

    P.V. integral over [omega_min, omega_max] of  f(W) / (W^2 - omega^2) dW

on a uniform grid by subtracting the singular part analytically:

    P.V. int f(W)/(W^2 - w^2) dW
        = int [f(W) - f(w)] / (W^2 - w^2) dW
        + f(w) * (1/2w) * ln| (w2 - w)(w1 + w) / ((w2 + w)(w1 - w)) |

The first integrand is finite everywhere; at W = w it is replaced by its
analytic limit f'(w)/(2w) and the whole thing is handled with the trapezoid
rule, which keeps the scheme second order in the grid spacing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BandError, DomainError, EndpointProximityError

TWO_PI = 2.0 * np.pi


def _readonly(values, dtype) -> np.ndarray:
    out = np.array(values, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency grid over a positive band.

    Sample k sits at ``omega_min + k * delta`` with
    ``delta = (omega_max - omega_min) / (count - 1)``, so positions are
    exactly reproducible from the three stored numbers.

    Parameters
    ----------
    omega_min, omega_max : float
        Band edges in rad/s, ``0 < omega_min < omega_max``.
    count : int
        Number of samples, at least 16.
    """

    omega_min: float
    omega_max: float
    count: int
    omegas: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.count < 16:
            raise BandError(f"grid needs at least 16 points, got {self.count}")
        if not (0.0 < self.omega_min < self.omega_max):
            raise BandError(
                f"band edges must satisfy 0 < omega_min < omega_max, "
                f"got [{self.omega_min}, {self.omega_max}]"
            )
        omegas = self.omega_min + np.arange(self.count) * self.delta
        object.__setattr__(self, "omegas", _readonly(omegas, float))

    @property
    def delta(self) -> float:
        """Grid spacing in rad/s (exactly uniform by construction)."""
        return (self.omega_max - self.omega_min) / (self.count - 1)


def make_grid(omega_min: float, omega_max: float, count: int) -> FrequencyGrid:
    """Build a uniform grid of ``count`` angular frequencies."""
    return FrequencyGrid(float(omega_min), float(omega_max), int(count))


@dataclass(frozen=True)
class RealSeries:
    """Real-valued samples over a :class:`FrequencyGrid`.

    Numerics operations require and produce finite values.  The KK engine
    marks the two not-evaluated endpoint samples of its outputs with NaN;
    that marker convention is documented there and never silently
    zero-filled.
    """

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values, float)
        if values.shape != (self.grid.count,):
            raise DomainError(
                f"series length {values.shape} does not match grid count {self.grid.count}"
            )
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class ComplexSeries:
    """Complex-valued samples over a :class:`FrequencyGrid`."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = _readonly(self.values, complex)
        if values.shape != (self.grid.count,):
            raise DomainError(
                f"series length {values.shape} does not match grid count {self.grid.count}"
            )
        object.__setattr__(self, "values", values)


def _require_finite(values: np.ndarray, label: str):
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{label} contains non-finite values")


def unwrap_values(raw: np.ndarray) -> np.ndarray:
    """Unwrap a 1-d array of principal-value phases.

    Adjacent differences are folded into (-pi, pi] and summed, so the output
    differs from the input by an exact integer multiple of 2*pi at every
    sample.
    """
    raw = np.asarray(raw, dtype=float)
    _require_finite(raw, "phase")
    if raw.size == 0:
        return raw.copy()
    turns = np.round(np.diff(raw) / TWO_PI)
    offsets = np.concatenate([[0.0], np.cumsum(turns)])
    return raw - TWO_PI * offsets


def unwrap_phase(raw: RealSeries) -> RealSeries:
    """Unwrap a phase series; see :func:`unwrap_values`."""
    return RealSeries(raw.grid, unwrap_values(raw.values))


def _derivative_at(values: np.ndarray, k: int, delta: float) -> float:
    """Sampled derivative at index k.

    Fourth-order central stencil away from the edges, second-order one-sided
    at the two interior-adjacent points (the only other indices the PV
    quadrature may land on).
    """
    n = values.size
    if 2 <= k <= n - 3:
        return (values[k - 2] - 8.0 * values[k - 1]
                + 8.0 * values[k + 1] - values[k + 2]) / (12.0 * delta)
    if k == 1:
        return (-3.0 * values[1] + 4.0 * values[2] - values[3]) / (2.0 * delta)
    if k == n - 2:
        return (3.0 * values[n - 2] - 4.0 * values[n - 3] + values[n - 4]) / (2.0 * delta)
    raise DomainError(f"derivative stencil undefined at index {k}")


def pv_kernel_integral(f: RealSeries, omega: float) -> float:
    """Principal-value integral of ``f(W) / (W^2 - omega^2)`` over the band.

    Parameters
    ----------
    f : RealSeries
        Finite samples of the numerator on a uniform grid.
    omega : float
        Evaluation frequency, strictly inside the band and at least one grid
        spacing away from either endpoint.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        If ``omega`` lies outside the open band.
    EndpointProximityError
        If ``omega`` is within one grid spacing of an endpoint.
    """
    grid = f.grid
    values = f.values
    _require_finite(values, "f")
    omega = float(omega)
    w1, w2 = grid.omega_min, grid.omega_max
    delta = grid.delta
    if not (w1 < omega < w2):
        raise DomainError(f"omega={omega} outside open band ({w1}, {w2})")
    # one full spacing of clearance, with a hair of float tolerance
    if (omega - w1) < delta * (1.0 - 1e-9) or (w2 - omega) < delta * (1.0 - 1e-9):
        raise EndpointProximityError(
            f"omega={omega} within one grid spacing of a band edge"
        )

    omegas = grid.omegas
    k0 = int(round((omega - w1) / delta))
    k0 = min(max(k0, 1), grid.count - 2)
    on_grid = abs(omegas[k0] - omega) <= 1e-9 * delta

    if on_grid:
        f_at = values[k0]
    else:
        f_at = float(np.interp(omega, omegas, values))

    den = omegas * omegas - omega * omega
    if on_grid:
        den[k0] = 1.0  # placeholder, overwritten below
    integrand = (values - f_at) / den
    if on_grid:
        integrand[k0] = _derivative_at(values, k0, delta) / (2.0 * omega)

    total = float(np.trapezoid(integrand, dx=delta))
    gap = np.log(abs(((w2 - omega) * (w1 + omega)) / ((w2 + omega) * (w1 - omega))))
    total += f_at * gap / (2.0 * omega)
    return total
