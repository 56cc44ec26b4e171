"""Truncated Kramers-Kronig transforms and minimum-phase reconstruction.

The dispersion relations are evaluated on a finite band [w1, w2] only:

    Re G(w) =  (2/pi)   P.V. int W Im G(W) / (W^2 - w^2) dW
    Im G(w) = -(2w/pi)  P.V. int   Re G(W) / (W^2 - w^2) dW
    arg H(w) = tau0 w - (2w/pi) P.V. int ln|H(W)| / (W^2 - w^2) dW

The neglected tails behave almost linearly across a narrow band, so they are
absorbed into the fitted delay offset ``tau0`` rather than modeled.  Results
are trustworthy only in the band interior; the two endpoint samples of every
transform are returned as NaN markers and are never silently zero-filled.

A reconstruction from magnitude alone is the minimum-phase answer.  When the
transfer function has upper-half-plane zeros the true phase differs by the
all-pass contribution of each such zero, arg[(w - z)/(w - conj z)], which
carries no magnitude and must be added explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    BandError,
    DomainError,
    InsufficientDataError,
    ZeroTransmissionError,
)
from .numerics import FrequencyGrid, RealSeries, pv_kernel_integral
from .slab import (
    NULL_TRANSMISSION,
    ComplexZero,
    HalfPlane,
    SystemConfig,
    zeros_near_band,
)

# zeros centered farther out than this many band half-widths contribute
# near-linear phase that the delay-offset fit absorbs anyway
CORRECTION_REACH = 1.5

BOUNDARY_TOLERANCE = 1e-12  # rad, on |beta - pi/4|

MIN_FIT_POINTS = 8


class PhaseClass(Enum):
    MINIMUM_PHASE = "minimum-phase"
    NON_MINIMUM_PHASE = "non-minimum-phase"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class KkBand:
    """A grid together with the central sub-band where transforms are trusted.

    ``interior_fraction`` is the trusted fraction of the full width, centered;
    outside it the truncated tails bite and comparisons should not be scored.
    """

    grid: FrequencyGrid
    interior_fraction: float = 0.6

    def __post_init__(self):
        if not (0.0 < self.interior_fraction <= 1.0):
            raise BandError(
                f"interior_fraction must lie in (0, 1], got {self.interior_fraction}"
            )

    @property
    def interior_mask(self) -> np.ndarray:
        """Boolean mask selecting the trusted central samples (never empty)."""
        center = 0.5 * (self.grid.omega_min + self.grid.omega_max)
        half = 0.5 * (self.grid.omega_max - self.grid.omega_min) * self.interior_fraction
        return np.abs(self.grid.omegas - center) <= half * (1.0 + 1e-12)


@dataclass(frozen=True)
class PhaseReconstruction:
    """Phase recovered from magnitude, plus the bookkeeping around it.

    ``delay_offset`` is the fitted (or injected) coefficient of the linear
    phase term in seconds.  ``zeros_used`` records the upper-half-plane zeros
    whose all-pass phase has been added; it stays empty unless
    ``correction_applied`` is set.
    """

    phase: RealSeries
    delay_offset: float
    correction_applied: bool = False
    zeros_used: tuple = ()

    def __post_init__(self):
        if not self.correction_applied and self.zeros_used:
            raise DomainError("zeros_used must be empty before correction")


def _finite_core(series: RealSeries):
    """Contiguous finite run of a marker-bearing series, as (grid, values, lo).

    Raises BandError if nothing usable is left: markers interleaved with
    data, or fewer than 16 finite samples (too narrow to transform).
    """
    finite = np.isfinite(series.values)
    count = finite.size
    if not finite.any():
        raise BandError("series is all markers; nothing to transform")
    lo = int(np.argmax(finite))
    hi = count - 1 - int(np.argmax(finite[::-1]))
    if not np.all(finite[lo:hi + 1]):
        raise BandError("finite samples are not contiguous; cannot transform")
    width = hi - lo + 1
    if width < 16:
        raise BandError(f"band too narrow after trimming markers: {width} samples")
    if lo == 0 and hi == count - 1:
        return series.grid, series.values, 0
    omegas = series.grid.omegas
    core_grid = FrequencyGrid(float(omegas[lo]), float(omegas[hi]), width)
    return core_grid, np.asarray(series.values[lo:hi + 1]), lo


def _transform(series: RealSeries, numerator, scale) -> RealSeries:
    """Shared driver: PV-transform the finite core, mark the rest NaN."""
    core_grid, core_values, lo = _finite_core(series)
    core = RealSeries(core_grid, numerator(core_grid.omegas, core_values))
    out = np.full(series.grid.count, np.nan)
    for k in range(1, core_grid.count - 1):
        w = core_grid.omegas[k]
        out[lo + k] = scale(w) * pv_kernel_integral(core, float(w))
    return RealSeries(series.grid, out)


def kk_re_from_im(im: RealSeries) -> RealSeries:
    """Real part from imaginary part over the band; endpoints come back NaN."""
    return _transform(im, lambda w, v: w * v, lambda w: 2.0 / np.pi)


def kk_im_from_re(re: RealSeries) -> RealSeries:
    """Imaginary part from real part over the band; endpoints come back NaN."""
    return _transform(re, lambda w, v: v, lambda w: -2.0 * w / np.pi)


def phase_from_magnitude(mag: RealSeries, delay_offset: float = 0.0) -> PhaseReconstruction:
    """Minimum-phase reconstruction from a magnitude series.

    arg H(w) = delay_offset * w - (2w/pi) P.V. int ln mag / (W^2 - w^2) dW

    Parameters
    ----------
    mag : RealSeries
        Transmission magnitudes, all strictly positive.
    delay_offset : float
        Linear-phase coefficient in seconds (0.0 when it is to be fitted
        afterwards, see :func:`fit_delay_offset`).

    Raises
    ------
    ZeroTransmissionError
        If any magnitude is at or below 1e-13; the log diverges and the
        phase is genuinely undetermined there.
    """
    values = mag.values
    finite = values[np.isfinite(values)]
    if finite.size and np.min(finite) <= NULL_TRANSMISSION:
        k = int(np.nanargmin(np.where(np.isfinite(values), values, np.inf)))
        raise ZeroTransmissionError(
            f"magnitude {values[k]:.3e} at "
            f"{mag.grid.omegas[k] / (2 * np.pi) / 1e9:.6f} GHz is indistinguishable "
            "from zero; phase cannot be reconstructed"
        )
    log_mag = RealSeries(mag.grid, np.log(values))
    kernel = _transform(log_mag, lambda w, v: v, lambda w: -2.0 * w / np.pi)
    phase = kernel.values + delay_offset * mag.grid.omegas
    return PhaseReconstruction(RealSeries(mag.grid, phase), float(delay_offset))


def fit_delay_offset(mag: RealSeries,
                     reference_phase: RealSeries,
                     exclusion_halfwidth: float = 0.0,
                     band: KkBand | None = None,
                     extra_phase: RealSeries | None = None,
                     zero_offset_phase: RealSeries | None = None) -> float:
    """Least-squares linear-phase coefficient, in seconds.

    Fits ``reference - reconstruction(offset=0)`` against a line in omega,
    using only samples where both series are finite, optionally restricted
    to a trusted interior, and excluding a window around the transmission
    minimum (where reconstruction error concentrates).  The fit carries an
    intercept that is solved for and discarded: unwrapped references sit at
    an arbitrary multiple of 2 pi, and phases here are compared modulo a
    constant throughout.

    Parameters
    ----------
    mag, reference_phase : RealSeries
        Magnitude samples and the phase they should explain.
    exclusion_halfwidth : float
        Half-width in rad/s of the window dropped around the magnitude
        minimum; 0 keeps everything.
    band : KkBand, optional
        Restricts the fit to the trusted interior.
    extra_phase : RealSeries, optional
        Known non-minimum-phase contribution (the all-pass sum) subtracted
        from the reference before fitting, so the offset stays an apparatus
        constant rather than absorbing part of a 2 pi phase step.
    zero_offset_phase : RealSeries, optional
        Precomputed ``phase_from_magnitude(mag, 0).phase`` to reuse; passed
        by callers that need the reconstruction anyway.

    Raises
    ------
    InsufficientDataError
        Fewer than 8 usable samples survive the masks.
    """
    grid = mag.grid
    if reference_phase.grid != grid:
        raise DomainError("magnitude and reference phase live on different grids")
    if zero_offset_phase is None:
        zero_offset_phase = phase_from_magnitude(mag, 0.0).phase
    target = reference_phase.values - zero_offset_phase.values
    if extra_phase is not None:
        if extra_phase.grid != grid:
            raise DomainError("extra phase lives on a different grid")
        target = target - extra_phase.values

    keep = np.isfinite(target)
    if band is not None:
        if band.grid != grid:
            raise DomainError("band lives on a different grid")
        keep &= band.interior_mask
    if exclusion_halfwidth > 0.0:
        w_min = grid.omegas[int(np.nanargmin(
            np.where(np.isfinite(mag.values), mag.values, np.inf)))]
        keep &= np.abs(grid.omegas - w_min) > exclusion_halfwidth

    if int(np.count_nonzero(keep)) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"only {int(np.count_nonzero(keep))} samples usable for the "
            f"delay-offset fit; need at least {MIN_FIT_POINTS}"
        )
    omegas = grid.omegas[keep]
    # raw [omega, 1] columns are catastrophically ill-scaled (omega ~ 1e12),
    # and lstsq's rcond cutoff would silently drop the intercept direction;
    # center and scale so the solve is O(1)-conditioned, then rescale back
    center = float(np.mean(omegas))
    scale = float(np.std(omegas))
    design = np.column_stack([(omegas - center) / scale, np.ones_like(omegas)])
    coeffs, *_ = np.linalg.lstsq(design, target[keep], rcond=None)
    return float(coeffs[0]) / scale


def classify_minimum_phase(config: SystemConfig, band: FrequencyGrid) -> PhaseClass:
    """Which reconstruction regime a configuration is in over a band.

    Boundary when the analyzer sits at 45 degrees (within 1e-12 rad), where
    transmission nulls are exact and the phase is undefined through them.
    Otherwise minimum-phase exactly when every transfer-function zero whose
    real part falls in the band lies in the lower half-plane.
    """
    if abs(config.beta - np.pi / 4) <= BOUNDARY_TOLERANCE:
        return PhaseClass.BOUNDARY
    zeros = zeros_near_band(config, band)
    if all(z.half_plane is HalfPlane.LOWER for z in zeros):
        return PhaseClass.MINIMUM_PHASE
    return PhaseClass.NON_MINIMUM_PHASE


def allpass_phase(zero: ComplexZero, omegas: np.ndarray) -> np.ndarray:
    """Phase of the all-pass factor (w - z)/(w - conj z) along real omega.

    Evaluated as atan2(-b, w - a) - atan2(b, w - a) with z = a + ib, b > 0,
    which is continuous in omega (runs from -2 pi to 0), so no unwrapping
    step is needed.  The factor has unit magnitude for every real omega.
    """
    if zero.half_plane is not HalfPlane.UPPER:
        raise DomainError(
            f"all-pass factor needs an upper-half-plane zero, got branch "
            f"{zero.branch_index} tagged {zero.half_plane.value}"
        )
    a, b = zero.omega.real, zero.omega.imag
    shifted = np.asarray(omegas, dtype=float) - a
    return np.arctan2(-b, shifted) - np.arctan2(b, shifted)


def allpass_phase_correction(recon: PhaseReconstruction,
                             zeros,
                             grid: FrequencyGrid) -> PhaseReconstruction:
    """Add the all-pass phase of upper-half-plane zeros to a reconstruction.

    With no zeros this is the identity.  Any lower-tagged zero is a contract
    violation: its reflection is already accounted for by the minimum-phase
    kernel.
    """
    zeros = tuple(zeros)
    if recon.phase.grid != grid:
        raise DomainError("reconstruction lives on a different grid")
    if not zeros:
        return recon
    corrected = np.array(recon.phase.values)
    for z in zeros:
        corrected += allpass_phase(z, grid.omegas)
    return PhaseReconstruction(RealSeries(grid, corrected), recon.delay_offset,
                               correction_applied=True, zeros_used=zeros)


def correction_zeros(config: SystemConfig, band: FrequencyGrid) -> list[ComplexZero]:
    """Upper-half-plane zeros close enough to the band to matter.

    Zeros centered beyond 1.5 band half-widths contribute phase that is
    nearly linear across the band and is absorbed by the delay-offset fit.
    """
    near = zeros_near_band(config, band, widen=CORRECTION_REACH)
    return [z for z in near if z.half_plane is HalfPlane.UPPER]
