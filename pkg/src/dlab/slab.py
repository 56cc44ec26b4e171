"""Two-mode transfer function of a birefringent slab between polarizers.

Geometry: an input polarizer at angle ``theta`` from the TM axis launches a
superposition of the slab's TE and TM eigenmodes; each accumulates phase
``phi = n(w) * w * d / c + w * air_path / c`` across the slab and the free
air path; an output analyzer at angle ``beta`` projects the modes back onto
a single port.  The scalar transfer function is

    H(w) = sin(beta) sin(theta) e^{i phi_te} + cos(beta) cos(theta) e^{i phi_tm}

TM is taken parallel to the fast (lower-index) axis, so the retardance
``phi_te - phi_tm`` grows with frequency for the calibrated configurations.

All frequencies are angular (rad/s), lengths are metres, phases radians.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import (
    ConvergenceError,
    DomainError,
    MultipleRootWarning,
    SingularTransmissionWarning,
    ZeroTransmissionError,
)
from .numerics import FrequencyGrid, RealSeries, unwrap_values

C_VACUUM = 299792458.0  # m/s

# transmissions below this are treated as exact nulls
NULL_TRANSMISSION = 1e-13


@dataclass(frozen=True)
class ConstantIndex:
    """Dispersionless refractive index."""

    n0: float

    def n(self, omega):
        return np.full(np.shape(omega), self.n0) if np.ndim(omega) else self.n0

    def n_prime(self, omega):
        return np.zeros(np.shape(omega)) if np.ndim(omega) else 0.0


@dataclass(frozen=True)
class LinearIndex:
    """Index varying linearly with frequency: n0 + slope * (w - omega_ref)."""

    n0: float
    slope: float  # per rad/s
    omega_ref: float  # rad/s

    def n(self, omega):
        return self.n0 + self.slope * (np.asarray(omega) - self.omega_ref)

    def n_prime(self, omega):
        return np.full_like(np.asarray(omega, dtype=float), self.slope)


@dataclass(frozen=True)
class LorentzIndex:
    """Single-oscillator index: n_inf + strength * (w0^2 - w^2) / D(w).

    D(w) = (w0^2 - w^2)^2 + gamma^2 w^2.  The derivative is analytic, so
    group delays never rely on finite differences of the model itself.
    """

    n_inf: float
    strength: float  # rad^2/s^2 scale absorbed here
    omega0: float
    gamma: float

    def n(self, omega):
        omega = np.asarray(omega, dtype=float)
        u = self.omega0**2 - omega**2
        return self.n_inf + self.strength * u / (u * u + self.gamma**2 * omega**2)

    def n_prime(self, omega):
        omega = np.asarray(omega, dtype=float)
        u = self.omega0**2 - omega**2
        den = u * u + self.gamma**2 * omega**2
        num = u * u - self.gamma**2 * omega**2 - self.gamma**2 * u
        return self.strength * 2.0 * omega * num / (den * den)


class HalfPlane(Enum):
    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class ComplexZero:
    """One complex-frequency zero of the transfer function.

    ``residual`` is |H| at the root, evaluated in factored form so the
    verification stays meaningful when the linear phase factor is large off
    the real axis.
    """

    omega: complex
    branch_index: int
    half_plane: HalfPlane
    residual: float


@dataclass(frozen=True)
class SystemConfig:
    """Slab-between-polarizers system.

    Parameters
    ----------
    d : float
        Slab thickness in metres, positive.
    index_te, index_tm : index model
        Mode indices; any object with ``n(omega)`` and ``n_prime(omega)``.
    theta : float
        Input polarizer angle from the TM axis, rad, in (0, pi/2).
    beta : float
        Output analyzer angle, rad, in [0, pi).  Values at or beyond pi/2
        are accepted so the crossed-analyzer port (beta + pi/2) can be
        evaluated; operations that need ln(cot(beta)) finite enforce
        (0, pi/2) themselves.
    air_path : float
        Free-space path outside the slab in metres, non-negative.
    """

    d: float
    index_te: object
    index_tm: object
    theta: float
    beta: float
    air_path: float = 0.0
    c: float = C_VACUUM

    def __post_init__(self):
        if not self.d > 0.0:
            raise DomainError(f"slab thickness must be positive, got {self.d}")
        if self.air_path < 0.0:
            raise DomainError(f"air path must be non-negative, got {self.air_path}")
        if not (0.0 < self.theta < np.pi / 2):
            raise DomainError(f"theta must lie in (0, pi/2), got {self.theta}")
        if not (0.0 <= self.beta < np.pi):
            raise DomainError(f"beta must lie in [0, pi), got {self.beta}")
        if not self.c > 0.0:
            raise DomainError("c must be positive")


def calibrated_config(beta: float,
                      f_null: float = 16.75e9,
                      d: float = 0.2,
                      air_path: float = 1.0,
                      n_tm: float = 1.15,
                      theta: float = np.pi / 4) -> SystemConfig:
    """Constant-index system with its first half-waveplate null at ``f_null``.

    The index step is dn = c / (2 * f_null * d), so the retardance reaches
    pi at f_null (in Hz).  TE is the slow mode.
    """
    dn = C_VACUUM / (2.0 * f_null * d)
    return SystemConfig(
        d=d,
        index_te=ConstantIndex(n_tm + dn),
        index_tm=ConstantIndex(n_tm),
        theta=theta,
        beta=beta,
        air_path=air_path,
    )


def crossed_analyzer(config: SystemConfig) -> SystemConfig:
    """Same system read out through the orthogonal analyzer port."""
    if config.beta + np.pi / 2 >= np.pi:
        raise DomainError("crossed analyzer angle would leave [0, pi)")
    return SystemConfig(config.d, config.index_te, config.index_tm,
                        config.theta, config.beta + np.pi / 2,
                        config.air_path, config.c)


def _mode_index(config: SystemConfig, mode: str):
    if mode == "te":
        return config.index_te
    if mode == "tm":
        return config.index_tm
    raise DomainError(f"mode must be 'te' or 'tm', got {mode!r}")


def mode_phase(config, mode, omega):
    """Accumulated phase of one mode: n(w) w d / c + w air_path / c.

    Accepts scalar or array ``omega`` (non-negative; complex values are
    allowed for the analytic continuation used by the zero search).
    """
    model = _mode_index(config, mode)
    omega = np.asarray(omega)
    return (model.n(omega) * config.d + config.air_path) * omega / config.c


def mode_phase_slope(config, mode, omega):
    """d(mode_phase)/d(omega), via the model's analytic index derivative."""
    model = _mode_index(config, mode)
    omega = np.asarray(omega, dtype=float)
    return ((model.n(omega) + omega * model.n_prime(omega)) * config.d
            + config.air_path) / config.c


def retardance(config, omega):
    """TE-minus-TM phase difference; the air path cancels exactly."""
    omega = np.asarray(omega)
    dn = config.index_te.n(omega) - config.index_tm.n(omega)
    return dn * omega * config.d / config.c


def retardance_slope(config, omega):
    """d(retardance)/d(omega)."""
    omega = np.asarray(omega, dtype=float)
    dn = config.index_te.n(omega) - config.index_tm.n(omega)
    dn_p = config.index_te.n_prime(omega) - config.index_tm.n_prime(omega)
    return (dn + omega * dn_p) * config.d / config.c


def transfer_function(config, omega):
    """Complex transfer function H at real non-negative frequencies."""
    phi_te = mode_phase(config, "te", omega)
    phi_tm = mode_phase(config, "tm", omega)
    return (np.sin(config.beta) * np.sin(config.theta) * np.exp(1j * phi_te)
            + np.cos(config.beta) * np.cos(config.theta) * np.exp(1j * phi_tm))


def transmission(config, omega):
    """|H|; bounded by cos(beta - theta), reached where the retardance is 0 mod 2 pi."""
    return np.abs(transfer_function(config, omega))


def transfer_phase(config, grid: FrequencyGrid) -> RealSeries:
    """Unwrapped arg H over a grid, anchored so the first sample is principal.

    Raises
    ------
    ZeroTransmissionError
        If |H| drops below 1e-13 anywhere on the grid; the phase is not
        continuously defined through a null.
    """
    h = transfer_function(config, grid.omegas)
    mags = np.abs(h)
    if np.min(mags) < NULL_TRANSMISSION:
        k = int(np.argmin(mags))
        raise ZeroTransmissionError(
            f"|H| = {mags[k]:.3e} at {grid.omegas[k] / (2 * np.pi) / 1e9:.6f} GHz; "
            "phase undefined through a transmission null"
        )
    return RealSeries(grid, unwrap_values(np.angle(h)))


def group_delay(config, omega):
    """Group delay d(arg H)/d(omega), in seconds, from the closed form.

    tau(w) = phi_tm' + dphi' * (1 + k cos dphi) / (1 + k^2 + 2 k cos dphi)

    with k = cot(beta) cot(theta).  Warns when the transmission is nearly
    singular (|H| < 1e-6) and refuses exact nulls.
    """
    omega = np.asarray(omega, dtype=float)
    tm_slope = mode_phase_slope(config, "tm", omega)
    if config.beta == 0.0:
        # pure TM port; the cotangent form degenerates
        return tm_slope if tm_slope.ndim else float(tm_slope)
    k = 1.0 / (np.tan(config.beta) * np.tan(config.theta))
    u = retardance(config, omega)
    cos_u = np.cos(u)
    den = 1.0 + k * k + 2.0 * k * cos_u
    # |H| = sin(beta) sin(theta) sqrt(den)
    trans = np.sin(config.beta) * np.sin(config.theta) * np.sqrt(np.maximum(den, 0.0))
    if np.any(trans < NULL_TRANSMISSION):
        raise ZeroTransmissionError("group delay undefined at a transmission null")
    if np.any(trans < 1e-6):
        warnings.warn("group delay evaluated within 1e-6 of a transmission null",
                      SingularTransmissionWarning, stacklevel=2)
    tau = tm_slope + retardance_slope(config, omega) * (1.0 + k * cos_u) / den
    return tau if tau.ndim else float(tau)


def half_waveplate_frequencies(config, m_values, band: FrequencyGrid,
                               samples: int = 2048) -> list[float]:
    """Frequencies in the band where the retardance equals (2m+1) pi.

    The retardance is sampled across the band; each sign change of
    ``retardance - (2m+1) pi`` is bracketed with Brent's method and polished
    with Newton steps until |retardance - target| < 1e-12.  Targets with no
    crossing contribute nothing.  A non-monotone retardance triggers a
    :class:`MultipleRootWarning` and every crossing found is returned.
    """
    lo, hi = band.omega_min, band.omega_max
    omegas = np.linspace(lo, hi, samples)
    dphi = np.asarray(retardance(config, omegas), dtype=float)
    diffs = np.diff(dphi)
    monotone = np.all(diffs > 0.0) or np.all(diffs < 0.0)

    roots = []
    for m in m_values:
        target = (2 * int(m) + 1) * np.pi

        def residual(w, t=target):
            return float(retardance(config, w)) - t

        vals = dphi - target
        hits = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
        for i in hits:
            w = brentq(residual, omegas[i], omegas[i + 1], xtol=1e-3, rtol=1e-14)
            for _ in range(8):
                r = residual(w)
                if abs(r) < 1e-12:
                    break
                slope = float(retardance_slope(config, w))
                if slope == 0.0:
                    break
                w -= r / slope
            if abs(residual(w)) > 1e-10:
                raise ConvergenceError(
                    f"half-waveplate polish stalled at m={m}: |resid|={abs(residual(w)):.2e}"
                )
            roots.append(float(w))

    if not monotone and roots:
        warnings.warn("retardance is not monotone over the band; "
                      "returning every crossing found",
                      MultipleRootWarning, stacklevel=2)
    return sorted(roots)


def null_expansion(config, omega_m: float) -> tuple[float, float]:
    """Leading-order null-point predictions for beta = pi/4 +/- eps.

    Returns ``(predicted |H|, predicted group delay)`` at the half-waveplate
    frequency ``omega_m``:

        |H|   -> eps                       (error is cubic in eps)
        tau   -> phi_tm' +/- dphi'/(2 eps) (sign follows beta - pi/4)

    Requires 0 < |beta - pi/4| < 0.1 and 0 < beta < pi/2.
    """
    if not (0.0 < config.beta < np.pi / 2):
        raise DomainError("null expansion needs beta in (0, pi/2)")
    eps = config.beta - np.pi / 4
    if eps == 0.0 or abs(eps) >= 0.1:
        raise DomainError(f"|beta - pi/4| must lie in (0, 0.1), got {abs(eps)}")
    sign = 1.0 if eps > 0 else -1.0
    tm_slope = float(mode_phase_slope(config, "tm", omega_m))
    dphi_slope = float(retardance_slope(config, omega_m))
    return abs(eps), tm_slope + sign * dphi_slope / (2.0 * abs(eps))


def _retardance_poly(config):
    """Retardance as polynomial coefficients (a2, a1): dphi = a2 w^2 + a1 w.

    Only Constant/Linear index pairs admit this closed form; the zero search
    relies on it for seeding.
    """
    scale = config.d / config.c
    models = (config.index_te, config.index_tm)
    if all(isinstance(m, ConstantIndex) for m in models):
        return 0.0, (config.index_te.n0 - config.index_tm.n0) * scale

    def lin(m):
        if isinstance(m, ConstantIndex):
            return m.n0, 0.0
        if isinstance(m, LinearIndex):
            return m.n0 - m.slope * m.omega_ref, m.slope
        raise DomainError(
            "complex zero search supports Constant/Linear index models only"
        )

    b_te, s_te = lin(config.index_te)
    b_tm, s_tm = lin(config.index_tm)
    return (s_te - s_tm) * scale, (b_te - b_tm) * scale


def _retardance_complex(config, omega):
    a2, a1 = _retardance_poly(config)
    return a2 * omega * omega + a1 * omega


def transfer_zeros(config, n_values) -> list[ComplexZero]:
    """Complex-frequency zeros of H on the requested branch indices.

    H vanishes where the retardance hits

        dphi = (2n + 1) pi - i ln(cot(beta) cot(theta))

    For beta below pi/4 every zero sits in the lower half-plane, above pi/4
    in the upper half-plane (for a retardance that grows with frequency);
    the half-plane flips with the sign of the retardance slope.  Seeds come
    from the closed-form inversion of the (at most quadratic) retardance and
    are polished with Newton iterations on the reduced interference factor
    ``1 + tan(beta) tan(theta) e^{i dphi}``, which stays well conditioned
    where the full H would overflow.

    Requires ``0 < beta < pi/2`` (finite ln cot) and Constant/Linear index
    models.  Zero locations are independent of the air path.
    """
    if not (0.0 < config.beta < np.pi / 2):
        raise DomainError("zero search needs beta in (0, pi/2)")
    t = np.tan(config.beta) * np.tan(config.theta)
    log_cot = np.log(1.0 / t)
    a2, a1 = _retardance_poly(config)
    if a2 == 0.0 and a1 == 0.0:
        raise DomainError("retardance is identically zero; H has no zeros")

    zeros = []
    for n in n_values:
        n = int(n)
        target = (2 * n + 1) * np.pi - 1j * log_cot
        if a2 == 0.0:
            seed = target / a1
        else:
            disc = np.sqrt(a1 * a1 + 4.0 * a2 * target + 0j)
            cands = ((-a1 + disc) / (2.0 * a2), (-a1 - disc) / (2.0 * a2))
            affine = target / a1 if a1 != 0.0 else cands[0]
            seed = min(cands, key=lambda z: abs(z - affine))

        w = complex(seed)
        converged = False
        for _ in range(50):
            dphi = _retardance_complex(config, w)
            fac = 1.0 + t * np.exp(1j * dphi)
            slope = 2.0 * a2 * w + a1
            deriv = 1j * t * slope * np.exp(1j * dphi)
            if deriv == 0.0:
                break
            step = fac / deriv
            w -= step
            if abs(step) <= 1e-15 * abs(w):
                converged = True
                break
        residual_fac = abs(1.0 + t * np.exp(1j * _retardance_complex(config, w)))
        if not converged and residual_fac > 1e-12:
            raise ConvergenceError(
                f"zero polish for branch n={n} stalled: seed={seed}, "
                f"last |factor|={residual_fac:.2e}"
            )

        # |H| at the root via the factored form: the e^{i phi_tm} prefactor
        # is never multiplied back in at full scale
        phi_tm = complex(np.asarray(mode_phase(config, "tm", w)))
        residual = float(np.cos(config.beta) * np.cos(config.theta)
                         * np.exp(-phi_tm.imag) * residual_fac)
        plane = HalfPlane.UPPER if w.imag > 0.0 else HalfPlane.LOWER
        zeros.append(ComplexZero(w, n, plane, residual))
    return zeros


def zeros_near_band(config, band: FrequencyGrid, widen: float = 1.0) -> list[ComplexZero]:
    """Zeros whose real parts fall within ``widen`` times the band half-width.

    Branch candidates are read off the retardance evaluated at the widened
    band edges, with one branch of padding on each side.
    """
    center = 0.5 * (band.omega_min + band.omega_max)
    half = 0.5 * (band.omega_max - band.omega_min) * widen
    lo, hi = max(center - half, 0.0), center + half
    d_lo = float(np.real(_retardance_complex(config, lo)))
    d_hi = float(np.real(_retardance_complex(config, hi)))
    d_min, d_max = min(d_lo, d_hi), max(d_lo, d_hi)
    n_lo = int(np.floor((d_min / np.pi - 1.0) / 2.0)) - 1
    n_hi = int(np.ceil((d_max / np.pi - 1.0) / 2.0)) + 1
    found = transfer_zeros(config, range(n_lo, n_hi + 1))
    return [z for z in found if lo <= z.omega.real <= hi]
