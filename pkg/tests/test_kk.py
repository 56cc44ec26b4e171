"""Dispersion-relation engine: transforms, phase recovery, classification."""

import numpy as np
import pytest

from dlab import (
    BandError,
    C_VACUUM,
    ConstantIndex,
    DomainError,
    HalfPlane,
    InsufficientDataError,
    KkBand,
    PhaseClass,
    PhaseReconstruction,
    RealSeries,
    SystemConfig,
    ZeroTransmissionError,
    allpass_phase,
    allpass_phase_correction,
    calibrated_config,
    classify_minimum_phase,
    correction_zeros,
    fit_delay_offset,
    kk_im_from_re,
    kk_re_from_im,
    make_grid,
    phase_from_magnitude,
    transfer_phase,
    transfer_zeros,
    transmission,
)

GHZ = 2.0 * np.pi * 1e9


def calib(beta_deg, **kwargs):
    return calibrated_config(beta=np.deg2rad(beta_deg), **kwargs)


def band_grid(f_lo=13e9, f_hi=20e9, count=2048):
    return make_grid(2.0 * np.pi * f_lo, 2.0 * np.pi * f_hi, count)


def lorentzian_pair(grid, w0=1.0, gamma=0.4, wp2=1.0):
    """Analytic causal response: Re even, Im odd, exactly KK-consistent."""
    W = grid.omegas
    den = (w0**2 - W**2) ** 2 + (gamma * W) ** 2
    return wp2 * (w0**2 - W**2) / den, wp2 * gamma * W / den


def magnitude_series(cfg, grid):
    return RealSeries(grid, transmission(cfg, grid.omegas))


def reconstruction_residual(cfg, grid, interior_fraction=0.6,
                            exclusion=0.5 * GHZ, correct=False):
    """Fit the linear term, reconstruct, and return the worst interior error.

    The all-pass phase of any upper-half-plane zeros always enters the fit
    as a fixed regressor, so the fitted offset stays an apparatus constant;
    ``correct`` only controls whether the output includes that term.
    """
    mag = magnitude_series(cfg, grid)
    model = transfer_phase(cfg, grid)
    band = KkBand(grid, interior_fraction)
    zeros = tuple(correction_zeros(cfg, grid))
    extra = None
    if zeros:
        total = np.zeros(grid.count)
        for z in zeros:
            total += allpass_phase(z, grid.omegas)
        extra = RealSeries(grid, total)
    offset = fit_delay_offset(mag, model, exclusion_halfwidth=exclusion,
                              band=band, extra_phase=extra)
    recon = phase_from_magnitude(mag, offset)
    if correct and zeros:
        recon = allpass_phase_correction(recon, zeros, grid)
    resid = model.values - recon.phase.values
    keep = np.isfinite(resid) & band.interior_mask
    centered = resid[keep] - np.mean(resid[keep])
    return float(np.max(np.abs(centered)))


# ---------------------------------------------------------------------------
# band bookkeeping


def test_band_interior_mask_is_centered():
    grid = make_grid(1.0, 3.0, 101)
    band = KkBand(grid, 0.5)
    mask = band.interior_mask
    assert mask[50]
    assert not mask[0] and not mask[-1]
    # 50% of a symmetric band keeps the middle half
    kept = grid.omegas[mask]
    assert kept[0] == pytest.approx(1.5, abs=grid.delta)
    assert kept[-1] == pytest.approx(2.5, abs=grid.delta)


def test_band_fraction_validation():
    grid = make_grid(1.0, 3.0, 101)
    KkBand(grid, 1.0)
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(BandError):
            KkBand(grid, bad)


# ---------------------------------------------------------------------------
# re <-> im transforms


def test_zero_imaginary_part_gives_zero_real_part():
    grid = make_grid(0.1, 10.0, 256)
    out = kk_re_from_im(RealSeries(grid, np.zeros(256)))
    core = np.isfinite(out.values)
    assert np.all(out.values[core] == 0.0)
    # endpoints are not evaluated
    assert np.isnan(out.values[0]) and np.isnan(out.values[-1])


def relative_interior_error(grid, got, want, fraction):
    keep = np.isfinite(got) & KkBand(grid, fraction).interior_mask
    return np.max(np.abs(got[keep] - want[keep])) / np.max(np.abs(want[keep]))


def test_lorentzian_real_part_from_imaginary():
    grid = make_grid(0.05, 5.0, 2048)  # 100:1 span
    re, im = lorentzian_pair(grid)
    out = kk_re_from_im(RealSeries(grid, im))
    assert relative_interior_error(grid, out.values, re, 0.6) < 5e-3
    # the default interior misses the resonance on this span; check it too
    assert relative_interior_error(grid, out.values, re, 0.9) < 5e-3


def test_lorentzian_round_trip():
    grid = make_grid(0.05, 5.0, 2048)
    re, _ = lorentzian_pair(grid)
    im_hat = kk_im_from_re(RealSeries(grid, re))
    re_back = kk_re_from_im(RealSeries(grid, im_hat.values))
    assert relative_interior_error(grid, re_back.values, re, 0.6) < 1e-2
    assert relative_interior_error(grid, re_back.values, re, 0.9) < 1e-2


def test_transform_propagates_edge_markers():
    grid = make_grid(0.1, 10.0, 256)
    _, im = lorentzian_pair(grid, w0=3.0)
    values = im.copy()
    values[:3] = np.nan
    values[-2:] = np.nan
    out = kk_re_from_im(RealSeries(grid, values))
    # one more sample is lost at each end of the finite core
    assert np.all(np.isnan(out.values[:4]))
    assert np.all(np.isnan(out.values[-3:]))
    assert np.all(np.isfinite(out.values[4:-3]))


def test_transform_rejects_interior_markers():
    grid = make_grid(0.1, 10.0, 256)
    values = np.ones(256)
    values[100] = np.nan
    with pytest.raises(BandError):
        kk_re_from_im(RealSeries(grid, values))


def test_transform_rejects_all_markers_or_tiny_core():
    grid = make_grid(0.1, 10.0, 256)
    with pytest.raises(BandError):
        kk_re_from_im(RealSeries(grid, np.full(256, np.nan)))
    values = np.full(256, np.nan)
    values[120:130] = 1.0  # ten finite samples is below the minimum core
    with pytest.raises(BandError):
        kk_re_from_im(RealSeries(grid, values))


# ---------------------------------------------------------------------------
# phase from magnitude


def test_flat_magnitude_gives_pure_linear_phase():
    grid = band_grid(count=256)
    mag = RealSeries(grid, np.ones(256))
    d0 = 4.0e-9
    recon = phase_from_magnitude(mag, d0)
    core = np.isfinite(recon.phase.values)
    assert np.max(np.abs(recon.phase.values[core] - d0 * grid.omegas[core])) < 1e-12
    assert recon.delay_offset == d0
    assert not recon.correction_applied


def test_delay_offset_term_is_additive():
    grid = band_grid(count=512)
    mag = magnitude_series(calib(40), grid)
    base = phase_from_magnitude(mag, 0.0)
    shifted = phase_from_magnitude(mag, 2.5e-9)
    core = np.isfinite(base.phase.values)
    diff = shifted.phase.values[core] - base.phase.values[core]
    assert diff == pytest.approx(2.5e-9 * grid.omegas[core], rel=1e-12)


def test_phase_from_magnitude_rejects_nulls():
    grid = band_grid(count=281)  # 16.75 GHz on-grid
    values = transmission(calib(45), grid.omegas)
    with pytest.raises(ZeroTransmissionError) as err:
        phase_from_magnitude(RealSeries(grid, values))
    assert "GHz" in str(err.value)


def test_reconstruction_record_invariant():
    grid = band_grid(count=256)
    phase = RealSeries(grid, np.zeros(256))
    with pytest.raises(DomainError):
        PhaseReconstruction(phase, 0.0, correction_applied=False,
                            zeros_used=("marker",))


# ---------------------------------------------------------------------------
# linear-term fitting


def test_fit_recovers_injected_offset():
    grid = band_grid(count=1024)
    mag = magnitude_series(calib(40), grid)
    base = phase_from_magnitude(mag, 0.0)
    injected = 3.7e-9
    values = np.where(np.isfinite(base.phase.values),
                      base.phase.values + injected * grid.omegas, np.nan)
    reference = RealSeries(grid, values)
    got = fit_delay_offset(mag, reference, band=KkBand(grid, 0.6))
    assert got == pytest.approx(injected, rel=1e-9)


def test_fit_is_self_consistent():
    grid = band_grid(count=1024)
    cfg = calib(40)
    mag = magnitude_series(cfg, grid)
    model = transfer_phase(cfg, grid)
    first = fit_delay_offset(mag, model, exclusion_halfwidth=0.5 * GHZ,
                             band=KkBand(grid, 0.6))
    reduced = RealSeries(grid, model.values - first * grid.omegas)
    second = fit_delay_offset(mag, reduced, exclusion_halfwidth=0.5 * GHZ,
                              band=KkBand(grid, 0.6))
    assert abs(second) <= 1e-9 * abs(first)


def test_fit_free_space_delay():
    one = ConstantIndex(1.0)
    cfg = SystemConfig(d=0.2, index_te=one, index_tm=one,
                       theta=np.pi / 4, beta=np.deg2rad(40), air_path=0.8)
    grid = band_grid(count=1024)
    mag = magnitude_series(cfg, grid)
    model = transfer_phase(cfg, grid)
    got = fit_delay_offset(mag, model, band=KkBand(grid, 0.6))
    assert got == pytest.approx(1.0 / C_VACUUM, rel=1e-4)


def test_fit_requires_enough_samples():
    grid = band_grid(count=256)
    cfg = calib(40)
    mag = magnitude_series(cfg, grid)
    model = transfer_phase(cfg, grid)
    with pytest.raises(InsufficientDataError):
        fit_delay_offset(mag, model, exclusion_halfwidth=100.0 * GHZ)


def test_fit_rejects_mismatched_grids():
    cfg = calib(40)
    mag = magnitude_series(cfg, band_grid(count=256))
    model = transfer_phase(cfg, band_grid(count=512))
    with pytest.raises(DomainError):
        fit_delay_offset(mag, model)


def test_fit_accepts_precomputed_reconstruction():
    grid = band_grid(count=512)
    cfg = calib(40)
    mag = magnitude_series(cfg, grid)
    model = transfer_phase(cfg, grid)
    band = KkBand(grid, 0.6)
    plain = fit_delay_offset(mag, model, band=band)
    cached = fit_delay_offset(mag, model, band=band,
                              zero_offset_phase=phase_from_magnitude(mag).phase)
    assert cached == plain


# ---------------------------------------------------------------------------
# classification and all-pass correction


def test_classification_by_analyzer_angle():
    grid = band_grid(count=64)
    assert classify_minimum_phase(calib(40), grid) is PhaseClass.MINIMUM_PHASE
    assert classify_minimum_phase(calib(50), grid) is PhaseClass.NON_MINIMUM_PHASE
    assert classify_minimum_phase(calib(45), grid) is PhaseClass.BOUNDARY


def test_allpass_factor_has_unit_magnitude():
    grid = band_grid(count=512)
    zero = transfer_zeros(calib(50, air_path=0.0), [0])[0]
    phase = allpass_phase(zero, grid.omegas)
    factor = ((grid.omegas - zero.omega)
              / (grid.omegas - np.conj(zero.omega)))
    assert np.max(np.abs(np.abs(factor) - 1.0)) <= 1e-12
    assert np.max(np.abs(np.exp(1j * phase) - factor / np.abs(factor))) < 1e-12


def test_allpass_phase_is_continuous():
    grid = band_grid(f_lo=1e9, f_hi=60e9, count=4096)
    zero = transfer_zeros(calib(50, air_path=0.0), [0])[0]
    phase = allpass_phase(zero, grid.omegas)
    assert np.max(np.abs(np.diff(phase))) < 0.1
    assert np.all(phase <= 0.0) and np.all(phase >= -2.0 * np.pi)


def test_allpass_rejects_lower_half_plane_zero():
    zero = transfer_zeros(calib(40, air_path=0.0), [0])[0]
    assert zero.half_plane is HalfPlane.LOWER
    with pytest.raises(DomainError):
        allpass_phase(zero, band_grid(count=64).omegas)


def test_correction_with_no_zeros_is_identity():
    grid = band_grid(count=256)
    recon = phase_from_magnitude(magnitude_series(calib(40), grid), 0.0)
    assert allpass_phase_correction(recon, (), grid) is recon


def test_correction_zeros_picks_upper_half_plane_only():
    grid = band_grid(count=64)
    assert correction_zeros(calib(40), grid) == []
    zeros = correction_zeros(calib(50), grid)
    assert len(zeros) == 1
    assert zeros[0].half_plane is HalfPlane.UPPER


# ---------------------------------------------------------------------------
# magnitude blindness and the correction pipeline


def test_magnitudes_of_complementary_analyzers_match():
    grid = band_grid(count=1024)
    a = transmission(calib(40), grid.omegas)
    b = transmission(calib(50), grid.omegas)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_reconstruction_cannot_tell_complementary_analyzers_apart():
    grid = band_grid(count=512)
    r40 = phase_from_magnitude(magnitude_series(calib(40), grid), 0.0)
    r50 = phase_from_magnitude(magnitude_series(calib(50), grid), 0.0)
    core = np.isfinite(r40.phase.values)
    assert np.max(np.abs(r40.phase.values[core] - r50.phase.values[core])) < 1e-10


def test_minimum_phase_reconstruction_is_accurate():
    assert reconstruction_residual(calib(40), band_grid()) < 0.05


def test_non_minimum_phase_needs_the_correction():
    grid = band_grid()
    assert reconstruction_residual(calib(50), grid, correct=False) > np.pi / 2
    assert reconstruction_residual(calib(50), grid, correct=True) < 0.05


def test_residual_shrinks_as_band_widens():
    worst = [reconstruction_residual(calib(40), band_grid(lo, hi, 2048))
             for lo, hi in ((13e9, 20e9), (12e9, 21e9), (11e9, 22e9))]
    assert worst[1] < worst[0]
    assert worst[2] < worst[1]
