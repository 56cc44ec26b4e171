"""Recover the transfer phase from its magnitude alone.

For a causal response, log-magnitude and phase are tied together by a
dispersion integral, up to a linear term d0*omega (an overall delay the
magnitude cannot see) and up to all-pass factors from any zeros in the
upper half of the complex frequency plane.  The analyzer at 40 degrees
gives a minimum-phase system: magnitude plus a fitted d0 nails the
phase.  The analyzer at 50 degrees produces the same magnitude but
hides an upper-half-plane zero; the reconstruction misses by pi-scale
amounts near the dip until that zero's all-pass phase is added back.

Run:  python3 demos/phase_reconstruction.py
"""

import numpy as np

from dlab import (
    KkBand,
    RealSeries,
    allpass_phase,
    allpass_phase_correction,
    calibrated_config,
    classify_minimum_phase,
    correction_zeros,
    fit_delay_offset,
    make_grid,
    phase_from_magnitude,
    transfer_phase,
    transmission,
)

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

GHZ = 2.0 * np.pi * 1e9

BAND = make_grid(13.0 * GHZ, 20.0 * GHZ, 4096)
INTERIOR = KkBand(BAND, 0.6)


def reconstruct(beta_deg, correct):
    """Full pipeline: classify, fit the linear term, optionally correct."""
    cfg = calibrated_config(beta=np.deg2rad(beta_deg))
    mag = RealSeries(BAND, transmission(cfg, BAND.omegas))
    model = transfer_phase(cfg, BAND)

    zeros = tuple(correction_zeros(cfg, BAND))
    extra = None
    if zeros:
        total = np.zeros(BAND.count)
        for z in zeros:
            total += allpass_phase(z, BAND.omegas)
        extra = RealSeries(BAND, total)

    offset = fit_delay_offset(mag, model, exclusion_halfwidth=0.5 * GHZ,
                              band=INTERIOR, extra_phase=extra)
    recon = phase_from_magnitude(mag, offset)
    if correct and zeros:
        recon = allpass_phase_correction(recon, zeros, BAND)

    resid = model.values - recon.phase.values
    keep = np.isfinite(resid) & INTERIOR.interior_mask
    resid = resid - np.mean(resid[keep])  # phases compared up to a constant
    worst = float(np.max(np.abs(resid[keep])))
    kind = classify_minimum_phase(cfg, BAND).value
    return kind, offset, worst, model.values, recon.phase.values, resid


def main():
    print("interior window: central 60%% of 13-20 GHz, %d points" % BAND.count)
    print()
    rows = [(40.0, False), (50.0, False), (50.0, True)]
    panels = []
    for beta_deg, correct in rows:
        kind, offset, worst, model, recon, resid = reconstruct(beta_deg, correct)
        tag = "corrected" if correct else "uncorrected"
        print("analyzer %4.1f deg (%s, %s):" % (beta_deg, kind, tag))
        print("  fitted linear term %.6e s" % offset)
        print("  worst interior residual %.4f rad" % worst)
        panels.append((beta_deg, tag, model, recon, resid))
    print()
    print("same magnitude, different verdicts: the 50-degree phase needs the")
    print("all-pass term of its upper-half-plane zero before the dispersion")
    print("integral can reproduce it.")

    if plt is None:
        print("\nmatplotlib not available; skipping the figure")
        return

    freqs_ghz = BAND.omegas / GHZ
    fig, axes = plt.subplots(len(panels), 1, figsize=(7, 9), sharex=True)
    for ax, (beta_deg, tag, model, recon, resid) in zip(axes, panels):
        ax.plot(freqs_ghz, resid, lw=1)
        ax.set_ylabel("residual (rad)")
        ax.set_title("%.0f deg, %s" % (beta_deg, tag), fontsize=9)
    axes[-1].set_xlabel("frequency (GHz)")
    fig.tight_layout()
    out = __file__.replace(".py", ".png")
    fig.savefig(out, dpi=120)
    print("\nwrote %s" % out)


if __name__ == "__main__":
    main()
