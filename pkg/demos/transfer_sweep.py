"""Sweep the two-mode transfer function across the band.

A birefringent slab between a polarizer at 45 degrees and an analyzer at
angle beta transmits two phase-shifted copies of the input.  Near the
half-waveplate frequency (16.75 GHz here) the copies interfere
destructively and the transmission dips; how deep, and what the phase
does on the way through, depends only on how far beta sits from 45
degrees - and on which side.

Run:  python3 demos/transfer_sweep.py
"""

import numpy as np

from dlab import calibrated_config, group_delay, make_grid, transfer_phase, transmission

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # plotting is optional; the numbers tell the story
    plt = None

GHZ = 2.0 * np.pi * 1e9

BAND = make_grid(13.0 * GHZ, 20.0 * GHZ, 4096)

ANALYZERS_DEG = (40.0, 44.0, 50.0)


def main():
    freqs_ghz = BAND.omegas / GHZ
    vacuum = (0.2 + 1.0) / 299792458.0

    print("band: 13-20 GHz, %d points" % BAND.count)
    print("vacuum transit over the same path: %.4f ns" % (vacuum * 1e9))
    print()

    curves = {}
    for beta_deg in ANALYZERS_DEG:
        cfg = calibrated_config(beta=np.deg2rad(beta_deg))
        mag = transmission(cfg, BAND.omegas)
        phase = transfer_phase(cfg, BAND).values
        delay = group_delay(cfg, BAND.omegas)
        curves[beta_deg] = (mag, phase, delay)

        k = int(np.argmin(mag))
        print("analyzer %4.1f deg: |H| dips to %.4f at %.4f GHz; "
              "group delay spans %+.3f to %+.3f ns"
              % (beta_deg, mag[k], freqs_ghz[k],
                 1e9 * np.min(delay), 1e9 * np.max(delay)))

    mag40 = curves[40.0][0]
    cfg50 = calibrated_config(beta=np.deg2rad(50.0))
    mag50 = transmission(cfg50, BAND.omegas)
    print()
    print("magnitudes at 40 and 50 degrees agree to %.1e pointwise,"
          % np.max(np.abs(mag40 - mag50)))
    print("yet their group delays bend opposite ways at the dip: the")
    print("magnitude alone cannot say which side of 45 the analyzer is on.")

    if plt is None:
        print("\nmatplotlib not available; skipping the figure")
        return

    fig, axes = plt.subplots(3, 1, figsize=(7, 9), sharex=True)
    for beta_deg, (mag, phase, delay) in curves.items():
        label = "%.0f deg" % beta_deg
        axes[0].plot(freqs_ghz, mag, label=label)
        axes[1].plot(freqs_ghz, phase - phase[0], label=label)
        axes[2].plot(freqs_ghz, 1e9 * delay, label=label)
    axes[2].axhline(1e9 * vacuum, color="k", ls=":", lw=1, label="vacuum")
    axes[0].set_ylabel("|H|")
    axes[1].set_ylabel("phase (rad)")
    axes[2].set_ylabel("group delay (ns)")
    axes[2].set_xlabel("frequency (GHz)")
    for ax in axes:
        ax.legend(fontsize=8)
    fig.tight_layout()
    out = __file__.replace(".py", ".png")
    fig.savefig(out, dpi=120)
    print("\nwrote %s" % out)


if __name__ == "__main__":
    main()
