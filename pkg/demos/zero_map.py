"""Trace the transfer-function zeros through the complex frequency plane.

Each transmission dip is the shadow of a zero sitting just off the real
frequency axis.  Rotating the analyzer through 45 degrees drags the
zeros across the axis: below 45 they sit in the lower half-plane
(minimum phase, magnitude determines phase), above 45 in the upper
half-plane (the magnitude hides an all-pass factor).  Exactly at 45 the
zeros land on the axis and the dips become true nulls.

Run:  python3 demos/zero_map.py
"""

import numpy as np

from dlab import calibrated_config, make_grid, zeros_near_band

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

GHZ = 2.0 * np.pi * 1e9

BAND = make_grid(13.0 * GHZ, 20.0 * GHZ, 64)

ANALYZERS_DEG = (30.0, 35.0, 40.0, 44.0, 45.0, 46.0, 50.0, 55.0, 60.0)


def main():
    print("zeros with real part within 1.5x of the 13-20 GHz band")
    print()
    print("%8s %12s %12s %8s %12s" % ("beta", "re (GHz)", "im (GHz)",
                                      "plane", "residual"))
    track = []
    for beta_deg in ANALYZERS_DEG:
        cfg = calibrated_config(beta=np.deg2rad(beta_deg), air_path=0.0)
        for z in zeros_near_band(cfg, BAND):
            re_ghz = z.omega.real / GHZ
            im_ghz = z.omega.imag / GHZ
            plane = "axis" if abs(im_ghz) < 1e-9 else z.half_plane.value
            print("%8.1f %12.4f %+12.4f %8s %12.2e"
                  % (beta_deg, re_ghz, im_ghz, plane, z.residual))
            track.append((beta_deg, re_ghz, im_ghz))
    print()
    print("the imaginary part follows -ln(cot beta) scaled by the retardance")
    print("slope: it vanishes at 45 degrees and changes sign across it.")

    if plt is None:
        print("\nmatplotlib not available; skipping the figure")
        return

    betas = np.array([t[0] for t in track])
    res = np.array([t[1] for t in track])
    ims = np.array([t[2] for t in track])
    fig, ax = plt.subplots(figsize=(7, 5))
    scatter = ax.scatter(res, ims, c=betas, cmap="coolwarm", s=40)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("Re omega / 2 pi (GHz)")
    ax.set_ylabel("Im omega / 2 pi (GHz)")
    fig.colorbar(scatter, label="analyzer angle (deg)")
    fig.tight_layout()
    out = __file__.replace(".py", ".png")
    fig.savefig(out, dpi=120)
    print("\nwrote %s" % out)


if __name__ == "__main__":
    main()
