"""Command-line front end: sweep, kk, zeros, and pulse analyses.

Configuration is a flat ``key = value`` text file with ``#`` comments;
angles and frequencies are degrees and GHz on this surface only, radians
and rad/s everywhere inside.  Flag overrides beat file values, and the
environment variable DLAB_POINTS beats the file's grid count.

CSV output is deterministic: 17 significant digits, ``.`` decimal
separator, LF line endings, fixed header rows.  Not-evaluated samples
print as ``nan``.  The human-readable report goes to stdout.

Exit codes: 0 success, 1 domain or physics error, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np
from scipy.signal import hilbert

from .errors import ConfigError, DlabError
from .kk import (
    KkBand,
    PhaseClass,
    PhaseReconstruction,
    allpass_phase,
    allpass_phase_correction,
    classify_minimum_phase,
    correction_zeros,
    fit_delay_offset,
    phase_from_magnitude,
)
from .numerics import RealSeries, make_grid, unwrap_values
from .pulse import PulseSpec, front_causality_check, propagate, synth_pulse
from .slab import (
    C_VACUUM,
    ConstantIndex,
    LinearIndex,
    LorentzIndex,
    SystemConfig,
    group_delay,
    transfer_function,
    zeros_near_band,
)

GHZ = 2.0 * np.pi * 1e9  # rad/s per GHz
NS = 1e-9

# sweep/kk samples at or below this magnitude print as undefined markers
SWEEP_NULL = 1e-12

DEFAULTS = {
    "d_m": "0.2",
    "air_path_m": "1.0",
    "theta_deg": "45",
    "beta_deg": "40",
    "index_tm": "constant 1.15",
    "index_te": "",  # empty: calibrate against f_null_ghz
    "f_null_ghz": "16.75",
    "f_min_ghz": "13",
    "f_max_ghz": "20",
    "points": "8192",
    # kk options
    "exclusion_ghz": "0.5",
    "interior_fraction": "0.6",
    # pulse options
    "carrier_ghz": "16.75",
    "sigma_ns": "24",
    "window_ns": "360",
    "samples": "262144",
    "front_ns": "auto",  # auto: seven sigmas before the peak; off: no front
}


def parse_config_text(text: str) -> dict:
    """Flat key = value lines; '#' starts a comment; later keys win."""
    values = dict(DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _parse_float(values: dict, key: str) -> float:
    try:
        return float(values[key])
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {values[key]!r}") from None


def _parse_int(values: dict, key: str) -> int:
    try:
        return int(values[key])
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {values[key]!r}") from None


def parse_index_model(text: str):
    """``constant n0`` | ``linear n0 slope omega_ref`` | ``lorentz n_inf A omega0 gamma``.

    Numeric parameters are SI: slopes per rad/s, frequencies rad/s.
    """
    parts = text.split()
    if not parts:
        raise ConfigError("empty index model")
    kind, args = parts[0].lower(), parts[1:]
    try:
        numbers = [float(p) for p in args]
    except ValueError:
        raise ConfigError(f"index model {text!r}: non-numeric parameter") from None
    if kind == "constant" and len(numbers) == 1:
        return ConstantIndex(numbers[0])
    if kind == "linear" and len(numbers) == 3:
        return LinearIndex(*numbers)
    if kind == "lorentz" and len(numbers) == 4:
        return LorentzIndex(*numbers)
    raise ConfigError(
        f"index model {text!r}: expected 'constant n0', "
        "'linear n0 slope omega_ref', or 'lorentz n_inf strength omega0 gamma'"
    )


class RunConfig:
    """Everything one command run needs, resolved from file + flags + env."""

    def __init__(self, values: dict, args: argparse.Namespace):
        if args.beta_deg is not None:
            values = dict(values, beta_deg=repr(args.beta_deg))
        if "DLAB_POINTS" in os.environ:
            values = dict(values, points=os.environ["DLAB_POINTS"])
        self.values = values

        d = _parse_float(values, "d_m")
        tm_text = values["index_tm"]
        te_text = values["index_te"]
        index_tm = parse_index_model(tm_text)
        if te_text:
            index_te = parse_index_model(te_text)
        else:
            if not isinstance(index_tm, ConstantIndex):
                raise ConfigError(
                    "index_te can only be calibrated automatically when "
                    "index_tm is constant; set index_te explicitly"
                )
            f_null = _parse_float(values, "f_null_ghz") * 1e9
            index_te = ConstantIndex(index_tm.n0 + C_VACUUM / (2.0 * f_null * d))

        try:
            self.system = SystemConfig(
                d=d,
                index_te=index_te,
                index_tm=index_tm,
                theta=np.deg2rad(_parse_float(values, "theta_deg")),
                beta=np.deg2rad(_parse_float(values, "beta_deg")),
                air_path=_parse_float(values, "air_path_m"),
            )
            self.grid = make_grid(_parse_float(values, "f_min_ghz") * GHZ,
                                  _parse_float(values, "f_max_ghz") * GHZ,
                                  _parse_int(values, "points"))
        except DlabError as exc:
            raise ConfigError(str(exc)) from exc

    def float_option(self, key: str) -> float:
        return _parse_float(self.values, key)

    def int_option(self, key: str) -> int:
        return _parse_int(self.values, key)


def load_run_config(args: argparse.Namespace) -> RunConfig:
    try:
        with open(args.config, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return RunConfig(parse_config_text(text), args)


def write_csv(path: str, header: list[str], columns: list[np.ndarray]):
    rows = len(columns[0])
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(header) + "\n")
        for i in range(rows):
            handle.write(",".join("%.17g" % float(col[i]) for col in columns) + "\n")


def _out_path(args: argparse.Namespace, command: str) -> str:
    return args.out if args.out else f"dlab_{command}.csv"


PLOT_TEMPLATE = """# gnuplot script; run: gnuplot {script}
set datafile separator ','
set datafile missing 'nan'
set terminal pngcairo size 900,900
set output '{stem}.png'
set multiplot layout 3,1
set xlabel 'frequency (GHz)'
set ylabel 'magnitude'
plot '{csv}' skip 1 using ($1/1e9):2 with lines notitle
set ylabel 'phase (rad)'
plot '{csv}' skip 1 using ($1/1e9):3 with lines notitle
set ylabel 'group delay (ns)'
plot '{csv}' skip 1 using ($1/1e9):($4*1e9) with lines notitle
unset multiplot
"""


def cmd_sweep(run: RunConfig, args: argparse.Namespace) -> int:
    grid = run.grid
    h = transfer_function(run.system, grid.omegas)
    mags = np.abs(h)

    phases = np.full(grid.count, np.nan)
    delays = np.full(grid.count, np.nan)
    defined = np.flatnonzero(mags > SWEEP_NULL)
    if defined.size:
        # unwrap each contiguous run separately; nulls break continuity
        breaks = np.flatnonzero(np.diff(defined) > 1)
        for segment in np.split(defined, breaks + 1):
            phases[segment] = unwrap_values(np.angle(h[segment]))
        delays[defined] = group_delay(run.system, grid.omegas[defined])

    path = _out_path(args, "sweep")
    write_csv(path, ["frequency_hz", "magnitude", "phase_rad", "group_delay_s"],
              [grid.omegas / (2.0 * np.pi), mags, phases, delays])
    stem = path[:-4] if path.endswith(".csv") else path
    script = stem + ".gp"
    with open(script, "w", encoding="utf-8", newline="") as handle:
        handle.write(PLOT_TEMPLATE.format(script=script, stem=stem, csv=path))

    k = int(np.argmin(mags))
    print(f"sweep: {grid.count} points, "
          f"{grid.omega_min / GHZ:.6g}-{grid.omega_max / GHZ:.6g} GHz")
    print(f"  magnitude minimum {mags[k]:.6e} at {grid.omegas[k] / GHZ:.6f} GHz")
    if np.any(mags <= SWEEP_NULL):
        print(f"  {int(np.sum(mags <= SWEEP_NULL))} null sample(s) marked undefined")
    print(f"  wrote {path} and {script}")
    return 0


def cmd_kk(run: RunConfig, args: argparse.Namespace) -> int:
    grid = run.grid
    system = run.system
    classification = classify_minimum_phase(system, grid)
    print(f"kk: classification {classification.value}")
    if classification is PhaseClass.BOUNDARY:
        print("  analyzer at 45 degrees: transmission nulls are exact and "
              "the phase is undefined there; no reconstruction possible")
        return 1

    mags = np.abs(transfer_function(system, grid.omegas))
    mag = RealSeries(grid, mags)
    model = RealSeries(grid, unwrap_values(np.angle(
        transfer_function(system, grid.omegas))))

    zeros = ()
    extra = None
    if classification is PhaseClass.NON_MINIMUM_PHASE:
        zeros = tuple(correction_zeros(system, grid))
        total = np.zeros(grid.count)
        for z in zeros:
            total += allpass_phase(z, grid.omegas)
        extra = RealSeries(grid, total)

    band = KkBand(grid, run.float_option("interior_fraction"))
    recon_zero = phase_from_magnitude(mag, 0.0)
    offset = fit_delay_offset(
        mag, model,
        exclusion_halfwidth=run.float_option("exclusion_ghz") * GHZ,
        band=band,
        extra_phase=extra,
        zero_offset_phase=recon_zero.phase,
    )
    recon = PhaseReconstruction(
        RealSeries(grid, recon_zero.phase.values + offset * grid.omegas), offset)
    if args.correct and zeros:
        recon = allpass_phase_correction(recon, zeros, grid)

    # phases are compared modulo a constant: align on the trusted interior,
    # shifting the reconstruction so residual = model - reconstruction holds
    # exactly in the emitted columns
    raw = model.values - recon.phase.values
    interior = band.interior_mask & np.isfinite(raw)
    shift = float(np.mean(raw[interior]))
    aligned = recon.phase.values + shift
    residual = model.values - aligned
    worst = float(np.max(np.abs(residual[interior])))

    path = _out_path(args, "kk")
    write_csv(path,
              ["frequency_hz", "phase_model_rad", "phase_kk_rad", "residual_rad"],
              [grid.omegas / (2.0 * np.pi), model.values, aligned, residual])
    print(f"  fitted delay offset {offset:.9e} s")
    print(f"  all-pass correction {'applied' if recon.correction_applied else 'not applied'}"
          f" ({len(recon.zeros_used)} zero(s) used, {len(zeros)} candidate(s))")
    print(f"  interior max |residual| {worst:.6f} rad")
    print(f"  wrote {path}")
    return 0


def cmd_zeros(run: RunConfig, args: argparse.Namespace) -> int:
    grid = run.grid
    found = zeros_near_band(run.system, grid, widen=1.5)
    res = np.array([z.omega.real / (2.0 * np.pi) for z in found])
    ims = np.array([z.omega.imag / (2.0 * np.pi) for z in found])
    residuals = np.array([z.residual for z in found])

    path = _out_path(args, "zeros")
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write("n,re_hz,im_hz,half_plane,residual\n")
        for k, z in enumerate(found):
            # a zero pinned to the real axis marks the boundary case
            if abs(ims[k]) <= 1e-12 * abs(res[k]):
                tag = "boundary"
            else:
                tag = z.half_plane.value
            handle.write("%d,%.17g,%.17g,%s,%.17g\n"
                         % (z.branch_index, res[k], ims[k], tag, residuals[k]))

    uppers = int(np.sum(ims > 1e-12 * np.abs(res)))
    lowers = int(np.sum(ims < -1e-12 * np.abs(res)))
    print(f"zeros: {len(found)} found with real parts within 1.5x the band")
    print(f"  {lowers} lower half-plane, {uppers} upper half-plane, "
          f"{len(found) - uppers - lowers} boundary")
    if len(found):
        print(f"  worst residual {float(np.max(residuals)):.3e}")
    print(f"  wrote {path}")
    return 0


def cmd_pulse(run: RunConfig, args: argparse.Namespace) -> int:
    sigma = run.float_option("sigma_ns") * NS
    window = run.float_option("window_ns") * NS
    front_text = run.values["front_ns"].strip().lower()
    if front_text == "off":
        front = None
    elif front_text == "auto":
        front = max(0.5 * window - 7.0 * sigma, 0.0)
    else:
        front = _parse_float(run.values, "front_ns") * NS

    try:
        spec = PulseSpec(
            carrier=run.float_option("carrier_ghz") * GHZ,
            envelope_sigma=sigma,
            window=window,
            samples=run.int_option("samples"),
            front_time=front,
        )
    except DlabError as exc:
        raise ConfigError(str(exc)) from exc

    pulse = synth_pulse(spec)
    result = propagate(pulse, run.system, band=run.grid)

    env_in = np.abs(hilbert(pulse.values))
    env_out = np.abs(hilbert(result.output.values))
    path = _out_path(args, "pulse")
    write_csv(path, ["time_s", "input_envelope", "output_envelope"],
              [pulse.times, env_in, env_out])

    print(f"pulse: carrier {spec.carrier / GHZ:.6g} GHz, sigma {sigma / NS:.6g} ns, "
          f"{spec.samples} samples")
    print(f"  measured peak delay      {result.peak_delay:.9e} s")
    print(f"  predicted group delay    {result.predicted_group_delay:.9e} s")
    vacuum = (run.system.d + run.system.air_path) / run.system.c
    print(f"  vacuum transit (d + air) {vacuum:.9e} s"
          + ("  [peak arrives earlier: anomalous]"
             if result.peak_delay < vacuum else ""))
    if result.front_arrival is not None:
        report = front_causality_check(result)
        print(f"  pre-front energy ratio   {report.pre_front_energy_ratio:.3e} "
              f"(threshold {report.threshold:.1e}): "
              f"{'PASS' if report.passed else 'FAIL'}")
        print(f"  wrote {path}")
        return 0 if report.passed else 1
    print("  no front set (front_ns = off): causality not checked")
    print(f"  wrote {path}")
    return 0


COMMANDS = {
    "sweep": cmd_sweep,
    "kk": cmd_kk,
    "zeros": cmd_zeros,
    "pulse": cmd_pulse,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlab",
        description="Birefringent-slab transfer functions, Kramers-Kronig "
                    "reconstruction, complex zeros, and pulse causality.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("sweep", "magnitude / phase / group delay over the band (CSV + plot script)"),
        ("kk", "reconstruct phase from magnitude and compare to the model"),
        ("zeros", "complex-plane zeros of the transfer function near the band"),
        ("pulse", "propagate a pulse and check peak delay and front causality"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="key = value config file")
        p.add_argument("--beta-deg", type=float, default=None,
                       help="analyzer angle override, degrees")
        p.add_argument("--out", default=None, help="CSV output path")
        if name == "kk":
            p.add_argument("--correct", action="store_true",
                           help="add the all-pass phase of upper-half-plane zeros")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = load_run_config(args)
        return COMMANDS[args.command](run, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
