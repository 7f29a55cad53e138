"""Command-line front end.

    spdcwg <subcommand> CONFIG [--set key=value ...] [--out DIR] [--threads N]

Exit codes: 0 success, 2 usage error, 3 config error, 4 dispersion-data error,
5 I/O error, 6 computation error (no phase matching, out-of-range grid, ...).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import io as out_io
from .config import ConfigError, RunConfig
from .design import isolation, scan_pump
from .detection import predict_rates, read_measured_csv, reduce_measured
from .dispersion import DispersionError, DispersionRangeError, omega_to_um, um_to_omega
from .jsa import decompose
from .phasematching import NoPhaseMatchingError, phase_mismatch, pm_locus, qpm_period_for

log = logging.getLogger("spdcwg")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_DISPERSION = 4
EXIT_IO = 5
EXIT_COMPUTE = 6

EPILOG = """exit codes:
  0  success
  2  usage error
  3  config error (message names the key path)
  4  dispersion-data error (parse/schema, message names the line)
  5  I/O error
  6  computation error (no QPM solution, grid outside dispersion range, ...)
"""


def _metadata(cfg: RunConfig, wg, pump, triplets, grid) -> dict:
    return {
        "waveguide": {
            "length_m": wg.length,
            "qpm_period_m": wg.qpm_period,
            "qpm_order": wg.qpm_order,
            "dispersion_source": wg.dispersion.metadata,
        },
        "pump": {"center_nm": pump.center_um * 1e3, "fwhm_nm": pump.fwhm_um * 1e3, "shape": pump.shape},
        "triplets": [
            {"label": t.label, "pump": t.pump_mode, "signal": t.signal_mode, "idler": t.idler_mode,
             "weight": [complex(t.weight).real, complex(t.weight).imag]}
            for t in triplets
        ],
        "grid": {
            "omega_s_min": grid.omega_s_min, "omega_s_max": grid.omega_s_max, "n_s": grid.n_s,
            "omega_i_min": grid.omega_i_min, "omega_i_max": grid.omega_i_max, "n_i": grid.n_i,
        },
    }


def _wants(fmt: str, kind: str) -> bool:
    return fmt in (kind, "both")


def cmd_jsa(cfg: RunConfig, outdir: Path, threads: int) -> list[Path]:
    provider = cfg.dispersion()
    wg = cfg.waveguide(provider)
    pump = cfg.pump()
    triplets = cfg.triplets(provider)
    grid = cfg.grid()
    fmt = cfg.output_format()
    dec = decompose(wg, triplets, pump, grid, workers=threads, keep_jsa=True)
    written = []
    if _wants(fmt, "csv"):
        for comp in dec.components:
            written.append(out_io.write_text(outdir / f"jsi_{comp.triplet.label}.csv",
                                             out_io.grid_csv_text(comp.jsi)))
        written.append(out_io.write_text(outdir / "jsi_total.csv", out_io.grid_csv_text(dec.total)))
    if _wants(fmt, "json"):
        payload = _metadata(cfg, wg, pump, triplets, grid)
        payload["components"] = [
            {"label": c.triplet.label, "mass": c.mass, "jsa": out_io.grid_payload(a)}
            for c, a in zip(dec.components, dec.jsa)
        ]
        payload["total_jsi"] = out_io.grid_payload(dec.total)
        written.append(out_io.write_json(outdir / "jsa.json", payload))
    return written


def cmd_locus(cfg: RunConfig, outdir: Path, threads: int) -> list[Path]:
    provider = cfg.dispersion()
    wg = cfg.waveguide(provider)
    triplets = cfg.triplets(provider)
    s_lo, s_hi = cfg.interval("locus.signal_nm")
    n_s = cfg.number("locus.n_signal", integer=True, positive=True)
    i_lo, i_hi = cfg.interval("locus.idler_nm")
    tol = cfg.number("locus.tolerance", 1e-6, positive=True)
    steps = cfg.number("locus.bracket_steps", 400, positive=True, integer=True)
    omega_s = np.linspace(float(um_to_omega(s_hi * 1e-3)), float(um_to_omega(s_lo * 1e-3)), n_s)
    bounds = (float(um_to_omega(i_hi * 1e-3)), float(um_to_omega(i_lo * 1e-3)))

    rows, diagnostics = [], []
    for t in triplets:
        res = pm_locus(wg, t, omega_s, bounds, tolerance=tol, bracket_steps=steps)
        for ws, wi in res.points:
            rows.append([t.label, ws, wi, float(omega_to_um(ws)) * 1e3,
                         float(omega_to_um(wi)) * 1e3, phase_mismatch(wg, t, ws, wi)])
        diagnostics.append({"label": t.label, "n_points": len(res.points),
                            "omitted_omega_s": res.omitted,
                            "unconverged": [list(p) for p in res.unconverged]})
    header = ["triplet", "omega_s_rad_s", "omega_i_rad_s", "lambda_s_nm", "lambda_i_nm", "delta_k_rad_m"]
    fmt = cfg.output_format()
    written = []
    if _wants(fmt, "csv"):
        written.append(out_io.write_csv(outdir / "locus.csv", header, rows))
    if _wants(fmt, "json"):
        written.append(out_io.write_json(outdir / "locus.json", {
            "tolerance_rad_m": tol,
            "points": [dict(zip(header, r)) for r in rows],
            "diagnostics": diagnostics,
        }))
    return written


def cmd_rates(cfg: RunConfig, outdir: Path, threads: int) -> list[Path]:
    provider = cfg.dispersion()
    wg = cfg.waveguide(provider)
    pump = cfg.pump()
    triplets = cfg.triplets(provider)
    grid = cfg.grid()
    dec = decompose(wg, triplets, pump, grid, workers=threads)
    axis = str(cfg.get("rates.trigger_axis", "idler"))
    if axis not in ("idler", "signal"):
        raise ConfigError(f"rates.trigger_axis: expected idler or signal, got {axis!r}")
    try:
        rep = predict_rates(
            dec, cfg.number("rates.pair_rate_hz", positive=True), cfg.filters(),
            cfg.detector("trigger"), cfg.detector("signal"), cfg.coincidence(), trigger_axis=axis,
        )
        payload = rep.as_dict()
    except ZeroDivisionError as exc:
        raise ValueError(str(exc)) from None
    fmt = cfg.output_format()
    written = []
    if _wants(fmt, "csv"):
        keys = list(payload)[1:]
        written.append(out_io.write_csv(outdir / "rates.csv", keys, [[payload[k] for k in keys]]))
    if _wants(fmt, "json"):
        del payload["lambda_nm"]
        written.append(out_io.write_json(outdir / "rates.json", payload))
    return written


REDUCE_HEADER = ["lambda_nm", "Rs_hz", "Rt_hz", "Rc_hz", "Racc_hz", "ratio_raw_pct",
                 "ratio_corrected_pct", "sigma_ratio_pct"]


def cmd_reduce(cfg: RunConfig, outdir: Path, threads: int) -> list[Path]:
    source = cfg.path("reduce.input")
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read {source}: {exc.strerror}") from None
    try:
        rows = read_measured_csv(text)
    except ValueError as exc:
        raise ConfigError(f"reduce.input: {exc}") from None
    reports = reduce_measured(rows, cfg.coincidence(),
                              cfg.number("reduce.counting_interval_s", 300.0, positive=True))
    table = [[r.lambda_nm, r.R_s, r.R_t, r.R_c, r.R_acc, 100 * r.ratio_raw,
              100 * r.ratio_corrected, 100 * r.sigma_ratio] for r in reports]
    fmt = cfg.output_format()
    written = []
    if _wants(fmt, "csv"):
        written.append(out_io.write_csv(outdir / "reduce.csv", REDUCE_HEADER, table))
    if _wants(fmt, "json"):
        written.append(out_io.write_json(outdir / "reduce.json", {
            "window_s": cfg.coincidence().window_s,
            "rows": [r.as_dict() for r in reports],
        }))
    return written


def cmd_design_period(cfg: RunConfig, outdir: Path, threads: int) -> list[Path]:
    provider = cfg.dispersion()
    triplets = cfg.triplets(provider)
    index = cfg.number("design.triplet", 0, integer=True)
    if not 0 <= index < len(triplets):
        raise ConfigError(f"design.triplet: index {index} out of range")
    t = triplets[index]
    pump_nm = cfg.number("design.pump_nm", positive=True)
    signal_nm = cfg.number("design.signal_nm", positive=True)
    idler_nm = cfg.number("design.idler_nm", positive=True)
    order = cfg.number("design.order", 1, positive=True, integer=True)
    period = qpm_period_for(provider, t, pump_nm * 1e-3, signal_nm * 1e-3, idler_nm * 1e-3, order)
    header = ["triplet", "pump_nm", "signal_nm", "idler_nm", "order", "period_um"]
    row = [t.label, pump_nm, signal_nm, idler_nm, order, period * 1e6]
    fmt = cfg.output_format()
    written = []
    if _wants(fmt, "csv"):
        written.append(out_io.write_csv(outdir / "period.csv", header, [row]))
    if _wants(fmt, "json"):
        written.append(out_io.write_json(outdir / "period.json", dict(zip(header, row))))
    return written


def cmd_scan(cfg: RunConfig, outdir: Path, threads: int) -> list[Path]:
    provider = cfg.dispersion()
    wg = cfg.waveguide(provider)
    triplets = cfg.triplets(provider)
    base = cfg.pump()
    centers = cfg.number_list("scan.center_nm")
    fwhms = cfg.number_list("scan.fwhm_nm")
    reports = scan_pump(wg, triplets, base, fwhms, centers, cfg.grid(), workers=threads)
    labels = [t.label for t in triplets]
    header = ["center_nm", "fwhm_nm", "isolation", "dominant_triplet", "tie"] + [f"mass_{x}" for x in labels]
    rows = [[r.center_nm, r.fwhm_nm, r.isolation, r.dominant_label, r.tie, *r.masses] for r in reports]
    fmt = cfg.output_format()
    written = []
    if _wants(fmt, "csv"):
        written.append(out_io.write_csv(outdir / "scan.csv", header, rows))
    if _wants(fmt, "json"):
        written.append(out_io.write_json(outdir / "scan.json", {
            "triplets": labels,
            "reports": [
                {"center_nm": r.center_nm, "fwhm_nm": r.fwhm_nm, "isolation": r.isolation,
                 "dominant_triplet": r.dominant_label,
                 "ties": [labels[k] for k in r.ties], "masses": list(r.masses)}
                for r in reports
            ],
        }))
    return written


def cmd_isolation(cfg: RunConfig, outdir: Path, threads: int) -> list[Path]:
    provider = cfg.dispersion()
    wg = cfg.waveguide(provider)
    triplets = cfg.triplets(provider)
    pump = cfg.pump()
    rep = isolation(decompose(wg, triplets, pump, cfg.grid(), workers=threads))
    rep_dict = {"center_nm": pump.center_um * 1e3, "fwhm_nm": pump.fwhm_um * 1e3,
                "isolation": rep.isolation, "dominant_triplet": rep.dominant_label,
                "ties": [rep.labels[k] for k in rep.ties],
                "masses": dict(zip(rep.labels, rep.masses))}
    return [out_io.write_json(outdir / "isolation.json", rep_dict)]


COMMANDS = {
    "jsa": (cmd_jsa, "per-triplet and total JSI grids"),
    "locus": (cmd_locus, "phase-matching curves (dk = 0) per triplet"),
    "rates": (cmd_rates, "predicted singles/coincidence rates"),
    "reduce": (cmd_reduce, "reduce measured rate rows to heralding ratios"),
    "design-period": (cmd_design_period, "QPM period for a target wavelength triple"),
    "scan": (cmd_scan, "isolation over a grid of pump centers and bandwidths"),
    "isolation": (cmd_isolation, "isolation report for the configured pump"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdcwg",
        description="Down-conversion in multimode QPM waveguides: JSAs, loci, rates, scans.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, epilog=EPILOG,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("config", help="YAML run configuration")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config value by dotted key (repeatable)")
        p.add_argument("--out", help="output directory (default: output.dir or ./out)")
        p.add_argument("--threads", type=int, default=1, help="worker threads for grid evaluation")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    handler = COMMANDS[args.command][0]
    try:
        cfg = RunConfig.load(args.config, args.overrides)
        outdir = Path(args.out or cfg.get("output.dir", "out"))
        written = handler(cfg, outdir, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DispersionRangeError, NoPhaseMatchingError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except DispersionError as exc:
        print(f"dispersion error: {exc}", file=sys.stderr)
        return EXIT_DISPERSION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    for path in written:
        log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
