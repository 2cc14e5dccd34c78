"""Command-line front end.

Exit codes: 0 success, 1 configuration or schema error, 2 numerical
non-convergence, 3 conservation check failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import scenario as scn
from .observables import ConservationReport, conservation_report
from .propagation import (
    CascadeStage,
    compare_factors,
    propagate_cascade,
    propagate_mixture,
    sample_input,
)
from .spectrum import (
    SMALL_DEPTH_LIMIT,
    DegenerateSpectrum,
    dft_spectrum,
    envelope_fwhm,
    phase_compensate,
    predict_sidebands,
    spectral_extent,
)
from .timemap import MapNonConvergence, MapSolverConfig

log = logging.getLogger("ramanfm")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NONCONVERGENCE = 2
EXIT_VALIDATION = 3

OUT_DIR_ENV = "RAMANFM_OUT_DIR"


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    return repr(float(x))


def write_csv(path: Path, header: list[str], columns: list[str], arrays) -> None:
    """CSV with ``#`` comment header; floats in shortest round-trip form."""
    with open(path, "w", newline="\n") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in zip(*arrays):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _header(sc: scn.Scenario, command: str, medium: str) -> list[str]:
    return [
        f"ramanfm {__version__} {command} scenario={sc.name} medium={medium}",
        f"scenario_hash={sc.hash()}",
        f"units: time={sc.time_unit} freq={sc.freq_unit} (angular for normalized)",
    ]


def _medium(sc: scn.Scenario, requested):
    has_mix, has_casc = sc.profile is not None, sc.stages is not None
    if requested is None:
        if has_mix and has_casc:
            raise ConfigError("scenario defines both profile and stages; pass --medium")
        return "mixture" if has_mix else "cascade"
    if requested == "mixture" and not has_mix:
        raise ConfigError("scenario has no mixture profile")
    if requested == "cascade" and not has_casc:
        raise ConfigError("scenario has no cascade stages")
    return requested


def _solver(sc: scn.Scenario, args) -> MapSolverConfig:
    if args.tolerance is None:
        return sc.solver
    return MapSolverConfig(args.tolerance, sc.solver.abs_tol, sc.solver.max_steps)


def _propagate(sc, args, medium):
    grid = sc.grid(args.grid_count)
    cfg = _solver(sc, args)
    if medium == "mixture":
        return propagate_mixture(sc.pulse, sc.profile, grid, cfg, workers=args.workers)
    return propagate_cascade(sc.pulse, sc.stages, grid, cfg, workers=args.workers)


def _out_path(args, sc, suffix) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out / f"{sc.name}_{suffix}.csv"


def cmd_map(sc, args) -> int:
    medium = _medium(sc, args.medium)
    trace = _propagate(sc, args, medium)
    ts = sc.time_scale
    path = _out_path(args, sc, "map")
    write_csv(path, _header(sc, "map", medium), ["eta", "s", "G"],
              [trace.grid / ts, trace.s / ts, trace.g])
    print(path)
    return EXIT_OK


def cmd_propagate(sc, args) -> int:
    medium = _medium(sc, args.medium)
    trace = _propagate(sc, args, medium)
    e_in = sample_input(sc.pulse, trace.grid).e
    path = _out_path(args, sc, "field")
    write_csv(path, _header(sc, "propagate", medium), ["eta", "E_in", "E_out", "G"],
              [trace.grid / sc.time_scale, e_in, trace.e, trace.g])
    print(path)
    return EXIT_OK


def cmd_compare(sc, args) -> int:
    if sc.profile is None:
        raise ConfigError("compare needs a mixture profile")
    stages = sc.stages or [CascadeStage(p) for p in sc.profile.components()]
    grid = sc.grid(args.grid_count)
    table = compare_factors(sc.profile, stages, grid, _solver(sc, args), workers=args.workers)
    path = _out_path(args, sc, "compare")
    write_csv(path, _header(sc, "compare", "mixture+cascades"), list(table.columns),
              [table.eta / sc.time_scale, table.g_mix, table.g_product, table.g_ab, table.g_ba])
    print(path)
    return EXIT_OK


def cmd_spectrum(sc, args) -> int:
    medium = _medium(sc, args.medium)
    trace = _propagate(sc, args, medium)
    taper = args.taper or sc.taper
    spec = dft_spectrum(trace, taper)
    fs = sc.freq_scale
    header = _header(sc, "spectrum", medium) + [
        f"normalization: {spec.window_meta['normalization']} (internal time units)",
        f"taper={taper} n={spec.n} dt={_fmt(spec.dt)} t0={_fmt(spec.window_meta['t0'])}",
    ]
    path = _out_path(args, sc, "spectrum")
    write_csv(path, header, ["freq", "re", "im", "mag", "phase"],
              [spec.freqs / fs, spec.amps.real, spec.amps.imag, spec.magnitude, spec.phase])
    print(path)

    ext = spectral_extent(spec, sc.floor)
    print(f"extent@{sc.floor:g}: lo={ext.lo / fs:.6g} hi={ext.hi / fs:.6g} "
          f"centroid={ext.centroid / fs:.6g} asymmetry={ext.asymmetry:.4g} [{sc.freq_unit}]")

    stages = sc.stages if medium == "cascade" else [CascadeStage(sc.profile)]
    depths = [abs(m.comb_depth) for st in stages for m in st.profile.modes]
    if depths and max(depths) <= SMALL_DEPTH_LIMIT:
        pred = predict_sidebands(sc.pulse, stages, args.max_order)
        keep = np.flatnonzero(pred.freqs > 0.0)
        nm = len(pred.orders[0])
        cols = [f"q{j}" for j in range(nm)] + ["freq", "amp"]
        arrays = [[pred.orders[i][j] for i in keep] for j in range(nm)]
        arrays += [pred.freqs[keep] / fs, pred.amps[keep]]
        side = _out_path(args, sc, "sidebands")
        write_csv(side, _header(sc, "sidebands", medium)
                  + ["amp = prod_j J_q_j(xi_j), relative to the input carrier"], cols, arrays)
        print(side)
    return EXIT_OK


def cmd_synthesize(sc, args) -> int:
    medium = _medium(sc, args.medium)
    trace = _propagate(sc, args, medium)
    spec = dft_spectrum(trace, "none")
    synth = phase_compensate(spec)
    path = _out_path(args, sc, "synthesis")
    write_csv(path, _header(sc, "synthesize", medium) + ["all spectral phases set to zero"],
              ["eta", "E"], [synth.grid / sc.time_scale, synth.e])
    print(path)
    fwhm = envelope_fwhm(synth)
    cycles = fwhm * spec.centroid() / (2.0 * np.pi)
    print(f"envelope FWHM = {fwhm / sc.time_scale:.6g} {sc.time_unit} "
          f"= {cycles:.4g} cycles at the spectral centroid")
    return EXIT_OK


def format_report(report: ConservationReport) -> str:
    ratios = report.ratios()
    rows = [
        ("area", report.area_in, report.area_out, ratios["area"]),
        ("photons", report.photons_in, report.photons_out, ratios["photons"]),
        ("zero_count", report.zero_count_in, report.zero_count_out, ratios["zero_count"]),
        ("mean_freq_product", report.mean_freq_product_in, report.mean_freq_product_out,
         ratios["mean_freq_product"]),
        ("energy", report.energy_in, report.energy_out, ratios["energy"]),
    ]
    lines = [f"{'quantity':<20}{'input':>24}{'output':>24}{'ratio':>20}"]
    for name, a, b, r in rows:
        lines.append(f"{name:<20}{a:>24.15g}{b:>24.15g}{r:>20.12g}")
    return "\n".join(lines)


def cmd_validate(sc, args) -> int:
    medium = _medium(sc, args.medium)
    trace = _propagate(sc, args, medium)
    report = conservation_report(sc.pulse, trace)
    print(format_report(report))
    ratios = report.ratios()
    path = _out_path(args, sc, "report")
    with open(path, "w", newline="\n") as fh:
        for line in _header(sc, "validate", medium):
            fh.write(f"# {line}\n")
        fh.write("quantity,input,output,ratio\n")
        for name, a, b in [
            ("area", report.area_in, report.area_out),
            ("photons", report.photons_in, report.photons_out),
            ("zero_count", report.zero_count_in, report.zero_count_out),
            ("mean_freq_product", report.mean_freq_product_in, report.mean_freq_product_out),
            ("energy", report.energy_in, report.energy_out),
        ]:
            fh.write(f"{name},{_fmt(a)},{_fmt(b)},{_fmt(ratios[name])}\n")
    print(path)
    bad = report.violations(args.conservation_tol)
    if bad:
        print(f"conservation violated: {', '.join(bad)}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_preset(args) -> int:
    raw = scn.preset(args.name)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{args.name}.yaml"
    path.write_text(scn.dump(raw))
    print(path)
    return EXIT_OK


COMMANDS = {
    "map": cmd_map,
    "propagate": cmd_propagate,
    "compare": cmd_compare,
    "spectrum": cmd_spectrum,
    "synthesize": cmd_synthesize,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=os.environ.get(OUT_DIR_ENV, "."),
                        help=f"output directory (default ${OUT_DIR_ENV} or .)")
    common.add_argument("--grid-count", type=int, default=None, help="override grid.count")
    common.add_argument("--tolerance", type=float, default=None,
                        help="override solver.rel_tol")
    common.add_argument("--workers", type=int, default=1,
                        help="threads for grid evaluation; results do not depend on it")
    common.add_argument("--medium", choices=("mixture", "cascade"), default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="ramanfm",
        description="Probe-pulse propagation through a multimode Raman medium.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "map": "write (eta, s, G)",
        "propagate": "write input and output fields",
        "compare": "write mixture, product and cascade factors",
        "spectrum": "write the output spectrum (and Bessel sidebands for small depths)",
        "synthesize": "write the zero-phase synthesised pulse",
        "validate": "check conservation laws; exit 3 on violation",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("scenario", help="scenario YAML file")
        if name == "spectrum":
            p.add_argument("--taper", choices=("none", "hann"), default=None)
            p.add_argument("--max-order", type=int, default=12)
        if name == "validate":
            p.add_argument("--conservation-tol", type=float, default=1e-6)

    p = sub.add_parser("preset", parents=[common], help="write a figure preset scenario")
    p.add_argument("name", choices=scn.PRESETS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "preset":
            return cmd_preset(args)
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        sc = scn.load(args.scenario)
        log.info("loaded %s (%s), hash %s", sc.name, sc.units, sc.hash())
        return COMMANDS[args.command](sc, args)
    except (ConfigError, scn.ScenarioError, DegenerateSpectrum) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MapNonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
