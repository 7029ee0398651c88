"""Command-line front end.

Subcommands: dispersion, integrate, resonance, kinematics, resonator,
validate. CSV artifacts carry '#'-prefixed comment lines echoing every
effective parameter, floats print with 17 significant digits, and identical
configurations produce byte-identical output. Exit codes: 0 success, 1
usage error, 2 model/validation error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .constants import CONSTANTS
from .dispersion import csv_float, dispersion_sweep, write_dispersion_csv
from .dynamics import (DampingSpec, DriveSpec, ModeState, ModeSystem, integrate,
                       resonance_sweep, write_resonance_csv, write_trajectory_csv)
from .errors import CloudLatticeError, ConfigFileError
from .kinematics import (REFERENCE_FLOW_ESTIMATES, agreement_factor,
                         cloud_kinematics, earth_flows)
from .model import validate_model
from .modelio import load_model
from .resonator import (ResonatorGeometry, check_geometry, earth_path_lengths,
                        harmonic_lengths, spectral_window, travel_times)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MODEL = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cloudlattice",
                description="Lattice dynamics with velocity-coupled cloud fields")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    disp = sub.add_parser("dispersion", help="branch frequencies over a wavevector grid")
    disp.add_argument("--model", required=True, help="model config file")
    disp.add_argument("--grid", type=int, default=64, help="grid points (default 64)")
    disp.add_argument("--out", default="-", help="CSV output path (default stdout)")

    integ = sub.add_parser("integrate", help="time-evolve the collective coordinates")
    integ.add_argument("--model", required=True)
    integ.add_argument("--dt", type=float, required=True, help="time step, s")
    integ.add_argument("--t-end", type=float, required=True, help="end time, s")
    integ.add_argument("--force", type=float, default=0.0, help="drive amplitude")
    integ.add_argument("--omega", type=float, default=0.0,
                       help="drive angular frequency, rad/s")
    integ.add_argument("--eta", type=float, default=0.0, help="friction, 1/s")
    integ.add_argument("--record-every", type=float, default=None,
                       help="sampling interval, s")
    integ.add_argument("--out", default="-", help="CSV output path (default stdout)")

    reso = sub.add_parser("resonance", help="steady amplitude across drive frequencies")
    reso.add_argument("--model", required=True)
    reso.add_argument("--k-index", type=int, default=None,
                      help="mode index (default: highest-frequency mode)")
    reso.add_argument("--omega-min", type=float, required=True)
    reso.add_argument("--omega-max", type=float, required=True)
    reso.add_argument("--omega-steps", type=int, default=200)
    reso.add_argument("--eta", type=float, required=True, help="friction, 1/s (> 0)")
    reso.add_argument("--force", type=float, default=1.0, help="drive amplitude")
    reso.add_argument("--out", default="-", help="CSV output path (default stdout)")

    kin = sub.add_parser("kinematics", help="cloud kinematics calculator")
    kin.add_argument("--mass-amu", type=float, required=True,
                     help="particle mass in proton masses")
    kin.add_argument("--temperature", type=float, default=None, help="K")
    kin.add_argument("--velocity", type=float, default=None, help="m/s")
    kin.add_argument("--g0", type=float, default=None,
                     help="lattice constant for the overlap ratio, m")
    kin.add_argument("--flows", action="store_true",
                     help="include the two planetary flows")
    kin.add_argument("--out", default=None, help="also write the table as CSV")

    res = sub.add_parser("resonator", help="geometry and spectral-window calculator")
    res.add_argument("--check", nargs=2, type=float, metavar=("LT", "LR"),
                     help="check l_tan l_rad against pi/2")
    res.add_argument("--tolerance", type=float, default=0.01,
                     help="relative tolerance for --check (default 0.01)")
    res.add_argument("--nu-debye", type=float, default=1e13,
                     help="lattice vibration cutoff, Hz")
    res.add_argument("--l-max", type=float, default=0.12,
                     help="resonator dimension bounding the window, m")
    res.add_argument("--harmonics", type=int, default=0,
                     help="list the first N harmonic dimension pairs of --check")
    res.add_argument("--out", default=None, help="also write the table as CSV")

    val = sub.add_parser("validate", help="consistency-check a model file")
    val.add_argument("--model", required=True)

    return p


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _model_params(path, model) -> dict:
    spec = model.spec
    return {
        "model": path,
        "dimension": spec.dimension,
        "n_sites": ",".join(str(n) for n in spec.n_sites),
        "g0": csv_float(spec.g0),
        "atom_mass": csv_float(spec.atom_mass),
        "cloud_mass": csv_float(spec.cloud_mass),
    }


def _require_valid(model):
    report = validate_model(model.force_constants, model.coupling_constants, model.spec)
    if not report.passed:
        raise CloudLatticeError(f"model failed validation:\n{report}")


def _cmd_dispersion(args) -> int:
    model = load_model(args.model)
    _require_valid(model)
    results = dispersion_sweep(model, n_points=args.grid)
    params = {"command": "dispersion", **_model_params(args.model, model),
              "grid": args.grid}
    fh, own = _open_out(args.out)
    try:
        write_dispersion_csv(results, fh, params)
    finally:
        if own:
            fh.close()
    return EXIT_OK


def _cmd_integrate(args) -> int:
    model = load_model(args.model)
    _require_valid(model)
    system = ModeSystem.from_model(model)
    n = system.n_modes
    # Default start: unit real atom amplitude everywhere, cloud velocity
    # matched so the conserved cloud momentum starts at zero.
    state = ModeState(A=np.ones(n), A_dot=np.zeros(n), a=np.zeros(n),
                      a_dot=system.tau.astype(complex))
    drive = DriveSpec(f=args.force, omega=args.omega) if args.force != 0.0 else None
    damping = DampingSpec(eta=args.eta)
    record = integrate(state, system, drive, damping, t_end=args.t_end,
                       dt=args.dt, record_every=args.record_every)
    params = {"command": "integrate", **_model_params(args.model, model),
              "dt": csv_float(args.dt), "t_end": csv_float(args.t_end),
              "force": csv_float(args.force), "omega": csv_float(args.omega),
              "eta": csv_float(args.eta),
              "record_every": "auto" if args.record_every is None
              else csv_float(args.record_every),
              "initial": "A=1, Adot=0, a=0, adot=tau (zero cloud momentum)"}
    fh, own = _open_out(args.out)
    try:
        write_trajectory_csv(record, fh, params)
    finally:
        if own:
            fh.close()
    return EXIT_OK


def _cmd_resonance(args) -> int:
    model = load_model(args.model)
    _require_valid(model)
    system = ModeSystem.from_model(model)
    mode = args.k_index
    if mode is None:
        mode = int(np.argmax(system.omega_branch))
    if not 0 <= mode < system.n_modes:
        raise CloudLatticeError(f"mode index {mode} outside 0..{system.n_modes - 1}")
    omegas = np.linspace(args.omega_min, args.omega_max, args.omega_steps)
    curve = resonance_sweep(system, mode, args.force, omegas,
                            DampingSpec(eta=args.eta))
    params = {"command": "resonance", **_model_params(args.model, model),
              "k_index": mode, "omega_min": csv_float(args.omega_min),
              "omega_max": csv_float(args.omega_max),
              "omega_steps": args.omega_steps, "eta": csv_float(args.eta),
              "force": csv_float(args.force),
              "peak_omega": csv_float(curve.peak_omega)}
    fh, own = _open_out(args.out)
    try:
        write_resonance_csv(curve, fh, params)
    finally:
        if own:
            fh.close()
    return EXIT_OK


def _print_table(rows, params, csv_path) -> None:
    for key, value in params.items():
        print(f"# {key} = {value}")
    width = max(len(r[0]) for r in rows)
    sym = max(len(r[1]) for r in rows)
    for name, symbol, value, unit in rows:
        print(f"{name:<{width}}  {symbol:<{sym}}  {value:>24}  {unit}")
    if csv_path:
        with open(csv_path, "w") as fh:
            for key, value in params.items():
                fh.write(f"# {key} = {value}\n")
            fh.write("name,symbol,value,unit\n")
            for name, symbol, value, unit in rows:
                fh.write(f"{name},{symbol},{value},{unit}\n")


def _cmd_kinematics(args) -> int:
    mass = args.mass_amu * CONSTANTS.M_p
    kin = cloud_kinematics(mass, temperature=args.temperature,
                           v0=args.velocity, g0=args.g0)
    params = {"command": "kinematics", "mass_amu": csv_float(args.mass_amu)}
    if args.temperature is not None:
        params["temperature"] = csv_float(args.temperature)
    if args.velocity is not None:
        params["velocity"] = csv_float(args.velocity)
    if args.g0 is not None:
        params["g0"] = csv_float(args.g0)
    rows = [
        ("particle mass", "M", csv_float(kin.mass), "kg"),
        ("velocity", "v0", csv_float(kin.v0), "m/s"),
        ("wavelength", "lambda", csv_float(kin.wavelength), "m"),
        ("cloud amplitude", "Lambda", csv_float(kin.amplitude), "m"),
        ("envelope amplitude", "Lambda/pi", csv_float(kin.envelope_amplitude), "m"),
        ("transverse extent", "2*Lambda/pi", csv_float(kin.transverse_extent), "m"),
    ]
    if kin.overlap is not None:
        rows.append(("cloud overlap", "Lambda/g0", csv_float(kin.overlap), "1"))
    if args.flows:
        for flow in earth_flows(CONSTANTS, mass):
            ref = REFERENCE_FLOW_ESTIMATES[flow.flow_id]
            rows += [
                (f"{flow.flow_id} flow speed", "v", csv_float(flow.v), "m/s"),
                (f"{flow.flow_id} wavelength", "lambda",
                 csv_float(flow.wavelength), "m"),
                (f"{flow.flow_id} amplitude", "Lambda",
                 csv_float(flow.amplitude), "m"),
                (f"{flow.flow_id} wavelength vs reference", "x",
                 csv_float(agreement_factor(flow.wavelength, ref["wavelength"])), "1"),
                (f"{flow.flow_id} amplitude vs reference", "x",
                 csv_float(agreement_factor(flow.amplitude, ref["amplitude"])), "1"),
            ]
    _print_table(rows, params, args.out)
    return EXIT_OK


def _cmd_resonator(args) -> int:
    params = {"command": "resonator", "nu_debye": csv_float(args.nu_debye),
              "l_max": csv_float(args.l_max),
              "tolerance": csv_float(args.tolerance)}
    lengths = earth_path_lengths(CONSTANTS.R_earth)
    t_tan, t_rad = travel_times(lengths.L_tan, lengths.L_rad, CONSTANTS.c)
    window = spectral_window(args.nu_debye, args.l_max)
    rows = [
        ("surface path length", "L_tan", csv_float(lengths.L_tan), "m"),
        ("diameter path length", "L_rad", csv_float(lengths.L_rad), "m"),
        ("path ratio", "L_tan/L_rad", csv_float(lengths.ratio), "1"),
        ("surface travel time", "t_tan", csv_float(t_tan), "s"),
        ("diameter travel time", "t_rad", csv_float(t_rad), "s"),
        ("window wavelength min", "lambda_min", csv_float(window.lambda_min), "m"),
        ("window wavelength max", "lambda_max", csv_float(window.lambda_max), "m"),
        ("window frequency min", "nu_min", csv_float(window.nu_min), "Hz"),
        ("window frequency max", "nu_max", csv_float(window.nu_max), "Hz"),
    ]
    exit_code = EXIT_OK
    if args.check:
        lt, lr = args.check
        params["check"] = f"{csv_float(lt)} {csv_float(lr)}"
        result = check_geometry(lt, lr, args.tolerance)
        rows += [
            ("checked ratio", "l_tan/l_rad", csv_float(result.ratio), "1"),
            ("ratio deviation", "|r-pi/2|/(pi/2)", csv_float(result.deviation), "1"),
            ("geometry check", "", "pass" if result.passed else "fail", ""),
        ]
        if args.harmonics:
            geom = ResonatorGeometry(lt, lr)
            for n, ht, hr in harmonic_lengths(geom, args.harmonics):
                rows.append((f"harmonic {n}", f"l/{n}",
                             f"{csv_float(ht)} {csv_float(hr)}", "m"))
        if not result.passed:
            exit_code = EXIT_MODEL
    _print_table(rows, params, args.out)
    return exit_code


def _cmd_validate(args) -> int:
    model = load_model(args.model)
    report = validate_model(model.force_constants, model.coupling_constants,
                            model.spec)
    print(report)
    return EXIT_OK if report.passed else EXIT_MODEL


_COMMANDS = {
    "dispersion": _cmd_dispersion,
    "integrate": _cmd_integrate,
    "resonance": _cmd_resonance,
    "kinematics": _cmd_kinematics,
    "resonator": _cmd_resonator,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error [usage]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error [missing-file]: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except ConfigFileError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except CloudLatticeError as exc:
        print(f"error [model]: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
