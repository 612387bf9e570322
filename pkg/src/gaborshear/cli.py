"""Command-line interface: ``gaborshear <command> ...``.

Exit codes: 0 on success, 2 on invalid input or configuration, 1 on any other
failure. Reports are JSON on standard output unless ``--out`` is given.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import io
from .coneshear import ConeValidationError
from .config import ConfigError, RunConfig, config_from_dict, load_config
from .filters1d import (
    FilterValidationError,
    build_mband_bank,
    cascade_phi_hat,
    modulation_matrix_residual,
    partition_of_unity_residual,
    smith_barnwell_residual,
    two_scale_profile_residual,
)
from .gaborwin import WindowValidationError, build_window, gabor_frame_check, integer_tightness_residual, periodize
from .grid2d import FreqGrid, GridValidationError, forward_spectrum
from .groupshear import GroupValidationError
from .lattice import frame_operator_bounds
from .sparsebench import (
    CartoonValidationError,
    cartoon_preset,
    default_ns,
    fit_decay,
    nterm_error_curve,
    render_cartoon,
    wavelet_baseline_curve,
)
from .subband import SubbandValidationError, project_subband, project_two_band, projection_residuals

VALIDATION_ERRORS = (
    ConfigError,
    io.FormatError,
    FilterValidationError,
    SubbandValidationError,
    WindowValidationError,
    GridValidationError,
    ConeValidationError,
    GroupValidationError,
    CartoonValidationError,
)


class UsageError(Exception):
    """Invalid command-line usage detected after parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # pragma: no cover - exercised through run()
        raise UsageError(f"{self.prog}: {message}")


def _emit(payload: dict[str, Any], out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# Subcommands.


def cmd_filters_check(args: argparse.Namespace) -> dict[str, Any]:
    bank = build_mband_bank(args.M, args.family, profile=args.profile)
    report: dict[str, Any] = {
        "family": args.family,
        "M": args.M,
        "samples": args.samples,
        "modulation_matrix_residual": modulation_matrix_residual(bank.filters(), args.samples),
        "two_scale_residual": two_scale_profile_residual(bank, args.samples),
    }
    xi = 4.0 * args.M * ((np.arange(args.samples) + 0.5) / args.samples - 0.5)
    report["partition_of_unity_residual"] = partition_of_unity_residual(bank, xi)
    # Smith-Barnwell and the cascade limit concern the two-band lowpass.
    two = build_mband_bank(2, args.family, profile=args.profile)
    report["smith_barnwell_residual"] = smith_barnwell_residual(two.filter(0), args.samples)
    xi2 = 2.0 * ((np.arange(args.samples) + 0.5) / args.samples * 2 - 1)
    report["cascade_residual"] = float(np.max(np.abs(cascade_phi_hat(two.filter(0), xi2, 8) - two.phi_hat(xi2))))
    return report


def cmd_subband_check(args: argparse.Namespace) -> dict[str, Any]:
    bank = build_mband_bank(args.M, args.family, profile=args.profile)
    res = projection_residuals(bank, args.len, args.trials, args.seed)
    report: dict[str, Any] = {
        "M": args.M,
        "family": args.family,
        "len": args.len,
        "trials": args.trials,
        "seed": args.seed,
        "completeness": res["sum"],
        "idempotence": res["idempotent"],
        "orthogonality": res["orthogonal"],
    }
    if args.M == 2:
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(args.trials):
            c = rng.standard_normal(args.len) + 1j * rng.standard_normal(args.len)
            for part, ell in (("low", 0), ("high", 1)):
                diff = project_two_band(c, bank.filter(0), part) - project_subband(c, bank, ell)
                worst = max(worst, float(np.linalg.norm(diff) / np.linalg.norm(c)))
        report["two_band_form_agreement"] = worst
    return report


def cmd_frame_check_gabor(args: argparse.Namespace) -> dict[str, Any]:
    window = build_window(args.eps, args.profile)
    pw = periodize(window, args.N0, args.tau)
    report = gabor_frame_check(pw, args.grid)
    report.update(
        {
            "N0": args.N0,
            "tau": args.tau,
            "eps": args.eps,
            "grid": args.grid,
            "partition_residual": integer_tightness_residual(window, args.grid),
        }
    )
    return report


def cmd_frame_check_cone(args: argparse.Namespace) -> dict[str, Any]:
    overrides = {"N0": args.N0, "tau": args.tau, "epsilon": args.eps, "system": "cone"}
    if args.eigen_grid:
        overrides["N"] = args.eigen_grid
    cfg = load_config(args.config, **overrides)
    pw = periodize(build_window(cfg.effective_epsilon, cfg.nu_kind), cfg.N0, cfg.tau)
    report: dict[str, Any] = {
        "N0": cfg.N0,
        "tau": cfg.tau,
        "epsilon": cfg.effective_epsilon,
        "redundancy": cfg.N0 / cfg.tau,
        "painless": pw.is_painless,
        "gabor": gabor_frame_check(pw, args.grid),
    }
    if args.eigen_grid:
        lo, hi = frame_operator_bounds(cfg.build_system())
        report["eigen_bounds"] = {"N": cfg.N, "lower": lo, "upper": hi}
    return report


def _config_for_image(args: argparse.Namespace, N: int) -> RunConfig:
    cfg = load_config(args.config, system=getattr(args, "system", None))
    if args.config is not None:
        data = json.loads(Path(args.config).read_text())
        if "N" in data and data["N"] != N:
            raise ConfigError(f"N: configuration has N={data['N']} but the image is {N} x {N}")
    return load_config(args.config, system=getattr(args, "system", None), N=N) if cfg.N != N else cfg


def cmd_transform(args: argparse.Namespace) -> dict[str, Any]:
    img = io.read_image(args.input)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise io.FormatError(f"{args.input}: image must be square, got {img.shape}")
    cfg = _config_for_image(args, img.shape[0])
    system = cfg.build_system()
    coeffs = system.analyze(img)
    io.write_coefficients(args.out, coeffs, cfg.system, cfg.effective(), nonzero_only=args.nonzero_only)
    report = {
        "out": str(args.out),
        "system": cfg.system,
        "count": coeffs.size,
        "energy": coeffs.energy(),
        "config": cfg.effective(),
    }
    if cfg.system == "group":
        # The group system only reaches slopes up to slope_max, so report what it can reconstruct.
        F = forward_spectrum(img)
        xi1, xi2 = F.grid.mesh()
        covered = float(np.sum(np.abs(F.data[system.covers(xi1, xi2)]) ** 2))
        report["covered_energy_fraction"] = covered / max(F.norm() ** 2, np.finfo(float).tiny)
    return report


def cmd_reconstruct(args: argparse.Namespace) -> dict[str, Any]:
    table, values, meta = io.read_coefficients(args.input)
    cfg = config_from_dict(meta.get("config", {}))
    system = cfg.build_system()
    coeffs = io.fill_coefficients(system.template(), table, values)
    img = system.reconstruct(coeffs, real=args.real)
    out = Path(args.out)
    if out.suffix.lower() == ".pgm":
        io.write_pgm(out, np.real(img), bits=args.bits)
    else:
        io.write_raw(out, np.real(img))
    return {"out": str(out), "N": cfg.N, "config": cfg.effective()}


def parse_atom_index(text: str, system: str) -> tuple[int, ...]:
    """``[h|v,]j,ell,k,m1,m2`` to ``(kind, orientation, j, ell, k, m1, m2)``; ``ell = 0`` is the scaling atom."""
    parts = [p.strip() for p in text.split(",")]
    orient = 0
    if parts and parts[0] in ("h", "v"):
        orient = 0 if parts[0] == "h" else 1
        parts = parts[1:]
    if len(parts) != 5:
        raise UsageError(f"atom index {text!r} must read [h|v,]j,ell,k,m1,m2")
    try:
        j, ell, k, m1, m2 = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"atom index {text!r} contains a non-integer field") from None
    if system == "group" and orient != 0:
        raise UsageError("the group system has the horizontal orientation only")
    return (0 if ell == 0 else 1, orient, j, ell, k, m1, m2)


def cmd_atoms_render(args: argparse.Namespace) -> dict[str, Any]:
    cfg = load_config(args.config, system=args.system, N=args.N)
    system = cfg.build_system()
    idx = parse_atom_index(args.idx, cfg.system)
    template = system.template()
    try:
        pos = template.positions(np.array([idx]))
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    if args.domain == "frequency":
        grid = FreqGrid(cfg.N)
        xi1, xi2 = grid.mesh()
        data = np.abs(system.atom_hat(idx, xi1, xi2))
    else:
        flat = np.zeros(template.size, dtype=complex)
        flat[pos] = 1.0
        data = np.abs(system.synthesize(template.with_flat(flat)))
    peak = float(data.max())
    io.write_pgm(args.out, data / peak if peak > 0 else data)
    return {"out": str(args.out), "index": list(idx), "domain": args.domain, "peak": peak, "config": cfg.effective()}


def cmd_nterm(args: argparse.Namespace) -> dict[str, Any]:
    cfg = load_config(args.config, N=args.N, system="cone")
    img = render_cartoon(cartoon_preset(args.cartoon), cfg.N)
    Ns = default_ns(args.nmin, args.nmax, args.per_octave)
    curve = nterm_error_curve(img, cfg.build_system(), Ns)
    summary: dict[str, Any] = {
        "cartoon": args.cartoon,
        "config": cfg.effective(),
        "fit_window": [args.nmin, args.nmax],
        "shearlet": fit_decay(curve, args.nmin, args.nmax),
        "truncated": curve.truncated,
    }
    columns = [Ns, curve.errors]
    header = ["N", "err2_shearlet"]
    if args.baseline == "wavelet":
        base = wavelet_baseline_curve(img, Ns, cfg.family)
        summary["wavelet"] = fit_decay(base, args.nmin, args.nmax)
        summary["slope_margin"] = summary["wavelet"]["slope"] - summary["shearlet"]["slope"]
        columns.append(base.errors)
        header.append("err2_wavelet")
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([int(row[0])] + [repr(float(v)) for v in row[1:]])
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        io.write_json(io.sidecar_path(args.out), summary)
    else:
        sys.stdout.write(buf.getvalue())
    return summary


# Parser.


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gaborshear", description="Gabor shearlet systems: checks, transforms and experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def family_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", choices=["meyer", "shannon"], default="meyer")
        p.add_argument("--profile", choices=["poly4", "step"], default="poly4")

    filters = sub.add_parser("filters", help="filter bank identities").add_subparsers(dest="action", required=True)
    p = filters.add_parser("check")
    family_opts(p)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--out")
    p.set_defaults(func=cmd_filters_check)

    subband = sub.add_parser("subband", help="subband projection identities").add_subparsers(dest="action", required=True)
    p = subband.add_parser("check")
    family_opts(p)
    p.add_argument("--M", type=int, default=16)
    p.add_argument("--len", type=int, default=512)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_subband_check)

    frame = sub.add_parser("frame", help="frame bounds and redundancy").add_subparsers(dest="action", required=True)
    p = frame.add_parser("check-gabor")
    p.add_argument("--N0", type=int, default=4)
    p.add_argument("--tau", type=int, default=3)
    p.add_argument("--eps", type=float, default=1 / 6)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--profile", choices=["poly4", "step"], default="poly4")
    p.add_argument("--out")
    p.set_defaults(func=cmd_frame_check_gabor)
    p = frame.add_parser("check-cone")
    p.add_argument("--N0", type=int, default=4)
    p.add_argument("--tau", type=int, default=3)
    p.add_argument("--eps", type=float)
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--config")
    p.add_argument("--eigen-grid", type=int, default=0, help="also compute frame-operator eigen-bounds at this N")
    p.add_argument("--out")
    p.set_defaults(func=cmd_frame_check_cone)

    p = sub.add_parser("transform", help="analysis of an image")
    p.add_argument("--system", choices=["group", "cone"])
    p.add_argument("--config")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--nonzero-only", action="store_true", help="omit zero coefficients from the binary")
    p.set_defaults(func=cmd_transform, report_out=None)

    p = sub.add_parser("reconstruct", help="tight-frame reconstruction from a coefficient file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True, help="'.pgm' for an 8/16-bit image, anything else for raw float64")
    p.add_argument("--bits", type=int, choices=[8, 16], default=16)
    p.add_argument("--complex", dest="real", action="store_false", help="keep the imaginary part before output")
    p.set_defaults(func=cmd_reconstruct, report_out=None)

    atoms = sub.add_parser("atoms", help="atom rendering").add_subparsers(dest="action", required=True)
    p = atoms.add_parser("render")
    p.add_argument("--idx", required=True, help="[h|v,]j,ell,k,m1,m2")
    p.add_argument("--system", choices=["group", "cone"])
    p.add_argument("--config")
    p.add_argument("--N", type=int)
    p.add_argument("--domain", choices=["space", "frequency"], default="space")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_atoms_render, report_out=None)

    p = sub.add_parser("nterm", help="N-term approximation curve on a cartoon")
    p.add_argument("--config")
    p.add_argument("--cartoon", default="three-lobe")
    p.add_argument("--N", type=int)
    p.add_argument("--out")
    p.add_argument("--baseline", choices=["wavelet"])
    p.add_argument("--nmin", type=int, default=2**6)
    p.add_argument("--nmax", type=int, default=2**12)
    p.add_argument("--per-octave", type=int, default=2)
    p.set_defaults(func=cmd_nterm, report_out=None)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = args.func(args)
        if args.func is cmd_nterm:
            if args.out:
                _emit(payload, None)
        elif hasattr(args, "report_out"):
            _emit(payload, None)
        else:
            _emit(payload, args.out)
        return 0
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    except VALIDATION_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # noqa: BLE001 - any other failure is a runtime error
        sys.stderr.write(f"runtime error: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
