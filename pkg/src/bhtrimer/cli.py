"""Command-line pipeline: diagonalize -> classify -> simulate / compare / grid."""

from __future__ import annotations

import argparse
import os
import sys

from bhtrimer.cache import load_eigendata, save_eigendata
from bhtrimer.compare import compare_pair, format_comparison
from bhtrimer.config import build_config, config_echo, load_config
from bhtrimer.dynamics import closed_form_trajectory, default_times, trajectory_csv
from bhtrimer.dynrep import classify_and_fit, evaluate_dynrep
from bhtrimer.errors import InvalidParameterError, TrimerError
from bhtrimer.model_core import solve
from bhtrimer.statespec import parse_state_spec, to_superposition


def _fmt(x) -> str:
    return format(float(x), ".12g")


def classification_csv(classes) -> str:
    lines = ["index,energy,label,qn1,qn2,confidence"]
    for c in classes:
        q1, q2 = c.quantum_numbers if c.quantum_numbers is not None else ("", "")
        lines.append(f"{c.index},{_fmt(c.energy)},{c.label},{q1},{q2},{_fmt(c.confidence)}")
    return "\n".join(lines) + "\n"


def families_csv(families) -> str:
    lines = ["family_id,label,kind,key,members,complete,omega,m_eff"]
    for f in families:
        members = ";".join(str(m) for m in f.members)
        om = "" if f.omega_fit is None else _fmt(f.omega_fit)
        me = "" if f.m_eff_fit is None else _fmt(f.m_eff_fit)
        lines.append(f"{f.family_id},{f.label},{f.kind},{f.key},{members},{int(f.complete)},{om},{me}")
    return "\n".join(lines) + "\n"


def density_csv(field) -> str:
    x = field.grid.angles
    rho = field.density
    lines = ["u,v,density"]
    for i, u in enumerate(x):
        for j, v in enumerate(x):
            lines.append(f"{_fmt(u)},{_fmt(v)},{_fmt(rho[i, j])}")
    return "\n".join(lines) + "\n"


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file (defaults reproduce the reference setup)")
    common.add_argument("--cache", help="eigendata cache path (overrides config)")
    common.add_argument("--out", help="output directory (overrides config)")

    p = argparse.ArgumentParser(prog="bhtrimer", description="Three-well Bose-Hubbard eigenstates and dynamics.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("diagonalize", parents=[common], help="solve the model and write the eigendata cache")
    sub.add_parser("classify", parents=[common], help="write classification.csv and families.csv")
    s = sub.add_parser("simulate", parents=[common], help="write trajectory.csv for a superposition")
    s.add_argument("--state", required=True, help='e.g. "C:0,3 + C:0,4" or "#5"')
    s.add_argument("--tmax", type=float, help="time span in units of T = 2 pi / delta")
    s.add_argument("--samples", type=int, help="number of time samples")
    c = sub.add_parser("compare", parents=[common], help="exact vs analytic amplitudes of a pair")
    c.add_argument("--state", required=True)
    g = sub.add_parser("grid", parents=[common], help="write the chart density of one eigenstate")
    g.add_argument("--index", type=int, required=True)
    return p


def _config(args):
    cfg = load_config(args.config)
    overrides = {}
    if args.cache:
        overrides["cache"] = args.cache
    if args.out:
        overrides["out"] = args.out
    for key in ("tmax", "samples"):
        if getattr(args, key, None) is not None:
            overrides[key] = getattr(args, key)
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **overrides)
        build_config({**cfg.params.as_dict(), "tmax": cfg.tmax, "samples": cfg.samples})
    return cfg


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    cfg = _config(args)
    os.makedirs(cfg.out, exist_ok=True)
    _write(os.path.join(cfg.out, "config_echo.txt"), config_echo(cfg))

    if args.command == "diagonalize":
        eig = solve(cfg.params, cfg.tol)
        save_eigendata(cfg.cache, eig)
        print(f"L={len(eig.energies)} E0={eig.energies[0]:.12g} max_residual={eig.max_residual:.3e} -> {cfg.cache}")
        return 0

    eig = load_eigendata(cfg.cache, expected=cfg.params)
    if args.command == "grid":
        if not 0 <= args.index < len(eig.energies):
            raise InvalidParameterError(f"index {args.index} out of range [0, {len(eig.energies)})")
        fld = evaluate_dynrep(eig.vector(args.index), eig.basis, cfg.grid)
        path = os.path.join(cfg.out, f"grid_{args.index}.csv")
        _write(path, density_csv(fld))
        print(f"wrote {path}")
        return 0

    classes, families = classify_and_fit(eig, cfg.thresholds, cfg.grid)
    if args.command == "classify":
        _write(os.path.join(cfg.out, "classification.csv"), classification_csv(classes))
        _write(os.path.join(cfg.out, "families.csv"), families_csv(families))
        counts = {}
        for c in classes:
            counts[c.label] = counts.get(c.label, 0) + 1
        print(" ".join(f"{k}={counts[k]}" for k in sorted(counts)), f"families={len(families)}")
        return 0

    spec = to_superposition(parse_state_spec(args.state), classes)
    if args.command == "simulate":
        traj = closed_form_trajectory(spec, eig, default_times(cfg.tmax, cfg.samples))
        path = os.path.join(cfg.out, "trajectory.csv")
        _write(path, trajectory_csv(traj))
        print(f"wrote {path} (states #{spec.a}, #{spec.b})")
        return 0
    if args.command == "compare":
        sys.stdout.write(format_comparison(compare_pair(spec, eig, classes, families)))
        return 0
    raise InvalidParameterError(f"unknown command {args.command}")


def main(argv=None) -> int:
    try:
        return run(argv)
    except TrimerError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error [OSError]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
