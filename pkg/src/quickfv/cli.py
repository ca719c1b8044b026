"""``quickfv`` command line: run experiments, list presets, verify acceptance criteria."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .errors import ConfigurationError, QuickFVError
from .grid import ForcingMode, ReconMode, SchemeConfig, TimeTreatment
from .harness import (REFERENCE_TIME, PRESET_DESCRIPTIONS, Experiment, ExperimentSpec, presets,
                      run_experiment)
from .time_march import TimeMarchConfig

log = logging.getLogger("quickfv")


def _number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"cannot parse number {text!r}") from exc


def _number_list(text: str) -> list[float]:
    return [_number(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse grid list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quickfv", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a convergence study")
    run.add_argument("--experiment", required=True,
                     help="preset name (see 'quickfv presets') or one of: "
                          + ", ".join(e.value for e in Experiment))
    run.add_argument("--kappa", help="comma-separated list, fractions allowed (e.g. 0,1/3,1/2)")
    run.add_argument("--grids", help="comma-separated cell counts")
    run.add_argument("--alpha", help="'auto' or a number")
    run.add_argument("--recon", choices=[m.value for m in ReconMode])
    run.add_argument("--time", choices=[t.value for t in TimeTreatment])
    run.add_argument("--dt", type=float)
    run.add_argument("--steps", type=int)
    run.add_argument("--dissipation", choices=["on", "off"])
    run.add_argument("--forcing", choices=[m.value for m in ForcingMode])
    run.add_argument("--tol", type=float)
    run.add_argument("--max-iter", type=int)
    run.add_argument("--init", choices=["exact", "zero"])
    run.add_argument("--solutions", action="store_true", help="also write per-grid solutions")
    run.add_argument("--out", required=True, type=Path)

    sub.add_parser("presets", help="list the figure presets")

    verify = sub.add_parser("verify", help="run every acceptance criterion")
    verify.add_argument("--details", action="store_true", help="print every individual check")
    return p


def spec_from_args(args) -> ExperimentSpec:
    table = presets()
    if args.experiment in table:
        spec = table[args.experiment]
    else:
        try:
            experiment = Experiment(args.experiment)
        except ValueError:
            raise ConfigurationError(f"unknown experiment or preset {args.experiment!r}") from None
        scheme = SchemeConfig()
        if not experiment.steady and args.time is None:
            scheme = replace(scheme, time_treatment=TimeTreatment.COUPLED_MASS)
        spec = ExperimentSpec(experiment, [scheme], [],
                              None if experiment.steady else REFERENCE_TIME, name=experiment.value)

    schemes = list(spec.schemes)
    if args.kappa:
        base = schemes[0]
        schemes = [replace(base, kappa=k) for k in _number_list(args.kappa)]
    overrides = {}
    if args.alpha:
        overrides["alpha"] = "auto" if args.alpha.lower() == "auto" else _number(args.alpha)
    if args.recon:
        overrides["recon_mode"] = ReconMode(args.recon)
    if args.time:
        overrides["time_treatment"] = TimeTreatment(args.time)
    if args.dissipation:
        overrides["dissipation"] = args.dissipation == "on"
    if args.forcing:
        overrides["forcing_mode"] = ForcingMode(args.forcing)
    schemes = [replace(s, **overrides) for s in schemes]
    # identical overrides can collapse distinct preset schemes
    schemes = list(dict.fromkeys(schemes))

    time = spec.time
    if args.dt is not None or args.steps is not None:
        if spec.experiment.steady:
            raise ConfigurationError("--dt/--steps apply to unsteady experiments only")
        time = TimeMarchConfig(args.dt if args.dt is not None else time.dt,
                               args.steps if args.steps is not None else time.n_steps)

    spec = replace(
        spec,
        schemes=schemes,
        grids=_int_list(args.grids) if args.grids else list(spec.grids),
        time=time,
        output_dir=args.out,
        tol=args.tol if args.tol is not None else spec.tol,
        max_iter=args.max_iter if args.max_iter is not None else spec.max_iter,
        init=args.init or spec.init,
        write_solutions=args.solutions or spec.write_solutions,
    )
    spec.validate()
    return spec


def cmd_run(args) -> int:
    spec = spec_from_args(args)
    result = run_experiment(spec)
    for run in result.runs:
        print(run.scheme.legend(spec.experiment.steady))
        for r in run.reports:
            norms = "  ".join(f"{k}={getattr(r, k):.3e}" for k in
                              ("te_point", "te_cellavg", "de_point", "de_cellavg")
                              if getattr(r, k) is not None)
            print(f"  n={r.n_cells:5d}  {norms}")
    print(f"wrote {spec.output_dir / (spec.label + '.csv')}")
    return 0


def cmd_presets(args) -> int:
    for name, spec in presets().items():
        print(f"{name:8s} {PRESET_DESCRIPTIONS[name]}  "
              f"[{spec.experiment.value}; grids {','.join(map(str, spec.grids))}]")
    return 0


def cmd_verify(args) -> int:
    from .acceptance import run_all

    results = run_all(verbose=args.details)
    failed = [c for c in results if not c.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": cmd_run, "presets": cmd_presets, "verify": cmd_verify}[args.command]
    try:
        return handler(args)
    except QuickFVError as exc:
        print(f"quickfv: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"quickfv: I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
