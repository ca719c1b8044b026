"""Grid-sequence experiments, CSV tables and convergence plots.

Each preset reproduces one of the standard convergence studies; CLI flags
can override any field of a preset.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigurationError, NumericalError
from .grid import Grid, ReconMode, SchemeConfig, State, TimeTreatment
from .metrics import (ErrorReport, OrderTable, discretization_error_norms,
                      truncation_error_norms)
from .plotting import emit_convergence_plot
from .problems import Problem, steady_burgers, steady_viscous_burgers, unsteady_burgers, unsteady_linear
from .steady import solve_steady
from .time_march import TimeMarchConfig, march

log = logging.getLogger(__name__)

CSV_HEADER = ("experiment,scheme,kappa,alpha,recon_mode,time_treatment,n_cells,h,te_point,"
              "te_cellavg,de_point,de_cellavg,order_te_point,order_de_point,order_de_cellavg")
NORMS = ("te_point", "te_cellavg", "de_point", "de_cellavg")

STEADY_GRIDS = (15, 31, 63, 127)
UNSTEADY_GRIDS = (32, 64, 128, 256, 512, 1024, 2048)
REFERENCE_DT = 0.000125
REFERENCE_STEPS = 840


class Experiment(enum.Enum):
    STEADY_BURGERS = "steady_burgers"
    STEADY_VISC_BURGERS = "steady_viscous_burgers"
    UNSTEADY_BURGERS = "unsteady_burgers"
    UNSTEADY_LINEAR = "unsteady_linear"

    @property
    def steady(self) -> bool:
        return self in (Experiment.STEADY_BURGERS, Experiment.STEADY_VISC_BURGERS)

    def problem(self, final_time: Optional[float] = None) -> Problem:
        """Problem instance; unsteady problems are built for ``final_time`` when given."""
        if self is Experiment.STEADY_BURGERS:
            return steady_burgers()
        if self is Experiment.STEADY_VISC_BURGERS:
            return steady_viscous_burgers()
        factory = unsteady_burgers if self is Experiment.UNSTEADY_BURGERS else unsteady_linear
        return factory() if final_time is None else factory(final_time=final_time)


@dataclass
class ExperimentSpec:
    experiment: Experiment
    schemes: list[SchemeConfig]
    grids: list[int]
    time: Optional[TimeMarchConfig] = None
    output_dir: Optional[Path] = None
    name: str = ""
    tol: float = 1e-12
    max_iter: int = 10000
    init: str = "exact"
    write_solutions: bool = False

    def validate(self):
        if not self.schemes:
            raise ConfigurationError("an experiment needs at least one scheme")
        if not self.grids:
            raise ConfigurationError("an experiment needs at least one grid")
        if self.experiment.steady:
            if self.tol <= 0 or self.max_iter < 1:
                raise ConfigurationError("steady experiments need tol > 0 and max_iter >= 1")
            if min(self.grids) < 5:
                raise ConfigurationError("steady grids need at least 5 cells")
        elif self.time is None:
            raise ConfigurationError("unsteady experiments need a time-march configuration")
        if self.init not in ("exact", "zero"):
            raise ConfigurationError(f"unknown initialization {self.init!r}")

    @property
    def label(self) -> str:
        return self.name or self.experiment.value


@dataclass
class SchemeRun:
    scheme: SchemeConfig
    reports: list[ErrorReport] = field(default_factory=list)
    solutions: dict[int, np.ndarray] = field(default_factory=dict)

    def table(self, norm: str, steady: bool) -> OrderTable:
        return OrderTable.from_sequence(norm, self.scheme.legend(steady),
                                        [r.h for r in self.reports],
                                        [getattr(r, norm) for r in self.reports])


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    runs: list[SchemeRun]
    metadata: dict
    problem: Optional[Problem] = None

    def tables(self, norm: str) -> list[OrderTable]:
        return [run.table(norm, self.spec.experiment.steady) for run in self.runs
                if any(getattr(r, norm) is not None for r in run.reports)]

    def run_for(self, scheme: SchemeConfig) -> SchemeRun:
        for run in self.runs:
            if run.scheme == scheme:
                return run
        raise KeyError(scheme)


def _grid_for(experiment: Experiment, problem: Problem, n: int) -> Grid:
    return Grid.uniform(n, problem.length, topology=problem.topology)


def run_single(experiment: Experiment, problem: Problem, scheme: SchemeConfig, n: int,
               spec: ExperimentSpec) -> tuple[ErrorReport, np.ndarray]:
    grid = _grid_for(experiment, problem, n)
    x = grid.centers
    report = ErrorReport(n, grid.h)
    where = f"scheme {scheme.name()} on {n} cells"
    if experiment.steady:
        report.te_point, report.te_cellavg = truncation_error_norms(problem, scheme, grid)
        u0 = np.asarray(problem.exact_point(x), dtype=float)
        if spec.init == "zero":
            u0 = np.where(grid.fixed_mask, u0, 0.0)
        solution, solve = solve_steady(State(u0, grid), problem, scheme, spec.tol, spec.max_iter)
        if not solve.converged:
            raise NumericalError(f"steady solve did not converge for {where} "
                                 f"(L1 residual {solve.final_residual_l1:.3e})")
        report.de_point, report.de_cellavg = discretization_error_norms(solution, problem, grid)
    else:
        state0 = State(problem.initial(x), grid)
        try:
            solution = march(state0, problem, scheme, spec.time)
        except NumericalError as exc:
            raise NumericalError(f"{exc} for {where}") from exc
        report.de_point, report.de_cellavg = discretization_error_norms(
            solution, problem, grid, interior_only=False)
    return report, solution.values


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run every scheme on every grid, then write CSV and SVG output if requested."""
    spec.validate()
    problem = spec.experiment.problem(None if spec.time is None else spec.time.final_time)
    runs = []
    for scheme in spec.schemes:
        run = SchemeRun(scheme)
        for n in sorted(spec.grids):
            report, values = run_single(spec.experiment, problem, scheme, n, spec)
            run.reports.append(report)
            if spec.write_solutions:
                run.solutions[n] = values
        runs.append(run)
    result = ExperimentResult(spec, runs, experiment_metadata(spec, problem), problem)
    if spec.output_dir is not None:
        write_outputs(result, Path(spec.output_dir))
    return result


def experiment_metadata(spec: ExperimentSpec, problem: Problem) -> dict:
    meta = {
        "experiment": spec.label,
        "problem": problem.name,
        "grids": sorted(spec.grids),
        "schemes": [s.name() for s in spec.schemes],
    }
    if spec.time is not None:
        meta.update(dt=spec.time.dt, n_steps=spec.time.n_steps, final_time=spec.time.final_time)
    else:
        meta.update(tol=spec.tol, max_iter=spec.max_iter, init=spec.init)
    return meta


def _num(v) -> str:
    return "" if v is None or (isinstance(v, float) and not np.isfinite(v)) else repr(float(v))


def csv_rows(result: ExperimentResult) -> list[list[str]]:
    steady = result.spec.experiment.steady
    rows = []
    for run in result.runs:
        s = run.scheme
        orders = {norm: run.table(norm, steady) for norm in ("te_point", "de_point", "de_cellavg")}
        alpha = s.alpha if isinstance(s.alpha, str) else repr(float(s.alpha))
        for k, r in enumerate(sorted(run.reports, key=lambda r: r.n_cells)):
            # tables run coarse to fine, so row k-1 holds the order ending on this grid
            pair = {norm: (t.rows[k - 1].observed_order if k > 0 else None)
                    for norm, t in orders.items()}
            rows.append([
                result.spec.label, s.name(), repr(float(s.kappa)), alpha, s.recon_mode.value,
                "steady" if steady else s.time_treatment.value, str(r.n_cells), repr(float(r.h)),
                _num(r.te_point), _num(r.te_cellavg), _num(r.de_point), _num(r.de_cellavg),
                _num(pair["te_point"]), _num(pair["de_point"]), _num(pair["de_cellavg"]),
            ])
    rows.sort(key=lambda row: (row[1], int(row[6])))
    return rows


def emit_csv(result: ExperimentResult, path) -> Path:
    """Write the error table plus a ``.meta.json`` sidecar with run parameters."""
    rows = csv_rows(result)
    if not rows:
        raise ValueError("no reports to write")
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        csv.writer(fh, lineterminator="\n").writerows(rows)
    meta_path = path.with_suffix(".meta.json")
    meta_path.write_text(json.dumps(result.metadata, indent=2, sort_keys=True) + "\n")
    return path


def write_outputs(result: ExperimentResult, out: Path):
    out.mkdir(parents=True, exist_ok=True)
    stem = result.spec.label
    emit_csv(result, out / f"{stem}.csv")
    for norm in NORMS:
        tables = result.tables(norm)
        if tables:
            emit_convergence_plot(tables, out / f"{stem}_{norm}.svg", f"{stem}: L1 {norm}")
    if result.spec.write_solutions:
        problem = result.problem or result.spec.experiment.problem()
        for run in result.runs:
            for n, values in run.solutions.items():
                grid = _grid_for(result.spec.experiment, problem, n)
                x = grid.centers
                initial = problem.initial(x) if problem.initial else problem.exact_point(x)
                path = out / f"{stem}_solution_{_slug(run.scheme)}_{n}.csv"
                with path.open("w", newline="") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(["x", "initial", "numerical", "exact_point"])
                    for row in zip(x, initial, values, problem.exact_point(x)):
                        w.writerow([repr(float(v)) for v in row])


def _slug(s: SchemeConfig) -> str:
    return s.legend().replace("κ=", "k").replace("α=", "a").replace("/", "o").replace(" ", "_")


def _steady_schemes(kappas, alpha="auto"):
    return [SchemeConfig(kappa=k, alpha=alpha) for k in kappas]


def _unsteady(kappas, treatment, recon=ReconMode.SOLUTION):
    return [SchemeConfig(kappa=k, time_treatment=treatment, recon_mode=recon) for k in kappas]


KAPPAS = (0.0, 1.0 / 3.0, 0.5)
REFERENCE_TIME = TimeMarchConfig(REFERENCE_DT, REFERENCE_STEPS)


def presets() -> dict[str, ExperimentSpec]:
    """Named experiments, one per standard convergence study."""
    return {
        "fig4": ExperimentSpec(Experiment.STEADY_BURGERS, _steady_schemes(KAPPAS),
                               list(STEADY_GRIDS), name="fig4"),
        "fig5": ExperimentSpec(Experiment.STEADY_VISC_BURGERS, _steady_schemes(KAPPAS),
                               list(STEADY_GRIDS), name="fig5"),
        "fig6": ExperimentSpec(Experiment.STEADY_VISC_BURGERS, _steady_schemes(KAPPAS, 4.0 / 3.0),
                               list(STEADY_GRIDS), name="fig6"),
        "fig7": ExperimentSpec(Experiment.UNSTEADY_BURGERS,
                               _unsteady([0.5], TimeTreatment.COUPLED_MASS),
                               [UNSTEADY_GRIDS[0]], REFERENCE_TIME, name="fig7", write_solutions=True),
        "fig8": ExperimentSpec(Experiment.UNSTEADY_BURGERS,
                               _unsteady(KAPPAS, TimeTreatment.COUPLED_MASS)
                               + _unsteady([0.5], TimeTreatment.LUMPED_MASS),
                               list(UNSTEADY_GRIDS), REFERENCE_TIME, name="fig8"),
        "fig9": ExperimentSpec(Experiment.UNSTEADY_BURGERS,
                               _unsteady([1.0 / 3.0], TimeTreatment.QUICKEST_FD)
                               + _unsteady([1.0 / 3.0], TimeTreatment.QUICKEST_FD, ReconMode.FLUX),
                               list(UNSTEADY_GRIDS), REFERENCE_TIME, name="fig9"),
        "fig9lin": ExperimentSpec(Experiment.UNSTEADY_LINEAR,
                                  _unsteady([1.0 / 3.0], TimeTreatment.QUICKEST_FD)
                                  + _unsteady([1.0 / 3.0], TimeTreatment.QUICKEST_FD, ReconMode.FLUX),
                                  list(UNSTEADY_GRIDS), REFERENCE_TIME, name="fig9lin"),
        "fig10": ExperimentSpec(Experiment.UNSTEADY_BURGERS,
                                _unsteady(KAPPAS, TimeTreatment.VANLEER_EXPLICIT),
                                list(UNSTEADY_GRIDS), REFERENCE_TIME, name="fig10"),
    }


PRESET_DESCRIPTIONS = {
    "fig4": "steady Burgers with cell-averaged forcing, kappa in {0, 1/3, 1/2}",
    "fig5": "steady viscous Burgers (nu = 1), alpha = 1/(3(1 - kappa))",
    "fig6": "steady viscous Burgers (nu = 1), incompatible alpha = 4/3",
    "fig7": "unsteady Burgers, coupled kappa = 1/2, coarsest grid with solution output",
    "fig8": "unsteady Burgers, coupled mass matrix for each kappa, plus lumped kappa = 1/2",
    "fig9": "unsteady Burgers, QUICKEST (kappa = 1/3) with solution and flux interpolation",
    "fig9lin": "unsteady linear convection a = 0.75, QUICKEST with both interpolations",
    "fig10": "unsteady Burgers, explicit residual-corrected QUICK for each kappa",
}


def run_grid_sequence(experiment: Experiment, scheme: SchemeConfig, grids: Sequence[int],
                      time: Optional[TimeMarchConfig] = None) -> SchemeRun:
    """Convenience wrapper used by the acceptance checks and scripts."""
    if time is None and not experiment.steady:
        time = REFERENCE_TIME
    spec = ExperimentSpec(experiment, [scheme], list(grids), time)
    return run_experiment(spec).runs[0]
