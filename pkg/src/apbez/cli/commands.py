"""
The apbez subcommands. Data goes to ``--out`` (``-`` is standard output), diagnostics to standard error.
"""
import logging
from pathlib import Path
from typing import Union

from apbez.cli.arg import Arg, int_list
from apbez.cli.command import CLI, EXIT_FAILURE, Command
from apbez.cli.decorators import description
from apbez.config import get_settings
from apbez.experiments import (PUBLISHED_TABLE1, PUBLISHED_TABLE2, TABLE1_LEVELS, Layout, Metric, StudyConfig,
                               emit_curves, emit_report, emit_segments, figure_data, run_perturbed_area_study,
                               run_study, table1 as run_table1, table2 as run_table2)
from apbez.interpolator import MODE_NAMES, interpolate_segment, mode_from_name
from apbez.svg import render_svg
from apbez.targets import catalog_names, make_builtin

logger = logging.getLogger(__name__)

cli = CLI(prog="apbez")

FORMATS = ("csv", "json")
METRIC_NAMES = tuple(metric.value for metric in Metric)
LAYOUT_NAMES = tuple(layout.value for layout in Layout)


def _write(command: Command, out: str, payload: Union[bytes, str]):
    if isinstance(payload, bytes):
        payload = payload.decode("utf-8")
    if out == "-":
        command.stdout.write(payload)
    else:
        Path(out).write_text(payload, encoding="utf-8")
        logger.info("wrote %s", out)


@cli.command
@description("interpolate one interval of a builtin target and report r1, r2, errors and area residual")
def interp(command: Command,
           target: str = Arg("--target", required=True, choices=catalog_names()),
           s0: float = Arg("--from", required=True),
           s1: float = Arg("--to", required=True),
           mode: str = Arg("--mode", default="standard", choices=MODE_NAMES),
           p: float = Arg("--P", help="family parameter, defaults to the averaged choice"),
           grid_n: int = Arg("--grid", help="optimizer grid size"),
           samples: int = Arg("--samples", help="optimizer samples"),
           svg: str = Arg("--svg", help="write an SVG overlay to this path"),
           out: str = Arg("--out", default="-"),
           fmt: str = Arg("--format", default="csv", choices=FORMATS)):
    curve = make_builtin(target)
    segment = interpolate_segment(curve, s0, s1, mode_from_name(mode, p, grid_n, samples))
    _write(command, out, emit_segments([segment], fmt))
    if svg:
        Path(svg).write_text(render_svg(curve, s0, s1, {mode: [segment]}, get_settings().svg_samples),
                             encoding="utf-8")


@cli.command
@description("run a refinement study and report errors and fitted convergence orders")
def study(command: Command,
          target: str = Arg("--target", required=True, choices=catalog_names()),
          mode: str = Arg("--mode", default="standard", choices=MODE_NAMES),
          levels: int_list = Arg("--levels", default=(4, 8, 16, 32, 64)),
          metric: str = Arg("--metric", default="linf", choices=METRIC_NAMES),
          perturb: float = Arg("--perturb", default=0.0, help="M, adds M h^5 to every prescribed area"),
          layout: str = Arg("--layout", default="uniform", choices=LAYOUT_NAMES),
          p: float = Arg("--P"),
          grid_n: int = Arg("--grid"),
          samples: int = Arg("--samples"),
          out: str = Arg("--out", default="-"),
          fmt: str = Arg("--format", default="csv", choices=FORMATS)):
    cfg = StudyConfig(target, mode_from_name(mode, p, grid_n, samples), levels, Metric(metric), perturb,
                      Layout(layout))
    result = run_perturbed_area_study(cfg) if perturb else run_study(cfg)
    _write(command, out, emit_report(result, fmt))
    command.stderr.write(f"fitted order {result.fitted_order!r}, last interval {result.last_interval_order!r}\n")


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.2e}"


@cli.command
@description("semicircle errors, standard and optimized, next to the published values")
def table1(command: Command,
           grid_n: int = Arg("--grid"),
           out: str = Arg("--out", default="-")):
    standard, optimized = run_table1(grid_n=grid_n)
    rows = [("points", "standard", "published", "optimized", "published", "curvature matching (published)")]
    for i, n in enumerate(TABLE1_LEVELS):
        rows.append((str(2 * n), _fmt(standard.records[i].linf), _fmt(PUBLISHED_TABLE1["standard"][i]),
                     _fmt(optimized.records[i].linf), _fmt(PUBLISHED_TABLE1["optimized"][i]),
                     _fmt(PUBLISHED_TABLE1["curvature_matching"][i])))
    _write(command, out, _table(rows))


@cli.command
@description("Hausdorff errors of the comparison curve split once, next to the published values")
def table2(command: Command,
           out: str = Arg("--out", default="-")):
    rows = [("split", "standard", "published")]
    for split, error in run_table2():
        rows.append((repr(split), _fmt(error), _fmt(PUBLISHED_TABLE2[split])))
    _write(command, out, _table(rows))


@cli.command
@description("hermite, standard (P = 0) and optimized interpolants of one interval as CSV samples and SVG")
def optimize(command: Command,
             target: str = Arg("--target", default="optimized", choices=catalog_names()),
             s0: float = Arg("--from", default=0.0),
             s1: float = Arg("--to", default=1.0),
             svg: str = Arg("--svg"),
             out: str = Arg("--out", default="-")):
    curve = make_builtin(target)
    curves = {name: [segment] for name, segment in figure_data(curve, s0, s1).items()}
    if not curves:
        command.stderr.write(f"no interpolant of {target} on [{s0!r}, {s1!r}]\n")
        return EXIT_FAILURE
    for name, (segment,) in curves.items():
        command.stderr.write(f"{name}: r1={segment.r1!r} r2={segment.r2!r} linf={segment.diagnostics.linf!r} "
                             f"area_residual={segment.area_residual!r}\n")
    samples = get_settings().svg_samples
    _write(command, out, emit_curves(curves, curve, s0, s1, samples))
    if svg:
        Path(svg).write_text(render_svg(curve, s0, s1, curves, samples), encoding="utf-8")


def _table(rows: list[tuple[str, ...]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(cell.rjust(width) for cell, width in zip(row, widths)) + "\n" for row in rows)
