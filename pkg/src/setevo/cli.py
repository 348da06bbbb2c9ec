"""Command-line interface: model files in, deterministic reports out.

Subcommands
-----------

check               four-condition axiom report; exit 0 when nothing FAILs,
                    1 on any FAIL, 2 on invalid input
trace               per-stage cardinality/measure/integral trace, optionally
                    written as a byte-stable CSV
genealogy           generation trace plus ancestry report
measure             decay report, with an integral trace when the model
                    declares an integrand
construct-convergent  build a stage family tracking an integrand's total and
                    emit it as an explicit-stages model file
reduce              bounded search for a reducing stage subsequence

All verdict-bearing output goes to stdout and is byte-deterministic for a
given model file and tool version; timing goes to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from .core import (
    EvolutionError,
    check_axioms,
    find_reducing_subsequence,
)
from .genealogy import ancestry_check, generational_evolution
from .integrands import parse_integrand
from .intervals import check_real_axioms
from .measure import decay_check, mu_trace, stage_integral
from .models import (
    LoadedModel,
    SchemaError,
    UnknownKind,
    convergent_stages_as_model,
    parse_model,
)
from .convergent import construct_convergent_evolution
import json


@dataclass
class RunReport:
    command: str
    digest: str
    lines: list[str]

    def render(self) -> str:
        out = [f"command: {self.command}", f"model: {self.digest}"]
        out.extend(self.lines)
        return "\n".join(out) + "\n"


def format_float(x: float) -> str:
    return f"{x:.17g}"


def emit_csv(rows: list[tuple], path: str) -> None:
    """Write a trace as CSV: k,cardinality,measure,integral (blank = N/A).

    LF line endings, floats at 17 significant digits, rows ascending in k;
    identical traces produce identical bytes.
    """
    lines = ["k,cardinality,measure,integral"]
    for k, cardinality, measure_value, integral_value in rows:
        fields = [
            str(k),
            "" if cardinality is None else str(cardinality),
            "" if measure_value is None else format_float(measure_value),
            "" if integral_value is None else format_float(integral_value),
        ]
        lines.append(",".join(fields))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setevo", description="evolutions on sets: checks, traces, reports"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="axiom report for a model")
    p_check.add_argument("model")
    p_check.add_argument("--horizon", type=int, default=32)

    p_trace = sub.add_parser("trace", help="per-stage cardinality/measure trace")
    p_trace.add_argument("model")
    p_trace.add_argument("--horizon", type=int, default=32)
    p_trace.add_argument("--csv", help="write the trace to this CSV file")

    p_gen = sub.add_parser("genealogy", help="generation trace and ancestry report")
    p_gen.add_argument("model")
    p_gen.add_argument("--horizon", type=int, default=16)

    p_meas = sub.add_parser("measure", help="stage-mass decay report")
    p_meas.add_argument("model")
    p_meas.add_argument("--horizon", type=int, default=32)
    p_meas.add_argument("--epsilon", type=float, default=1e-3)

    p_conv = sub.add_parser(
        "construct-convergent", help="build a convergent stage family"
    )
    p_conv.add_argument("--phi", required=True, help="integrand descriptor")
    p_conv.add_argument("--tol", type=float, required=True)
    p_conv.add_argument("--horizon", type=int, required=True)
    p_conv.add_argument("--out", required=True, help="output model file")

    p_red = sub.add_parser("reduce", help="bounded reducing-subsequence search")
    p_red.add_argument("model")
    p_red.add_argument("--horizon", type=int, default=24)

    return parser


def _load(path: str) -> LoadedModel:
    return parse_model(path)


def _cmd_check(args) -> tuple[RunReport, int]:
    model = _load(args.model)
    lines: list[str] = []
    if model.symbolic is not None:
        report, note = model.symbolic.axiom_report(args.horizon)
        lines.append(f"symbolic stages: {model.symbolic.label}")
        lines.extend(report.lines())
        lines.append(f"note: {note}")
    elif model.genealogy_model is not None:
        trace, evolution = generational_evolution(
            model.genealogy_model, model.founders_m, model.founders_f, args.horizon
        )
        report = check_axioms(evolution, args.horizon)
        lines.extend(report.lines())
    elif model.real is not None:
        report = check_real_axioms(
            model.real, args.horizon, carrier=model.real.carrier
        )
        lines.extend(report.lines())
    elif model.discrete is not None:
        report = check_axioms(model.discrete, args.horizon)
        lines.extend(report.lines())
    else:
        raise SchemaError("", f"kind {model.kind!r} has nothing to check")
    code = 0 if report.ok else 1
    lines.append(f"result: {'no-failures' if code == 0 else 'failures-found'}")
    return RunReport(_echo(args), model.digest, lines), code


def _trace_rows(model: LoadedModel, horizon: int) -> list[tuple]:
    rows = []
    measure_values: list[float] | None = None
    integral_values: list[float] | None = None
    if model.lebesgue is not None:
        measure_values = mu_trace(model.lebesgue.evolution, model.lebesgue, horizon)
        if model.integrand is not None:
            integral_values = list(
                stage_integral(
                    model.lebesgue.evolution, model.lebesgue, model.integrand, horizon
                ).values
            )
    elif model.discrete is not None and model.measure is not None:
        measure_values = mu_trace(model.discrete, model.measure, horizon)
        if model.integrand is not None:
            integral_values = list(
                stage_integral(
                    model.discrete, model.measure, model.integrand, horizon
                ).values
            )
    for k in range(1, horizon + 1):
        cardinality: int | None = None
        if model.discrete is not None:
            cardinality = len(model.discrete.stage(k))
        elif model.genealogy_model is not None:
            cardinality = None
        elif model.real is not None:
            cardinality = None
        rows.append(
            (
                k,
                cardinality,
                None if measure_values is None else measure_values[k - 1],
                None if integral_values is None else integral_values[k - 1],
            )
        )
    return rows


def _cmd_trace(args) -> tuple[RunReport, int]:
    model = _load(args.model)
    if model.discrete is None and model.real is None and model.lebesgue is None:
        raise SchemaError("", f"kind {model.kind!r} has no stage trace")
    rows = _trace_rows(model, args.horizon)
    lines = ["k,cardinality,measure,integral"]
    for k, cardinality, measure_value, integral_value in rows:
        lines.append(
            ",".join(
                [
                    str(k),
                    "" if cardinality is None else str(cardinality),
                    "" if measure_value is None else format_float(measure_value),
                    "" if integral_value is None else format_float(integral_value),
                ]
            )
        )
    if args.csv:
        emit_csv(rows, args.csv)
        lines.append(f"csv: {args.csv}")
    return RunReport(_echo(args), model.digest, lines), 0


def _cmd_genealogy(args) -> tuple[RunReport, int]:
    model = _load(args.model)
    if model.genealogy_model is None:
        raise SchemaError("", f"kind {model.kind!r} is not a genealogy model")
    trace, _ = generational_evolution(
        model.genealogy_model, model.founders_m, model.founders_f, args.horizon
    )
    lines = []
    for idx, gen_set in enumerate(trace.generations, start=1):
        members = ",".join(repr(x) for x in sorted(gen_set, key=repr)) or "-"
        lines.append(f"generation {idx}: {members}")
    for k in range(1, trace.horizon + 1):
        members = ",".join(repr(x) for x in sorted(trace.stage(k), key=repr)) or "-"
        lines.append(f"stage {k}: {members}")
    report = ancestry_check(model.genealogy_model, trace.generations)
    lines.extend(report.lines())
    if trace.placement_violations:
        lines.append("placement: FAIL")
        lines.extend(f"  {v}" for v in trace.placement_violations)
    else:
        lines.append("placement: PASS")
    code = 0 if report.ok and trace.placement_ok else 1
    return RunReport(_echo(args), model.digest, lines), code


def _cmd_measure(args) -> tuple[RunReport, int]:
    model = _load(args.model)
    if model.lebesgue is not None:
        evo = model.lebesgue.evolution
        mu = model.lebesgue
    elif model.discrete is not None and model.measure is not None:
        evo = model.discrete
        mu = model.measure
    else:
        raise SchemaError("", "the model declares no measure")
    report = decay_check(evo, mu, args.horizon, args.epsilon)
    lines = []
    for k in range(1, args.horizon + 1):
        d = report.lifespan_bounds[k - 1]
        lines.append(
            f"stage {k}: mu={format_float(report.masses[k - 1])}"
            + ("" if d is None else f" d={d}")
        )
    lines.extend(report.lines())
    if model.integrand is not None:
        integral_report = stage_integral(evo, mu, model.integrand, args.horizon)
        for k in range(1, args.horizon + 1):
            lines.append(
                f"stage {k}: integral={format_float(integral_report.values[k - 1])}"
            )
        if model.integrand.declared_bound is not None:
            ok = all(integral_report.bound_respected)
            lines.append(f"declared bound respected: {'yes' if ok else 'NO'}")
    return RunReport(_echo(args), model.digest, lines), 0


def _cmd_construct(args) -> tuple[RunReport, int]:
    phi = parse_integrand(args.phi)
    construction, report = construct_convergent_evolution(
        phi, args.tol, args.horizon
    )
    payload = convergent_stages_as_model(
        construction, args.horizon, label=f"convergent({args.phi})"
    )
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    lines = report.lines()
    lines.append(f"stages written: {args.horizon}")
    lines.append(f"out: {args.out}")
    return RunReport(_echo(args), "-", lines), 0


def _cmd_reduce(args) -> tuple[RunReport, int]:
    model = _load(args.model)
    if model.discrete is None:
        raise SchemaError("", f"kind {model.kind!r} is not a discrete evolution")
    result = find_reducing_subsequence(model.discrete, args.horizon)
    lines = [f"verdict: {result.verdict}"]
    if result.indices:
        lines.append("witness indices: " + ",".join(str(i) for i in result.indices))
    if result.stride:
        lines.append(f"witness stride: {result.stride}")
    lines.append(f"candidates checked: {result.candidates_checked}")
    lines.append(f"note: {result.note}")
    return RunReport(_echo(args), model.digest, lines), 0


def _echo(args) -> str:
    parts = [args.command]
    for key in ("model", "phi", "tol", "horizon", "epsilon", "csv", "out"):
        value = getattr(args, key, None)
        if value is not None:
            parts.append(f"--{key}={value}" if key != "model" else str(value))
    return " ".join(parts)


_HANDLERS = {
    "check": _cmd_check,
    "trace": _cmd_trace,
    "genealogy": _cmd_genealogy,
    "measure": _cmd_measure,
    "construct-convergent": _cmd_construct,
    "reduce": _cmd_reduce,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.perf_counter()
    try:
        report, code = _HANDLERS[args.command](args)
    except (SchemaError, UnknownKind) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EvolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(report.render())
    elapsed = time.perf_counter() - started
    print(f"elapsed: {elapsed:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
