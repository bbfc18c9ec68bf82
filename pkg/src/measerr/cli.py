"""Command-line interface: analyze, estimate, simulate, members."""

from __future__ import annotations

import argparse
import json
import sys

from . import registry, srs
from .discrepancies import discrepancy_ledger, static_discrepancies
from .io import (
    ParamsError,
    ReportRow,
    load_params,
    read_sample,
    rows_to_csv,
    rows_to_json,
    table_to_csv,
)
from .population import DomainError
from .proposed import FORMS, member_catalog, point_estimate_tp
from .simulate import SimulationConfig, run_simulation, run_stratified_simulation
from .srs import SampleStats
from .stratified import stratified_classical_values, stratified_class_values, stratified_member_catalog

SIM_COLUMNS = [
    "estimator", "empirical_bias", "empirical_mse", "theoretical_mse",
    "relative_gap", "replications_used", "failures", "monte_carlo_se",
]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _estimator(pf, name: str, form: str):
    if pf.mode == "srs":
        return registry.srs_estimator(name, pf.summary, form)
    return registry.stratified_estimator(name, pf.design, form)


def analyze_rows(pf, selection="all", form: str = "printed") -> list[ReportRow]:
    names = registry.resolve_selection(selection, pf.mode)
    var_mean = _estimator(pf, "usual_mean", form).mse
    rows = []
    for name in names:
        e = _estimator(pf, name, form)
        rows.append(ReportRow(
            estimator_name=name,
            mse=e.mse,
            pre=srs.pre(e.mse, var_mean),
            bias=e.bias,
            optimum_constants=list(e.constants) or None,
        ))
    return rows


def cmd_analyze(args) -> None:
    pf = load_params(args.params)
    rows = analyze_rows(pf, args.estimators, args.form)
    if args.format == "json":
        text = rows_to_json(rows, mode=pf.mode, form=args.form)
    else:
        text = rows_to_csv(rows)
    _emit(text, args.out)
    if args.ledger:
        found = discrepancy_ledger(pf.summary) if pf.mode == "srs" else static_discrepancies()
        records = [d.to_dict() for d in found]
        with open(args.ledger, "w", encoding="utf-8") as fh:
            json.dump({"discrepancies": records}, fh, indent=2)
            fh.write("\n")


def _member_lookup(pf, name: str):
    cat = member_catalog(pf.summary) if pf.mode == "srs" else stratified_member_catalog(pf.design)
    return {m.name: m for m in cat}.get(name)


def estimate_record(pf, data_path: str, name: str, constants=None) -> dict:
    """Point estimate from a sample CSV, with optional constant overrides."""
    if pf.mode == "srs":
        ys, xs = read_sample(data_path)
        ybar, xbar = sum(ys) / len(ys), sum(xs) / len(xs)
        n = len(ys)
    else:
        groups = read_sample(data_path, stratified=True)
        labels = pf.design.labels()
        unknown = sorted(set(groups) - set(labels))
        if unknown:
            raise ParamsError(f"data has strata not in params: {', '.join(unknown)}")
        missing = [lab for lab in labels if lab not in groups]
        if missing:
            raise ParamsError(f"data has no rows for strata: {', '.join(missing)}")
        ybar = sum(h.w * sum(groups[lab][0]) / len(groups[lab][0]) for h, lab in zip(pf.design.strata, labels))
        xbar = sum(h.w * sum(groups[lab][1]) / len(groups[lab][1]) for h, lab in zip(pf.design.strata, labels))
        n = sum(len(g[0]) for g in groups.values())
    names = registry.resolve_selection([name], pf.mode)
    e = _estimator(pf, names[0], "printed")
    used = list(e.constants)
    if constants:
        if len(constants) != len(used):
            raise DomainError(f"{name} takes {len(used)} constant(s), got {len(constants)}")
        used = list(constants)
    if pf.mode == "srs" and name in srs.CLASSICAL_ESTIMATORS:
        value = srs.point_estimate(name, SampleStats(ybar, xbar, n), pf.summary, used[0] if used else None)
    elif pf.mode == "srs":
        mem = _member_lookup(pf, name)
        value = point_estimate_tp(mem.params, tuple(used), SampleStats(ybar, xbar, n), pf.summary)
    elif constants:
        mem = _member_lookup(pf, name)
        if name == "combined_difference":
            value = float(stratified_classical_values(name, ybar, xbar, pf.design, used[0]))
        elif mem is not None and name.startswith("t"):
            value = float(stratified_class_values(mem.params, tuple(used), ybar, xbar, pf.design))
        else:
            raise DomainError(f"{name} has no constants to override")
    else:
        value = float(e.evaluate(ybar, xbar))
    if value != value:
        raise DomainError(f"{name}: estimate undefined for this sample (zero or invalid denominator)")
    return {"estimator": name, "estimate": value, "ybar": ybar, "xbar": xbar, "n": n, "constants": used}


def cmd_estimate(args) -> None:
    pf = load_params(args.params)
    rec = estimate_record(pf, args.data, args.estimator, args.constant)
    if args.format == "json":
        text = json.dumps(rec, indent=2) + "\n"
    else:
        text = table_to_csv(
            ["estimator", "estimate", "ybar", "xbar", "n", "constants"],
            [[rec["estimator"], rec["estimate"], rec["ybar"], rec["xbar"], rec["n"],
              ";".join(f"{c:.6g}" for c in rec["constants"])]],
        )
    _emit(text, args.out)


def simulate_report(pf, cfg: SimulationConfig):
    if pf.mode == "srs":
        return run_simulation(cfg, pf.summary)
    return run_stratified_simulation(cfg, pf.design)


def cmd_simulate(args) -> None:
    pf = load_params(args.params)
    names = tuple(registry.resolve_selection(args.estimators, pf.mode))
    cfg = SimulationConfig(
        replications=args.replications,
        seed=args.seed,
        sample_size=args.sample_size,
        estimators=names,
        workers=args.workers,
    )
    report = simulate_report(pf, cfg)
    if args.format == "json":
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    else:
        text = table_to_csv(SIM_COLUMNS, [
            [r.name, r.empirical_bias, r.empirical_mse, r.theoretical_mse, r.relative_gap,
             r.replications_used, r.failures, r.monte_carlo_se]
            for r in report.results
        ])
    _emit(text, args.out)


def member_records(pf) -> list[dict]:
    cat = member_catalog(pf.summary) if pf.mode == "srs" else stratified_member_catalog(pf.design)
    return [
        {
            "name": m.name,
            "label": m.label,
            "group": m.group,
            "alpha1": "opt" if m.alpha1 is None else m.alpha1,
            "alpha2": "opt" if m.alpha2 is None else m.alpha2,
            "alpha": m.params.alpha,
            "eta": m.params.eta,
            "lambda": m.params.lam,
            "rule": m.rule,
        }
        for m in cat
    ]


def cmd_members(args) -> None:
    pf = load_params(args.params)
    recs = member_records(pf)
    if args.format == "json":
        text = json.dumps({"mode": pf.mode, "members": recs}, indent=2) + "\n"
    else:
        keys = list(recs[0])
        text = table_to_csv(keys, [[r[k] for k in keys] for r in recs])
    _emit(text, args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="measerr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--params", required=True, help="JSON parameter file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("analyze", help="first-order MSE, PRE and bias of each estimator")
    common(p)
    p.add_argument("--estimators", default="all", help="'all' or comma-separated names")
    p.add_argument("--form", choices=FORMS, default="printed",
                   help="constant term of the class MSE: as tabulated, or from the expansion")
    p.add_argument("--ledger", help="also write the discrepancy ledger (JSON) to this path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("estimate", help="point estimate from a sample CSV")
    common(p)
    p.add_argument("--data", required=True, help="CSV with columns y,x or stratum,y,x")
    p.add_argument("--estimator", required=True)
    p.add_argument("--constant", type=float, action="append",
                   help="override a constant (repeat for alpha1 then alpha2)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="Monte Carlo bias/MSE against first-order theory")
    common(p)
    p.add_argument("--replications", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--estimators", default="all")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("members", help="list class members with resolved constants")
    common(p)
    p.set_defaults(func=cmd_members)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (DomainError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(record) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
