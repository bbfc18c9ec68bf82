"""Named estimators with their theory, shared by the report, estimate and simulate paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import srs, stratified
from .population import DomainError, PopulationSummary
from .proposed import Member, bias_tp, class_values, mse_decomposition, member_catalog
from .stratified import StratifiedDesign

# rows of the published MSE/PRE comparison, in order
REPORT_ROWS = (
    "usual_mean", "ratio", "difference", "srivastava", "dubey_singh",
    "t1", "t2", "t3", "t4", "t5", "t6", "t7",
)
SRS_EXTRA = ("walsh", "ray_sahai")
STRATIFIED_ROWS = (
    "usual_mean", "combined_ratio", "combined_product", "combined_difference",
    "t1", "t2", "t3", "t4", "t5", "t6", "t7",
)

LABELS = {
    "usual_mean": "ybar",
    "ratio": "ybar_R",
    "difference": "ybar_d",
    "srivastava": "ybar_s",
    "walsh": "ybar_w",
    "ray_sahai": "ybar_RS",
    "dubey_singh": "ybar_DS",
    "combined_ratio": "T_R",
    "combined_product": "T_PR",
    "combined_difference": "T_D",
}


@dataclass(frozen=True)
class EstimatorDef:
    name: str
    label: str
    mse: float
    bias: float
    constants: tuple[float, ...]
    evaluate: Callable  # (ybar, xbar) arrays -> estimates, NaN where undefined


def _classical(name: str, s: PopulationSummary) -> EstimatorDef:
    c = srs.classical_optimum(name, s) if name in srs.TUNABLE else None
    return EstimatorDef(
        name=name,
        label=LABELS[name],
        mse=srs.classical_mse(name, s),
        bias=0.0 if name == "usual_mean" else srs.classical_bias(name, s),
        constants=() if c is None else (c,),
        evaluate=lambda y, x, c=c: srs.estimator_values(name, y, x, s, c),
    )


def _member(mem: Member, s: PopulationSummary, form: str, label: str | None = None) -> EstimatorDef:
    d = mse_decomposition(mem.params, s, form)
    sc = mem.scalars(d)
    p = mem.params
    return EstimatorDef(
        name=mem.name,
        label=label or mem.label,
        mse=d.mse(*sc),
        bias=bias_tp(p, sc, s, form),
        constants=(sc.alpha1, sc.alpha2),
        evaluate=lambda y, x: class_values(p, sc, y, x, s.mu_x),
    )


def srs_names() -> tuple[str, ...]:
    return REPORT_ROWS + SRS_EXTRA


def srs_estimator(name: str, s: PopulationSummary, form: str = "printed") -> EstimatorDef:
    if name in srs.CLASSICAL_ESTIMATORS:
        return _classical(name, s)
    members = {m.name: m for m in member_catalog(s)}
    if name == "dubey_singh":
        # tabulated with the unit weight on ybar, i.e. the regression-type minimum
        mem = members[name]
        pinned = Member(mem.name, mem.label, mem.params, 1.0, None, mem.group)
        return _member(pinned, s, form, LABELS[name])
    if name in members and name.startswith("t"):
        return _member(members[name], s, form)
    raise DomainError(f"unknown estimator {name!r}; choose from {', '.join(srs_names())}")


def _strat_member(mem: Member, d: StratifiedDesign, form: str) -> EstimatorDef:
    res = stratified.stratified_class_mse(mem.params, d, form, mem.alpha1, mem.alpha2)
    sc = (res.beta1, res.beta2)
    p = mem.params
    return EstimatorDef(
        name=mem.name,
        label=mem.label,
        mse=res.min_mse,
        bias=res.bias,
        constants=sc,
        evaluate=lambda y, x: stratified.stratified_class_values(p, sc, y, x, d),
    )


def stratified_estimator(name: str, d: StratifiedDesign, form: str = "printed") -> EstimatorDef:
    if name in stratified.STRATIFIED_CLASSICAL:
        m = stratified.aggregate_moments(d)
        c = stratified.d_opt(d) if name == "combined_difference" else None
        bias = {
            "usual_mean": 0.0,
            "combined_ratio": d.mu_y * (m.delta1 - m.delta01),
            "combined_product": d.mu_y * m.delta01,
            "combined_difference": 0.0,
        }[name]
        return EstimatorDef(
            name=name,
            label=LABELS[name],
            mse=stratified.stratified_classical_mse(name, d),
            bias=bias,
            constants=() if c is None else (c,),
            evaluate=lambda y, x: stratified.stratified_classical_values(name, y, x, d, c),
        )
    members = {m.name: m for m in stratified.stratified_member_catalog(d)}
    if name in members and name.startswith("t"):
        return _strat_member(members[name], d, form)
    raise DomainError(f"unknown estimator {name!r}; choose from {', '.join(STRATIFIED_ROWS)}")


def resolve_selection(selection, mode: str) -> tuple[str, ...]:
    """'all' or comma-separated names -> ordered tuple of names."""
    if isinstance(selection, str):
        selection = [t.strip() for t in selection.split(",") if t.strip()]
    selection = list(selection)
    default = REPORT_ROWS if mode == "srs" else STRATIFIED_ROWS
    known = srs_names() if mode == "srs" else STRATIFIED_ROWS
    if not selection or selection == ["all"]:
        return default
    for name in selection:
        if name not in known:
            raise DomainError(f"unknown estimator {name!r}; choose from {', '.join(known)}")
    return tuple(selection)

