"""Parameter files, sample data files and report rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .population import DomainError, PopulationSummary, validate_summary
from .stratified import StratifiedDesign, StratumSummary, validate_design

SRS_FIELDS = ("mu_y", "mu_x", "sigma2_y", "sigma2_x", "rho", "sigma2_u", "sigma2_v", "n")
STRATUM_FIELDS = ("w", "n_h", "mu_yh", "mu_xh", "sigma2_yh", "sigma2_xh", "rho_h", "sigma2_uh", "sigma2_vh")
OPTIONAL = {"sigma2_u": 0.0, "sigma2_v": 0.0, "sigma2_uh": 0.0, "sigma2_vh": 0.0}
INT_FIELDS = {"n", "n_h"}


class ParamsError(DomainError):
    """Malformed or invalid parameter/data file."""


@dataclass(frozen=True)
class ParamsFile:
    mode: str
    summary: PopulationSummary | None = None
    design: StratifiedDesign | None = None


def _fields(obj: dict, names, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ParamsError(f"{where}: expected a JSON object")
    out = {}
    for name in names:
        if name not in obj:
            if name in OPTIONAL:
                out[name] = OPTIONAL[name]
                continue
            raise ParamsError(f"{where}missing required field {name}")
        value = obj[name]
        if name in INT_FIELDS:
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParamsError(f"{where}{name}: expected an integer, got {value!r}")
        elif isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParamsError(f"{where}{name}: expected a number, got {value!r}")
        out[name] = value
    return out


def parse_params(obj) -> ParamsFile:
    if not isinstance(obj, dict):
        raise ParamsError("params: expected a JSON object")
    mode = obj.get("mode", "stratified" if "strata" in obj else "srs")
    if mode == "srs":
        s = PopulationSummary(**_fields(obj, SRS_FIELDS, ""))
        try:
            return ParamsFile("srs", summary=validate_summary(s))
        except DomainError as exc:
            raise ParamsError(str(exc)) from None
    if mode == "stratified":
        raw = obj.get("strata")
        if not isinstance(raw, list) or not raw:
            raise ParamsError("missing required field strata (a non-empty list)")
        strata = []
        for i, h in enumerate(raw):
            f = _fields(h, STRATUM_FIELDS, f"strata[{i}]: ")
            name = h.get("name")
            strata.append(StratumSummary(**f, name=None if name is None else str(name)))
        try:
            return ParamsFile("stratified", design=validate_design(StratifiedDesign(tuple(strata))))
        except DomainError as exc:
            raise ParamsError(str(exc)) from None
    raise ParamsError(f"mode: expected 'srs' or 'stratified', got {mode!r}")


def load_params(path) -> ParamsFile:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParamsError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_params(obj)


def params_to_json(pf: ParamsFile) -> str:
    if pf.mode == "srs":
        obj = {"mode": "srs", **pf.summary.to_dict()}
    else:
        obj = {"mode": "stratified", "strata": [h.to_dict() for h in pf.design.strata]}
    return json.dumps(obj, indent=2)


def read_sample(path, stratified: bool = False):
    """Sample columns from CSV: ``y,x`` or ``stratum,y,x``.

    Returns ``(ys, xs)`` lists, or a dict stratum -> (ys, xs) when stratified.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        if "y" not in header or "x" not in header:
            raise ParamsError(f"{path}: header must contain columns y and x")
        if stratified and "stratum" not in header:
            raise ParamsError(f"{path}: stratum column required for stratified parameters")
        groups: dict[str, tuple[list, list]] = {}
        for lineno, row in enumerate(reader, start=2):
            try:
                y, x = float(row["y"]), float(row["x"])
            except (TypeError, ValueError):
                raise ParamsError(f"{path}: line {lineno}: y and x must be numbers") from None
            if not (math.isfinite(y) and math.isfinite(x)):
                raise ParamsError(f"{path}: line {lineno}: non-finite value")
            key = row["stratum"].strip() if stratified else ""
            ys, xs = groups.setdefault(key, ([], []))
            ys.append(y)
            xs.append(x)
    if not groups:
        raise ParamsError(f"{path}: no data rows")
    return groups if stratified else groups[""]


@dataclass(frozen=True)
class ReportRow:
    estimator_name: str
    mse: float
    pre: float
    bias: float | None = None
    optimum_constants: list[float] | None = None

    def to_dict(self) -> dict:
        return {
            "estimator_name": self.estimator_name,
            "mse": self.mse,
            "pre": self.pre,
            "bias": self.bias,
            "optimum_constants": self.optimum_constants,
        }


def _g6(v) -> str:
    if v is None:
        return ""
    return f"{v:.6g}"


def rows_to_csv(rows: list[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["estimator", "mse", "pre", "bias", "optimum_constants"])
    for r in rows:
        consts = ";".join(_g6(c) for c in r.optimum_constants or [])
        w.writerow([r.estimator_name, _g6(r.mse), _g6(r.pre), _g6(r.bias), consts])
    return buf.getvalue()


def rows_to_json(rows: list[ReportRow], **extra) -> str:
    return json.dumps({**extra, "rows": [r.to_dict() for r in rows]}, indent=2) + "\n"


def rows_from_json(text: str) -> list[ReportRow]:
    obj = json.loads(text)
    return [ReportRow(**r) for r in obj["rows"]]


def table_to_csv(header: list[str], records: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for rec in records:
        w.writerow([_g6(v) if isinstance(v, float) else v for v in rec])
    return buf.getvalue()
