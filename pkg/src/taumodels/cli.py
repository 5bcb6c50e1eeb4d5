"""Command line interface: expand series, compute moment windows, run checks.

Exit codes: 0 when every assertion passes, 1 when any assertion fails,
2 for configuration errors (schema violations, unknown names, poles).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from importlib import resources

import jsonschema

from .combinatorics import (
    DomainError,
    IntegerLatticeFunction,
    PoleError,
    content_product,
    enumerate_partitions,
)
from .ensembles import SKEW_FORMS, skew_model_series
from .exactalg import format_scalar
from .tau import TauSeries
from .twocomp import (
    CoefficientMatrix,
    DivergenceError,
    MomentRecipe,
    moment_matrix,
    moment_method,
    solvable_model_2bkp,
    solvable_model_2kp,
    tau_2bkp,
)
from . import verification

SCHEMA_VERSION = 1
MODELS = ("zz1", "zz2", "vacuum-2bkp", "tau-pp", "skew", "2kp", "2bkp")


class ConfigError(ValueError):
    pass


def load_schema(name: str) -> dict:
    text = resources.files("taumodels").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict):
    try:
        jsonschema.validate(cfg, load_schema("runconfig"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from exc


def _merge(cfg: dict, args) -> dict:
    out = dict(cfg)
    for key in ("seed", "nodes", "samples", "format", "out"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    trunc = dict(out.get("truncation", {}))
    if args.trunc_weight is not None:
        trunc["weight"] = args.trunc_weight
    if args.trunc_length is not None:
        trunc["length"] = args.trunc_length
    out["truncation"] = trunc
    out.setdefault("format", "json")
    return out


# --- expand -----------------------------------------------------------------

def _identity_pair(cfg):
    A1 = CoefficientMatrix.from_json(cfg["A1"]) if "A1" in cfg else CoefficientMatrix.identity()
    A2 = CoefficientMatrix.from_json(cfg["A2"]) if "A2" in cfg else CoefficientMatrix.identity()
    return A1, A2


def build_series(cfg: dict) -> TauSeries:
    model = cfg.get("model")
    if model not in MODELS:
        raise ConfigError(f"expand needs a model, one of {', '.join(MODELS)}")
    N = cfg.get("N", 1)
    W = cfg["truncation"].get("weight", 4)
    window = cfg.get("window")
    if model == "zz1":
        rec = MomentRecipe.build(IntegerLatticeFunction((1,), (0, 1)), "unitary")
        L = cfg["truncation"].get("length", N)
        I = CoefficientMatrix.identity()
        return solvable_model_2kp(I, I, rec, None, None, N, (W, L), window)
    if model == "zz2":
        rec = MomentRecipe.build(IntegerLatticeFunction((1,), (0, 1)), "unitary", squared_arguments=True)
        L = cfg["truncation"].get("length", max(W, 1))
        I = CoefficientMatrix.identity()
        return solvable_model_2bkp(I, I, rec, None, None, N, (W, L), window)
    if model == "vacuum-2bkp":
        L = cfg["truncation"].get("length", max(W, 1))
        return tau_2bkp(CoefficientMatrix.identity(), None, None, (W, L))
    if model == "tau-pp":
        r = IntegerLatticeFunction.from_json(cfg["r"]) if "r" in cfg else IntegerLatticeFunction((1,), (0, 1))
        n = cfg.get("n", N)
        L = cfg["truncation"].get("length", max(W, 1))
        coeffs = {}
        for lam in enumerate_partitions(W, L):
            c = content_product(r, lam, n)
            if c != 0:
                coeffs[lam] = c
        return TauSeries("partition_single", coeffs, (W, L), meta={"n": n})
    if model == "skew":
        form = cfg.get("form", "printed")
        if form not in SKEW_FORMS:
            raise ConfigError(f"skew form must be one of {SKEW_FORMS}")
        L = cfg["truncation"].get("length", max(W, 1))
        return skew_model_series(None, None, N, (W, L), form)
    if "recipe" not in cfg:
        raise ConfigError(f"model {model} needs a recipe")
    rec = MomentRecipe.from_json(cfg["recipe"])
    A1, A2 = _identity_pair(cfg)
    if model == "2kp":
        L = cfg["truncation"].get("length", N)
        return solvable_model_2kp(A1, A2, rec, None, None, N, (W, L), window)
    L = cfg["truncation"].get("length", max(W, 1))
    return solvable_model_2bkp(A1, A2, rec, None, None, N, (W, L), window)


def _series_rows(series: TauSeries):
    for key, val in series.coeffs.items():
        if series.index_kind == "partition_single":
            yield [" ".join(map(str, key)), "", format_scalar(val)]
        else:
            yield [" ".join(map(str, key[0])), " ".join(map(str, key[1])), format_scalar(val)]


def cmd_expand(cfg: dict) -> tuple[str, int]:
    series = build_series(cfg)
    if cfg["format"] == "csv":
        return _csv(["left", "right", "value"], _series_rows(series)), 0
    doc = {"schema_version": SCHEMA_VERSION, "model": cfg["model"], "N": cfg.get("N", 1),
           "series": series.to_json(),
           "meta": {k: v for k, v in series.meta.items() if isinstance(v, (int, str, float))}}
    return json.dumps(doc, indent=1), 0


# --- moments ----------------------------------------------------------------

DEFAULT_RECIPE = {"r": {"num": ["1"], "den": ["0", "1"]}, "measure": "unitary", "squared_arguments": True}


def cmd_moments(cfg: dict) -> tuple[str, int]:
    rec = MomentRecipe.from_json(cfg.get("recipe", DEFAULT_RECIPE))
    size = cfg.get("window", 6)
    rows = [[moment_matrix(rec, i, j) for j in range(size)] for i in range(size)]
    method = moment_method(rec)
    if cfg["format"] == "csv":
        body = ([i, j, format_scalar(rows[i][j])] for i in range(size) for j in range(size))
        return _csv(["i", "j", "value", "method"], ([*b, method] for b in body)), 0
    doc = {"schema_version": SCHEMA_VERSION, "method": method, "window": size,
           "recipe": rec.to_json(), "matrix": [[format_scalar(x) for x in r] for r in rows]}
    return json.dumps(doc, indent=1), 0


# --- verify -----------------------------------------------------------------

def _options(cfg):
    t = cfg.get("truncation", {})
    return verification.Options(seed=cfg.get("seed", verification.Options.seed),
                                trunc_weight=t.get("weight"), trunc_length=t.get("length"),
                                nodes=cfg.get("nodes"), samples=cfg.get("samples"))


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return format_scalar(x)
    return x


def report_document(command: str, records) -> dict:
    passed = sum(1 for r in records if r.role == "assertion" and r.passed())
    failed = sum(1 for r in records if r.role == "assertion" and not r.passed())
    return {"schema_version": SCHEMA_VERSION, "command": command,
            "records": [_jsonable(r.to_json()) for r in records],
            "summary": {"assertions_passed": passed, "assertions_failed": failed,
                        "findings": sum(1 for r in records if r.role == "finding")}}


def _render_report(doc, fmt):
    if fmt == "csv":
        head = ["name", "anchor", "role", "verdict", "max_discrepancy", "tolerance", "lhs", "rhs",
                "provenance", "note"]
        rows = ([r["name"], r["anchor"], r["role"], r["verdict"], r["max_discrepancy"], r["tolerance"],
                 json.dumps(r["lhs"]), json.dumps(r["rhs"]), json.dumps(r["provenance"]), r["note"]]
                for r in doc["records"])
        return _csv(head, rows)
    return json.dumps(doc, indent=1)


def cmd_verify(cfg: dict, names) -> tuple[str, int]:
    names = list(names or cfg.get("checks", []))
    if not names:
        raise ConfigError("verify needs at least one check name; known: " + ", ".join(verification.check_names()))
    unknown = [n for n in names if n not in verification.CHECKS]
    if unknown:
        raise ConfigError(f"unknown check(s) {', '.join(unknown)}; known: "
                          + ", ".join(verification.check_names()))
    opts = _options(cfg)
    records = []
    for n in names:
        records.extend(verification.run_check(n, opts))
    doc = report_document("verify", records)
    return _render_report(doc, cfg["format"]), 1 if doc["summary"]["assertions_failed"] else 0


def cmd_report_all(cfg: dict) -> tuple[str, int]:
    records = verification.run_all(_options(cfg))
    doc = report_document("report-all", records)
    return _render_report(doc, cfg["format"]), 1 if doc["summary"]["assertions_failed"] else 0


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


# --- entry point ------------------------------------------------------------

def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config (validated against runconfig.schema.json)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=_u64)
    common.add_argument("--trunc-weight", type=_positive, dest="trunc_weight")
    common.add_argument("--trunc-length", type=_positive, dest="trunc_length")
    common.add_argument("--nodes", type=_positive)
    common.add_argument("--samples", type=_positive)
    common.add_argument("--format", choices=("json", "csv"))
    p = argparse.ArgumentParser(prog="taumodels", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("expand", parents=[common], help="expand a model family into exact coefficients")
    e.add_argument("--model", choices=MODELS)
    e.add_argument("--N", type=int, dest="N")
    sub.add_parser("moments", parents=[common], help="windowed moment matrix g_ij")
    v = sub.add_parser("verify", parents=[common], help="run named identity checks")
    v.add_argument("checks", nargs="*", help="check names (see --list)")
    v.add_argument("--list", action="store_true", help="list known checks and exit")
    sub.add_parser("report-all", parents=[common], help="run every check")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _merge(load_config(args.config), args)
        if args.command == "expand":
            if args.model:
                cfg["model"] = args.model
            if args.N:
                cfg["N"] = args.N
            text, code = cmd_expand(cfg)
        elif args.command == "moments":
            text, code = cmd_moments(cfg)
        elif args.command == "verify":
            if args.list:
                print("\n".join(verification.check_names()))
                return 0
            text, code = cmd_verify(cfg, args.checks)
        else:
            text, code = cmd_report_all(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PoleError as exc:
        print(f"pole error: {exc}", file=sys.stderr)
        return 2
    except (DivergenceError, DomainError, NotImplementedError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
