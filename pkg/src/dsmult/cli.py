"""Command-line entry point: ``dsmult <subcommand> [options]``.

Every run prints a metadata header (tool version, convention flags, period
used). Numbers are exact: integers, "p/q" strings, or cyclotomic coefficient
records. Exit codes: 0 ok, 1 failed self-test, 2 invalid input,
3 mathematical inconsistency, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .acceptance import run_all
from .cuspforms import FuchsianSignature, fuchsian_dim, max_elliptic_order, qualifying_weights, verify_finite_determination
from .errors import DsmultError, Mismatch, SchemaError, ValidationError
from .exact import as_fraction, lcm, series_coefficients, to_rational
from .genfun import genfun_closed, genfun_series, string_period
from .hpformula import HPEvaluator
from .lattice import BUNDLED_DATASETS, DEFAULT_WY_MODE, WY_MODES, LatticeData, bundled_dataset_path, load_lattice
from .params import in_D, in_Dstar, make_string, satisfies_tv_estimate
from .roots import BUILTIN_ROOT_SYSTEMS, RootSystem, chamber_of, generate_weyl, length_and_sign, load_root_system
from .solver import compare_lattices, minimal_sampling_set, reconstruct

DEFAULTS: dict[str, Any] = {
    "emit": "csv",
    "wy_mode": DEFAULT_WY_MODE,
    "terms": None,
    "horizon": 500,
    "minus_one": False,
}


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def parse_vector(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(as_fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad vector {text!r}") from exc


def parse_string_spec(text: str) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    base, sep, direction = text.partition(";")
    if not sep:
        raise ValidationError("--string expects 'base;direction'")
    return parse_vector(base), parse_vector(direction)


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ValidationError(f"bad integer list {text!r}") from exc


def parse_range(text: str) -> range:
    a, sep, b = text.partition("..")
    if not sep:
        raise ValidationError("--k-range expects 'a..b'")
    return range(int(a), int(b) + 1)


def load_dataset_arg(ref: str) -> LatticeData:
    if ref in BUNDLED_DATASETS:
        return load_lattice(bundled_dataset_path(ref))
    return load_lattice(Path(ref))


def load_root_system_arg(ref: str) -> RootSystem:
    if ref in BUILTIN_ROOT_SYSTEMS:
        return BUILTIN_ROOT_SYSTEMS[ref]()
    return load_root_system(Path(ref))


def root_system_from(args) -> RootSystem:
    if args.root_system:
        return load_root_system_arg(args.root_system)
    if args.dataset:
        return load_dataset_arg(args.dataset).root_system
    raise ValidationError("--root-system or --dataset required")


def require(args, *names: str) -> None:
    for n in names:
        if getattr(args, n, None) is None:
            raise ValidationError(f"--{n.replace('_', '-')} is required")


def fmt_vec(v: Sequence) -> str:
    return ",".join(str(x) for x in v)


def fmt_value(v) -> Any:
    if isinstance(v, (Fraction, int)):
        return str(v)
    if v is None:
        return ""
    return v.to_json()


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


class Output:
    def __init__(self, args, command: str):
        self.meta: dict[str, Any] = {"tool": "dsmult", "version": __version__, "command": command, "wy_mode": args.wy_mode}
        self.tables: list[tuple[str, list[str], list[list[Any]]]] = []
        self.extra: dict[str, Any] = {}

    def table(self, name: str, header: list[str], rows: list[list[Any]]) -> None:
        self.tables.append((name, header, rows))

    def render(self, emit: str) -> str:
        if emit == "json":
            data = {name: [dict(zip(header, row)) for row in rows] for name, header, rows in self.tables}
            data.update(self.extra)
            return json.dumps({"meta": self.meta, "data": data}, indent=2, sort_keys=True) + "\n"
        buf = io.StringIO()
        for key in sorted(self.meta):
            buf.write(f"# {key}: {json.dumps(self.meta[key], sort_keys=True)}\n")
        for key in sorted(self.extra):
            buf.write(f"# {key}: {json.dumps(self.extra[key], sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        for i, (name, header, rows) in enumerate(self.tables):
            if i:
                buf.write("\n")
            buf.write(f"# table: {name}\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([json.dumps(c, sort_keys=True) if isinstance(c, (dict, list)) else c for c in row])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args, out: Output) -> int:
    if args.dataset:
        ld = load_dataset_arg(args.dataset)
        rs = ld.root_system
        ev = HPEvaluator(rs, args.wy_mode)
        out.meta["N_gamma"] = ld.n_gamma
        rows = []
        for c in ld.classes:
            d = ev.derived(c)
            rows.append([c.label, fmt_vec(c.t), c.order, str(c.vol), c.component_index, len(d.phi_y), d.d_y, d.sign, len(d.w_y)])
        out.table("classes", ["label", "t", "order", "vol", "component_index", "phi_y", "d_y", "sign", "w_y"], rows)
        out.extra["warnings"] = list(ld.warnings)
    else:
        rs = root_system_from(args)
    out.meta["root_system"] = rs.name
    out.table(
        "root_system",
        ["rank", "roots", "positive", "compact_positive", "W", "W_c", "d", "delta"],
        [[rs.rank, len(rs.roots), len(rs.positive), len(rs.compact_positive), len(generate_weyl(rs)), len(generate_weyl(rs, True)), rs.dim_p, fmt_vec(rs.delta)]],
    )
    return 0


def cmd_weyl(args, out: Output) -> int:
    rs = root_system_from(args)
    Wc = set(generate_weyl(rs, True))
    rows = []
    for i, w in enumerate(generate_weyl(rs)):
        length, det = length_and_sign(w, rs)
        rows.append([i, json.dumps([[str(x) for x in row] for row in w]), length, det, w in Wc])
    out.meta["root_system"] = rs.name
    out.table("weyl", ["index", "matrix", "length", "det", "in_W_c"], rows)
    return 0


def _lambdas(args) -> list[tuple[Fraction, ...]]:
    if args.lam:
        return [parse_vector(x) for x in args.lam]
    if args.string:
        base, direction = parse_string_spec(args.string)
        n = args.terms if args.terms is not None else 10
        return [tuple(b + k * d for b, d in zip(base, direction)) for k in range(n)]
    raise ValidationError("--lambda or --string required")


def cmd_params(args, out: Output) -> int:
    rs = root_system_from(args)
    rows = []
    for lam in _lambdas(args):
        if len(lam) != rs.rank:
            raise ValidationError(f"vector {fmt_vec(lam)} has the wrong length")
        d = in_D(rs, lam)
        rows.append([fmt_vec(lam), d, d and in_Dstar(rs, lam), d and satisfies_tv_estimate(rs, lam), fmt_vec(sorted(chamber_of(rs, lam)))])
    out.table("params", ["lambda", "in_D", "in_Dstar", "tv_estimate", "chamber"], rows)
    return 0


def cmd_mult(args, out: Output) -> int:
    require(args, "dataset")
    ld = load_dataset_arg(args.dataset)
    ev = HPEvaluator(ld.root_system, args.wy_mode)
    out.meta["N_gamma"] = ld.n_gamma
    out.meta["convention_factor"] = str(ev.convention_factor())
    rows = []
    for lam in _lambdas(args):
        if not in_D(ld.root_system, lam):
            raise ValidationError(f"{fmt_vec(lam)} is not a Harish-Chandra parameter")
        star = in_Dstar(ld.root_system, lam)
        lef = ev.lefschetz(lam, ld).value
        m = ev.multiplicity(lam, ld).value if star else None
        fd = ev.formal_degree(lam)
        rows.append([fmt_vec(lam), star, fmt_value(m), fmt_value(lef), str(fd), str(abs(fd))])
    out.table("multiplicities", ["lambda", "in_Dstar", "multiplicity", "lefschetz", "formal_degree", "formal_degree_abs"], rows)
    return 0


def _string_and_dataset(args):
    require(args, "dataset", "string")
    ld = load_dataset_arg(args.dataset)
    base, direction = parse_string_spec(args.string)
    return ld, make_string(ld.root_system, base, direction)


def cmd_genfun(args, out: Output) -> int:
    ld, st = _string_and_dataset(args)
    ev = HPEvaluator(ld.root_system, args.wy_mode)
    result = genfun_closed(st, ld, ev)
    n = args.terms if args.terms is not None else 3 * result.N * result.s
    series = genfun_series(st, ld, n, ev)
    closed = series_coefficients(result.model, n - 1) if n else []
    for k, (a, b) in enumerate(zip(closed, series)):
        if a != b.value:
            raise Mismatch(f"closed form and series differ at index {k}", k)
    out.meta.update({"N": result.N, "s": result.s, "string": args.string, "dataset": ld.name})
    out.table("numerator", ["power", "coefficient"], [[i, str(c)] for i, c in enumerate(result.model.numerator)])
    out.table("coefficients", ["k", "lambda", "in_Dstar", "value"], [[k, fmt_vec(st.member(k)), v.in_dstar, fmt_value(v.value)] for k, v in enumerate(series)])
    return 0


def _load_samples(path: str) -> tuple[dict[int, Fraction], dict]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"samples file is not JSON: {exc}") from exc
    meta = {}
    if isinstance(data, dict) and "data" in data and "meta" in data:
        meta = data["meta"]
        data = {row["k"]: row["value"] for row in data["data"].get("coefficients", [])}
    if not isinstance(data, dict):
        raise SchemaError("samples must map index to value")
    try:
        return {int(k): as_fraction(v) for k, v in data.items()}, meta
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad sample value: {exc}") from exc


def cmd_reconstruct(args, out: Output) -> int:
    require(args, "samples")
    samples, meta = _load_samples(args.samples)
    N = args.N if args.N is not None else meta.get("N")
    s = args.s if args.s is not None else meta.get("s")
    if N is None or s is None:
        raise ValidationError("--N and --s are required")
    predictor = reconstruct(samples, int(N), int(s))
    if args.eval:
        ells = parse_int_list(args.eval)
    else:
        n = args.terms if args.terms is not None else (max(samples) + 1 if samples else 0)
        ells = list(range(n))
    out.meta.update({"N": int(N), "s": int(s), "samples": len(samples)})
    out.table("coefficients", ["k", "value"], [[l, str(predictor.evaluate(l))] for l in ells])
    return 0


def cmd_coeffs(args, out: Output) -> int:
    require(args, "N", "s", "ell")
    A = parse_int_list(args.A) if args.A else minimal_sampling_set(args.N, args.s)
    # n(l, k) depends only on A, N and s; any sample vector serves
    predictor = reconstruct({k: 0 for k in A}, args.N, args.s)
    coeffs = predictor.linear_coefficients(args.ell)
    out.meta.update({"N": args.N, "s": args.s, "ell": args.ell, "integral": all(c.denominator == 1 for c in coeffs.values())})
    out.table("coefficients", ["k", "n"], [[k, str(c)] for k, c in sorted(coeffs.items())])
    return 0


def cmd_compare(args, out: Output) -> int:
    require(args, "dataset", "dataset_b", "string")
    ld_a = load_dataset_arg(args.dataset)
    ld_b = load_dataset_arg(args.dataset_b)
    base, direction = parse_string_spec(args.string)
    st_a = make_string(ld_a.root_system, base, direction)
    st_b = make_string(ld_b.root_system, base, direction)
    N = lcm(string_period(st_a, ld_a), string_period(st_b, ld_b))
    s = len(ld_a.root_system.positive) + 1
    A = parse_int_list(args.A) if args.A else minimal_sampling_set(N, s)
    window = args.terms if args.terms is not None else max(5 * N * s, max(A) + 1)
    seq_a = [v.value for v in genfun_series(st_a, ld_a, window, HPEvaluator(ld_a.root_system, args.wy_mode))]
    seq_b = [v.value for v in genfun_series(st_b, ld_b, window, HPEvaluator(ld_b.root_system, args.wy_mode))]
    verdict = compare_lattices([to_rational(x) for x in seq_a], [to_rational(x) for x in seq_b], A, N, s)
    out.meta.update({"N": N, "s": s, "window": window})
    out.table("verdict", ["status", "index", "detail"], [[verdict.status, "" if verdict.index is None else verdict.index, verdict.detail]])
    return 0


def cmd_cuspdim(args, out: Output) -> int:
    require(args, "signature", "k_range")
    sig = FuchsianSignature.parse(args.signature, args.minus_one)
    out.meta.update({"signature": str(sig), "N": max_elliptic_order(sig)})
    out.table("dimensions", ["k", "dim"], [[k, fuchsian_dim(sig, k)] for k in parse_range(args.k_range)])
    return 0


def cmd_verify16(args, out: Output) -> int:
    require(args, "sigA", "sigB")
    a = FuchsianSignature.parse(args.sigA, args.minus_one)
    b = FuchsianSignature.parse(args.sigB, args.minus_one)
    N = lcm(max_elliptic_order(a), max_elliptic_order(b))
    if args.F:
        try:
            F = [int(x) for x in json.loads(Path(args.F).read_text())]
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise SchemaError(f"--F must be a JSON list of weights: {exc}") from exc
    else:
        F = qualifying_weights(N)
    verdict = verify_finite_determination(a, b, F, args.horizon)
    out.meta.update({"N": N, "s": 2, "F_size": len(F), "horizon": args.horizon})
    out.table("verdict", ["status", "weight", "detail"], [[verdict.status, "" if verdict.weight is None else verdict.weight, verdict.detail]])
    return 3 if verdict.status == "prediction-mismatch" else 0


def cmd_selftest(args, out: Output) -> int:
    results = run_all()
    out.table("criteria", ["criterion", "name", "passed", "seconds", "detail"], [[r.number, r.name, r.passed, f"{r.seconds:.2f}", r.detail] for r in results])
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "validate": (cmd_validate, "validate a dataset or root system and print derived data"),
    "weyl": (cmd_weyl, "list Weyl group elements with lengths and signs"),
    "params": (cmd_params, "report D, D* and the integrability estimate for parameters"),
    "mult": (cmd_mult, "multiplicity table"),
    "genfun": (cmd_genfun, "closed-form generating function and coefficient table"),
    "reconstruct": (cmd_reconstruct, "reconstruct a sequence from samples"),
    "coeffs": (cmd_coeffs, "linear coefficients n(l, k)"),
    "compare": (cmd_compare, "compare two datasets along a string"),
    "cuspdim": (cmd_cuspdim, "cusp-form dimensions for a Fuchsian signature"),
    "verify16": (cmd_verify16, "finite determination of cusp-form dimensions"),
    "selftest": (cmd_selftest, "run the acceptance checks"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsmult", description="Exact discrete-series multiplicities along strings.")
    parser.add_argument("--version", action="version", version=f"dsmult {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option defaults (flags take precedence)")
    common.add_argument("--dataset", help=f"dataset JSON file or bundled name ({', '.join(BUNDLED_DATASETS)})")
    common.add_argument("--dataset-b", dest="dataset_b", help="second dataset for compare")
    common.add_argument("--root-system", dest="root_system", help=f"root-system JSON file or builtin ({', '.join(BUILTIN_ROOT_SYSTEMS)})")
    common.add_argument("--string", help="'base;direction', components comma separated")
    common.add_argument("--lambda", dest="lam", action="append", help="parameter vector, repeatable")
    common.add_argument("--samples", help="JSON map index -> value, or genfun JSON output")
    common.add_argument("--N", type=int)
    common.add_argument("--s", type=int)
    common.add_argument("--A", help="sampling set, comma separated")
    common.add_argument("--ell", type=int)
    common.add_argument("--eval", help="indices to evaluate, comma separated")
    common.add_argument("--terms", type=int)
    common.add_argument("--emit", choices=("csv", "json"))
    common.add_argument("--wy-mode", dest="wy_mode", choices=WY_MODES)
    common.add_argument("--horizon", type=int)
    common.add_argument("--signature", help="'g;e1,e2,...'")
    common.add_argument("--sigA")
    common.add_argument("--sigB")
    common.add_argument("--minus-one", dest="minus_one", action="store_true", default=None, help="the group contains -I")
    common.add_argument("--k-range", dest="k_range", help="'a..b'")
    common.add_argument("--F", help="JSON list of weights")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def _apply_config(args) -> None:
    config = {}
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise SchemaError(f"config is not JSON: {exc}") from exc
        if not isinstance(config, dict):
            raise SchemaError("config must be a JSON object")
    for key, value in {**DEFAULTS, **config}.items():
        key = key.replace("-", "_")
        if getattr(args, key, None) is None:
            setattr(args, key, value if key in config else DEFAULTS.get(key))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        out = Output(args, args.command)
        handler = COMMANDS[args.command][0]
        status = handler(args, out)
        sys.stdout.write(out.render(args.emit))
        return status
    except DsmultError as exc:
        return _fail(exc, exc.exit_code)
    except OSError as exc:
        return _fail(exc, 4)


def _fail(exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
