"""Command-line front end: ``tables``, ``verify`` and ``solve``.

Exit codes: 0 success, 1 verification mismatch, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import random
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import (
    AlgebraSpec,
    Kind,
    antisymmetry_window,
    check_f_equivariance,
    jacobi_window,
    semidirect_a,
    semidirect_b,
    tensor_density,
    witt,
    with_tampered_weight,
)
from .cohomology import (
    CocycleId,
    Component,
    NamedCocycle,
    cocycle_system,
    h2_dimensions,
    h2_record,
    is_cocycle,
    vector_json,
    window_vector,
)
from .errors import WittError
from .extension import MixingProfile, build_central_extension, select, verify_extension, vir_a, vir_b, virasoro
from .leibniz import constraints_invariant_form, constraints_leibniz, exact_sequence_data, hl2_dimension
from .linsolve import in_span, kernel, rank
from .morphisms import (
    IDENTITY,
    check_aut,
    check_der,
    compose_auts,
    differentiation_defects,
    h1_data,
    inner_identity_check,
    inverse_aut,
    named_derivations,
    pointwise_composition_defects,
    random_aut,
)
from .scalars import LambdaParam, format_rational, parse_lambda, parse_rational

DEFAULT_LAMBDAS = ("0", "-1", "1", "5/7", "inf")
DEFAULT_AB = (("0", "0"), ("0", "1"), ("0", "2"), ("0", "-1"), ("1/2", "0"), ("3", "4"))
# Smallest window at which every dimension on the default grid has settled (see README).
STABLE_WINDOW = 5
SUITES = ("jacobi", "cocycles", "leibniz", "automorphisms", "derivations", "extensions", "equivariance")
AUT_SAMPLES = 50


class ConfigError(WittError):
    pass


@dataclass(frozen=True)
class RunConfig:
    algebra: str | None = None
    lam: LambdaParam | None = None
    a: Fraction | None = None
    b: Fraction | None = None
    window: int = 8
    fmt: str = "md"
    suite: str = "all"
    seed: int = 0
    jobs: int = 1
    inject_bad_weight: bool = False


def _quiet(fn: Callable, *args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args)


def grid_specs(cfg: RunConfig) -> list[AlgebraSpec]:
    """The algebras selected by ``cfg``: one instance, one family's grid, or everything."""
    fam = cfg.algebra
    if fam == "witt":
        return [witt()]
    lams = [cfg.lam] if cfg.lam is not None else [parse_lambda(t) for t in DEFAULT_LAMBDAS]
    if fam == "wab" and (cfg.a is None) != (cfg.b is None):
        raise ConfigError("--a and --b must be given together")
    if cfg.a is not None:
        pairs = [(cfg.a, cfg.b)]
    else:
        pairs = [(parse_rational(a), parse_rational(b)) for a, b in DEFAULT_AB]
    out: list[AlgebraSpec] = []
    if fam in (None, "wa"):
        out += [semidirect_a(lam) for lam in lams]
    if fam in (None, "wb"):
        out += [semidirect_b(lam) for lam in lams]
    if fam in (None, "wab"):
        out += [_quiet(tensor_density, a, b) for a, b in pairs]
    if fam not in (None, "wa", "wb", "wab"):
        raise ConfigError(f"unknown algebra {fam!r}")
    if cfg.inject_bad_weight:
        out = [with_tampered_weight(s) for s in out if s.kind is not Kind.WITT]
    return out


def single_spec(cfg: RunConfig) -> AlgebraSpec:
    if cfg.algebra is None:
        raise ConfigError("--algebra is required")
    if cfg.algebra in ("wa", "wb") and cfg.lam is None:
        raise ConfigError("--lambda is required for wa and wb")
    if cfg.algebra == "wab" and (cfg.a is None or cfg.b is None):
        raise ConfigError("--a and --b are required for wab")
    return grid_specs(cfg)[0]


def expected_dims(spec: AlgebraSpec) -> tuple[int, int, int]:
    """(dim H², dim HL², dim H¹(g;g)) from the published tables, by parameter class."""
    if spec.kind is Kind.SEMIDIRECT_A:
        return (3, 4, 2) if spec.lam.is_value(0) else (2, 3, 2)  # type: ignore[union-attr]
    if spec.kind is Kind.SEMIDIRECT_B:
        return (3, 3, 3) if spec.lam.is_value(0) else (3, 3, 2)  # type: ignore[union-attr]
    if spec.kind is Kind.TENSOR_DENSITY:
        a, b = spec.a, spec.b
        assert a is not None and b is not None
        a = a - (a.numerator // a.denominator)  # I(a,b) ≅ I(a+k,b)
        if a == Fraction(1, 2) and b == 1:
            b = Fraction(0)  # I(1/2,0) ≅ I(1/2,1)
        key = (a, b)
        h2 = {(0, 0): 3, (0, 1): 3, (0, -1): 2, (Fraction(1, 2), 0): 2}.get(key, 1)  # type: ignore[call-overload]
        hl2 = h2 + (1 if key in ((0, 1), (0, 2)) else 0)
        h1 = {(0, 0): 3, (0, 1): 2, (0, 2): 2}.get(key, 1)  # type: ignore[call-overload]
        return h2, hl2, h1
    raise ConfigError(f"no table row for {spec.label()}")


def _params(spec: AlgebraSpec) -> str:
    if spec.kind is Kind.TENSOR_DENSITY:
        return f"a={format_rational(spec.a)},b={format_rational(spec.b)}"  # type: ignore[arg-type]
    return f"lambda={spec.lam}"


def _family(spec: AlgebraSpec) -> str:
    return {Kind.TENSOR_DENSITY: "W(a,b)", Kind.SEMIDIRECT_A: "W_A", Kind.SEMIDIRECT_B: "W_B"}[spec.kind]


def _table_row(spec: AlgebraSpec, N: int) -> dict:
    h2 = h2_dimensions(spec, N)["total"]
    hl2 = hl2_dimension(spec, N)
    h1 = h1_data(spec, N)["h1"]
    expected = list(expected_dims(spec))
    return {
        "algebra": _family(spec),
        "params": _params(spec),
        "N": N,
        "h2": h2,
        "hl2": hl2,
        "h1": h1,
        "expected": expected,
        "match": [h2, hl2, h1] == expected,
    }


def _map(fn: Callable, tasks: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_star, [(fn, t) for t in tasks]))


def _star(packed):
    fn, args = packed
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args)


def _render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in columns])
        return buf.getvalue().rstrip("\n")
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for row in rows:
        lines.append("| " + " | ".join(_cell(row[c]) for c in columns) + " |")
    return "\n".join(lines)


def _cell(value) -> str:
    if isinstance(value, list):
        return "(" + ", ".join(str(v) for v in value) + ")"
    if isinstance(value, bool):
        return "yes" if value else "NO"
    return str(value)


def cmd_tables(cfg: RunConfig) -> tuple[int, str]:
    if cfg.window < STABLE_WINDOW:
        raise ConfigError(f"tables need --window ≥ {STABLE_WINDOW}")
    specs = grid_specs(cfg)
    if any(s.kind is Kind.WITT for s in specs):
        raise ConfigError("the Witt algebra has no table row")
    rows = _map(_table_row, [(s, cfg.window) for s in specs], cfg.jobs)
    text = _render(rows, ["algebra", "params", "h2", "hl2", "h1", "expected", "match"], cfg.fmt)
    return (0 if all(r["match"] for r in rows) else 1), text


# verify suites: each returns a list of check records {"check", "algebra", "pass", "detail"}.


def _check(name: str, spec: AlgebraSpec | str, ok: bool, detail=None) -> dict:
    label = spec if isinstance(spec, str) else spec.label()
    return {"check": name, "algebra": label, "pass": bool(ok), "detail": detail}


def _fmt_basis(b) -> str:
    if b.family.name == "C":
        return f"c[{b.name}]"
    return f"{'L' if b.family.name == 'L' else 'X'}[{b.degree}]"


def _triple(defect) -> list[str]:
    return [_fmt_basis(b) for b in defect[:3]]


def suite_jacobi(spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    anti = antisymmetry_window(spec, N)
    jac = jacobi_window(spec, N, ordered=False)
    return [
        _check("antisymmetry", spec, not anti, [_fmt_basis(b) for b in anti[0]] if anti else None),
        _check("jacobi", spec, not jac, _triple(jac[0]) if jac else None),
    ]


def _home_cocycles(spec: AlgebraSpec) -> list[NamedCocycle]:
    out = [NamedCocycle(CocycleId.OMEGA_VIR)]
    if spec.kind is Kind.SEMIDIRECT_A:
        out.append(NamedCocycle(CocycleId.OMEGA_MIX_A))
        if spec.lam.is_value(0):  # type: ignore[union-attr]
            out.append(NamedCocycle(CocycleId.OMEGA_0A))
    elif spec.kind is Kind.SEMIDIRECT_B:
        out += [NamedCocycle(CocycleId.OMEGA_AB_B), NamedCocycle(CocycleId.OMEGA_MIX_B)]
    return out


def _dimension_check(name: str, spec: AlgebraSpec, N: int, got, want) -> dict:
    if N < STABLE_WINDOW:
        return {"check": name, "algebra": spec.label(), "pass": True, "unstable": True, "detail": None}
    return _check(name, spec, got == want, None if got == want else {"got": got, "expected": want})


def suite_cocycles(spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    out = []
    for c in _home_cocycles(spec):
        bad = is_cocycle(spec, c, N)
        out.append(_check(f"is_cocycle:{c.id.value}", spec, not bad, _triple(bad[0]) if bad else None))
    got = h2_dimensions(spec, max(N, 4))["total"] if N >= STABLE_WINDOW else None
    out.append(_dimension_check("h2", spec, N, got, expected_dims(spec)[0]))
    return out


def suite_leibniz(spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    if N < STABLE_WINDOW:
        return [_dimension_check("hl2", spec, N, None, None)]
    data = exact_sequence_data(spec, N)
    return [
        _dimension_check("hl2", spec, N, data["hl2"], expected_dims(spec)[1]),
        _check("exact_sequence", spec, data["crosscheck"]),
    ]


def suite_automorphisms(spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    if spec.kind not in (Kind.SEMIDIRECT_A, Kind.SEMIDIRECT_B):
        return []
    rng = random.Random(f"{seed}|{spec.label()}")
    law_fail = inverse_fail = None
    for _ in range(AUT_SAMPLES):
        s1, s2 = random_aut(spec, rng), random_aut(spec, rng)
        bad = pointwise_composition_defects(s1, s2, spec, N)
        if bad and law_fail is None:
            law_fail = {"s1": s1.to_json(), "s2": s2.to_json(), "basis": _fmt_basis(bad[0])}
        inv = inverse_aut(s1, spec)
        if (compose_auts(s1, inv, spec) != IDENTITY or compose_auts(inv, s1, spec) != IDENTITY) and inverse_fail is None:
            inverse_fail = {"s": s1.to_json()}
    sample = random_aut(spec, rng)
    hom = check_aut(sample, spec, N)
    out = [
        _check("group_law", spec, law_fail is None, law_fail),
        _check("inverse", spec, inverse_fail is None, inverse_fail),
        _check("homomorphism", spec, not hom, {"s": sample.to_json(), "pair": [_fmt_basis(b) for b in hom[0]]} if hom else None),
    ]
    if spec.kind is Kind.SEMIDIRECT_A:
        out.append(_check("inner_identity", spec, inner_identity_check(spec.lam, N)))  # type: ignore[arg-type]
    return out


def suite_derivations(spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    out = []
    for d in named_derivations(spec):
        bad = check_der(d, spec, N)
        tag = "+".join(t.tag.value for t in d.terms)
        out.append(_check(f"check_der:{tag}", spec, not bad, [_fmt_basis(b) for b in bad[0]] if bad else None))
    if spec.kind in (Kind.SEMIDIRECT_A, Kind.SEMIDIRECT_B):
        diff = differentiation_defects(spec, N)
        out.append(_check("differentiation", spec, not diff, [diff[0][0], _fmt_basis(diff[0][1])] if diff else None))
    if N < STABLE_WINDOW:
        out.append(_dimension_check("h1", spec, N, None, None))
        return out
    data = h1_data(spec, N)
    out.append(_dimension_check("h1", spec, N, data["h1"], expected_dims(spec)[2]))
    out.append(_check("eta_vanishes", spec, data["eta_zero"]))
    if data["named_span"] is not None:
        out.append(_check("named_span", spec, data["named_span"]))
    return out


def suite_extensions(spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    if spec.kind is Kind.SEMIDIRECT_A:
        ext = vir_a(spec.lam)  # type: ignore[arg-type]
    elif spec.kind is Kind.SEMIDIRECT_B:
        ext = vir_b(spec.lam)  # type: ignore[arg-type]
    else:
        return []
    if spec.tamper is not None:
        ext = with_tampered_weight(ext, *spec.tamper)
    bad = verify_extension(ext, N)
    return [_check("verify_extension", ext.label(), not bad, _triple(bad[0]) if bad else None)]


def suite_equivariance(spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    if spec.kind is not Kind.SEMIDIRECT_B:
        return []
    bad = check_f_equivariance(spec.lam, N)  # type: ignore[arg-type]
    return [_check("f_equivariance", f"f:B({spec.lam})->A({spec.lam})", not bad, list(bad[0][:2]) if bad else None)]


def _global_checks(N: int) -> list[dict]:
    bad = verify_extension(virasoro(), N)
    control = build_central_extension(semidirect_a(1), [select(MixingProfile((Fraction(0),) * 3 + (Fraction(1),)), "cubic")])
    control_bad = verify_extension(control, N)
    return [
        _check("verify_extension", "Vir", not bad, _triple(bad[0]) if bad else None),
        _check("non_cocycle_rejected", control.label(), bool(control_bad)),
    ]


_SUITE_FUNCS = {
    "jacobi": suite_jacobi,
    "cocycles": suite_cocycles,
    "leibniz": suite_leibniz,
    "automorphisms": suite_automorphisms,
    "derivations": suite_derivations,
    "extensions": suite_extensions,
    "equivariance": suite_equivariance,
}


def _run_suite(name: str, spec: AlgebraSpec, N: int, seed: int) -> list[dict]:
    try:
        return _SUITE_FUNCS[name](spec, N, seed)
    except WittError as exc:
        return [_check(name, spec, False, {"error": type(exc).__name__, "message": str(exc)})]


def cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    suites = SUITES if cfg.suite == "all" else tuple(s.strip() for s in cfg.suite.split(","))
    for s in suites:
        if s not in _SUITE_FUNCS:
            raise ConfigError(f"unknown suite {s!r}; choose from {', '.join(SUITES)} or all")
    N = cfg.window
    if N < 1:
        raise ConfigError("--window must be positive")
    specs = grid_specs(cfg)
    tasks = [(name, spec, N, cfg.seed) for name in suites for spec in specs]
    results = _map(_run_suite, tasks, cfg.jobs)
    report_suites: dict[str, dict] = {}
    warnings_out: list[str] = []
    for (name, spec, _, _), checks in zip(tasks, results):
        entry = report_suites.setdefault(name, {"status": "pass", "checks": 0, "failures": []})
        if name == "extensions" and entry["checks"] == 0 and not cfg.inject_bad_weight:
            checks = _global_checks(N) + checks
        for check in checks:
            entry["checks"] += 1
            if check.get("unstable"):
                warnings_out.append(f"{name}:{check['check']} on {check['algebra']} skipped: window N={N} < {STABLE_WINDOW} is unstable")
                if entry["status"] == "pass":
                    entry["status"] = "unstable"
            elif not check["pass"]:
                entry["status"] = "fail"
                entry["failures"].append({k: check[k] for k in ("check", "algebra", "detail")})
    ok = all(entry["status"] != "fail" for entry in report_suites.values())
    report = {
        "seed": cfg.seed,
        "N": N,
        "grid": [s.label() for s in specs],
        "suites": report_suites,
        "warnings": warnings_out,
        "ok": ok,
    }
    return (0 if ok else 1), json.dumps(report, indent=2)


SOLVE_KINDS = ("h2", "hl2", "inv", "h1", "abelian", "mixing")


def _named_match(spec: AlgebraSpec, comp: Component, space, N: int) -> list[str] | None:
    """Names of closed-form cocycles whose window restrictions span ``space`` exactly."""
    ids: list[NamedCocycle] = []
    if comp is Component.MIX and spec.kind is Kind.SEMIDIRECT_A:
        ids = [NamedCocycle(CocycleId.BETA_LAMBDA)]
        if spec.lam.is_value(0):  # type: ignore[union-attr]
            ids.append(NamedCocycle(CocycleId.IOTA))
    elif comp is Component.MIX and spec.kind is Kind.SEMIDIRECT_B:
        ids = [NamedCocycle(CocycleId.GAMMA1), NamedCocycle(CocycleId.GAMMA2)]
    elif comp is Component.AB and spec.kind is Kind.SEMIDIRECT_B:
        ids = [NamedCocycle(CocycleId.IOTA, component=Component.AB)]
    if not ids:
        return None if space.dim else []
    vecs = [window_vector(c, spec, N) for c in ids]
    if all(in_span(space, v) for v in vecs) and rank(vecs, space.variables) == space.dim:
        return [c.id.value for c in ids]
    return None


def _base_record(spec: AlgebraSpec, N: int) -> dict:
    return {"algebra": spec.label(), "lambda": None if spec.root.lam is None else str(spec.root.lam), "N": N}


def cmd_solve(cfg: RunConfig, kind: str) -> tuple[int, str]:
    if kind not in SOLVE_KINDS:
        raise ConfigError(f"unknown solve kind {kind!r}")
    spec = single_spec(cfg)
    N = cfg.window
    if kind == "h2":
        record = h2_record(spec, N)
    elif kind in ("abelian", "mixing"):
        comp = Component.AB if kind == "abelian" else Component.MIX
        space = kernel(cocycle_system(spec, comp, N))
        record = _base_record(spec, N)
        record.update(
            {
                "kind": kind,
                "dim": space.dim,
                "basis": [vector_json(v, space.variables) for v in space.vectors],
                "named": _named_match(spec, comp, space, N),
            }
        )
    elif kind == "hl2":
        record = exact_sequence_data(spec, N)
        space = kernel(constraints_leibniz(spec, N))
        record["basis"] = [vector_json(v, space.variables) for v in space.vectors]
    elif kind == "inv":
        space = kernel(constraints_invariant_form(spec, N))
        record = _base_record(spec, N)
        record.update({"kind": "inv", "dim": space.dim, "basis": [vector_json(v, space.variables) for v in space.vectors]})
    else:
        data = h1_data(spec, N)
        space = data.pop("kernel")
        record = dict(data)
        record["basis"] = [vector_json(v, space.variables) for v in space.vectors]
    return 0, json.dumps(record, indent=2)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file with the same keys as the flags")
    common.add_argument("--algebra", choices=["witt", "wab", "wa", "wb"])
    common.add_argument("--lambda", dest="lam", help="rational or inf")
    common.add_argument("--a")
    common.add_argument("--b")
    common.add_argument("--window", type=int)
    common.add_argument("--format", dest="fmt", choices=["md", "json", "csv"])
    common.add_argument("--suite")
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int, help="worker processes for grid cells (default 1)")
    common.add_argument("--inject-bad-weight", action="store_true", help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="wittcohom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("tables", parents=[common], help="reproduce the dimension table")
    sub.add_parser("verify", parents=[common], help="run the verification suites")
    solve = sub.add_parser("solve", parents=[common], help="solve one instance")
    solve.add_argument("kind", choices=SOLVE_KINDS)
    return parser


_CONFIG_KEYS = {"algebra", "lambda", "a", "b", "window", "format", "suite", "seed", "jobs"}


def read_config(text: str) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # type: ignore[assignment,method-assign]
    parser.read_string("[run]\n" + text)
    values = dict(parser["run"])
    unknown = set(values) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    raw: dict[str, str] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = read_config(fh.read())
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    flags = {
        "algebra": args.algebra,
        "lambda": args.lam,
        "a": args.a,
        "b": args.b,
        "window": args.window,
        "format": args.fmt,
        "suite": args.suite,
        "seed": args.seed,
        "jobs": args.jobs,
    }
    for key, value in flags.items():
        if value is not None:
            raw[key] = str(value)
    algebra = raw.get("algebra")
    if algebra is not None and algebra not in ("witt", "wab", "wa", "wb"):
        raise ConfigError(f"unknown algebra {algebra!r}")
    fmt = raw.get("format", "md")
    if fmt not in ("md", "json", "csv"):
        raise ConfigError(f"unknown format {fmt!r}")
    try:
        return RunConfig(
            algebra=algebra,
            lam=parse_lambda(raw["lambda"]) if "lambda" in raw else None,
            a=parse_rational(raw["a"]) if "a" in raw else None,
            b=parse_rational(raw["b"]) if "b" in raw else None,
            window=int(raw.get("window", 8)),
            fmt=fmt,
            suite=raw.get("suite", "all"),
            seed=int(raw.get("seed", 0)),
            jobs=int(raw.get("jobs", 1)),
            inject_bad_weight=bool(getattr(args, "inject_bad_weight", False)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = build_config(args)
        if args.command == "tables":
            code, text = cmd_tables(cfg)
        elif args.command == "verify":
            code, text = cmd_verify(cfg)
        else:
            code, text = cmd_solve(cfg, args.kind)
    except WittError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
