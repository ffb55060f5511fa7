"""Configuration-driven verification runner.

Reads a single JSON config describing the couples, the map, and the
suite; runs the requested verification sweeps; and writes a JSON report
(``schema: report/v1`` with a resolved config echo), a full row table
CSV, and a plot-ready per-theta summary CSV.

Exit codes: 0 when every certifying suite passes (advisory suites never
gate), 1 on a certifying-suite failure, 2 on config parse or validation
errors. Rows are order-normalized and seeded per (seed, theta index,
sample index), so identical config and seed give byte-identical CSV rows
at any worker count. HOLOINTERP_SEED is honored as the lowest-precedence
seed source, below the config file and the --seed flag.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analytic import (
    MapContractError,
    extract_component,
    rho_independence_check,
    truncated_series,
)
from .interpolate import (
    BallSampler,
    BoundSpec,
    ReportRow,
    VerificationReport,
    build_report,
    default_theta_grid,
    estimate_constants,
    format_row,
    lemma_bound,
    lemma_rows,
    theorem1_bound,
    theorem1_rows,
    REPORT_SCHEMA,
)
from .spaces import (
    WeightedCouple,
    ThetaNorm,
    couple_to_json,
    make_weights,
    normalize_couple,
    theta_norm,
)
from .strip import f_space_norm, optimal_strip_function
from .testmaps import ConstantsUnavailable, ball_constants, map_from_config, oracle_constants, to_analytic

__all__ = ["ConfigError", "RunConfig", "load_config", "run", "main"]

SUITES = ("lemma", "theorem1", "strip_witness", "cauchy_diagnostics", "all")
SEED_ENV_VAR = "HOLOINTERP_SEED"


class ConfigError(ValueError):
    """Config rejected; message is field-qualified."""


@dataclass(frozen=True)
class RunConfig:
    couple_e: WeightedCouple
    couple_h: WeightedCouple
    map: object
    map_echo: dict
    suite: str
    theta_grid: tuple[float, ...]
    samples: int
    seed: int
    tolerance: float | None
    output: str
    radius: float
    inner_radius: float
    workers: int
    constants: tuple[float, float] | None = None


def _require(obj: dict, key: str, field: str):
    if key not in obj:
        raise ConfigError(f"{field}.{key}: missing")
    return obj[key]


def _parse_weights(spec, field: str, dim: int) -> np.ndarray:
    if isinstance(spec, list):
        if len(spec) != dim:
            raise ConfigError(f"{field}: expected {dim} weights, got {len(spec)}")
        for i, v in enumerate(spec):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ConfigError(f"{field}[{i}]: expected a number, got {v!r}")
            if not v > 0:
                raise ConfigError(f"{field}[{i}]: weights must be positive, got {v!r}")
        return np.asarray(spec, dtype=float)
    if isinstance(spec, dict):
        params = dict(spec)
        name = params.pop("generator", None)
        if name is None:
            raise ConfigError(f"{field}.generator: missing")
        try:
            return make_weights(name, dim, **params)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{field}: {exc}") from None
    raise ConfigError(f"{field}: expected a weight list or a generator object")


def _parse_couple(obj, field: str) -> WeightedCouple:
    if not isinstance(obj, dict):
        raise ConfigError(f"{field}: expected an object")
    dim = _require(obj, "dim", field)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ConfigError(f"{field}.dim: expected a positive integer, got {dim!r}")
    w0 = _parse_weights(_require(obj, "w0", field), f"{field}.w0", dim)
    w1 = _parse_weights(_require(obj, "w1", field), f"{field}.w1", dim)
    try:
        return WeightedCouple(dim, w0, w1)
    except ValueError as exc:
        raise ConfigError(f"{field}: {exc}") from None


def _parse_theta_grid(obj) -> tuple[float, ...]:
    if obj is None:
        return tuple(default_theta_grid())
    if not isinstance(obj, list) or len(obj) == 0:
        raise ConfigError("theta_grid: expected a nonempty list")
    grid = []
    for i, v in enumerate(obj):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ConfigError(f"theta_grid[{i}]: expected a number, got {v!r}")
        if not 0.0 <= v <= 1.0:
            raise ConfigError(f"theta_grid[{i}]: value {v!r} outside [0, 1]")
        grid.append(float(v))
    return tuple(grid)


def load_config(
    path: str,
    seed_override: int | None = None,
    output_override: str | None = None,
    workers: int = 1,
) -> RunConfig:
    """Parse and validate a JSON run config; raises ConfigError on rejection."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be an object")

    known = {
        "couple_e", "couple_h", "map", "suite", "theta_grid", "samples",
        "seed", "tolerance", "output", "radius", "inner_radius", "constants",
    }
    for key in doc:
        if key not in known:
            raise ConfigError(f"{key}: unknown config field")

    couple_e = _parse_couple(_require(doc, "couple_e", "config"), "couple_e")
    couple_h = _parse_couple(_require(doc, "couple_h", "config"), "couple_h")

    map_echo = _require(doc, "map", "config")
    if not isinstance(map_echo, dict):
        raise ConfigError("map: expected an object")
    try:
        map_ = map_from_config(map_echo, couple_e.dim)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if map_.out_dim != couple_h.dim:
        raise ConfigError(
            f"couple_h.dim: map output dimension {map_.out_dim} != {couple_h.dim}"
        )

    suite = doc.get("suite", "all")
    if suite not in SUITES:
        raise ConfigError(f"suite: unknown suite {suite!r}, expected one of {SUITES}")
    if suite == "lemma" and map_.homogeneous_degree is None:
        raise ConfigError(f"suite: lemma requires a homogeneous map, got {map_.kind!r}")

    theta_grid = _parse_theta_grid(doc.get("theta_grid"))

    samples = doc.get("samples", 1000)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        raise ConfigError(f"samples: expected an integer >= 1, got {samples!r}")

    seed = doc.get("seed")
    if seed is not None and (
        not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64
    ):
        raise ConfigError(f"seed: expected a 64-bit unsigned integer, got {seed!r}")
    if seed_override is not None:
        seed = seed_override
    if seed is None:
        env = os.environ.get(SEED_ENV_VAR)
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise ConfigError(
                    f"{SEED_ENV_VAR}: expected an integer, got {env!r}"
                ) from None
            if not 0 <= seed < 2**64:
                raise ConfigError(f"{SEED_ENV_VAR}: value {seed} out of 64-bit range")
    if seed is None:
        seed = 0

    tolerance = doc.get("tolerance")
    if tolerance is not None:
        if not isinstance(tolerance, (int, float)) or isinstance(tolerance, bool):
            raise ConfigError(f"tolerance: expected a number, got {tolerance!r}")
        if not tolerance > 0:
            raise ConfigError(f"tolerance: must be positive, got {tolerance!r}")
        tolerance = float(tolerance)

    radius = doc.get("radius", 1.0)
    inner_radius = doc.get("inner_radius", 0.5)
    for name, value in (("radius", radius), ("inner_radius", inner_radius)):
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
            raise ConfigError(f"{name}: expected a positive number, got {value!r}")
    if not inner_radius < radius:
        raise ConfigError(
            f"inner_radius: need inner_radius < radius, got {inner_radius!r} "
            f">= {radius!r}"
        )

    constants = doc.get("constants")
    if constants is not None:
        if not isinstance(constants, dict):
            raise ConfigError("constants: expected an object with c0 and c1")
        for key in ("c0", "c1"):
            value = _require(constants, key, "constants")
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
                raise ConfigError(f"constants.{key}: expected a positive number, got {value!r}")
        for key in constants:
            if key not in ("c0", "c1"):
                raise ConfigError(f"constants.{key}: unknown field")
        constants = (float(constants["c0"]), float(constants["c1"]))

    output = output_override or doc.get("output", "holointerp")
    if not isinstance(output, str) or not output:
        raise ConfigError(f"output: expected a nonempty path prefix, got {output!r}")

    if workers < 1:
        raise ConfigError(f"workers: must be >= 1, got {workers}")

    return RunConfig(
        couple_e=couple_e,
        couple_h=couple_h,
        map=map_,
        map_echo=map_echo,
        suite=suite,
        theta_grid=theta_grid,
        samples=samples,
        seed=seed,
        tolerance=tolerance,
        output=output,
        radius=float(radius),
        inner_radius=float(inner_radius),
        workers=workers,
        constants=constants,
    )


@dataclass(frozen=True)
class SuiteResult:
    name: str
    report: VerificationReport | None
    certifying: bool
    skipped: str | None = None
    bounds_by_theta: tuple[tuple[float, float], ...] = ()
    extra: tuple[tuple[str, object], ...] = ()


def _pool_map(tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(task) for task in tasks]
        return [f.result() for f in futures]


def _gather_rows(tasks, workers: int) -> list[ReportRow]:
    rows: list[ReportRow] = []
    for chunk in _pool_map(tasks, workers):
        rows.extend(chunk)
    return rows


def _estimate_homogeneous_constants(cfg: RunConfig, degree: int) -> tuple[float, float]:
    sampler = BallSampler(cfg.couple_e, seed=cfg.seed, radius=cfg.radius)
    estimates = []
    for side, theta in ((0, 0.0), (1, 1.0)):
        norm_e = cfg.couple_e.norm0 if side == 0 else cfg.couple_e.norm1
        norm_h = cfg.couple_h.norm0 if side == 0 else cfg.couple_h.norm1
        best = 0.0
        for _, x in sampler.draw(cfg.samples, theta, side):
            best = max(best, norm_h(cfg.map.evaluate(x)) / norm_e(x) ** degree)
        estimates.append(best)
    return estimates[0], estimates[1]


def _suite_lemma(cfg: RunConfig) -> SuiteResult:
    degree = cfg.map.homogeneous_degree
    if degree is None:
        return SuiteResult(
            "lemma", None, certifying=False, skipped="map is not homogeneous"
        )
    if cfg.constants is not None:
        m0, m1 = cfg.constants
        provenance = "declared"
    else:
        try:
            m0, m1 = oracle_constants(cfg.map, cfg.couple_e, cfg.couple_h)
            provenance = "oracle"
        except ConstantsUnavailable:
            m0, m1 = _estimate_homogeneous_constants(cfg, degree)
            provenance = "empirical"
    sampler = BallSampler(cfg.couple_e, seed=cfg.seed)
    tasks = [
        (
            lambda theta=theta, idx=idx: lemma_rows(
                cfg.map, cfg.couple_e, cfg.couple_h, m0, m1,
                theta, idx, sampler, cfg.samples,
            )
        )
        for idx, theta in enumerate(cfg.theta_grid)
    ]
    rows = _gather_rows(tasks, cfg.workers)
    tolerance = cfg.tolerance if cfg.tolerance is not None else 1e-9
    report = build_report(rows, tolerance, provenance)
    spec = BoundSpec(c0=m0, c1=m1, degree=degree)
    bounds = tuple((t, lemma_bound(spec.at(t))) for t in sorted(set(cfg.theta_grid)))
    return SuiteResult(
        "lemma", report, certifying=provenance != "empirical",
        bounds_by_theta=bounds,
        extra=(("m0", m0), ("m1", m1), ("degree", degree)),
    )


def _suite_theorem1(cfg: RunConfig) -> SuiteResult:
    e_norm, factor = normalize_couple(cfg.couple_e)
    if cfg.constants is not None:
        c0, c1 = cfg.constants
        provenance = "declared"
    else:
        try:
            c0, c1 = ball_constants(cfg.map, e_norm, cfg.couple_h, cfg.radius)
            provenance = "oracle"
        except ConstantsUnavailable:
            est = estimate_constants(
                cfg.map, e_norm, cfg.couple_h, cfg.radius,
                budget=cfg.samples, seed=cfg.seed,
            )
            c0, c1, provenance = est
        except ValueError as exc:
            raise ConfigError(f"radius: {exc}") from None
    spec = BoundSpec(c0=c0, c1=c1, radius=cfg.radius, inner_radius=cfg.inner_radius)
    sampler = BallSampler(e_norm, seed=cfg.seed, radius=cfg.inner_radius)
    tasks = [
        (
            lambda theta=theta, idx=idx: theorem1_rows(
                cfg.map, e_norm, cfg.couple_h, spec, theta, idx, sampler, cfg.samples
            )
        )
        for idx, theta in enumerate(cfg.theta_grid)
    ]
    rows = _gather_rows(tasks, cfg.workers)
    tolerance = cfg.tolerance if cfg.tolerance is not None else 1e-9
    report = build_report(rows, tolerance, provenance)
    bounds = tuple(
        (t, theorem1_bound(spec.at(t))) for t in sorted(set(cfg.theta_grid))
    )
    return SuiteResult(
        "theorem1", report, certifying=provenance != "empirical",
        bounds_by_theta=bounds,
        extra=(
            ("c0", c0), ("c1", c1),
            ("e_couple_normalization_factor", factor),
        ),
    )


def _witness_rows(cfg: RunConfig, theta: float, theta_idx: int) -> list[ReportRow]:
    rows = []
    for s in range(cfg.samples):
        rng = np.random.default_rng([cfg.seed, theta_idx, s])
        x = rng.standard_normal(cfg.couple_e.dim) + 1j * rng.standard_normal(
            cfg.couple_e.dim
        )
        fnorm = f_space_norm(optimal_strip_function(cfg.couple_e, theta, x), cfg.couple_e)
        tnorm = theta_norm(cfg.couple_e, theta, x)
        ratio = max(fnorm / tnorm, tnorm / fnorm)
        rows.append(ReportRow(theta, s, fnorm, tnorm, ratio))
    return rows


def _suite_strip_witness(cfg: RunConfig) -> SuiteResult:
    tasks = [
        (lambda theta=theta, idx=idx: _witness_rows(cfg, theta, idx))
        for idx, theta in enumerate(cfg.theta_grid)
    ]
    rows = _gather_rows(tasks, cfg.workers)
    tolerance = cfg.tolerance if cfg.tolerance is not None else 1e-10
    report = build_report(rows, tolerance, "oracle")
    bounds = tuple((t, 1.0) for t in sorted(set(cfg.theta_grid)))
    return SuiteResult("strip_witness", report, certifying=True, bounds_by_theta=bounds)


def _diagnostic_vectors(cfg: RunConfig) -> list[np.ndarray]:
    dim = cfg.couple_e.dim
    basis = np.zeros(dim, dtype=complex)
    basis[0] = 1.0
    mixed = np.ones(dim, dtype=complex)
    out = []
    for direction in (basis, mixed):
        out.append(direction * (0.5 * cfg.radius / cfg.couple_e.norm0(direction)))
    return out


def _suite_cauchy_diagnostics(cfg: RunConfig) -> SuiteResult:
    if cfg.constants is not None:
        constants = cfg.constants
        provenance = "declared"
    else:
        try:
            constants = ball_constants(cfg.map, cfg.couple_e, cfg.couple_h, cfg.radius)
            provenance = "oracle"
        except ConstantsUnavailable:
            est = estimate_constants(
                cfg.map, cfg.couple_e, cfg.couple_h, cfg.radius,
                budget=cfg.samples, seed=cfg.seed,
            )
            constants = (est.c0, est.c1)
            provenance = "empirical"
        except ValueError as exc:
            raise ConfigError(f"radius: {exc}") from None
    amap = to_analytic(cfg.map, cfg.couple_e, cfg.couple_h, cfg.radius, constants)
    rows: list[ReportRow] = []
    sample_id = 0

    def add(lhs: float, rhs: float):
        nonlocal sample_id
        rows.append(ReportRow(0.0, sample_id, lhs, rhs, lhs / rhs))
        sample_id += 1

    for h in _diagnostic_vectors(cfg):
        h0 = cfg.couple_e.norm0(h)
        # contour-radius independence across rho = {0.1, 0.3, 0.5} R/||h||
        for n in (1, 2, 3):
            result = rho_independence_check(
                amap, cfg.couple_e, cfg.couple_h, h, n,
                [f * cfg.radius / h0 for f in (0.1, 0.3, 0.5)], nodes=32,
            )
            if result.worst_ratio > 0:
                add(result.deviation, result.deviation / result.worst_ratio)
            else:
                add(result.deviation, 1.0)
        # degree-0 component against its aliasing allowance
        try:
            p0 = extract_component(amap, cfg.couple_e, h, 0)
            add(float(np.linalg.norm(p0.value)), 1e-9 + p0.alias_bound)
        except MapContractError:
            add(float("inf"), 1.0)
        # truncation error against tail + aliasing allowance
        direct = np.asarray(amap.evaluate(np.asarray(h, dtype=complex)))
        for cap in (2, 5):
            series = truncated_series(amap, cfg.couple_e, h, cap)
            err = cfg.couple_h.norm0(direct - series.value)
            allowed = series.tail_bound + series.alias_total
            add(err, allowed + 1e-12 * (1.0 + cfg.couple_h.norm0(direct)))
    tolerance = cfg.tolerance if cfg.tolerance is not None else 1e-9
    report = build_report(rows, tolerance, provenance)
    return SuiteResult(
        "cauchy_diagnostics", report, certifying=provenance != "empirical",
        bounds_by_theta=((0.0, 1.0),),
    )


_SUITE_RUNNERS = {
    "lemma": _suite_lemma,
    "theorem1": _suite_theorem1,
    "strip_witness": _suite_strip_witness,
    "cauchy_diagnostics": _suite_cauchy_diagnostics,
}


def _config_echo(cfg: RunConfig) -> dict:
    return {
        "couple_e": couple_to_json(cfg.couple_e),
        "couple_h": couple_to_json(cfg.couple_h),
        "map": cfg.map_echo,
        "suite": cfg.suite,
        "theta_grid": list(cfg.theta_grid),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "tolerance": cfg.tolerance,
        "output": cfg.output,
        "radius": cfg.radius,
        "inner_radius": cfg.inner_radius,
        "workers": cfg.workers,
        "constants": (
            None
            if cfg.constants is None
            else {"c0": cfg.constants[0], "c1": cfg.constants[1]}
        ),
    }


def _write_outputs(cfg: RunConfig, results: list[SuiteResult], status: int):
    prefix = Path(cfg.output)
    if prefix.parent != Path(""):
        prefix.parent.mkdir(parents=True, exist_ok=True)

    suites_doc = {}
    for res in results:
        if res.report is None:
            suites_doc[res.name] = {"skipped": res.skipped}
            continue
        doc = res.report.to_json_dict(with_rows=True)
        doc["certifying"] = res.certifying
        doc.update({k: v for k, v in res.extra})
        suites_doc[res.name] = doc
    report_doc = {
        "schema": REPORT_SCHEMA,
        "config": _config_echo(cfg),
        "suites": suites_doc,
        "status": status,
    }
    with open(f"{prefix}.report.json", "w", encoding="utf-8") as fh:
        json.dump(report_doc, fh, indent=2, sort_keys=True)
        fh.write("\n")

    with open(f"{prefix}.rows.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("suite,theta,sample_id,lhs_norm,rhs_bound,ratio\n")
        for res in results:
            if res.report is None:
                continue
            for row in res.report.rows:
                fh.write(f"{res.name},{format_row(row)}\n")

    with open(f"{prefix}.summary.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("suite,theta,ratio_max,bound\n")
        for res in results:
            if res.report is None:
                continue
            bounds = dict(res.bounds_by_theta)
            per_theta: dict[float, float] = {}
            for row in res.report.rows:
                per_theta[row.theta] = max(per_theta.get(row.theta, 0.0), row.ratio)
            for theta in sorted(per_theta):
                bound = bounds.get(theta, 1.0)
                fh.write(f"{res.name},{theta!r},{per_theta[theta]!r},{bound!r}\n")


def run(cfg: RunConfig) -> int:
    """Execute the configured suites and write report files; returns status."""
    names = (
        ["lemma", "theorem1", "strip_witness", "cauchy_diagnostics"]
        if cfg.suite == "all"
        else [cfg.suite]
    )
    results = [_SUITE_RUNNERS[name](cfg) for name in names]
    status = 0
    for res in results:
        if res.report is not None and res.certifying and res.report.passed is False:
            status = 1
    _write_outputs(cfg, results, status)
    for res in results:
        if res.report is None:
            print(f"{res.name}: SKIPPED ({res.skipped})")
            continue
        verdict = (
            "ADVISORY"
            if res.report.passed is None
            else ("PASS" if res.report.passed else "FAIL")
        )
        print(
            f"{res.name}: {verdict} worst_ratio={res.report.worst_ratio:.6e} "
            f"tolerance={res.report.tolerance:g} "
            f"provenance={res.report.constants_provenance}"
        )
    return status


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="holointerp",
        description="Run interpolation-bound verification suites from a JSON config.",
    )
    parser.add_argument("--config", required=True, help="path to the JSON run config")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--workers", type=int, default=1, help="worker pool size")
    parser.add_argument("--output", default=None, help="override output path prefix")
    args = parser.parse_args(argv)
    try:
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError(f"--seed: value {args.seed} out of 64-bit range")
        cfg = load_config(
            args.config,
            seed_override=args.seed,
            output_override=args.output,
            workers=args.workers,
        )
        return run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
