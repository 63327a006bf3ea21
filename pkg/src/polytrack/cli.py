"""Command-line interface: synthesis, rate analysis, tracking simulation,
algorithm comparison, and interpolation-feasibility checks.

Exit codes: 0 success (including analyses whose verdict is "this algorithm is
bad"), 1 internal or numerical failure, 2 invalid input.  Every command writes
its artifacts into --out plus a manifest.json listing each file with its
sha256.  Artifact files are byte-deterministic for a fixed config and toolkit
version; the manifest itself carries a wall-clock timestamp.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .algoform import AlgorithmParams, build_transfer, integrator_count, validate
from .errors import (
    Condition1Violated,
    DegenerateSector,
    Divergence,
    InputError,
    NumericalError,
    ConfigError,
)
from .npick import GainMarginProblem, feasibility_limit, pick_matrix
from .rate import heavy_ball_params, rate_lower_bound, sup_rate
from .serialize import sha256_of, write_csv, write_json
from .sim import (
    QuadraticCostSpec,
    TrajectoryTrace,
    gradient_descent_params,
    run,
)
from .synth import optimal_rate, synthesize

KNOWN_ALGORITHMS = ("optimal", "heavy_ball", "gradient_descent", "custom")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        cfg = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: line {exc.lineno}, "
                          f"column {exc.colno}: {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config root must be a JSON object in {path}")
    return cfg


def _merge_flags(cfg: dict, args, fields) -> dict:
    # Command-line flags override JSON config fields.
    out = dict(cfg)
    for field in fields:
        val = getattr(args, field, None)
        if val is not None:
            out[field] = val
    return out


def _require(cfg: dict, key: str, caster, context: str):
    if key not in cfg or cfg[key] is None:
        raise ConfigError(f"{context}: missing required field '{key}'")
    try:
        return caster(cfg[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{context}: bad value for '{key}': {cfg[key]!r}") from exc


class _Manifest:
    def __init__(self, command: str, config_path: str | None, out_dir: Path,
                 seed: int | None = None):
        self.command = command
        self.config_path = config_path
        self.out_dir = out_dir
        self.seed = seed
        self.artifacts: list[dict] = []

    def add(self, path: Path) -> None:
        self.artifacts.append({
            "path": path.name,
            "sha256": sha256_of(path),
        })

    def write(self) -> Path:
        doc = {
            "command": self.command,
            "config": self.config_path,
            "out_dir": str(self.out_dir),
            "version": __version__,
            "seed": self.seed,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "artifacts": self.artifacts,
        }
        return write_json(self.out_dir / "manifest.json", doc)


def _out_dir(args) -> Path:
    out = Path(args.out if args.out is not None else ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _spec_from_config(cfg: dict) -> tuple[QuadraticCostSpec, float, float, int]:
    m = _require(cfg, "m", float, "simulation config")
    L = _require(cfg, "L", float, "simulation config")
    p = _require(cfg, "p", int, "simulation config")
    a_rows = _require(cfg, "a", list, "simulation config")
    a = np.array(a_rows, dtype=float)
    if a.ndim != 2 or a.shape[1] != p:
        raise ConfigError(f"'a' must be a list of {p}-vectors")
    delta_cfg = cfg.get("delta")
    if delta_cfg is None:
        raise ConfigError("simulation config: missing required field 'delta'")
    if isinstance(delta_cfg, dict) and "diag" in delta_cfg:
        delta = np.diag(np.asarray(delta_cfg["diag"], dtype=float))
    elif isinstance(delta_cfg, dict) and "full" in delta_cfg:
        delta = np.asarray(delta_cfg["full"], dtype=float)
    else:
        raise ConfigError("'delta' must be {\"diag\": [...]} or {\"full\": [[...]]}")
    spec = QuadraticCostSpec(p=p, delta=delta, a=a, c=float(cfg.get("c", 0.0)))
    n = int(cfg.get("n", spec.order))
    return spec, m, L, n


def _params_for_algorithm(name: str, cfg: dict, m: float, L: float,
                          n: int) -> AlgorithmParams:
    if name == "optimal":
        return synthesize(m, L, n).params
    if name == "heavy_ball":
        return heavy_ball_params(m, L)
    if name == "gradient_descent":
        return gradient_descent_params(m, L)
    if name == "custom":
        if "params" not in cfg or cfg["params"] is None:
            raise ConfigError("algorithm 'custom' requires a 'params' object")
        params = AlgorithmParams.from_dict(cfg["params"])
        validate(params)
        return params
    raise ConfigError(
        f"unknown algorithm {name!r}; expected one of {', '.join(KNOWN_ALGORITHMS)}"
    )


def _init_from_config(cfg: dict, params: AlgorithmParams,
                      spec: QuadraticCostSpec) -> np.ndarray | None:
    offset = cfg.get("init_offset")
    if offset is None:
        return None
    from .sim import default_init

    return default_init(params, spec, np.asarray(offset, dtype=float))


def _trace_rows(trace: TrajectoryTrace):
    p = trace.iterates.shape[1]
    for i, t in enumerate(trace.times):
        row = [int(t), float(trace.errors[i])]
        row.extend(float(v) for v in trace.iterates[i])
        row.extend(float(v) for v in trace.optima[i])
        yield row


def _trace_header(p: int) -> list[str]:
    return (["t", "err"]
            + [f"x_{i}" for i in range(p)]
            + [f"xstar_{i}" for i in range(p)])


def cmd_synth(args) -> int:
    cfg = _merge_flags(_load_config(args.config), args, ("m", "L", "n"))
    m = _require(cfg, "m", float, "synth")
    L = _require(cfg, "L", float, "synth")
    n = _require(cfg, "n", int, "synth")
    out = _out_dir(args)
    manifest = _Manifest("synth", args.config, out, args.seed)
    try:
        report = synthesize(m, L, n)
    except DegenerateSector:
        print(f"degenerate sector (L == m == {m:g}): rate is 0 and no "
              "nontrivial synthesis exists")
        doc = {"degenerate": True, "m": m, "L": L, "n": n, "rho": 0.0}
        manifest.add(write_json(out / "synthesis.json", doc))
        manifest.write()
        return 0
    doc = report.to_dict()
    doc["kappa"] = L / m
    manifest.add(write_json(out / "synthesis.json", doc))
    manifest.write()
    print(f"rho = {report.rho:.9g}  kappa = {L / m:.9g}  k = {report.params.k}  "
          f"({len(report.params.alpha)} gradient weights, "
          f"{len(report.params.beta)} momentum weights)")
    return 0


def cmd_analyze(args) -> int:
    cfg = _merge_flags(_load_config(args.config), args,
                       ("m", "L", "n", "grid", "algorithm"))
    m = _require(cfg, "m", float, "analyze")
    L = _require(cfg, "L", float, "analyze")
    n = cfg.get("n")
    n = int(n) if n is not None else None
    algorithm = cfg.get("algorithm", "custom" if "params" in cfg else None)
    if algorithm is None:
        raise ConfigError("analyze: provide 'params' or an 'algorithm' name")
    params = _params_for_algorithm(algorithm, cfg, m, L, n if n else 1)
    model = build_transfer(params)
    grid = int(cfg.get("grid", 2001))
    report = sup_rate(model, m, L, grid=grid, declared_n=n)
    integrators = integrator_count(model)

    out = _out_dir(args)
    manifest = _Manifest("analyze", args.config, out, args.seed)
    doc = report.to_dict()
    doc["integrator_count"] = integrators
    doc["algorithm"] = algorithm
    doc["params"] = params.to_dict()
    manifest.add(write_json(out / "rate.json", doc))
    manifest.add(write_csv(out / "rate_samples.csv",
                           ["lambda", "spectral_radius"],
                           ([lam, r] for lam, r in report.samples)))
    manifest.write()

    print(f"sup_rate = {report.sup_rate:.9g} at lambda = {report.argmax_lambda:.9g}; "
          f"integrators = {integrators}; stable = {report.stable}")
    if report.bound is not None:
        print(f"order-{n} rate bound = {report.bound:.9g}; "
              f"meets_bound = {report.meets_bound}")
        if report.stable and not report.meets_bound:
            print("ERROR: computed rate is below the theoretical bound; "
                  "this indicates a toolkit bug", file=sys.stderr)
    if not report.stable:
        print("warning: algorithm is not stable on this sector "
              f"(sup_rate = {report.sup_rate:.9g})", file=sys.stderr)
    return 0


def _simulate_one(name: str, cfg: dict, spec: QuadraticCostSpec, m: float,
                  L: float, n: int, T: int):
    params = _params_for_algorithm(name, cfg, m, L, n)
    init = _init_from_config(cfg, params, spec)
    return params, run(params, spec, T, init=init)


def cmd_simulate(args) -> int:
    cfg = _merge_flags(_load_config(args.config), args,
                       ("m", "L", "n", "T", "algorithm"))
    spec, m, L, n = _spec_from_config(cfg)
    T = _require(cfg, "T", int, "simulate")
    algorithm = cfg.get("algorithm", "optimal")
    out = _out_dir(args)
    manifest = _Manifest("simulate", args.config, out, args.seed)
    try:
        params, trace = _simulate_one(algorithm, cfg, spec, m, L, n, T)
    except Divergence as exc:
        print(f"warning: {algorithm} diverged: {exc}", file=sys.stderr)
        doc = {"algorithm": algorithm, "diverged": True, "step": exc.step,
               "error": exc.error}
        manifest.add(write_json(out / "summary.json", doc))
        manifest.write()
        return 0
    manifest.add(write_csv(out / f"trace_{algorithm}.csv",
                           _trace_header(spec.p), _trace_rows(trace)))
    doc = trace.summary_dict()
    doc["algorithm"] = algorithm
    doc["params"] = params.to_dict()
    manifest.add(write_json(out / "summary.json", doc))
    manifest.write()
    rate_str = ("none" if trace.fitted_rate is None
                else f"{trace.fitted_rate:.6g}")
    print(f"{algorithm}: steady_state_error = {trace.steady_state_error:.6g}, "
          f"fitted_rate = {rate_str}")
    return 0


def cmd_compare(args) -> int:
    cfg = _merge_flags(_load_config(args.config), args, ("m", "L", "n", "T"))
    spec, m, L, n = _spec_from_config(cfg)
    T = _require(cfg, "T", int, "compare")
    algorithms = cfg.get("algorithms")
    if algorithms is None:
        single = cfg.get("algorithm")
        algorithms = [single] if single else None
    if not algorithms:
        raise ConfigError("compare: provide an 'algorithms' list")

    out = _out_dir(args)
    manifest = _Manifest("compare", args.config, out, args.seed)
    traces: dict[str, TrajectoryTrace] = {}
    summaries = []
    for name in algorithms:
        params, trace = _simulate_one(name, cfg, spec, m, L, n, T)
        traces[name] = trace
        doc = trace.summary_dict()
        doc["algorithm"] = name
        doc["params"] = params.to_dict()
        summaries.append(doc)
        rate_str = ("none" if trace.fitted_rate is None
                    else f"{trace.fitted_rate:.6g}")
        print(f"{name}: steady_state_error = {trace.steady_state_error:.6g}, "
              f"fitted_rate = {rate_str}")

    header = ["t"] + [f"xstar_{i}" for i in range(spec.p)]
    for name in algorithms:
        header.append(f"err_{name}")
        header.extend(f"x_{name}_{i}" for i in range(spec.p))
    first = traces[algorithms[0]]

    def rows():
        for i, t in enumerate(first.times):
            row = [int(t)]
            row.extend(float(v) for v in first.optima[i])
            for name in algorithms:
                tr = traces[name]
                row.append(float(tr.errors[i]))
                row.extend(float(v) for v in tr.iterates[i])
            yield row

    manifest.add(write_csv(out / "compare.csv", header, rows()))
    manifest.add(write_json(out / "compare.json", {"algorithms": summaries}))
    manifest.write()
    return 0


def cmd_np_check(args) -> int:
    cfg = _merge_flags(_load_config(args.config), args, ("m", "L", "n"))
    m = _require(cfg, "m", float, "np-check")
    L = _require(cfg, "L", float, "np-check")
    n = _require(cfg, "n", int, "np-check")
    bound = rate_lower_bound(m, L, n)
    if args.rho is not None:
        rho = float(args.rho)
    else:
        rho = float(cfg.get("rho", bound))
    if args.epsilon_scale is not None:
        delta = float(args.epsilon_scale)
    else:
        delta = float(cfg.get("epsilon_scale", 1e-3))
    problem = GainMarginProblem.with_default_perturbations(m, L, n, rho, delta)
    pick = pick_matrix(problem)
    limit = feasibility_limit(rho, n, m, L)

    out = _out_dir(args)
    manifest = _Manifest("np-check", args.config, out, args.seed)
    doc = {
        "m": m,
        "L": L,
        "n": n,
        "rho": rho,
        "rate_bound": bound,
        "epsilons": list(problem.epsilons),
        "feasibility_limit": limit,
        "pick": pick.to_dict(),
    }
    manifest.add(write_json(out / "np_check.json", doc))
    manifest.write()
    print(f"rho = {rho:.9g} (bound {bound:.9g}); feasibility_limit = {limit:.6g}; "
          f"pick determinant = {pick.determinant:.6g}; feasible = {pick.feasible}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polytrack",
        description="Synthesis and analysis of rate-optimal gradient "
                    "algorithms that track polynomially varying optima.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--m", type=float, default=None, help="sector lower bound")
        p.add_argument("--L", type=float, default=None, help="sector upper bound")
        p.add_argument("--n", type=int, default=None, help="tracking order")
        p.add_argument("--config", type=str, default=None, help="JSON config path")
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; recorded but unused by deterministic commands")

    p_synth = sub.add_parser("synth", help="synthesize the rate-optimal algorithm")
    common(p_synth)
    p_synth.set_defaults(func=cmd_synth)

    p_an = sub.add_parser("analyze", help="worst-case rate analysis")
    common(p_an)
    p_an.add_argument("--grid", type=int, default=None, help="lambda grid size")
    p_an.add_argument("--algorithm", type=str, default=None,
                      choices=KNOWN_ALGORITHMS)
    p_an.set_defaults(func=cmd_analyze)

    p_sim = sub.add_parser("simulate", help="run one tracking simulation")
    common(p_sim)
    p_sim.add_argument("--T", type=int, default=None, help="horizon")
    p_sim.add_argument("--algorithm", type=str, default=None,
                       choices=KNOWN_ALGORITHMS)
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="run several algorithms on one cost")
    common(p_cmp)
    p_cmp.add_argument("--T", type=int, default=None, help="horizon")
    p_cmp.set_defaults(func=cmd_compare)

    p_np = sub.add_parser("np-check", help="interpolation feasibility check")
    common(p_np)
    p_np.add_argument("--rho", type=float, default=None,
                      help="target disk radius (default: the order-n bound)")
    p_np.add_argument("--epsilon-scale", dest="epsilon_scale", type=float,
                      default=None, help="pole perturbation scale (default 1e-3)")
    p_np.set_defaults(func=cmd_np_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, Condition1Violated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
