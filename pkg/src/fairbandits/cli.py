"""Command-line interface.

Subcommands:

* ``run``       — one simulated run (master + standalone baselines), full trace CSV
* ``replicate`` — many runs, aggregate CSV (mean/q10/q90 per policy), optional full trace
* ``diagnose``  — deviation + suboptimal-selection diagnostics CSVs, regret-rate fits
* ``value``     — print an environment's oracle values

Exit status: 0 on success, 2 on any configuration problem.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import diagnostics
from .configfile import ConfigError, resolve_config
from .harness import (
    replicate,
    run_one,
    write_aggregate_csv,
    write_deviation_csv,
    write_selection_csv,
    write_trace_csv,
)
from .learners import LEARNERS, make_learner

_PRESET_OPTIMAL = {"env1": "epsgreedy", "env2": "linucb"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairbandits", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="INI-style experiment config; flags override it")
    common.add_argument("--env", choices=("env1", "env2"), help="preset environment id")
    common.add_argument("--horizon", type=int, help="rounds per run")
    common.add_argument("--runs", type=int, help="number of replications")
    common.add_argument("--seed", type=int, help="base seed for all stream derivation")
    common.add_argument("--c1", type=float, help="comparison bonus scale")
    common.add_argument("--c2", type=float, help="exploration schedule scale")
    common.add_argument("--learners", help="comma-separated learner kinds, e.g. linucb,epsgreedy")
    common.add_argument("--threads", type=int, help="worker processes for replication")
    common.add_argument("--name", help="experiment name (output file prefix)")
    common.add_argument("--out", default=".", metavar="DIR", help="output directory (default: current)")

    p_run = sub.add_parser("run", parents=[common], help="simulate one run and write its trace")
    p_run.add_argument("--run-id", type=int, default=0, help="which run id to simulate (default 0)")

    p_rep = sub.add_parser("replicate", parents=[common], help="replicate runs and write the aggregate")
    p_rep.add_argument("--trace", choices=("aggregate", "full"), help="also write every run's trace with 'full'")

    p_diag = sub.add_parser("diagnose", parents=[common], help="risk-deviation and selection diagnostics")
    p_diag.add_argument(
        "--optimal-learners",
        help="comma-separated learner kinds counted as optimal (default: the preset's best-suited kind)",
    )
    p_diag.add_argument(
        "--bound",
        action="append",
        metavar="C0,BETA",
        help="deviation bound c0*n**-beta to tally exceedances for (repeatable; default 1,0.5)",
    )

    sub.add_parser("value", parents=[common], help="print environment oracle values")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    keys = ("env", "horizon", "runs", "seed", "c1", "c2", "learners", "threads", "name")
    overrides = {key: getattr(args, key, None) for key in keys}
    overrides["trace"] = getattr(args, "trace", None)
    return overrides


def _out_path(args: argparse.Namespace, filename: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, filename)


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = resolve_config(args.config, _overrides(args))
    cfg.validate()
    traces = run_one(cfg, args.run_id)
    path = _out_path(args, f"{cfg.name}_trace.csv")
    write_trace_csv(path, cfg, {args.run_id: traces})
    print(f"wrote {path}")
    for label, tr in traces.items():
        print(f"{label}: cumulative reward {tr.cum_rewards[-1]:.6g} over {cfg.horizon} rounds")
    return 0


def _cmd_replicate(args: argparse.Namespace) -> int:
    cfg = resolve_config(args.config, _overrides(args))
    trace_path = _out_path(args, f"{cfg.name}_trace.csv") if cfg.trace == "full" else None
    result = replicate(cfg, trace_path=trace_path)
    agg_path = _out_path(args, f"{cfg.name}_agg.csv")
    write_aggregate_csv(agg_path, result)
    print(f"wrote {agg_path}")
    if trace_path:
        print(f"wrote {trace_path}")
    for label in result.policies():
        final = result.final_cum(label)
        print(f"{label}: mean final cumulative reward {final.mean():.6g} (over {cfg.runs} runs)")
    return 0


def _parse_bounds(args: argparse.Namespace) -> tuple:
    if not getattr(args, "bound", None):
        return ((1.0, 0.5),)
    pairs = []
    for text in args.bound:
        try:
            c0_text, beta_text = text.split(",")
            pairs.append((float(c0_text), float(beta_text)))
        except ValueError:
            raise ConfigError(f"--bound expects C0,BETA (got {text!r})") from None
    return tuple(pairs)


def _optimal_set(args: argparse.Namespace, cfg) -> set:
    if getattr(args, "optimal_learners", None):
        kinds = {part.strip() for part in args.optimal_learners.split(",") if part.strip()}
        unknown = kinds - set(LEARNERS)
        if unknown:
            raise ConfigError(f"--optimal-learners: unknown kinds {sorted(unknown)}")
    else:
        preset = cfg.env.env_id
        if preset not in _PRESET_OPTIMAL:
            raise ConfigError("custom environment: pass --optimal-learners explicitly")
        kinds = {_PRESET_OPTIMAL[preset]}
    indices = {i for i, spec in enumerate(cfg.learners) if spec.kind in kinds}
    if not indices:
        raise ConfigError(f"none of the configured learners is in the optimal set {sorted(kinds)}")
    return indices


def _cmd_diagnose(args: argparse.Namespace) -> int:
    cfg = resolve_config(args.config, _overrides(args))
    bounds = _parse_bounds(args)
    optimal = _optimal_set(args, cfg)
    env = cfg.env.build()
    optimal_value = env.optimal_value()

    result = replicate(cfg, keep_learner_rewards=True)

    exponents = [make_learner(s.kind, env.k, env.d, s.params).rate_exponent for s in cfg.learners]
    selection = diagnostics.suboptimal_selection_diagnostic(
        result.learner_rewards, exponents, cfg.master.c1, optimal
    )
    sel_path = _out_path(args, f"{cfg.name}_diag_selection.csv")
    write_selection_csv(sel_path, selection)
    print(f"wrote {sel_path}")

    reports = []
    for spec, label in zip(cfg.learners, cfg.learner_labels()):
        r_star = diagnostics.class_optimal_risk(spec.kind, env)
        reports.append(
            diagnostics.deviation_diagnostic(
                spec,
                env,
                r_star,
                horizon=cfg.horizon,
                runs=cfg.runs,
                base_seed=cfg.seed,
                bound_pairs=bounds,
                label=label,
            )
        )
    dev_path = _out_path(args, f"{cfg.name}_diag_deviation.csv")
    write_deviation_csv(dev_path, reports)
    print(f"wrote {dev_path}")

    for label in result.policies():
        curve = optimal_value * np.arange(1, cfg.horizon + 1) - result.mean_cum(label)
        flag = diagnostics.detect_linear_regret(curve)
        note = "  [linear regret]" if flag.detected else ""
        try:
            fit = diagnostics.fit_rate_exponent(curve, burn_in=min(64, cfg.horizon))
            slope_text = f"regret-rate slope {fit.slope:+.3f}"
        except ValueError:
            slope_text = "regret-rate slope unavailable (horizon too short)"
        print(f"{label}: {slope_text}, last-decile per-round regret {flag.last_decile_mean:.4f}{note}")
    return 0


def _cmd_value(args: argparse.Namespace) -> int:
    cfg = resolve_config(args.config, _overrides(args))
    env = cfg.env.build()
    info = env.optimal_value_info()
    print(f"env: {env.env_id}")
    if info.method == "exact":
        print(f"optimal_value: {info.value!r} (method=exact)")
    else:
        print(
            f"optimal_value: {info.value!r} "
            f"(method={info.method} samples={info.samples} seed={info.seed} stderr={info.stderr:.3g})"
        )
    print(f"uniform_policy_value: {env.uniform_policy_value()!r}")
    return 0


_COMMANDS = {"run": _cmd_run, "replicate": _cmd_replicate, "diagnose": _cmd_diagnose, "value": _cmd_value}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
