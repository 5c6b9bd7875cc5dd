"""Command-line entry point.

Exit codes: 0 success, 1 usage/configuration error, 2 data error,
3 invariant/audit failure.
"""

import argparse
import json
import secrets
import sys

import numpy as np
import pandas as pd

from . import dataset as ds
from . import harness, rulelist
from .evaluation import evaluation_json
from .learner import (
    LearnerConfig,
    audit_trace,
    dp_greedy_rl,
    greedy_rl,
    trace_from_json,
    trace_to_json,
)
from .mechanisms import BudgetError, MechanismKind, NoiseSource, PrivacyBudget, make_budget

USAGE_ERROR, DATA_ERROR, AUDIT_ERROR = 1, 2, 3


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, USAGE_ERROR)


def _load_rules(path, feature_names):
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    antecedents = tuple(
        rulelist._antecedent_from_names(names, feature_names)
        for names in payload["antecedents"]
    )
    return ds.MinedRuleSet(antecedents, payload.get("max_arity", 2))


def _dump_rules(rules, feature_names, path):
    payload = {
        "max_arity": rules.max_arity,
        "antecedents": [
            [lit.name(feature_names) for lit in ant] for ant in rules.antecedents
        ],
    }
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _resolve_seed(seed):
    if seed is None:
        seed = secrets.randbelow(2**31)
        print(f"seed drawn from system entropy: {seed}")
    return seed


def cmd_prepare(args):
    recipe = ds.read_recipe(args.recipe)
    raw = pd.read_csv(args.input)
    prepared = ds.binarize(
        raw, int(recipe["bins"]), recipe["label"], recipe["drop"]
    )
    ds.write_csv(prepared, args.output, recipe["label"])
    print(f"wrote {prepared.n} samples x {prepared.m} features to {args.output}")


def cmd_mine(args):
    data = ds.load_csv(args.data, args.label)
    rules = ds.mine_rules(data, args.max_arity, args.min_support)
    _dump_rules(rules, data.feature_names, args.output)
    print(f"mined {len(rules)} antecedents to {args.output}")


def _train_model(args):
    if args.epsilon is not None and args.epsilon <= 0.0:
        raise CliError("--epsilon must be > 0", USAGE_ERROR)
    data = ds.load_csv(args.data, args.label)
    seed = _resolve_seed(args.seed)
    if args.train_fraction < 1.0:
        train, _ = ds.split(data, args.train_fraction, seed)
    else:
        train = data
    if args.rules:
        rules = _load_rules(args.rules, data.feature_names)
    else:
        rules = ds.mine_rules(data, args.max_arity, args.mine_min_support)
    mechanism = MechanismKind(args.mechanism)
    if mechanism is MechanismKind.NON_PRIVATE:
        config = LearnerConfig(
            args.max_length, args.min_support, args.confidence, seed=seed
        )
        return greedy_rl(train, rules, config), None, None
    if args.epsilon is None:
        raise CliError("--epsilon is required for DP mechanisms", USAGE_ERROR)
    delta = args.delta if args.delta is not None else 1.0 / train.n**2
    budget = make_budget(args.epsilon, delta, args.max_length, args.release_counts)
    config = LearnerConfig(
        args.max_length,
        args.min_support,
        args.confidence,
        mechanism,
        budget,
        args.gamma,
        seed,
    )
    model, trace = dp_greedy_rl(train, rules, config, NoiseSource(seed))
    return model, trace, budget


def cmd_train(args):
    model, trace, budget = _train_model(args)
    rulelist.save(model, args.output)
    print(rulelist.pretty(model))
    print(f"model written to {args.output}")
    if args.trace and trace is not None:
        with open(args.trace, "w", encoding="utf-8") as handle:
            json.dump(trace_to_json(trace, budget), handle, indent=2)
            handle.write("\n")
        print(f"trace written to {args.trace}")


def cmd_evaluate(args):
    data = ds.load_csv(args.data, args.label)
    model = rulelist.load(args.model)
    train, test = ds.split(data, args.train_fraction, args.seed)
    print(json.dumps(evaluation_json(model, train, test), indent=2))


def _parse_sweep_config(path):
    recipe = {}
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#") and "=" in line:
                key, value = line.split("=", 1)
                recipe[key.strip()] = value.strip()
    return recipe


def cmd_sweep(args):
    cfg = _parse_sweep_config(args.config)
    data = ds.load_csv(cfg["data"], cfg.get("label", "label"))
    spec = harness.SweepSpec(
        mechanisms=[m.strip() for m in cfg["mechanisms"].split(",")],
        epsilon_grid=sorted(float(e) for e in cfg["epsilons"].split(",")),
        runs=int(cfg.get("runs", "1")),
        base_seed=int(cfg.get("base_seed", "0")),
        max_length=int(cfg.get("max_length", "5")),
        min_support_fraction=float(cfg.get("lambda", "0.05")),
        confidence=float(cfg.get("confidence", "0.99")),
        train_fraction=float(cfg.get("train_fraction", "0.7")),
        max_arity=int(cfg.get("max_arity", "2")),
        mine_min_support=float(cfg.get("mine_min_support", "0.0")),
        release_counts=cfg.get("release_counts", "true").lower() == "true",
        gamma=float(cfg.get("gamma", "2.0")),
        workers=int(cfg.get("workers", "1")),
    )
    records = harness.run_sweep(spec, data)
    harness.write_records_csv(records, cfg.get("output", "results.csv"))
    if cfg.get("aggregate"):
        harness.write_aggregate_csv(records, cfg["aggregate"])
    failed = [r for r in records if r.error]
    print(f"{len(records)} records ({len(failed)} failed)")
    for record in failed:
        print(f"  failed {record.mechanism} eps={record.epsilon} run={record.run}: {record.error}")


def cmd_noise_table(args):
    n_grid = [
        int(round(v))
        for v in np.geomspace(args.n_min, args.n_max, args.points)
    ]
    n_grid = sorted(set(n_grid))
    rows = harness.noise_scale_table(
        n_grid, args.lambda_abs, args.epsilon, args.delta, args.max_length
    )
    harness.write_noise_csv(rows, args.output)
    print(f"noise-scale table ({len(rows)} rows) written to {args.output}")


def cmd_audit(args):
    with open(args.trace, encoding="utf-8") as handle:
        payload = json.load(handle)
    budget = PrivacyBudget(**payload["budget"])
    trace = trace_from_json(payload)
    ok, report = audit_trace(trace, budget)
    print(json.dumps(report, indent=2))
    if not ok:
        raise CliError("budget audit failed", AUDIT_ERROR)


def build_parser():
    parser = Parser(prog="dpgrl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="binarize a raw table per recipe")
    p.add_argument("--input", required=True)
    p.add_argument("--recipe", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("mine", help="emit the candidate rule set")
    p.add_argument("--data", required=True)
    p.add_argument("--label", default="label")
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--min-support", type=float, default=0.0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("train", help="fit one rule list")
    p.add_argument("--data", required=True)
    p.add_argument("--label", default="label")
    p.add_argument("--rules", help="pre-mined rule set JSON")
    p.add_argument(
        "--mechanism",
        default="sm-laplace",
        choices=[k.value for k in MechanismKind],
    )
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float, help="defaults to 1/n^2")
    p.add_argument("--max-length", type=int, default=5)
    p.add_argument("--lambda", dest="min_support", type=float, default=0.05)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--gamma", type=float, default=2.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--release-counts", action="store_true")
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--max-arity", type=int, default=2)
    p.add_argument("--mine-min-support", type=float, default=0.0)
    p.add_argument("--output", required=True)
    p.add_argument("--trace", help="write the training trace JSON here")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="accuracy + vulnerability JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label", default="label")
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="run a sweep from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("noise-table", help="smooth vs global noise scales")
    p.add_argument("--n-min", type=int, default=100)
    p.add_argument("--n-max", type=int, default=100000)
    p.add_argument("--points", type=int, default=40)
    p.add_argument("--lambda-abs", type=int, default=50)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1e-6)
    p.add_argument("--max-length", type=int, default=5)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_noise_table)

    p = sub.add_parser("audit", help="verify a training trace's accounting")
    p.add_argument("--trace", required=True)
    p.set_defaults(func=cmd_audit)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ds.DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
