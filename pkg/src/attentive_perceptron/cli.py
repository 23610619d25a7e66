"""``attn`` command line: synthesize data, train, benchmark, sweep, reflect.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric/domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench
from .data import ParseError, SynthSpec, generate_synthetic, load_sparse, save_sparse
from .types import ContractError, DimensionMismatchError, DomainError, FilterConfig, Order

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_DOMAIN = 4

_ORDERS = [o.value for o in Order]


class UsageError(Exception):
    pass


def _add_filter_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="training set, sparse text (.gz ok)")
    p.add_argument("--test", required=True, help="test set, sparse text (.gz ok)")
    p.add_argument("--delta", type=float, default=0.1, help="permitted decision-error rate")
    p.add_argument("--predict-delta", type=float, default=None,
                   help="decision-error rate for prediction-time filtering (default: --delta)")
    p.add_argument("--theta", type=float, default=0.0, help="update threshold on the margin")
    p.add_argument("--stride", type=int, default=1, help="features between stop checks")
    p.add_argument("--warmup", type=int, default=100,
                   help="fully evaluated examples before filtering starts")
    p.add_argument("--decay", type=float, default=0.99, help="EMA decay of margin moments")
    p.add_argument("--min-std", type=float, default=1e-9)
    p.add_argument("--order", choices=_ORDERS, default="shuffle", help="feature scan order")
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--l2norm", action="store_true", help="unit-normalize non-bias features")
    p.add_argument("--map01", action="store_true", help="read label 0 as -1")


def _config(args) -> FilterConfig:
    return FilterConfig(
        delta=args.delta,
        theta=args.theta,
        stride=args.stride,
        warmup=args.warmup,
        decay=args.decay,
        min_std=args.min_std,
        order=Order(args.order),
        seed=args.seed,
        predict_delta=args.predict_delta,
    )


def _load_pair(args):
    kw = dict(map01=args.map01, l2norm=args.l2norm)
    return load_sparse(args.data, **kw), load_sparse(args.test, **kw)


def _inputs(args) -> dict:
    return {"data": str(args.data), "test": str(args.test), "epochs": args.epochs,
            "seed": args.seed, "l2norm": args.l2norm, "map01": args.map01}


def _write_json(doc, path) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_synth(args) -> int:
    spec = SynthSpec(kind=args.kind, n_examples=args.n, n_features=args.d, margin=args.margin,
                     flip_prob=args.flip, seed=args.seed, sample_seed=args.sample_seed)
    save_sparse(generate_synthetic(spec), args.out)
    return 0


def cmd_train(args) -> int:
    if args.epochs < 1:
        raise UsageError("--epochs must be >= 1")
    train_set, test_set = _load_pair(args)
    cfg = _config(args)
    report, _ = bench.run_variant(train_set, test_set, cfg, args.epochs, args.seed,
                                  baseline=args.algo == "baseline")
    doc = report.to_dict()
    doc["inputs"] = _inputs(args)
    _write_json(doc, args.report)
    return 0


def cmd_bench(args) -> int:
    if args.epochs < 1:
        raise UsageError("--epochs must be >= 1")
    train_set, test_set = _load_pair(args)
    base, att = bench.run_benchmark(train_set, test_set, _config(args), args.epochs, args.seed)
    _write_json(bench.benchmark_document(base, att, inputs=_inputs(args)), args.report)
    return 0


def cmd_sweep(args) -> int:
    values = [v for v in args.values.split(",") if v]
    if not values:
        raise UsageError("--values must list at least one value")
    train_set, test_set = _load_pair(args)
    rows = bench.sweep(args.param, values, _config(args), [(train_set, test_set)],
                       args.epochs, args.seed)
    if args.csv:
        bench.write_sweep_csv(rows, args.csv)
    if args.report:
        _write_json({"param": args.param, "rows": rows, "inputs": _inputs(args)}, args.report)
    if not args.csv and not args.report:
        bench.write_sweep_csv(rows, "/dev/stdout")
    return 0


def cmd_reflect(args) -> int:
    res = bench.run_reflection_mc(args.steps, args.walks, args.delta, args.theta, args.seed)
    _write_json(res, args.report)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="attn", description="Attentive Perceptron experiments.",
        epilog="Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric/domain error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic dataset")
    p.add_argument("--kind", choices=["gaussian-sep", "gaussian-noisy", "walk"],
                   default="gaussian-sep")
    p.add_argument("--n", type=int, required=True, help="number of examples")
    p.add_argument("--d", type=int, required=True, help="number of features")
    p.add_argument("--margin", type=float, default=1.0)
    p.add_argument("--flip", type=float, default=0.0, help="label-flip probability")
    p.add_argument("--seed", type=int, default=0, help="teacher (and default sample) seed")
    p.add_argument("--sample-seed", type=int, default=None,
                   help="seed for the examples only; reuse --seed to share the teacher")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train one variant and write a JSON report")
    _add_filter_args(p)
    p.add_argument("--algo", choices=["baseline", "attentive"], default="attentive")
    p.add_argument("--report", default="-")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help="paired baseline + attentive run")
    _add_filter_args(p)
    p.add_argument("--report", default="-")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser(
        "sweep", help="paired runs over one parameter",
        description="CSV columns, in order: " + ",".join(bench.SWEEP_COLUMNS),
    )
    _add_filter_args(p)
    p.add_argument("--param", choices=bench.SWEEP_PARAMS, required=True)
    p.add_argument("--values", required=True, help="comma separated values")
    p.add_argument("--csv", default=None)
    p.add_argument("--report", default=None, help="optional JSON with the same rows")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reflect", help="Monte Carlo check of the threshold on +/-1 walks")
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--walks", type=int, default=100_000)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", default="-")
    p.set_defaults(func=cmd_reflect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))
    except (ParseError, OSError, DimensionMismatchError) as e:
        print(f"attn: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (DomainError, ContractError) as e:
        print(f"attn: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
