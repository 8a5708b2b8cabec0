"""Command-line front end.

Subcommands:

    gen      write a structured training set to JSON
    check    print the structure report of a stored set
    bounds   evaluate the analytic lower bounds, single cell or grid
    train    fit the circuit ansatz to a stored set
    phases   per-sample eigenphases of a trained (or stored) hypothesis
    exp1     varying-rank risk-saturation experiment
    exp2     orthogonal-samples experiment
    exp3     linearly-dependent-samples experiment

Exit codes: 0 on success, 1 on usage errors (unknown flags included),
2 on runtime failures.  All randomness defaults to seed 10.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import exper
from .bounds import bound_average, bound_fixed, bound_lindep, bound_orthogonal, risk
from .datagen import (
    check_li_hx,
    gen_lindep,
    gen_orthogonal,
    gen_varying_rank,
    load_training_set,
    save_training_set,
)
from .haar import SeededRng
from .qcore import UnitaryOperator
from .qnn import Ansatz, TrainConfig, ansatz_unitary, default_layers, train

DEFAULT_SEED = exper.DEFAULT_MASTER_SEED
USAGE_ERROR = 1
RUNTIME_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # Usage errors (bad/unknown flags, missing arguments) must exit 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}") from exc


def _float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(prog="qnfl", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a structured training set")
    p.add_argument("kind", choices=["varying-rank", "orthogonal", "lindep"])
    p.add_argument("--d", type=int, required=True, help="dimension of H_X")
    p.add_argument("--t", type=int, required=True, help="number of samples")
    p.add_argument("--rbar", type=int, help="mean Schmidt rank (varying-rank)")
    p.add_argument("--r", type=int, help="Schmidt rank (orthogonal, lindep)")
    p.add_argument("--d-r", type=int, help="reference dimension (varying-rank; default d)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, help="output JSON path")

    p = sub.add_parser("check", help="structure report of a stored set")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("bounds", help="analytic lower bounds")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=_float_list, required=True, help="rank or comma list")
    p.add_argument("--t", type=_int_list, required=True, help="sample count or comma list")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("train", help="train the ansatz on a stored set")
    _add_train_flags(p)
    p.add_argument("--out", help="write the result record as JSON")
    p.add_argument("--save-unitary", help="write the trained unitary as JSON")

    p = sub.add_parser("phases", help="per-sample eigenphase report")
    _add_train_flags(p)
    p.add_argument("--hypothesis", help="stored unitary JSON; skips training")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    for name in ("exp1", "exp2", "exp3"):
        p = sub.add_parser(name, help=_EXP_HELP[name])
        p.add_argument("--qubits", type=int)
        p.add_argument("--t-list", type=_int_list)
        if name == "exp1":
            p.add_argument("--rbar-list", type=_int_list)
        else:
            p.add_argument("--r-list", type=_int_list, help="fixed ranks (default: r = d/t)")
        p.add_argument("--reps", type=int)
        p.add_argument("--layers", type=int)
        p.add_argument("--lr", type=float)
        p.add_argument("--max-iters", type=int)
        p.add_argument("--target-loss", type=float)
        p.add_argument("--init-scale", type=float, help="angle init half-width (default pi)")
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int, help="worker processes (default: logical cores)")
        p.add_argument("--config", help="JSON config file; explicit flags override it")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--no-plot", action="store_true")

    return parser


_EXP_HELP = {
    "exp1": "risk vs bound for varying-rank sets",
    "exp2": "risk vs bound for orthogonal sets",
    "exp3": "risk vs bound for linearly dependent sets",
}

_EXP_KIND = {"exp1": "varying-rank", "exp2": "orthogonal", "exp3": "lindep"}


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", help="training-set JSON")
    p.add_argument("--layers", type=int, help="circuit depth (default 20 * n_qubits)")
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--target-loss", type=float, default=1e-6)
    p.add_argument("--log-every", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)


def _cmd_gen(args) -> int:
    rng = SeededRng(args.seed)
    if args.kind == "varying-rank":
        if args.rbar is None:
            raise UsageError("varying-rank needs --rbar")
        d_r = args.d_r if args.d_r is not None else args.d
        s = gen_varying_rank(args.d, d_r, args.t, args.rbar, rng)
    else:
        if args.r is None:
            raise UsageError(f"{args.kind} needs --r")
        if args.d_r is not None:
            raise UsageError("--d-r applies only to varying-rank")
        if args.kind == "orthogonal":
            s = gen_orthogonal(args.d, args.t, args.r, rng)
        else:
            s = gen_lindep(args.d, args.t, args.r, rng)
    save_training_set(s, args.out)
    print(f"wrote {args.kind} set: d={s.dim_x} d_r={s.dim_r} t={s.t} seed={args.seed} -> {args.out}")
    return 0


def _cmd_check(args) -> int:
    s = load_training_set(args.file)
    rep = check_li_hx(s.inputs, tol=args.tol)
    opr = "true" if rep.is_opr else "false"
    li = "true" if rep.is_li_hx else "false"
    print(f"opr={opr} li_hx={li} d_sx={rep.d_sx} card_sx={rep.card_sx}")
    return 0


def _cmd_bounds(args) -> int:
    cells = [(args.d, r, t) for r in args.r for t in args.t]
    if len(cells) == 1:
        d, r, t = cells[0]
        print(repr(bound_average(d, r, t)))
        return 0
    rows = []
    for d, r, t in cells:
        rows.append(
            {
                "d": d,
                "r": r,
                "t": t,
                "fixed": bound_fixed(d, int(r), t) if float(r).is_integer() else bound_average(d, r, t),
                "average": bound_average(d, r, t),
                "orthogonal": bound_orthogonal(d, [int(r)] * t) if float(r).is_integer() else None,
                "lindep": bound_lindep(d, int(r)) if float(r).is_integer() else None,
            }
        )
    if args.format == "json":
        print(json.dumps(rows))
    else:
        print("d,r,t,fixed,average,orthogonal,lindep")
        for row in rows:
            print(
                ",".join(
                    "" if row[k] is None else repr(row[k]) if isinstance(row[k], float) else str(row[k])
                    for k in ("d", "r", "t", "fixed", "average", "orthogonal", "lindep")
                )
            )
    return 0


def _train_from_args(args):
    s = load_training_set(args.file)
    n = int(s.dim_x).bit_length() - 1
    if 2**n != s.dim_x:
        raise ValueError(f"training requires d to be a power of two, got {s.dim_x}")
    layers = args.layers if args.layers is not None else default_layers(n)
    rng = SeededRng(args.seed)
    a0 = Ansatz.random(n, layers, rng)
    cfg = TrainConfig(
        max_iters=args.max_iters,
        lr=args.lr,
        target_loss=args.target_loss,
        log_every=args.log_every,
    )
    result = train(a0, s, cfg)
    trained = ansatz_unitary(Ansatz(n, layers, result.final_params))
    return s, layers, result, trained


def _cmd_train(args) -> int:
    s, layers, result, trained = _train_from_args(args)
    report = risk(s.target, trained)
    thetas = exper.phase_report(s.target, trained, s.inputs)
    conv = "true" if result.converged else "false"
    print(
        f"loss={result.final_loss:.3e} iters={result.iterations_used} "
        f"converged={conv} risk={report.risk:.6f}"
    )
    if args.out:
        payload = {
            "final_loss": result.final_loss,
            "iterations_used": result.iterations_used,
            "converged": result.converged,
            "risk": report.risk,
            "theta": [ph.theta for ph in thetas],
            "seed": args.seed,
            "config": {
                "layers": layers,
                "lr": args.lr,
                "max_iters": args.max_iters,
                "target_loss": args.target_loss,
                "log_every": args.log_every,
                "d": s.dim_x,
                "d_r": s.dim_r,
                "t": s.t,
                "structure": s.structure.value,
            },
        }
        Path(args.out).write_text(json.dumps(payload) + "\n")
    if args.save_unitary:
        entries = [[float(x.real), float(x.imag)] for x in trained.entries.reshape(-1)]
        Path(args.save_unitary).write_text(
            json.dumps({"d": trained.dim, "entries": entries}) + "\n"
        )
    return 0


def _load_unitary(path) -> UnitaryOperator:
    data = json.loads(Path(path).read_text())
    d = int(data["d"])
    flat = np.array([complex(re, im) for re, im in data["entries"]])
    return UnitaryOperator(flat.reshape(d, d))


def _cmd_phases(args) -> int:
    if args.hypothesis is not None:
        s = load_training_set(args.file)
        trained = _load_unitary(args.hypothesis)
    else:
        s, _, _, trained = _train_from_args(args)
    readings = exper.phase_report(s.target, trained, s.inputs)
    if args.format == "json":
        print(json.dumps([{"sample": j, "theta": ph.theta, "magnitude": ph.magnitude} for j, ph in enumerate(readings)]))
    else:
        print("sample,theta,magnitude")
        for j, ph in enumerate(readings):
            print(f"{j},{ph.theta!r},{ph.magnitude!r}")
    return 0


def _cmd_exp(name: str, args) -> int:
    kind = _EXP_KIND[name]
    overrides: dict = {}
    if args.config is not None:
        file_cfg = json.loads(Path(args.config).read_text())
        if not isinstance(file_cfg, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = set(file_cfg) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        overrides.update(file_cfg)
    if args.qubits is not None:
        overrides["n_qubits"] = args.qubits
    if args.t_list is not None:
        overrides["t_values"] = tuple(args.t_list)
    rank_flag = getattr(args, "rbar_list", None)
    if rank_flag is None:
        rank_flag = getattr(args, "r_list", None)
    if rank_flag is not None:
        overrides["rank_specs"] = tuple(rank_flag)
    for flag, key in (
        ("reps", "repetitions"),
        ("layers", "layers"),
        ("lr", "lr"),
        ("max_iters", "max_iters"),
        ("target_loss", "target_loss"),
        ("init_scale", "init_scale"),
        ("seed", "master_seed"),
        ("jobs", "jobs"),
    ):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = value
    if "jobs" not in overrides:
        import os

        overrides["jobs"] = os.cpu_count() or 1
    if "t_values" in overrides:
        overrides["t_values"] = tuple(overrides["t_values"])
    if overrides.get("rank_specs") is not None:
        overrides["rank_specs"] = tuple(overrides["rank_specs"])
    cfg = exper.experiment_preset(kind, **overrides)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = exper.run_experiment(cfg, progress=lambda msg: print(msg, file=sys.stderr))
    summaries = exper.aggregate(records)
    exper.emit_csv(records, out_dir / "records.csv")
    exper.emit_summary_csv(summaries, out_dir / "summary.csv")
    resolved = asdict(cfg)
    resolved["layers"] = cfg.resolved_layers
    resolved["cells"] = [list(c) for c in cfg.cells()]
    (out_dir / "config.json").write_text(json.dumps(resolved, indent=2) + "\n")
    if not args.no_plot:
        exper.emit_plot(records, out_dir / "plot.svg")
    excluded = sum(c.excluded for c in summaries)
    print(f"{len(records)} trials -> {out_dir} (structure exclusions: {excluded})")
    return 0


_CONFIG_KEYS = {
    "n_qubits",
    "t_values",
    "rank_specs",
    "repetitions",
    "layers",
    "lr",
    "max_iters",
    "target_loss",
    "init_scale",
    "master_seed",
    "jobs",
}


class UsageError(Exception):
    pass


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.error("a subcommand is required")
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "phases":
            return _cmd_phases(args)
        if args.command in ("exp1", "exp2", "exp3"):
            return _cmd_exp(args.command, args)
        parser.error(f"unknown command {args.command!r}")
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, RuntimeError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"qnfl: error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR
    return 0


def run() -> None:
    raise SystemExit(main())
