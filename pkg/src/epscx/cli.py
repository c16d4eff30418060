"""Command line front-end: `epscx complexity | experiment | verify`.

Exit codes: 0 pass, 1 a check failed, 2 input error, 3 exact-solver cap hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import matching
from .experiments import EXPERIMENTS, SCHEMA_VERSION, run_experiment
from .io import InputError, load_space
from .metric import FiniteMetricSpace, is_ultrametric, verify_metric_axioms
from .solvers import (
    CapExceeded,
    InvariantViolation,
    check_subadditivity,
    complexity_profile,
    is_net,
    is_separated,
    max_separated_exact,
    min_net_exact,
    resolve_cap,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    eps: list[float] = field(default_factory=list)
    cap: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    greedy: bool = False
    witnesses: bool = False
    kind: str = "auto"
    experiment: str | None = None
    depth: int | None = None


def parse_eps(text: str) -> list[float]:
    """Comma-separated positive values; fractions like 1/3 are accepted."""
    try:
        values = [float(Fraction(t.strip())) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad eps list {text!r}") from exc
    if not values or any(v <= 0 for v in values):
        raise argparse.ArgumentTypeError("eps values must be positive")
    return values


def _g(x: float) -> str:
    return format(x, ".17g")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(payload: dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def cmd_complexity(cfg: RunConfig) -> int:
    space = load_space(cfg.inputs[0], cfg.kind)
    profile = complexity_profile(space, cfg.eps, cap=cfg.cap, allow_greedy=cfg.greedy)
    if cfg.format == "csv":
        head = ["eps", "C", "C_certificate", "R", "R_certificate"]
        if cfg.witnesses:
            head += ["C_witness", "R_witness"]
        lines = [",".join(head)]
        for e in profile:
            row = [_g(e.eps), str(e.separated.size), e.separated.certificate, str(e.net.size), e.net.certificate]
            if cfg.witnesses:
                row += [" ".join(map(str, e.separated.witness)), " ".join(map(str, e.net.witness))]
            lines.append(",".join(row))
        _emit("\n".join(lines) + "\n", cfg.out)
        return EXIT_OK
    entries = []
    for e in profile:
        entry = {
            "eps": e.eps,
            "C": e.separated.size,
            "C_certificate": e.separated.certificate,
            "R": e.net.size,
            "R_certificate": e.net.certificate,
        }
        if cfg.witnesses:
            entry.update(C_witness=list(e.separated.witness), R_witness=list(e.net.witness))
        entries.append(entry)
    payload = {"schema_version": SCHEMA_VERSION, "command": "complexity", "config": asdict(cfg), "n": space.n, "entries": entries}
    _emit(_dump(payload), cfg.out)
    return EXIT_OK


def cmd_experiment(cfg: RunConfig) -> int:
    report = run_experiment(cfg.experiment, depth=cfg.depth, seed=cfg.seed)
    report["config"] = {**report["config"], "cli": asdict(cfg)}
    _emit(_dump(report), cfg.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def verify_space(space: FiniteMetricSpace, eps: float, cap: int | None = None) -> list[dict]:
    """Every structural check at one ε: axioms, witnesses, Hall maps, partitions, inequalities."""
    checks = []

    def add(name, ok, **details):
        checks.append({"name": name, "pass": bool(ok), **details})

    report = verify_metric_axioms(space)
    add("metric axioms", report.ok, violated_triples=[list(t) for t in report.violated_triples[:20]])
    add("ultrametric", True, value=is_ultrametric(space))

    reverse = list(range(space.n))[::-1]
    sep = max_separated_exact(space, eps, cap=cap)
    sep_r = max_separated_exact(space, eps, order=reverse, cap=cap)
    net = min_net_exact(space, eps, cap=cap)
    net_r = min_net_exact(space, eps, order=reverse, cap=cap)
    half = min_net_exact(space, eps / 2, cap=cap)
    add("separated witnesses valid", is_separated(space, eps, sep.witness) and is_separated(space, eps, sep_r.witness),
        C=sep.size)
    add("net witnesses valid", is_net(space, eps, net.witness) and is_net(space, eps, net_r.witness), R=net.size)
    add("R_eps <= C_eps", net.size <= sep.size, R=net.size, C=sep.size)
    add("C_eps <= R_eps/2", sep.size <= half.size, C=sep.size, R_half=half.size)

    def hall(name, fn, *args, bound=None):
        try:
            alpha = fn(space, eps, *args)
        except matching.HallFailure as exc:
            add(name, False, hall_violator=list(exc.result.hall_violator or ()))
            return
        worst = max((space.dist(x, y) for x, y in alpha.items()), default=0.0)
        add(name, bound is None or worst < bound, max_matched_distance=worst)

    hall("separated bijection", matching.optimal_separated_bijection, sep.witness, sep_r.witness, bound=eps)
    hall("net injection into net", matching.net_injection, net.witness, net_r.witness, bound=2 * eps)
    hall("net injection into separated set", matching.net_injection, net.witness, sep.witness, bound=2 * eps)
    try:
        part = matching.kx_partition(space, eps, net.witness, sep.witness)
        problems = part.problems(space, sep.witness)
        add("K_x partition", not problems, problems=problems, max_cell=max(len(c) for c in part.cells.values()))
    except matching.HallFailure as exc:
        add("K_x partition", False, hall_violator=list(exc.result.hall_violator or ()))

    parts = space.metadata.get("parts")
    if parts:
        a, b = range(*parts[0]), range(*parts[1])
    else:
        a, b = range(space.n // 2), range(space.n // 2, space.n)
    sub = check_subadditivity(space, a, b, eps, cap=cap)
    add("subadditivity", sub.ok, C=list(sub.C), R=list(sub.R))
    return checks


def cmd_verify(cfg: RunConfig) -> int:
    space = load_space(cfg.inputs[0], cfg.kind)
    results = []
    for eps in cfg.eps:
        results.append({"eps": eps, "checks": verify_space(space, eps, cap=cfg.cap)})
    ok = all(c["pass"] for r in results for c in r["checks"])
    payload = {"schema_version": SCHEMA_VERSION, "command": "verify", "config": asdict(cfg), "n": space.n,
               "results": results, "pass": ok}
    _emit(_dump(payload), cfg.out)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epscx", description="ε-complexity of finite metric spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="distance CSV, point CSV or symbolic JSON")
        p.add_argument("--kind", choices=["auto", "matrix", "points", "symbolic"], default="auto")
        p.add_argument("--cap", type=int, default=None, help="exact-solver cap (overrides EPSCX_CAP)")
        p.add_argument("--out", default=None)

    p = sub.add_parser("complexity", help="C_eps and R_eps over an eps grid")
    common(p)
    p.add_argument("--eps", type=parse_eps, required=True)
    p.add_argument("--greedy", action="store_true", help="fall back to greedy brackets above the cap")
    p.add_argument("--witnesses", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("experiment", help="run a built-in experiment")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="structural checks on one space")
    common(p)
    p.add_argument("--eps", type=parse_eps, required=True)
    return parser


def _config(args) -> RunConfig:
    cfg = RunConfig(command=args.command, out=args.out)
    if args.command == "experiment":
        cfg.experiment, cfg.depth, cfg.seed = args.name, args.depth, args.seed
    else:
        cfg.inputs = [args.input]
        cfg.eps = args.eps
        cfg.kind = args.kind
        cfg.cap = resolve_cap(args.cap)
    if args.command == "complexity":
        cfg.greedy, cfg.witnesses, cfg.format = args.greedy, args.witnesses, args.format
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config(args)
    handler = {"complexity": cmd_complexity, "experiment": cmd_experiment, "verify": cmd_verify}[cfg.command]
    try:
        return handler(cfg)
    except InputError as exc:
        print(f"epscx: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"epscx: {exc} (use --greedy or raise --cap)", file=sys.stderr)
        return EXIT_CAP
    except (InvariantViolation, ValueError) as exc:
        print(f"epscx: {exc}", file=sys.stderr)
        return EXIT_INPUT if isinstance(exc, ValueError) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
