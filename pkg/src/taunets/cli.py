"""Command line front-end: ``taunets <command> [options]``.

Exit codes: 0 suite pass, 1 suite fail, 2 usage or parse error, 3 evaluation
error.  Reports are written on 0 and 1.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from . import counterexample as cx
from . import netdsl
from .asymptotics import EpsGrid, ScalarNet, estimate_order, is_negligible
from .errors import DomainError, ModerationError, NetEvaluationError, TaunetsError
from .gfunction import (
    FunctionNet,
    check_moderate,
    check_negligible,
    evaluate_at_point,
    pointwise_invertibility_sweep,
    reciprocal_test,
    witness_noninvertible_point,
)
from .gnumber import GeneralizedNumber, is_strictly_nonzero
from .gpoint import GeneralizedPoint
from .report import CheckRecord, VerificationReport, witness_dict
from .sampling import XSampleSpec

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_EVAL = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    grid_min_exp: int = 40
    grid_points: int = 37
    dim: int = 1
    j_max: int = 6
    p_max: int = 8
    n_max: int = 16
    m_max: int = 24
    seed: int = 0
    dilation_max: int = 5
    format: str = "json"
    out: str | None = None
    timing: bool = False

    def __post_init__(self):
        for name in ("grid_min_exp", "grid_points", "dim", "j_max", "p_max", "n_max", "m_max"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be positive")
        if self.seed < 0 or self.dilation_max < 0:
            raise DomainError("seed and dilation_max must be non-negative")
        if self.format not in ("json", "csv"):
            raise DomainError("format must be json or csv")

    def grid(self) -> EpsGrid:
        return EpsGrid.geometric(self.grid_min_exp, self.grid_points)

    def echo(self) -> dict:
        d = asdict(self)
        for k in ("out", "format", "timing"):
            d.pop(k)
        return d


def _threads() -> int:
    raw = os.environ.get("TAUNETS_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def _run_parallel(jobs: Sequence[Callable[[], VerificationReport]]) -> list[VerificationReport]:
    n = min(_threads(), len(jobs))
    if n <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda job: job(), jobs))


# ---------------------------------------------------------------------------
# commands


def verify_counterexample_report(config: RunConfig) -> VerificationReport:
    grid = config.grid()
    d = config.dim
    u = cx.counterexample_net(d)

    def classification() -> VerificationReport:
        rep = VerificationReport("classification", {})
        cert = check_moderate(u, grid, n_max=config.n_max)
        rep.add(CheckRecord("u/moderate", cert.ok, True, cert.worst_margin_scaled,
                            witness_dict(cert.witness) if not cert.ok else None, {"N": cert.N}))
        neg = check_negligible(u, grid, p_max=config.p_max, n_max=config.n_max)
        rep.add(CheckRecord("u/negligible", neg.negligible, False, neg.worst_margin_scaled,
                            witness_dict(neg.witness), {"note": "u is not negligible"}))
        return rep

    def global_invertibility() -> VerificationReport:
        rep = VerificationReport("global_invertibility", {})
        v = reciprocal_test(u, grid, n_max=config.n_max, p_max=config.p_max)
        rep.add(CheckRecord("global_invertibility", v.invertible, False,
                            v.moderate.worst_margin_scaled if v.moderate else None,
                            witness_dict(v.witness),
                            {"reason": v.reason,
                             "status": "expected-fail confirmed" if not v.invertible else "unexpected pass"}))
        return rep

    jobs = [
        lambda: cx.verify_estimate_61(grid, config.j_max, d=d, seed=config.seed),
        lambda: cx.verify_estimate_62(grid, d=d, seed=config.seed),
        lambda: cx.verify_band_63(grid, j_max=config.j_max),
        lambda: cx.verify_point_identity(grid, config.j_max),
        lambda: cx.verify_noninvertibility(range(6), grid),
        classification,
        lambda: cx.verify_pointwise_invertibility(grid, config.dilation_max, d, seed=config.seed,
                                                  strict_m_max=config.m_max),
        global_invertibility,
        lambda: cx.verify_gradient(1000, d=max(d, 1), seed=config.seed, min_exp=float(config.grid_min_exp)),
    ]
    report = VerificationReport("verify_counterexample", config.echo())
    parts = _run_parallel(jobs)
    for part in parts:
        report.extend(part)
    pointwise = all(c.verdict for c in parts[6].checks)
    not_global = not parts[7].checks[0].observed
    report.add(CheckRecord("pointwise_invertible_but_not_invertible", pointwise and not_global, True))
    return report


def _compile(config: RunConfig, src: str, as_function: bool = False):
    return netdsl.compile_source(src, config.dim, as_function=as_function)


def _escape_point_witness(f: FunctionNet, grid: EpsGrid, config: RunConfig) -> str | None:
    """First generalized point ``x = eps**-j e_1`` (``j = 1..j_max``, then ``j = 0``)
    at which the value net of ``f`` is not negligible."""
    e1 = np.zeros(config.dim)
    e1[0] = 1.0
    for j in list(range(1, config.j_max + 1)) + [0]:
        def value(eps, j=j):
            out = [f.checked_slog(float(e), (e ** -j) * e1) for e in eps]
            return np.array([o[0][0] for o in out]), np.array([o[1][0] for o in out])

        net = ScalarNet(value, f"{f.label} at eps^-{j}")
        if not is_negligible(net, grid, config.p_max):
            return f"eps^-{j}"
    return None


def classify_report(config: RunConfig, src: str) -> VerificationReport:
    grid = config.grid()
    net = _compile(config, src)
    report = VerificationReport("classify", {**config.echo(), "expr": src})
    spec = XSampleSpec(j_max=config.j_max, seed=config.seed)
    if isinstance(net, FunctionNet):
        cert = check_moderate(net, grid, spec, n_max=config.n_max)
        neg = check_negligible(net, grid, spec, p_max=config.p_max, n_max=config.n_max)
        moderate, negligible = cert.ok, neg.negligible
        report.add(CheckRecord("moderate", moderate, True, cert.worst_margin_scaled,
                               None if moderate else witness_dict(cert.witness), {"N": cert.N}))
        detail = {"N": neg.N}
        if not negligible:
            detail["point_witness"] = _escape_point_witness(net, grid, config)
        report.add(CheckRecord("negligible", negligible, None, neg.worst_margin_scaled,
                               None if negligible else witness_dict(neg.witness), detail))
    else:
        try:
            num = GeneralizedNumber(net, grid, config.n_max)
            moderate, n = True, num.moderate_n
        except ModerationError:
            moderate, n = False, None
        order = estimate_order(net, grid.tail())
        negligible = is_negligible(net, grid, config.p_max)
        report.add(CheckRecord("moderate", moderate, True, None, None, {"N": n, "order": order.slope}))
        report.add(CheckRecord("negligible", negligible, None, None, None, {"order": order.slope}))
    label = "negligible" if negligible else ("moderate" if moderate else "neither")
    report.add(CheckRecord("classification", label, None, detail={"class": label}))
    return report


def invert_check_report(config: RunConfig, src: str) -> VerificationReport:
    grid = config.grid()
    f = _compile(config, src, as_function=True)
    spec = XSampleSpec(j_max=config.j_max, seed=config.seed)
    report = VerificationReport("invert_check", {**config.echo(), "expr": src})
    v = reciprocal_test(f, grid, spec, n_max=config.n_max, p_max=config.p_max)
    report.add(CheckRecord("invertible", v.invertible, None,
                           v.moderate.worst_margin_scaled if v.moderate else None,
                           witness_dict(v.witness), {"reason": v.reason}))
    sweep = pointwise_invertibility_sweep(f, range(config.dilation_max + 1), grid)
    report.add(CheckRecord("pointwise", sweep.ok, None, detail={
        "dilations": [{"m": e.dilation, "ok": e.ok, "N": e.N} for e in sweep.entries]}))
    w = witness_noninvertible_point(f, grid, spec, k_target=config.m_max + 1)
    wdetail = None
    if w is not None:
        wdetail = {"eps": [float(e) for e in grid.eps_values],
                   "x": [[float(c) for c in row] for row in w.values(grid.eps_values)]}
    report.add(CheckRecord("witness_found", w is not None, None, detail={"point": wdetail}))
    consistent = (not v.invertible) or (sweep.ok and w is None)
    report.add(CheckRecord("consistency", consistent, True,
                           detail={"rule": "invertible implies pointwise invertible and no witness"}))
    return report


def eval_point_report(config: RunConfig, src: str, point_src: str) -> VerificationReport:
    grid = config.grid()
    f = _compile(config, src, as_function=True)
    comps = netdsl.parse_vector(point_src, config.dim)
    if any(netdsl.uses_x(c) for c in comps):
        raise netdsl.ParseError(0, "point components in eps only", point_src)
    if len(comps) == 1 and config.dim > 1:
        comps = comps * config.dim
    if len(comps) != config.dim:
        raise netdsl.ParseError(len(point_src.encode()), f"{config.dim} comma separated components", point_src)
    nets = [netdsl.compile_expr(c, config.dim) for c in comps]
    report = VerificationReport("eval_point", {**config.echo(), "expr": src, "point": point_src})
    try:
        point = GeneralizedPoint.from_nets(nets, f.box, grid=grid, label="(" + point_src.strip() + ")")
    except ModerationError as exc:
        report.add(CheckRecord("point_moderate", False, True, detail={"error": str(exc)}))
        return report
    try:
        value = evaluate_at_point(f, point)
    except ModerationError as exc:
        report.add(CheckRecord("value_moderate", False, True, detail={"error": str(exc)}))
        return report
    order = estimate_order(value.rep, grid.tail())
    report.add(CheckRecord("value_moderate", True, True, detail={"N": value.moderate_n}))
    report.add(CheckRecord("order_estimate", order.slope, None, order.residual,
                           detail={"slope": order.slope, "exact_zero": order.exact_zero,
                                   "n_points": order.n_points}))
    ok, m = is_strictly_nonzero(value, config.m_max, seed=config.seed)
    report.add(CheckRecord("strictly_nonzero", ok, None, detail={"m": m}))
    return report


# ---------------------------------------------------------------------------
# argument handling


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    d = RunConfig()
    common.add_argument("--dim", type=int, default=d.dim)
    common.add_argument("--grid-min-exp", type=int, default=d.grid_min_exp,
                        help="smallest eps is 2**-K (default %(default)s)")
    common.add_argument("--grid-points", type=int, default=d.grid_points)
    common.add_argument("--jmax", type=int, default=d.j_max, help="sample radii up to eps**-J")
    common.add_argument("--pmax", type=int, default=d.p_max)
    common.add_argument("--nmax", type=int, default=d.n_max)
    common.add_argument("--mmax", type=int, default=d.m_max)
    common.add_argument("--seed", type=int, default=d.seed)
    common.add_argument("--dilation-max", type=int, default=d.dilation_max,
                        help="unit-ball criterion for dilations 0..M")
    common.add_argument("--out", default=None, help="report path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=d.format)
    common.add_argument("--timing", action="store_true", help="include wall time in the report")

    expr = argparse.ArgumentParser(add_help=False)
    g = expr.add_mutually_exclusive_group(required=True)
    g.add_argument("--expr")
    g.add_argument("--expr-file")

    p = argparse.ArgumentParser(prog="taunets", description="Checks for tempered generalized functions.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-counterexample", parents=[common], help="run the counterexample suites")
    sub.add_parser("classify", parents=[common, expr], help="moderate / negligible / neither")
    sub.add_parser("invert-check", parents=[common, expr], help="global vs pointwise invertibility")
    ep = sub.add_parser("eval-point", parents=[common, expr], help="evaluate at a generalized point")
    ep.add_argument("point", help='comma separated eps-expressions, e.g. "eps^-2, 0.5"')
    return p


def _config(args) -> RunConfig:
    return RunConfig(args.grid_min_exp, args.grid_points, args.dim, args.jmax, args.pmax, args.nmax,
                     args.mmax, args.seed, args.dilation_max, args.format, args.out, args.timing)


def _source(args) -> str:
    if args.expr is not None:
        return args.expr
    with open(args.expr_file, encoding="utf-8") as fh:
        return fh.read()


def _emit(report: VerificationReport, config: RunConfig) -> None:
    text = report.to_json() if config.format == "json" else report.to_csv()
    if config.out is None:
        sys.stdout.write(text)
        return
    with open(config.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    for c in report.checks:
        print(f"{'ok  ' if c.verdict else 'FAIL'} {c.identifier}: {c.observed}")
    print(f"overall: {'pass' if report.overall else 'fail'} -> {config.out}")


def run(config: RunConfig, command: str, src: str | None = None, point: str | None = None) -> VerificationReport:
    t0 = time.perf_counter()
    if command == "verify-counterexample":
        report = verify_counterexample_report(config)
    elif command == "classify":
        report = classify_report(config, src)
    elif command == "invert-check":
        report = invert_check_report(config, src)
    elif command == "eval-point":
        report = eval_point_report(config, src, point)
    else:
        raise DomainError(f"unknown command {command!r}")
    if config.timing:
        report.wall_time = time.perf_counter() - t0
    return report


def cmd_verify_counterexample(config: RunConfig) -> int:
    return _finish(lambda: run(config, "verify-counterexample"), config)


def cmd_classify(config: RunConfig, expr: str) -> int:
    return _finish(lambda: run(config, "classify", expr), config)


def cmd_invert_check(config: RunConfig, expr: str) -> int:
    return _finish(lambda: run(config, "invert-check", expr), config)


def cmd_eval_point(config: RunConfig, expr: str, point: str) -> int:
    return _finish(lambda: run(config, "eval-point", expr, point), config)


def _finish(make: Callable[[], VerificationReport], config: RunConfig) -> int:
    try:
        report = make()
    except netdsl.ParseError as exc:
        print(f"taunets: parse error {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NetEvaluationError, ZeroDivisionError, FloatingPointError) as exc:
        print(f"taunets: evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except (DomainError, ValueError) as exc:
        print(f"taunets: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TaunetsError as exc:
        print(f"taunets: evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    _emit(report, config)
    return EXIT_PASS if report.overall else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        config = _config(args)
        src = _source(args) if args.command != "verify-counterexample" else None
    except (DomainError, OSError) as exc:
        print(f"taunets: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "verify-counterexample":
        return cmd_verify_counterexample(config)
    if args.command == "classify":
        return cmd_classify(config, src)
    if args.command == "invert-check":
        return cmd_invert_check(config, src)
    return cmd_eval_point(config, src, args.point)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
