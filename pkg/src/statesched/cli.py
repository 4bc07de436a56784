"""Command-line interface.

Exit codes: 0 success, 1 unschedulable or infeasible verdict (or a
simulation with audit violations), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import dualcurve, minplus
from .cumulative import INF
from .errors import InfeasibleError, PreconditionError, StateSchedError
from .minplus import MinPlusService
from .polymatroid import distinct_vertices
from .scheduler import SlotView, eta, eta_partition, rho, schedulability
from .serialization import service_from_json, service_to_json, system_from_json
from .sim import ScenarioConfig, run
from .worstcase import EnumBounds

MAX_VERTEX_FLOWS = 8


class UsageError(Exception):
    pass


def _load(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _frac(x) -> str:
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _partition(text: str | None, obj: dict) -> list[int] | None:
    if text:
        classes = []
        for part in text.split(";"):
            mask = 0
            for item in part.split(","):
                mask |= 1 << int(item)
            classes.append(mask)
        return classes
    raw = obj.get("partition")
    return None if raw is None else [int(m) for m in raw]


def cmd_check(args) -> int:
    obj = _load(args.system)
    system = system_from_json(obj)
    verdict = schedulability(system)
    report = {"flows": system.ids, "capacity": system.capacity, **verdict.to_json()}
    report["rho"] = {fid: _frac(rho(system, 1 << i)) for i, fid in enumerate(system.ids)}
    report["rho_total"] = _frac(rho(system))
    try:
        report["eta"] = _frac(eta(system))
        classes = _partition(args.partition, obj)
        if classes is not None:
            report["partition"] = classes
            report["eta_partition"] = _frac(eta_partition(system, classes))
    except StateSchedError as exc:
        report["eta"] = None
        report["note"] = str(exc)
    _emit(report)
    return 0 if verdict.schedulable else 1


def cmd_simulate(args) -> int:
    obj = _load(args.scenario)
    config = ScenarioConfig.from_json(obj, seed=args.seed)
    if args.horizon is not None:
        config.horizon = args.horizon
    if args.policy is not None:
        config.policy = args.policy
        config.validate()
    out_dir = Path(args.out_dir) if args.out_dir else Path.cwd()
    trace_path = Path(args.trace or config.trace_path or out_dir / "trace.csv")
    metrics_path = Path(args.metrics or config.metrics_path or out_dir / "metrics.json")
    try:
        result = run(config)
    except (InfeasibleError, PreconditionError) as exc:
        print(f"simulation aborted: {exc}", file=sys.stderr)
        return 1
    result.write(trace_path, metrics_path)
    m = result.metrics
    summary = {k: m[k] for k in ("slots", "policy", "max_backlog", "max_delay", "deadline_misses", "violations")}
    summary.update(trace=str(trace_path), metrics=str(metrics_path))
    _emit(summary)
    return 0 if result.violations == 0 and m["deadline_misses"] == 0 else 1


def cmd_hull(args) -> int:
    system = system_from_json(_load(args.system))
    bounds = EnumBounds(args.horizon, 0)
    hulls = minplus.spectral_hull(system.services, bounds)
    out = []
    for fid, S in zip(system.ids, hulls):
        if args.dual_curve:
            out.append({"id": fid, "service": dualcurve.hull_from_spectral(S).to_json()})
        else:
            out.append({"id": fid, "service": MinPlusService.from_spectral(S).to_json()})
    _emit({"capacity": system.capacity, "flows": out})
    return 0


def cmd_vertices(args) -> int:
    obj = _load(args.system)
    system = system_from_json(obj)
    if system.n > MAX_VERTEX_FLOWS:
        raise UsageError(f"vertex enumeration supports at most {MAX_VERTEX_FLOWS} flows")
    if args.arrivals is not None:
        arrivals = [int(x) for x in args.arrivals.split(",")]
    else:
        arrivals = [int(x) for x in obj.get("arrivals", [0] * system.n)]
    if len(arrivals) != system.n:
        raise UsageError("one arrival count per flow is required")
    verdict = schedulability(system)
    if not verdict:
        _emit({"error": "system is not schedulable", **verdict.to_json()})
        return 1
    view = SlotView(system, arrivals)
    try:
        chi = view.baseline_mu(args.mu)
    except InfeasibleError as exc:
        lo, hi = exc.witness
        _emit({"error": str(exc), "feasible_range": [lo, hi]})
        return 1
    _emit({
        "flows": system.ids,
        "mu": args.mu,
        "baseline": list(view.baseline.values),
        "vertices": [list(v) for v in distinct_vertices(chi)],
    })
    return 0


def _as_service(obj):
    return service_from_json(obj.get("service", obj))


def cmd_compose(args) -> int:
    first, second = _as_service(_load(args.first)), _as_service(_load(args.second))
    if isinstance(first, dualcurve.DualCurve) and isinstance(second, dualcurve.DualCurve):
        _emit(service_to_json(dualcurve.compose(first, second)))
        return 0
    horizons = [s.matrix.g for s in (first, second) if isinstance(s, MinPlusService)]
    g = args.horizon or max(horizons, default=minplus.DEFAULT_HORIZON)

    def matrix(s):
        if isinstance(s, MinPlusService):
            if s.matrix.g != g:
                raise UsageError("min-plus services must share the horizon g")
            return s.matrix
        if isinstance(s, dualcurve.DualCurve):
            return dualcurve.to_matrix(s, g)
        raise UsageError(f"cannot compose a {s.kind} service")

    M = minplus.compose(matrix(first), matrix(second), second.b)
    _emit(service_to_json(MinPlusService(M, first.b + second.b)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="statesched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="schedulability and capacity report")
    p.add_argument("system")
    p.add_argument("--partition", help="classes as '0,1;2' (flow indices)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("simulate", help="run a scenario and write trace.csv and metrics.json")
    p.add_argument("scenario")
    p.add_argument("--horizon", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--policy", help="max_slack, edf, fair, vertex[:i,j,..] or gps[:w1,w2,..]")
    p.add_argument("--trace")
    p.add_argument("--metrics")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("hull", help="spectral or dual-curve hull of every flow")
    p.add_argument("system")
    p.add_argument("--dual-curve", action="store_true")
    p.add_argument("--horizon", type=int, default=8, help="horizon for services without one")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("vertices", help="vertices of the feasible region for a total of MU tasks")
    p.add_argument("system")
    p.add_argument("--mu", type=int, required=True)
    p.add_argument("--arrivals", help="comma-separated arrivals (default: the file's 'arrivals')")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("compose", help="service of two servers in tandem (first feeds second)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--horizon", type=int)
    p.set_defaults(func=cmd_compose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, StateSchedError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
