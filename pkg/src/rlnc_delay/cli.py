"""Command-line front end.

Subcommands:

* ``theory``    exact pmf/cdf tables, outage, capped averages and bounds;
* ``simulate``  Monte Carlo campaigns with deterministic seeding;
* ``figure``    canned parameter studies (fig2..fig6) written as CSV;
* ``sweep``     Cartesian evaluation driven by a key=value spec file.

Exit codes: 0 success, 2 usage or configuration error, 3 runtime numerical
error.  The environment variable RLNC_DELAY_THREADS provides the default
for --threads.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field as dc_field

from . import theory
from .field import FieldSpec
from .results import ResultRow, format_rows
from .sim import run_campaign, run_multi_receiver
from .theory import ChannelSpec, CodeConfig, Scheme

_SCHEMES = [s.value for s in Scheme]


def _env_threads() -> int | None:
    raw = os.environ.get("RLNC_DELAY_THREADS")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"RLNC_DELAY_THREADS must be an integer, got {raw!r}") from None


def _add_theory_flags(p: argparse.ArgumentParser):
    p.add_argument("--K", type=int, required=True, help="generation size")
    p.add_argument("--q", type=int, required=True, help="field order")
    p.add_argument("--omega-max", type=int, required=True, dest="omega_max",
                   help="permissible overhead Omega (deadline N = K + Omega)")
    p.add_argument("--epsilon", type=float, required=True,
                   help="packet erasure probability")
    p.add_argument("--scheme", choices=_SCHEMES, default="nonsys")
    p.add_argument("--out", default="-", help="output path, - for stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def _add_sim_flags(p: argparse.ArgumentParser):
    p.add_argument("--generations", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0, help="campaign master seed")
    p.add_argument("--receivers", type=int, default=1)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: RLNC_DELAY_THREADS or all cores)")


def _emit(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _bound_rows(K: int, q: int, epsilon: float, Omega: int | None) -> list[ResultRow]:
    if epsilon >= 1.0:
        return []
    lower, upper = theory.decoding_delay_bounds(q, K, epsilon)
    base = dict(source="bound", K=K, q=q, epsilon=epsilon, Omega=Omega)
    rows = [
        ResultRow(quantity="lower_bound", value=lower, **base),
        ResultRow(quantity="upper_bound", value=upper, **base),
    ]
    if K >= 2:
        rows.append(ResultRow(quantity="lucani_upper_bound",
                              value=theory.lucani_upper_bound(q, K, epsilon), **base))
    return rows


def _theory_rows(cfg: CodeConfig, ch: ChannelSpec, label: str | None = None) -> list[ResultRow]:
    base = dict(source="theory", scheme=cfg.scheme.value, K=cfg.K, Omega=cfg.Omega,
                q=cfg.q, epsilon=ch.epsilon, label=label)
    summary = theory.avg_transmissions(cfg, ch)
    return [
        ResultRow(quantity="avg_transmissions", value=summary.avg_transmissions, **base),
        ResultRow(quantity="avg_overhead", value=summary.avg_overhead, **base),
        ResultRow(quantity="outage", value=summary.outage, **base),
    ]


def cmd_theory(args) -> int:
    cfg = CodeConfig(args.K, args.omega_max, args.q, args.scheme)
    ch = ChannelSpec(args.epsilon)
    dist = theory.overhead_distribution(cfg, ch)
    base = dict(source="theory", scheme=cfg.scheme.value, K=cfg.K, Omega=cfg.Omega,
                q=cfg.q, epsilon=ch.epsilon)
    rows = []
    for w in range(cfg.Omega + 1):
        rows.append(ResultRow(quantity="pmf", omega=w, value=float(dist.pmf[w]), **base))
    for w in range(cfg.Omega + 1):
        rows.append(ResultRow(quantity="cdf", omega=w, value=float(dist.cdf[w]), **base))
    rows.extend(_theory_rows(cfg, ch))
    rows.extend(_bound_rows(cfg.K, cfg.q, ch.epsilon, cfg.Omega))
    _emit(format_rows(rows, args.format), args.out)
    return 0


def _campaign_rows(res, cfg: CodeConfig, ch: ChannelSpec, receiver: str | None,
                   label: str | None = None) -> list[ResultRow]:
    base = dict(source="simulation", scheme=cfg.scheme.value, K=cfg.K,
                Omega=cfg.Omega, q=cfg.q, epsilon=ch.epsilon,
                generations=res.generations, seed=res.master_seed,
                receiver=receiver, label=label)
    g = res.generations
    rows = []
    for w in range(cfg.Omega + 1):
        p = float(res.empirical_pmf[w])
        rows.append(ResultRow(quantity="empirical_pmf", omega=w, value=p,
                              stderr=math.sqrt(p * (1.0 - p) / g), **base))
    rows.append(ResultRow(quantity="empirical_outage", value=res.empirical_outage,
                          stderr=math.sqrt(res.empirical_outage * (1.0 - res.empirical_outage) / g),
                          **base))
    rows.append(ResultRow(quantity="empirical_avg_transmissions",
                          value=res.empirical_avg_transmissions, stderr=res.stderr, **base))
    return rows


def cmd_simulate(args) -> int:
    cfg = CodeConfig(args.K, args.omega_max, args.q, args.scheme)
    ch = ChannelSpec(args.epsilon)
    fld = FieldSpec(args.q)
    threads = args.threads if args.threads is not None else _env_threads()
    if args.generations < 1:
        raise ValueError(f"--generations must be >= 1, got {args.generations}")
    if args.receivers < 1:
        raise ValueError(f"--receivers must be >= 1, got {args.receivers}")
    if args.receivers == 1:
        res = run_campaign(cfg, ch, fld, args.generations, args.seed, threads=threads)
        rows = _campaign_rows(res, cfg, ch, receiver=None)
    else:
        multi = run_multi_receiver(cfg, [ch] * args.receivers, fld,
                                   args.generations, args.seed, threads=threads)
        rows = []
        for r, res in enumerate(multi.per_receiver):
            rows.extend(_campaign_rows(res, cfg, ch, receiver=str(r)))
        sys_base = dict(source="simulation", scheme=cfg.scheme.value, K=cfg.K,
                        Omega=cfg.Omega, q=cfg.q, epsilon=ch.epsilon,
                        generations=multi.generations, seed=multi.master_seed,
                        receiver="system")
        g = multi.generations
        for w, count in enumerate(multi.system_delay_hist):
            rows.append(ResultRow(quantity="system_delay_pmf", omega=w,
                                  value=count / g, **sys_base))
        rows.append(ResultRow(quantity="system_outage", value=multi.system_outage, **sys_base))
        rows.append(ResultRow(quantity="system_avg_delay", value=multi.system_avg_delay, **sys_base))
    _emit(format_rows(rows, args.format), args.out)
    return 0


def _unconstrained_summary(K: int, q: int, scheme: str, epsilon: float) -> theory.DelaySummary:
    """Average transmissions with Omega grown until outage is negligible."""
    Omega = 2 * K
    while True:
        cfg = CodeConfig(K, Omega, q, scheme)
        summary = theory.avg_transmissions(cfg, ChannelSpec(epsilon))
        if summary.outage < 1e-9 or Omega > 65536:
            return summary
        Omega *= 2


def _fig2_rows(args) -> list[ResultRow]:
    K = 30
    epsilon = args.epsilon if args.epsilon is not None else 0.0
    rows = []
    for q in range(2, 257):
        base = dict(source="bound", K=K, q=q, epsilon=epsilon)
        lower, upper = theory.decoding_delay_bounds(q, K, epsilon)
        b1, b2 = theory._lucani_components(q, K, epsilon)
        rows.append(ResultRow(quantity="upper_bound", value=upper, **base))
        rows.append(ResultRow(quantity="lucani_bound_1", value=b1, **base))
        rows.append(ResultRow(quantity="lucani_bound_2", value=b2, **base))
        rows.append(ResultRow(quantity="lower_bound", value=lower, **base))
    return rows


def _fig3_rows(args) -> list[ResultRow]:
    rows = []
    eps_grid = [round(0.05 * i, 2) for i in range(11)]
    for q in (2, 4):
        for K in (20, 25, 30):
            for eps in eps_grid:
                for scheme in _SCHEMES:
                    s = _unconstrained_summary(K, q, scheme, eps)
                    rows.append(ResultRow(source="theory", scheme=scheme, K=K, q=q,
                                          epsilon=eps, quantity="avg_transmissions",
                                          value=s.avg_transmissions))
                rows.extend(_bound_rows(K, q, eps, None))
    return rows


def _fig4_rows(args) -> list[ResultRow]:
    generations = args.generations if args.generations is not None else 20000
    seed = args.seed if args.seed is not None else 1234
    threads = args.threads if args.threads is not None else _env_threads()
    rows = []
    eps_grid = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5]
    for q in (2, 4):
        fld = FieldSpec(q)
        for Omega in (6, 15):
            for eps in eps_grid:
                ch = ChannelSpec(eps)
                for scheme in _SCHEMES:
                    cfg = CodeConfig(30, Omega, q, scheme)
                    rows.extend(_theory_rows(cfg, ch))
                    res = run_campaign(cfg, ch, fld, generations, seed, threads=threads)
                    rows.extend(_campaign_rows(res, cfg, ch, receiver=None))
    return rows


def _fig5_rows(args) -> list[ResultRow]:
    epsilon = args.epsilon if args.epsilon is not None else 0.1
    ch = ChannelSpec(epsilon)
    rows = []
    for q in (2, 4):
        for K in range(10, 31):
            for scheme in _SCHEMES:
                cfg = CodeConfig(K, math.floor(1.5 * K) - K, q, scheme)
                rows.extend(_theory_rows(cfg, ch))
    return rows


def _fig6_rows(args) -> list[ResultRow]:
    epsilon = args.epsilon if args.epsilon is not None else 0.1
    ch = ChannelSpec(epsilon)
    rows = []
    for K in (20, 60, 100):
        for q in (2, 4, 16):
            for Omega in range(K // 2 + 1):
                cfg = CodeConfig(K, Omega, q, Scheme.NON_SYSTEMATIC)
                summary = theory.avg_transmissions(cfg, ch)
                rows.append(ResultRow(source="theory", scheme="nonsys", K=K, q=q,
                                      epsilon=epsilon, Omega=Omega,
                                      quantity="avg_overhead", value=summary.avg_overhead))
    return rows


_FIGURES = {
    "fig2": _fig2_rows,
    "fig3": _fig3_rows,
    "fig4": _fig4_rows,
    "fig5": _fig5_rows,
    "fig6": _fig6_rows,
}


def cmd_figure(args) -> int:
    rows = _FIGURES[args.name](args)
    os.makedirs(args.out_dir, exist_ok=True)
    path = os.path.join(args.out_dir, f"{args.name}.csv")
    _emit(format_rows(rows, "csv"), path)
    return 0


class SweepSpecError(ValueError):
    """Raised for malformed sweep specification files."""


_AXES = ("epsilon", "Omega", "K", "q")


@dataclass
class SweepSpec:
    """Parsed sweep file: vary `axis` over `points`, hold the rest fixed."""

    axis: str
    points: list[tuple[str | None, float | int]]
    fixed: dict = dc_field(default_factory=dict)
    schemes: list[str] = dc_field(default_factory=lambda: list(_SCHEMES))
    simulate: bool = False
    generations: int = 10000
    seed: int = 0
    receivers: int = 1


def _parse_axis_value(axis: str, text: str, lineno: int):
    try:
        return float(text) if axis == "epsilon" else int(text)
    except ValueError:
        raise SweepSpecError(f"line {lineno}: bad value {text!r} for axis {axis}") from None


def parse_sweep_spec(text: str) -> SweepSpec:
    """Parse the key=value sweep format.

    Required keys: `axis` (epsilon|Omega|K|q), the axis points (either
    `values = v1, v2, ...` with optional `label:value` entries, or
    `start/stop/step`), and every CodeConfig/ChannelSpec key other than the
    axis itself (K, Omega, q, epsilon).  Optional: `schemes` (subset of
    nonsys,sys), `simulate` (yes/no), `generations`, `seed`, `receivers`.
    """
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SweepSpecError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise SweepSpecError(f"line {lineno}: expected key = value, got {raw!r}")
        if key in entries:
            raise SweepSpecError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = (value, lineno)

    if "axis" not in entries:
        raise SweepSpecError("missing required key 'axis'")
    axis, axis_line = entries.pop("axis")
    if axis not in _AXES:
        raise SweepSpecError(f"line {axis_line}: axis must be one of {', '.join(_AXES)}")

    points: list[tuple[str | None, float | int]] = []
    if "values" in entries:
        text_values, lineno = entries.pop("values")
        for item in text_values.split(","):
            item = item.strip()
            if not item:
                raise SweepSpecError(f"line {lineno}: empty entry in values list")
            label, sep, num = item.rpartition(":")
            points.append((label if sep else None,
                           _parse_axis_value(axis, num, lineno)))
    elif {"start", "stop", "step"} <= entries.keys():
        start, l1 = entries.pop("start")
        stop, _ = entries.pop("stop")
        step, _ = entries.pop("step")
        start = _parse_axis_value(axis, start, l1)
        stop = _parse_axis_value(axis, stop, l1)
        step = _parse_axis_value(axis, step, l1)
        if step <= 0:
            raise SweepSpecError(f"line {l1}: step must be positive")
        if axis == "epsilon":
            count = int(round((stop - start) / step)) + 1
            points = [(None, round(start + i * step, 12)) for i in range(count)
                      if start + i * step <= stop + 1e-12]
        else:
            points = [(None, v) for v in range(start, stop + 1, step)]
    else:
        raise SweepSpecError("missing axis points: provide 'values' or start/stop/step")
    if not points:
        raise SweepSpecError("axis points list is empty")

    spec = SweepSpec(axis=axis, points=points)
    for key in ("K", "Omega", "q"):
        if key in entries:
            value, lineno = entries.pop(key)
            try:
                spec.fixed[key] = int(value)
            except ValueError:
                raise SweepSpecError(f"line {lineno}: {key} must be an integer") from None
    if "epsilon" in entries:
        value, lineno = entries.pop("epsilon")
        try:
            spec.fixed["epsilon"] = float(value)
        except ValueError:
            raise SweepSpecError(f"line {lineno}: epsilon must be a number") from None
    if "schemes" in entries:
        value, lineno = entries.pop("schemes")
        schemes = [s.strip() for s in value.split(",") if s.strip()]
        for s in schemes:
            if s not in _SCHEMES:
                raise SweepSpecError(f"line {lineno}: unknown scheme {s!r}")
        spec.schemes = schemes
    if "simulate" in entries:
        value, lineno = entries.pop("simulate")
        low = value.lower()
        if low in ("yes", "true", "1"):
            spec.simulate = True
        elif low in ("no", "false", "0"):
            spec.simulate = False
        else:
            raise SweepSpecError(f"line {lineno}: simulate must be yes or no")
    for key in ("generations", "seed", "receivers"):
        if key in entries:
            value, lineno = entries.pop(key)
            try:
                setattr(spec, key, int(value))
            except ValueError:
                raise SweepSpecError(f"line {lineno}: {key} must be an integer") from None
    if entries:
        key = next(iter(entries))
        raise SweepSpecError(f"line {entries[key][1]}: unknown key {key!r}")

    for key in ("K", "Omega", "q", "epsilon"):
        if key != axis and key not in spec.fixed:
            raise SweepSpecError(f"missing required key {key!r} (fixed parameters)")
    return spec


def cmd_sweep(args) -> int:
    with open(args.spec) as fh:
        spec = parse_sweep_spec(fh.read())
    threads = args.threads if args.threads is not None else _env_threads()
    rows = []
    fld = None
    for label, value in spec.points:
        params = dict(spec.fixed)
        params[spec.axis] = value
        ch = ChannelSpec(params["epsilon"])
        for scheme in spec.schemes:
            cfg = CodeConfig(params["K"], params["Omega"], params["q"], scheme)
            rows.extend(_theory_rows(cfg, ch, label=label))
            if spec.simulate:
                if fld is None or fld.q != cfg.q:
                    fld = FieldSpec(cfg.q)
                if spec.receivers == 1:
                    res = run_campaign(cfg, ch, fld, spec.generations, spec.seed,
                                       threads=threads)
                    rows.extend(_campaign_rows(res, cfg, ch, receiver=None, label=label))
                else:
                    multi = run_multi_receiver(cfg, [ch] * spec.receivers, fld,
                                               spec.generations, spec.seed,
                                               threads=threads)
                    for r, res in enumerate(multi.per_receiver):
                        rows.extend(_campaign_rows(res, cfg, ch, receiver=str(r),
                                                   label=label))
        if ch.epsilon < 1.0:
            rows.extend(_bound_rows(params["K"], params["q"], params["epsilon"],
                                    params["Omega"]))
    _emit(format_rows(rows, args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rlnc-delay",
        description="Delay and outage statistics for deadline-constrained "
                    "random linear network coding over erasure channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_theory = sub.add_parser("theory", help="exact distributions, averages and bounds")
    _add_theory_flags(p_theory)
    p_theory.set_defaults(func=cmd_theory)

    p_sim = sub.add_parser("simulate", help="Monte Carlo campaigns")
    _add_theory_flags(p_sim)
    _add_sim_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_fig = sub.add_parser("figure", help="canned parameter studies as CSV")
    p_fig.add_argument("name", choices=sorted(_FIGURES))
    p_fig.add_argument("--out-dir", default=".", dest="out_dir")
    p_fig.add_argument("--epsilon", type=float, default=None,
                       help="override the study's erasure probability")
    p_fig.add_argument("--generations", type=int, default=None)
    p_fig.add_argument("--seed", type=int, default=None)
    p_fig.add_argument("--threads", type=int, default=None)
    p_fig.set_defaults(func=cmd_figure)

    p_sweep = sub.add_parser("sweep", help="evaluate a key=value sweep spec file")
    p_sweep.add_argument("spec", help="path to the sweep specification")
    p_sweep.add_argument("--out", default="-")
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--threads", type=int, default=None)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SweepSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
