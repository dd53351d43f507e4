"""Command-line front end.

Subcommands:
  group     exact group arithmetic: mul, inv, dilate
  spectrum  eigenvalues below s at one dual point (CSV)
  count     eigenvalue counts over an s-grid (CSV)
  volume    phase-space volume and Weyl ratio at one dual point (JSON)
  trace     dual-region trace sweep plus growth fit (CSV + JSON)
  bound     multiplier bounds: heat, sobolev, phi (JSON)
  report    one-stop summary for a group (JSON)

All numeric output uses 17 significant digits and artifacts embed the
resolved configuration, never timestamps, so identical invocations
produce identical bytes.  Exit codes: 0 when the requested checks pass,
1 when a check fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import config as cfgmod
from .dualtrace import (
    MEASURE_NOTE,
    check_geometric_grid,
    fit_report,
    fit_values,
    trace_estimate,
)
from .groups import Group, dilate, format_coords, inverse, multiply, parse_coords
from .multiplier import (
    ExponentPair,
    PhiFunction,
    group_exponent,
    heat_decay,
    sobolev_check,
    sup_record,
)
from .representation import DualPoint
from .schrodinger import (
    build_symbol_cartan,
    build_symbol_engel,
    count_at_dual_point,
    discretize,
    eigenvalues_below,
    rescale,
    sturm_count,
    auto_domain,
)
from .weyl import WeylSymbol, counting_bound_check, mc_volume, phase_space_volume, weyl_ratio


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(obj: dict, path: str | None) -> None:
    _emit(json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n", path)


def _csv_text(command: str, meta: dict, header: list[str], rows: list[list[str]]) -> str:
    meta_line = " ".join(f"{k}={v}" for k, v in sorted(meta.items()))
    lines = [f"# nilspec {command}", f"# {meta_line}", ",".join(header)]
    lines.extend(",".join(r) for r in rows)
    return "\n".join(lines) + "\n"


def _group_of(args) -> Group:
    return Group.ENGEL if args.engel else Group.CARTAN


def _dual_point(args) -> DualPoint:
    return DualPoint(_group_of(args), args.lam, args.mu, args.nu)


def _symbol_and_level(point: DualPoint, s: float):
    """Unit-kinetic operator and the matching spectral level.

    Cartan reductions are rescaled by c = lam^2 + mu^2; counting the
    rescaled operator below c*s is exactly counting the original below s.
    """
    if point.group is Group.ENGEL:
        return build_symbol_engel(point.lam, point.mu), float(s), 1.0
    c = point.c
    return rescale(build_symbol_cartan(point.lam, point.mu, point.nu), c), float(c * s), c


def parse_s_spec(text: str) -> list[float]:
    """'100', '1,10,100', or geometric 'LO:HI:COUNT'."""
    if ":" in text:
        lo, hi, count = text.split(":")
        vals = np.geomspace(float(lo), float(hi), int(count)).tolist()
    elif "," in text:
        vals = [float(v) for v in text.split(",")]
    else:
        vals = [float(text)]
    if any(v <= 0 for v in vals) or any(b <= a for a, b in zip(vals[:-1], vals[1:])):
        raise ValueError(f"s values must be positive and increasing, got {text!r}")
    return vals


def _meta_common(args, cfg) -> dict:
    meta = {k: v for k, v in cfgmod.as_dict(cfg).items()}
    meta["command"] = args.command
    return meta


def cmd_group(args) -> int:
    g = _group_of(args)
    ops = args.operands
    if args.action == "mul":
        if len(ops) != 2:
            raise ValueError("mul needs exactly two elements")
        out = multiply(parse_coords(ops[0], g), parse_coords(ops[1], g))
    elif args.action == "inv":
        if len(ops) != 1:
            raise ValueError("inv needs exactly one element")
        out = inverse(parse_coords(ops[0], g))
    else:
        if len(ops) != 2:
            raise ValueError("dilate needs a ratio and one element")
        out = dilate(Fraction(ops[0]), parse_coords(ops[1], g))
    print(format_coords(out))
    return 0


def cmd_spectrum(args) -> int:
    cfg = cfgmod.resolve(args)
    point = _dual_point(args)
    s_vals = parse_s_spec(args.s)
    if len(s_vals) != 1:
        raise ValueError("spectrum takes a single s value")
    s = s_vals[0]
    op, level, scale = _symbol_and_level(point, s)
    dom_L, dom_n = auto_domain(
        op, level, kappa=cfg.kappa, points_per_wave=cfg.points_per_wave, max_n=cfg.max_n
    )
    eigs = eigenvalues_below(discretize(op, dom_L, dom_n), level, tol=cfg.tol) / scale
    meta = _meta_common(args, cfg)
    meta.update(
        group=point.group.value, lam=_fmt(point.lam), mu=_fmt(point.mu), nu=_fmt(point.nu),
        s=_fmt(s), half_width=_fmt(dom_L), n=dom_n,
    )
    rows = [[str(k), _fmt(e)] for k, e in enumerate(eigs)]
    _emit(_csv_text("spectrum", meta, ["index", "eigenvalue"], rows), args.output)
    return 0


def cmd_count(args) -> int:
    cfg = cfgmod.resolve(args)
    point = _dual_point(args)
    s_vals = parse_s_spec(args.s)
    rows = []
    for s in s_vals:
        n = count_at_dual_point(
            point, s, kappa=cfg.kappa, points_per_wave=cfg.points_per_wave, max_n=cfg.max_n
        )
        rows.append([_fmt(s), str(n)])
    meta = _meta_common(args, cfg)
    meta.update(
        group=point.group.value, lam=_fmt(point.lam), mu=_fmt(point.mu), nu=_fmt(point.nu)
    )
    _emit(_csv_text("count", meta, ["s", "count"], rows), args.output)
    return 0


def cmd_volume(args) -> int:
    cfg = cfgmod.resolve(args)
    point = _dual_point(args)
    s_vals = parse_s_spec(args.s)
    if len(s_vals) != 1:
        raise ValueError("volume takes a single s value")
    s = s_vals[0]
    op, level, _ = _symbol_and_level(point, s)
    sym = WeylSymbol(op.potential)
    vol = phase_space_volume(sym, level, rel_tol=cfg.vol_rel_tol)
    count = count_at_dual_point(
        point, s, kappa=cfg.kappa, points_per_wave=cfg.points_per_wave, max_n=cfg.max_n
    )
    exponent = 1.5 if point.group is Group.ENGEL else 2.5
    out = {
        "group": point.group.value,
        "lam": point.lam,
        "mu": point.mu,
        "nu": point.nu,
        "s": s,
        "N": count,
        "volume": vol,
        "ratio": 2.0 * math.pi * count / vol if vol > 0 else None,
        "empirical_constant": count / s**exponent,
        "config": cfgmod.as_dict(cfg),
    }
    if args.mc_check:
        seed = cfg.seed if cfg.seed >= 0 else 0
        est, err = mc_volume(sym, level, n_samples=args.mc_check, seed=seed)
        out["mc_estimate"] = est
        out["mc_stderr"] = err
        out["mc_seed"] = seed
    _emit_json(out, args.output)
    return 0


def cmd_trace(args) -> int:
    cfg = cfgmod.resolve(args)
    group = _group_of(args)
    s_grid = check_geometric_grid(parse_s_spec(args.s_grid))
    nodes = cfg.nodes if cfg.nodes > 0 else None
    estimates = [
        trace_estimate(
            group, s, method=cfg.method, nodes=nodes, rule=cfg.rule, workers=cfg.workers,
            kappa=cfg.kappa, points_per_wave=cfg.points_per_wave, max_n=cfg.max_n,
            vol_rel_tol=cfg.vol_rel_tol, compute_indicator=not args.no_indicator,
        )
        for s in s_grid
    ]
    if args.sweep_out:
        meta = _meta_common(args, cfg)
        meta["group"] = group.value
        rows = [
            [_fmt(e.s), _fmt(e.value), e.method, "x".join(map(str, e.nodes)), _fmt(e.error_indicator)]
            for e in estimates
        ]
        _emit(
            _csv_text("trace", meta, ["s", "estimate", "method", "nodes", "error_indicator"], rows),
            args.sweep_out,
        )
    fit = fit_values(s_grid, [e.value for e in estimates])
    report = fit_report(fit, group)
    report["method"] = cfg.method
    report["error_indicators"] = [e.error_indicator for e in estimates]
    report["config"] = cfgmod.as_dict(cfg)
    _emit_json(report, args.output)
    return 0 if report["pass"] else 1


def _phi_from_args(args) -> PhiFunction:
    chosen = [args.power is not None, args.heat is not None, args.table is not None]
    if sum(chosen) != 1:
        raise ValueError("choose exactly one of --power, --heat, --table")
    if args.power is not None:
        return PhiFunction.power(args.power)
    if args.heat is not None:
        return PhiFunction.heat(args.heat)
    s_vals, phi_vals = [], []
    with open(args.table) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#") or line.lower().startswith("s,"):
                continue
            a, b = line.split(",")
            s_vals.append(float(a))
            phi_vals.append(float(b))
    return PhiFunction.custom(s_vals, phi_vals)


def cmd_bound(args) -> int:
    cfg = cfgmod.resolve(args)
    group = _group_of(args)
    pq = ExponentPair(args.p, args.q)
    if args.kind == "heat":
        C, beta = heat_decay(group, pq)
        out = {
            "group": group.value, "p": pq.p, "q": pq.q, "C": C, "beta": beta,
            "config": cfgmod.as_dict(cfg),
        }
        if args.t is not None:
            if not args.t > 0:
                raise ValueError(f"heat time must be positive, got {args.t}")
            out["t"] = args.t
            out["value_at_t"] = C * args.t ** (-beta)
        _emit_json(out, args.output)
        return 0
    if args.kind == "sobolev":
        if args.a is None or args.b is None:
            raise ValueError("sobolev needs -a and -b regularity orders")
        ok, margin = sobolev_check(group, args.a, args.b, pq)
        out = {
            "group": group.value, "p": pq.p, "q": pq.q, "a": args.a, "b": args.b,
            "threshold": group_exponent(group) * pq.inv_r, "margin": margin, "pass": ok,
            "config": cfgmod.as_dict(cfg),
        }
        _emit_json(out, args.output)
        return 0 if ok else 1
    phi = _phi_from_args(args)
    rec = sup_record(phi, group, pq)
    rec["config"] = cfgmod.as_dict(cfg)
    _emit_json(rec, args.output)
    return 0 if rec["finite"] else 1


def cmd_report(args) -> int:
    cfg = cfgmod.resolve(args)
    group = _group_of(args)
    s = args.s
    if not s > 100.0:
        raise ValueError(f"report needs s > 100 for a two-decade sweep, got {s}")
    if group is Group.ENGEL:
        points = [DualPoint(group, 1.0, 0.0), DualPoint(group, 1.0, 2.0)]
    else:
        points = [DualPoint(group, 1.0, 1.0, 0.0)]
    # the potentials carry constant floors (lam^2 + 1/lam^2 and its Cartan
    # analogue), so the trace vanishes identically at small s; keep the
    # sweep above that threshold or the log-log fit has nothing to fit
    s_grid = np.geomspace(max(s / 100.0, 20.0), s, 5).tolist()
    counting = counting_bound_check(
        group, points, s_grid,
        kappa=cfg.kappa, points_per_wave=cfg.points_per_wave, max_n=cfg.max_n,
    )
    pt = points[0]
    op, level, _ = _symbol_and_level(pt, s)
    ratio = weyl_ratio(
        op, level, kappa=cfg.kappa, points_per_wave=cfg.points_per_wave, max_n=cfg.max_n
    )
    nodes = cfg.nodes if cfg.nodes > 0 else (12 if group is Group.ENGEL else 8)
    estimates = [
        trace_estimate(
            group, sv, method=cfg.method, nodes=nodes, rule=cfg.rule, workers=cfg.workers,
            kappa=cfg.kappa, points_per_wave=cfg.points_per_wave, max_n=cfg.max_n,
            vol_rel_tol=cfg.vol_rel_tol, compute_indicator=False,
        )
        for sv in s_grid
    ]
    trace = fit_report(fit_values(s_grid, [e.value for e in estimates]), group)
    pq = ExponentPair(4.0 / 3.0, 4.0)
    C, beta = heat_decay(group, pq)
    out = {
        "group": group.value,
        "s": s,
        "weyl": {"lam": pt.lam, "mu": pt.mu, "nu": pt.nu, "ratio": ratio},
        "counting": counting,
        "trace": trace,
        "heat": {"p": pq.p, "q": pq.q, "C": C, "beta": beta},
        "assumption": MEASURE_NOTE,
        "config": cfgmod.as_dict(cfg),
    }
    if cfg.seed >= 0:
        sym = WeylSymbol(op.potential)
        est, err = mc_volume(sym, level, seed=cfg.seed)
        vol = phase_space_volume(sym, level, rel_tol=cfg.vol_rel_tol)
        out["mc_check"] = {"seed": cfg.seed, "volume": vol, "mc_estimate": est, "mc_stderr": err}
    _emit_json(out, args.output)
    return 0 if counting["pass"] and trace["pass"] else 1


def _add_group_switch(sp) -> None:
    mx = sp.add_mutually_exclusive_group(required=True)
    mx.add_argument("--engel", action="store_true", help="use the Engel group")
    mx.add_argument("--cartan", action="store_true", help="use the Cartan group")


def _add_dual_flags(sp) -> None:
    sp.add_argument("-l", "--lam", type=float, required=True, help="dual parameter lam")
    sp.add_argument("-m", "--mu", type=float, default=0.0, help="dual parameter mu")
    sp.add_argument("-n", "--nu", type=float, default=0.0, help="dual parameter nu (Cartan)")


def _add_config_flags(sp) -> None:
    sp.add_argument("--config", help="TOML config file (overrides flags); or NILSPEC_CONFIG")
    sp.add_argument("--kappa", type=float, help="domain safety factor (default 4)")
    sp.add_argument("--points-per-wave", dest="points_per_wave", type=int,
                    help="grid points per shortest wavelength (default 10)")
    sp.add_argument("--tol", type=float, help="eigenvalue bracket width (default 1e-8)")
    sp.add_argument("--max-n", dest="max_n", type=int, help="grid size cap (default 2^21)")
    sp.add_argument("--vol-rel-tol", dest="vol_rel_tol", type=float,
                    help="phase-space quadrature tolerance (default 1e-8)")
    sp.add_argument("--workers", type=int, help="parallel workers (default 1)")
    sp.add_argument("--nodes", type=int, help="quadrature nodes per dual axis")
    sp.add_argument("--rule", choices=["gauss", "midpoint"], help="dual quadrature rule")
    sp.add_argument("--method", choices=["volume_bound", "eigen_count"], help="trace integrand")
    sp.add_argument("--seed", type=int, help="seed for Monte Carlo cross-checks")
    sp.add_argument("-o", "--output", help="write the primary artifact here (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nilspec",
        description="Spectral counting, trace growth, and multiplier bounds "
        "for the Engel and Cartan model operators.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("group", help="exact group arithmetic")
    _add_group_switch(sp)
    sp.add_argument("action", choices=["mul", "inv", "dilate"])
    sp.add_argument("operands", nargs="+",
                    help="comma-separated rational coordinates; dilate takes ratio first")
    sp.set_defaults(func=cmd_group)

    sp = sub.add_parser("spectrum", help="eigenvalues below s at a dual point (CSV)")
    _add_group_switch(sp)
    _add_dual_flags(sp)
    sp.add_argument("-s", required=True, help="spectral level")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("count", help="eigenvalue counts over an s-grid (CSV)")
    _add_group_switch(sp)
    _add_dual_flags(sp)
    sp.add_argument("-s", required=True, help="s value, comma list, or LO:HI:COUNT")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("volume", help="phase-space volume and Weyl ratio (JSON)")
    _add_group_switch(sp)
    _add_dual_flags(sp)
    sp.add_argument("-s", required=True, help="spectral level")
    sp.add_argument("--mc-check", type=int, default=0, metavar="N",
                    help="add a seeded Monte Carlo volume check with N samples")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("trace", help="dual-region trace sweep and growth fit")
    _add_group_switch(sp)
    sp.add_argument("--s-grid", dest="s_grid", required=True, help="geometric grid LO:HI:COUNT")
    sp.add_argument("--sweep-out", help="also write the per-s sweep CSV here")
    sp.add_argument("--no-indicator", action="store_true",
                    help="skip the half-node error indicator (faster)")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("bound", help="multiplier bounds (JSON)")
    sp.add_argument("kind", choices=["heat", "sobolev", "phi"])
    _add_group_switch(sp)
    sp.add_argument("-p", type=float, required=True)
    sp.add_argument("-q", type=float, required=True)
    sp.add_argument("-t", type=float, help="heat time")
    sp.add_argument("-a", type=float, help="source regularity (sobolev)")
    sp.add_argument("-b", type=float, help="target regularity (sobolev)")
    sp.add_argument("--power", type=float, help="phi(s) = (1+s)^-decay")
    sp.add_argument("--heat", type=float, help="phi(s) = exp(-time s)")
    sp.add_argument("--table", help="phi from a CSV table of s,phi rows")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("report", help="summary report for one group (JSON)")
    _add_group_switch(sp)
    sp.add_argument("-s", type=float, default=200.0, help="top of the sweep (default 200)")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_report)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
