"""Command-line experiment runner.

    psea analyze|simulate|sweep|optimize|compare --config FILE [--out CSV] [--seed N] [--self-check]

Exit status: 0 on success, 2 for configuration errors, 3 for numerical
failures (singular chain, self-check disagreement).
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from .channel import outage_threshold, snr_constants
from .config import parse_config
from .errors import ConfigError, NumericalInstabilityError, PseaError, SingularChainError
from .optimize import optimize_ps_ea, optimize_ps_noea, optimize_ts_ea
from .sim import run_simulation
from .throughput import phi, phi_numerical, throughput_ps_ea, throughput_ts_ea

__all__ = ["main", "cmd_analyze", "cmd_simulate", "cmd_sweep", "cmd_optimize", "cmd_compare"]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
SELF_CHECK_RTOL = 1e-6


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else str(x)
    return str(x)


def _write_csv(cfg, header, rows, out):
    """Write ``rows`` with a provenance comment and a header; return the text."""
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(cfg.resolved(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    text = buf.getvalue()
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text


def _analytical(cfg):
    params, battery = cfg.system_params(), cfg.battery()
    scheme = cfg.values["scheme"]
    if scheme == "ps-ea":
        return throughput_ps_ea(params, battery)
    if scheme == "ts-ea":
        return throughput_ts_ea(params, battery)
    return None


def self_check(cfg):
    """Compare the closed-form link terms against quadrature at ``cfg``'s operating point."""
    params, battery = cfg.system_params(), cfg.battery()
    lam = 0.0 if cfg.values["scheme"] == "ts-ea" else None
    c = snr_constants(params, battery.relay_power, lam=lam)
    fading = (params.m_a, params.omega_a, params.m_b, params.omega_b)
    cases = [
        (c.gbar_r * c.gbar_b, c.gbar_r + c.gbar_a, c.gbar_b, outage_threshold(params.sigma_b)),
        (c.gbar_r * c.gbar_a, c.gbar_a, c.gbar_r + c.gbar_b, outage_threshold(params.sigma_a)),
    ]
    for args in cases:
        closed, numeric = phi(*args, *fading), phi_numerical(*args, *fading)
        if abs(closed - numeric) > SELF_CHECK_RTOL * max(abs(numeric), 1e-300) and numeric > 1e-10:
            raise NumericalInstabilityError(
                f"self-check failed: closed form {closed!r} vs quadrature {numeric!r}"
            )


def cmd_analyze(cfg, out=None, check=False, stream=sys.stdout):
    if check:
        self_check(cfg)
    res = _analytical(cfg)
    if res is None:
        raise ConfigError("analyze needs scheme ps-ea or ts-ea; ps-noea is simulation-only", key="scheme")
    battery = cfg.battery()
    pi = res.pi
    mean_level = float(sum(i * p for i, p in enumerate(pi)))
    print(f"scheme        {cfg.values['scheme']}", file=stream)
    print(f"psi           {res.psi:.10g} bit/s/Hz", file=stream)
    print(f"p_mode2       {res.p_mode2:.10g}", file=stream)
    print(f"phi_a         {res.phi_a:.10g}", file=stream)
    print(f"phi_b         {res.phi_b:.10g}", file=stream)
    print(f"relay power   {battery.relay_power:.6g} W (delta={battery.delta}, L={battery.levels})", file=stream)
    print(f"pi            mean level {mean_level:.4g}, pi_0={pi[0]:.4g}, pi_L={pi[-1]:.4g}", file=stream)
    if out:
        _write_csv(cfg, ["level", "pi"], list(enumerate(float(p) for p in pi)), out)
    return res


def cmd_simulate(cfg, out=None, check=False, stream=sys.stdout):
    res = run_simulation(cfg.sim_config(), cfg.system_params(), cfg.battery())
    print(f"scheme        {cfg.values['scheme']} ({cfg.values['battery_mode']} battery)", file=stream)
    print(f"psi_hat       {res.psi_hat:.10g} +/- {res.std_err:.3g} bit/s/Hz", file=stream)
    print(f"p_mode2_hat   {res.p_mode2_hat:.10g}", file=stream)
    print(f"blocks        {res.n_blocks} (seed {cfg.values['seed']})", file=stream)
    if out:
        if res.occupancy is None:
            raise ConfigError("occupancy CSV needs a discrete-battery run", key="battery_mode")
        _write_csv(cfg, ["level", "occupancy"], list(enumerate(float(p) for p in res.occupancy)), out)
    return res


def _sweep_point(value, cfg, check):
    point = cfg.with_value(cfg.values["sweep"], value)
    if check:
        self_check(point)
    res = _analytical(point)
    psi_sim = se = None
    p2 = res.p_mode2 if res is not None else None
    if point.values["sweep_simulate"]:
        sim = run_simulation(point.sim_config(), point.system_params(), point.battery())
        psi_sim, se = sim.psi_hat, sim.std_err
        if p2 is None:
            p2 = sim.p_mode2_hat
    return [value, res.psi if res is not None else None, psi_sim, se, p2]


def _map(fn, items, workers):
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def cmd_sweep(cfg, out=None, check=False, stream=sys.stdout):
    values = cfg.axis_values()
    rows = _map(partial(_sweep_point, cfg=cfg, check=check), values, cfg.values["workers"])
    header = [cfg.values["sweep"], "psi_analytical", "psi_sim", "std_err", "p_mode2"]
    stream.write(_write_csv(cfg, header, rows, out))
    return rows


def cmd_optimize(cfg, out=None, check=False, stream=sys.stdout):
    v = cfg.values
    params = cfg.system_params()
    if v["scheme"] == "ts-ea":
        best = optimize_ts_ea(params, v["capacity"], v["levels"])
        table = [(None, best.delta, best.psi)]
    elif v["scheme"] == "ps-ea":
        best = optimize_ps_ea(params, v["capacity"], v["levels"], cfg.lambdas(), workers=v["workers"])
        table = best.table
    else:
        best = optimize_ps_noea(params, cfg.lambdas(), v["n_blocks"], v["seed"], workers=v["workers"])
        table = best.table
    if check and v["scheme"] != "ps-noea":
        opt = cfg.with_value("delta", best.delta)
        self_check(opt.with_value("lambda", best.lam) if best.lam is not None else opt)
    lam = "-" if best.lam is None else f"{best.lam:g}"
    delta = "-" if best.delta is None else str(best.delta)
    print(f"scheme        {v['scheme']}", file=stream)
    print(f"optimum       lambda={lam} delta={delta} psi={best.psi:.10g}", file=stream)
    if out:
        _write_csv(cfg, ["lambda", "delta_opt", "psi"], table, out)
    return best


def _compare_point(value, cfg):
    point = cfg.with_value(cfg.values["sweep"], value)
    v = point.values
    params = point.system_params()
    lambdas = point.lambdas()
    ps = optimize_ps_ea(params, v["capacity"], v["levels"], lambdas)
    ts = optimize_ts_ea(params, v["capacity"], v["levels"])
    noea = optimize_ps_noea(params, lambdas, v["n_blocks"], v["seed"])
    return [value, ps.psi, ts.psi, noea.psi]


def cmd_compare(cfg, out=None, check=False, stream=sys.stdout):
    if cfg.values.get("sweep") is None:
        raise ConfigError("compare needs a power axis (sweep = p)", key="sweep")
    values = cfg.axis_values()
    rows = _map(partial(_compare_point, cfg=cfg), values, cfg.values["workers"])
    header = [cfg.values["sweep"], "psi_psea", "psi_tsea", "psi_psnoea"]
    stream.write(_write_csv(cfg, header, rows, out))
    return rows


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "compare": cmd_compare,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_CONFIG)


def build_parser():
    p = _Parser(prog="psea", description="Throughput analysis and simulation of PS-EA relaying.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="key = value configuration file")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--self-check", action="store_true",
                   help="verify closed-form link terms against quadrature")
    return p


def main(argv=None, stream=None):
    stream = stream or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config(args.config)
        if args.seed is not None:
            cfg = cfg.with_value("seed", args.seed)
        COMMANDS[args.command](cfg, out=args.out, check=args.self_check, stream=stream)
    except ConfigError as exc:
        print(f"psea: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularChainError, NumericalInstabilityError, ArithmeticError) as exc:
        print(f"psea: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PseaError as exc:
        print(f"psea: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
