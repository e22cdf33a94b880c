"""Command-line front end.

Subcommands: ``coherence-sweep``, ``entropy-sweep``, ``run``, ``validate``.
Exit codes: 0 success, 1 user/config/parse error, 2 internal invariant violation.
"""

import argparse
from dataclasses import dataclass
import json
import math
import sys

from . import __version__
from .channels import validate_cp
from .coherence import coherence, coherence_amp_closed_form, coherence_att_closed_form
from .errors import BosonicError, CPViolationError, DomainError, NonPhysicalStateError
from .gaussian import displaced_thermal, mean_photon_numbers, symplectic_eigenvalues, von_neumann_entropy
from .output import render_csv, render_svg
from .pipeline import PipelineError, evaluate, parse, parse_expr
from .thermo import (
    DEFAULT_R_MAX,
    EnergyConvention,
    ThermalReservoir,
    channel_output,
    entropy_production,
    reference_parameter,
    thermalization_time,
)

TOOL = f"bosonic-coherence {__version__}"
TTH_TOL = 1e-6


class ConfigError(BosonicError, ValueError):
    pass


def _number(text):
    try:
        return parse_expr(text)
    except PipelineError as exc:
        raise ConfigError(f"bad number {text!r}: {exc.message}") from None


def _number_list(text):
    return [_number(part) for part in text.split(",")]


def _pair(text):
    values = _number_list(text)
    if len(values) != 2:
        raise ConfigError(f"expected q,p but got {text!r}")
    return tuple(values)


def grid(lo, hi, steps):
    """Inclusive grid; ``lo + (hi - lo) * (i / (steps - 1))`` keeps quarter points exact."""
    if steps < 2:
        raise ConfigError(f"steps must be >= 2, got {steps}")
    if not hi > lo:
        raise ConfigError(f"grid must be increasing, got [{lo}, {hi}]")
    return [lo + (hi - lo) * (i / (steps - 1)) for i in range(steps)]


@dataclass
class SweepConfig:
    channel: str
    nbar: float
    d0: tuple
    mbars: list
    param_grid: list
    reservoir: ThermalReservoir = None
    convention: EnergyConvention = EnergyConvention.FULL
    normalize: bool = False

    def __post_init__(self):
        if self.channel not in ("att", "amp"):
            raise ConfigError(f"unknown channel {self.channel!r}")
        if not self.nbar >= 0:
            raise ConfigError(f"--n must be >= 0, got {self.nbar}")
        if not self.mbars or any(not m >= 0 for m in self.mbars):
            raise ConfigError(f"--m values must be >= 0, got {self.mbars}")
        if self.channel == "amp" and self.param_grid[0] < 0:
            raise ConfigError("amplification needs r >= 0")


def _default_range(channel):
    return (0.0, 2 * math.pi) if channel == "att" else (0.0, 6.0)


def _param_grid(args):
    lo, hi = _default_range(args.channel)
    lo = lo if args.param_min is None else _number(args.param_min)
    hi = hi if args.param_max is None else _number(args.param_max)
    return grid(lo, hi, args.steps)


def _metadata(command, items):
    return [("tool", TOOL), ("command", command)] + list(items)


def coherence_sweep_rows(cfg):
    """Rows ``(param_value, mbar, coherence, normalized_coherence)``."""
    q0, p0 = cfg.d0
    closed = coherence_att_closed_form if cfg.channel == "att" else coherence_amp_closed_form
    c_in = coherence(displaced_thermal(cfg.nbar, q0, p0)).coherence
    rows = []
    for m in cfg.mbars:
        for x in cfg.param_grid:
            c = closed(cfg.nbar, m, x, q0, p0)
            rows.append((x, m, c, c / c_in if c_in > 0 else math.nan))
    return rows


def cmd_coherence_sweep(args):
    cfg = SweepConfig(
        channel=args.channel,
        nbar=_number(args.n),
        d0=_pair(args.d),
        mbars=_number_list(args.m),
        param_grid=_param_grid(args),
        normalize=args.normalize,
    )
    pname = "theta" if cfg.channel == "att" else "r"
    meta = _metadata("coherence-sweep", [
        ("channel", cfg.channel),
        ("n", cfg.nbar),
        ("d0", f"{cfg.d0[0]!r} {cfg.d0[1]!r}"),
        ("m", " ".join(repr(m) for m in cfg.mbars)),
        ("grid", f"{pname} from {cfg.param_grid[0]!r} to {cfg.param_grid[-1]!r}, {len(cfg.param_grid)} points"),
        ("normalization", "coherence divided by the input coherence (channel parameter 0)"),
        ("units", "hbar=omega=k_B=1, vacuum covariance = identity, entropies in nats"),
    ])
    text = render_csv(meta, ["param_value", "mbar", "coherence", "normalized_coherence"],
                      coherence_sweep_rows(cfg))
    _emit(text, args.out)
    if args.svg:
        y = "normalized_coherence" if cfg.normalize else "coherence"
        _write(args.svg, render_svg(text, "param_value", y, "mbar",
                                    title=f"{cfg.channel} coherence", xlabel=pname, ylabel=y))
    return 0


def _tth_for(states, reservoir):
    return max(thermalization_time(s, reservoir, TTH_TOL) for s in states)


def entropy_sweep_rows(cfg, mode, fixed, times, r_max=DEFAULT_R_MAX):
    """Rows ``(series, x_value, sigma_prod, delta_U, delta_S, sigma_coherence, convention)``.

    In ``time`` mode ``fixed`` holds channel parameters and ``times`` is the
    x grid; in ``param`` mode ``fixed`` holds times and the x grid is the
    channel parameter grid. Returns ``(rows, tth)`` where ``tth`` is the
    thermalization time used for ``"Tth"`` entries, or ``None``.
    """
    res, conv, m = cfg.reservoir, cfg.convention, cfg.mbars[0]
    pname = "theta" if cfg.channel == "att" else "r"
    ell0 = reference_parameter(cfg.channel, r_max)

    def out(ell):
        return channel_output(cfg.channel, ell, cfg.nbar, m, cfg.d0)

    def ep(state, t):
        return entropy_production(state, res, t, conv)

    rows, tth = [], None
    if mode == "time":
        ref = out(ell0)
        for ell in fixed:
            state = out(ell)
            for t in times:
                rec = ep(state, t)
                cost = rec.sigma_prod - ep(ref, t).sigma_prod
                rows.append((f"{pname}={ell!r}", t, rec.sigma_prod, rec.delta_U, rec.delta_S,
                             cost, conv.value))
    else:
        states = [out(x) for x in cfg.param_grid]
        ref = out(ell0)
        if any(t == "Tth" for t in fixed):
            tth = _tth_for(states, res)
        for label in fixed:
            t = tth if label == "Tth" else label
            ref_sigma = ep(ref, t).sigma_prod
            for x, state in zip(cfg.param_grid, states):
                rec = ep(state, t)
                rows.append((f"t={label}" if label == "Tth" else f"t={t!r}", x, rec.sigma_prod,
                             rec.delta_U, rec.delta_S, rec.sigma_prod - ref_sigma, conv.value))
    return rows, tth


def _times_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if part == "Tth":
            out.append("Tth")
        else:
            t = _number(part)
            if not t >= 0:
                raise ConfigError(f"times must be >= 0, got {t}")
            out.append(t)
    return out


def cmd_entropy_sweep(args):
    channel = args.channel
    try:
        reservoir = ThermalReservoir(_number(args.N), _number(args.gamma))
        reservoir.beta
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    mbars = _number_list(args.m)
    if len(mbars) != 1:
        raise ConfigError("entropy-sweep takes a single --m value")
    pname = "theta" if channel == "att" else "r"
    if args.mode == "time":
        fixed_text = args.param or ("0,pi/2" if channel == "att" else "0,0.5")
        fixed = _number_list(fixed_text)
        t_max = _number(args.t_max)
        x_grid = grid(0.0, t_max, args.steps)
        param_grid = list(fixed)
    else:
        fixed = _times_list(args.t)
        x_grid = None
        param_grid = _param_grid(args)
    cfg = SweepConfig(
        channel=channel,
        nbar=_number(args.n),
        d0=_pair(args.d),
        mbars=mbars,
        param_grid=param_grid,
        reservoir=reservoir,
        convention=EnergyConvention(args.energy),
    )
    r_max = _number(args.r_max)
    rows, tth = entropy_sweep_rows(cfg, args.mode, fixed, x_grid, r_max)
    xname = "t" if args.mode == "time" else pname
    meta = [
        ("channel", channel),
        ("mode", args.mode),
        ("n", cfg.nbar),
        ("m", mbars[0]),
        ("d0", f"{cfg.d0[0]!r} {cfg.d0[1]!r} (assumed initial first moments)"),
        ("N", reservoir.nbar),
        ("gamma", reservoir.gamma),
        ("beta", repr(reservoir.beta)),
        ("energy", f"{cfg.convention.value} (covariance: Tr[sigma]/4; full: adds |d|^2/4)"),
        ("reference", f"{pname}0={reference_parameter(channel, r_max)!r} for sigma_coherence"),
    ]
    if args.mode == "time":
        meta.append(("fixed", f"{pname} in {' '.join(repr(v) for v in fixed)}"))
        meta.append(("grid", f"t from 0 to {t_max!r}, {args.steps} points"))
    else:
        meta.append(("fixed", "t in " + " ".join(str(v) for v in fixed)))
        meta.append(("grid", f"{pname} from {param_grid[0]!r} to {param_grid[-1]!r}, {len(param_grid)} points"))
    if tth is not None:
        meta.append(("T_th", f"{tth!r} (max over grid, tol={TTH_TOL!r})"))
    meta.append(("units", "hbar=omega=k_B=1, time in units of tau, entropies in nats"))
    header = ["series", "x_value", "sigma_prod", "delta_U", "delta_S", "sigma_coherence", "convention"]
    text = render_csv(_metadata("entropy-sweep", meta), header, rows)
    _emit(text, args.out)
    if args.svg:
        _write(args.svg, render_svg(text, "x_value", "sigma_prod", "series",
                                    title=f"{channel} entropy production", xlabel=xname,
                                    ylabel="entropy production"))
    return 0


def _floats(values):
    return [float(v) for v in values]


def run_report(state):
    """Report dictionary for the final state of a pipeline.

    Values are plain floats; ``json`` writes them with ``repr`` so they
    read back bit-identical to the library results.
    """
    rep = coherence(state)
    return {
        "d": _floats(state.d),
        "sigma": _floats(state.sigma.reshape(-1)),
        "symplectic_eigenvalues": _floats(symplectic_eigenvalues(state)),
        "entropy": float(von_neumann_entropy(state)),
        "kbar": _floats(mean_photon_numbers(state)),
        "coherence": float(rep.coherence),
    }


def cmd_run(args):
    spec = parse(args.pipeline)
    q0, p0 = _pair(args.d)
    nbar = _number(args.n)
    if not nbar >= 0:
        raise ConfigError(f"--n must be >= 0, got {nbar}")
    final = evaluate(spec, displaced_thermal(nbar, q0, p0))
    print(json.dumps(run_report(final)))
    return 0


def cmd_validate(args):
    try:
        spec = parse(args.pipeline)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    bad = 0
    for k, stage in enumerate(spec.stages):
        gmap = stage.to_map()
        if gmap is None:
            continue
        check = validate_cp(gmap)
        if not check.ok:
            bad += 1
            print(f"error: stage {k + 1} ({stage}) violates complete positivity, "
                  f"min eigenvalue {check.min_eigenvalue:.6g}", file=sys.stderr)
    if bad:
        return 1
    print(f"ok: {len(spec.stages)} stage(s)")
    return 0


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc.strerror}") from None


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        _write(path, text)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _ArgumentParser(prog="bosonic-coherence", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=TOOL)
    sub = p.add_subparsers(dest="command", required=True)

    def sweep_args(sp, n, m):
        sp.add_argument("--channel", choices=("att", "amp"), default="att")
        sp.add_argument("--n", default=n, help="input mean photon number")
        sp.add_argument("--m", default=m, help="environment mean photon number(s), comma separated")
        sp.add_argument("--d", default="1,1", help="input first moments q,p")
        sp.add_argument("--param-min", default=None)
        sp.add_argument("--param-max", default=None)
        sp.add_argument("--steps", type=int, default=201)
        sp.add_argument("--out", default="-", help="CSV path (default: stdout)")
        sp.add_argument("--svg", default=None, help="optional SVG plot path")

    cs = sub.add_parser("coherence-sweep", help="coherence of the channel output vs theta or r")
    sweep_args(cs, "4", "0,2,4")
    cs.add_argument("--normalize", action="store_true", help="plot normalized coherence in the SVG")
    cs.set_defaults(func=cmd_coherence_sweep)

    es = sub.add_parser("entropy-sweep", help="entropy production of channel + thermalization")
    sweep_args(es, "1", "2")
    es.add_argument("--mode", choices=("time", "param"), default="time")
    es.add_argument("--N", default="5", help="reservoir mean photon number")
    es.add_argument("--gamma", default="0.1", help="decay rate in units of 1/tau")
    es.add_argument("--param", default=None, help="time mode: fixed channel parameter(s)")
    es.add_argument("--t", default="5,Tth", help="param mode: fixed time(s); 'Tth' = thermalization time")
    es.add_argument("--t-max", default="60", help="time mode: end of the time grid")
    es.add_argument("--energy", choices=("full", "covariance"), default="full")
    es.add_argument("--r-max", default=repr(DEFAULT_R_MAX), help="stand-in for r -> infinity")
    es.set_defaults(func=cmd_entropy_sweep)

    rn = sub.add_parser("run", help="evaluate a pipeline on a displaced thermal input")
    rn.add_argument("pipeline")
    rn.add_argument("--n", default="0")
    rn.add_argument("--d", default="0,0")
    rn.set_defaults(func=cmd_run)

    va = sub.add_parser("validate", help="check that a pipeline parses and is CP")
    va.add_argument("pipeline")
    va.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NonPhysicalStateError, CPViolationError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except BosonicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
