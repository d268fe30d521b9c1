"""Command-line surface.

Subcommands: ``curves`` (correlation-vs-angle tables), ``bell`` (one Bell
value with its components), ``sweep`` (frequency / fraction / distance
sweeps), ``sync`` (square-wave sync fractions), ``aspect`` (the 1982
reconstruction) and ``export-trials`` (raw Monte Carlo event streams).

Every invocation is reproducible: the seed defaults to DEFAULT_SEED, all
structured outputs start with a provenance header echoing the resolved
parameters, and ``provenance_to_argv`` rebuilds an equivalent command line
from that header.

A JSON config file (``--config``) may supply any long-option value; keys use
underscores ("nu_a"), top-level keys apply to every subcommand and a section
named after a subcommand overrides them.  Explicit flags win over the file.

Exit codes: 0 success, 1 validation error, 2 runtime/numeric error, 3 I/O
error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .choice import (
    ChoiceQuad,
    StationConfig,
    SyncFractions,
    fractions_for,
    mix_fractions,
    n_fc,
    s_chsh_fc,
    s_prime_fc,
    corr_fc,
)
from .models import Model, ValidationError, corr
from .montecarlo import (
    RngSpec,
    estimate_s_chsh,
    estimate_s_prime,
    run_choice_trials,
    run_timeline,
)
from .output import format_float, render_csv, render_jsonl, write_table
from .svgplot import LinePlot
from .sweep import (
    CLOSED_FORM,
    MONTE_CARLO,
    DEFAULT_SEED,
    SweepSpec,
    SweepVariable,
    aspect_point,
    run_sweep,
)
from .units import parse_angle_list, parse_frequency, parse_time

STANDARD_QUAD_TEXT = "0deg,22.5deg,45deg,67.5deg"
_MODEL_ORDER = (Model.QUANTUM, Model.SEMI_CLASSICAL, Model.TEXTURE, Model.MAX_CLASSICAL_LHV)


class _Parser(argparse.ArgumentParser):
    # validation failures exit 1, not argparse's default 2
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


class Options:
    """Flag > config-section > config-global > default resolution."""

    def __init__(self, args: argparse.Namespace, command: str):
        self._args = vars(args)
        config = {}
        if self._args.get("config"):
            config = json.loads(Path(self._args["config"]).read_text(encoding="utf-8"))
            if not isinstance(config, dict):
                raise ValidationError("config file must hold a JSON object")
        merged = {k: v for k, v in config.items() if not isinstance(v, dict)}
        section = config.get(command, {})
        if not isinstance(section, dict):
            raise ValidationError(f"config section {command!r} must be an object")
        merged.update(section)
        self._cfg = merged

    def get(self, name, default=None, parse=None):
        value = self._args.get(name)
        if value is None:
            value = self._cfg.get(name, default)
        if value is None:
            return None
        return parse(value) if parse is not None else value


def _provenance(command: str, seed, params: dict) -> dict:
    return {
        "tool": "bellsim",
        "version": __version__,
        "command": command,
        "seed": seed,
        "params": params,
    }


def provenance_to_argv(provenance: dict) -> list[str]:
    """Rebuild an equivalent argv (minus --output) from a provenance header."""
    argv = [provenance["command"]]
    params = dict(provenance["params"])
    if provenance.get("seed") is not None:
        params.setdefault("seed", provenance["seed"])
    for key, value in params.items():
        if value is None:
            continue
        argv += [f"--{key.replace('_', '-')}", str(value)]
    return argv


def _quad_text(quad: ChoiceQuad) -> str:
    return ",".join(f"{v!r}rad" for v in (quad.a, quad.b, quad.a_alt, quad.b_alt))


def _emit(opts: Options, rows: list[dict], provenance: dict) -> None:
    output = opts.get("output")
    fmt = opts.get("format", "csv")
    if fmt not in ("csv", "jsonl"):
        raise ValidationError(f"unknown table format {fmt!r}")
    if output is None:
        text = render_csv(rows, provenance) if fmt == "csv" else render_jsonl(rows, provenance)
        sys.stdout.write(text)
    else:
        write_table(output, rows, provenance, fmt)


# --- curves -------------------------------------------------------------------


def cmd_curves(opts: Options) -> int:
    names = [m for m in str(opts.get("models", "qm,sc,vt,mclhv")).split(",") if m]
    if not names:
        raise ValidationError("no models selected")
    try:
        models = [Model(n) for n in names]
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    points = opts.get("points", 181, parse=int)
    if points < 2:
        raise ValidationError("need at least two grid points")
    rows = []
    for i in range(points):
        delta = math.pi * i / (points - 1)
        row: dict = {"delta": delta}
        for m in _MODEL_ORDER:
            if m in models:
                row[m.value] = corr(m, delta, 0.0)
        rows.append(row)
    params = {"models": ",".join(m.value for m in _MODEL_ORDER if m in models),
              "points": points, "format": opts.get("format", "csv")}
    provenance = _provenance("curves", None, params)
    if opts.get("format") == "svg":
        plot = LinePlot("Correlation vs angle difference", "a - b (rad)", "E(a,b)",
                        provenance)
        for m in _MODEL_ORDER:
            if m in models:
                plot.add_series(m.value, [r["delta"] for r in rows],
                                [r[m.value] for r in rows])
        output = opts.get("output")
        if output is None:
            sys.stdout.write(plot.render())
        else:
            plot.write(output)
        return 0
    _emit(opts, rows, provenance)
    return 0


# --- bell ---------------------------------------------------------------------


def _resolve_fractions(opts: Options) -> tuple[SyncFractions, StationConfig | None, StationConfig | None, dict]:
    """Sync fractions from --f, --f-a/--f-b, or station frequencies."""
    quad = ChoiceQuad(*opts.get("quad", STANDARD_QUAD_TEXT, parse=lambda v: parse_angle_list(v, 4)))
    f = opts.get("f", parse=float)
    f_a = opts.get("f_a", parse=float)
    f_b = opts.get("f_b", parse=float)
    nu_a = opts.get("nu_a", parse=parse_frequency)
    nu_b = opts.get("nu_b", parse=parse_frequency)
    rt = opts.get("round_trip", parse=parse_time)
    rt_a = opts.get("round_trip_a", rt, parse=parse_time)
    rt_b = opts.get("round_trip_b", rt, parse=parse_time)
    params: dict = {"quad": _quad_text(quad)}
    alice = bob = None
    if f is not None:
        sf = mix_fractions(f, f)
        params["f"] = f
    elif f_a is not None or f_b is not None:
        if f_a is None or f_b is None:
            raise ValidationError("--f-a and --f-b must be given together")
        sf = mix_fractions(f_a, f_b)
        params["f_a"], params["f_b"] = f_a, f_b
    elif nu_a is not None or nu_b is not None:
        if nu_a is None or nu_b is None:
            raise ValidationError("--nu-a and --nu-b must be given together")
        kw_a = {"round_trip_time": rt_a} if rt_a is not None else {}
        kw_b = {"round_trip_time": rt_b} if rt_b is not None else {}
        alice = StationConfig(quad.a, quad.a_alt, nu_a,
                              opts.get("phase_a", 0.0, parse=float), **kw_a)
        bob = StationConfig(quad.b, quad.b_alt, nu_b,
                            opts.get("phase_b", 0.0, parse=float), **kw_b)
        sf = fractions_for(alice, bob)
        params.update(nu_a=repr(nu_a), nu_b=repr(nu_b),
                      round_trip_a=repr(alice.round_trip_time),
                      round_trip_b=repr(bob.round_trip_time),
                      phase_a=alice.switch_phase, phase_b=bob.switch_phase)
    else:
        raise ValidationError("give --f, --f-a/--f-b, or --nu-a/--nu-b")
    return sf, alice, bob, params


def cmd_bell(opts: Options) -> int:
    form = opts.get("form", "sprime")
    if form not in ("sprime", "s"):
        raise ValidationError(f"unknown Bell form {form!r}")
    engine = opts.get("engine", "closed")
    if engine not in ("closed", "mc", "both"):
        raise ValidationError(f"unknown engine {engine!r}")
    sf, alice, bob, params = _resolve_fractions(opts)
    quad = ChoiceQuad(*parse_angle_list(params["quad"], 4))
    seed = opts.get("seed", DEFAULT_SEED, parse=int)

    row: dict = {
        "form": form,
        "f_alice": sf.f_alice,
        "f_bob": sf.f_bob,
        "f": sf.f,
        "f_prime": sf.f_prime,
    }
    terms = quad.bell_terms()
    if form == "s":
        for (term, _), label in zip(terms, ("e_ab", "e_ab_alt", "e_a_alt_b", "e_a_alt_b_alt")):
            row[label] = corr_fc(term, sf)
        row["value"] = s_chsh_fc(quad, sf)
    else:
        for (term, _), label in zip(terms, ("n_ab", "n_ab_alt", "n_a_alt_b", "n_a_alt_b_alt")):
            row[label] = n_fc(term, sf)
        row["value"] = s_prime_fc(quad, sf)

    if engine in ("mc", "both"):
        pairs = opts.get("pairs", 1_000_000, parse=int)
        if pairs < 1:
            raise ValidationError("monte carlo needs --pairs >= 1")
        duration = opts.get("duration", 1e-3, parse=parse_time)
        workers = opts.get("workers", 1, parse=int)
        if alice is not None and bob is not None:
            main_t = run_timeline(alice, bob, pairs, duration, RngSpec(seed, 1), workers=workers)
            a_only = run_timeline(alice, bob, pairs, duration, RngSpec(seed, 2),
                                  pbs=(True, False), workers=workers)
            b_only = run_timeline(alice, bob, pairs, duration, RngSpec(seed, 3),
                                  pbs=(False, True), workers=workers)
        else:
            main_t = run_choice_trials(quad, sf, pairs, RngSpec(seed, 1))
            a_only = run_choice_trials(quad, sf, pairs, RngSpec(seed, 2), pbs=(True, False))
            b_only = run_choice_trials(quad, sf, pairs, RngSpec(seed, 3), pbs=(False, True))
        est = (estimate_s_chsh(main_t, quad) if form == "s"
               else estimate_s_prime(main_t, a_only, b_only, quad))
        row["mc_value"] = est.value
        row["mc_std_error"] = est.std_error
        row["mc_pairs"] = est.n_trials
        params.update(pairs=pairs, duration=repr(duration))
    params.update(form=form, engine=engine, format=opts.get("format", "csv"))

    provenance = _provenance("bell", seed, params)
    if opts.get("output") is None and opts.get("format") is None:
        for key, value in row.items():
            print(f"{key}: {format_float(value) if isinstance(value, float) else value}")
        return 0
    _emit(opts, [row], provenance)
    return 0


# --- sweep --------------------------------------------------------------------


def _sweep_spec(opts: Options) -> tuple[SweepSpec, dict]:
    try:
        variable = SweepVariable(opts.get("variable", "frequency_common"))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    parse_x = float if variable is SweepVariable.F_DIRECT else parse_frequency
    start = opts.get("start", parse=parse_x)
    stop = opts.get("stop", parse=parse_x)
    if start is None or stop is None:
        raise ValidationError("sweep needs --start and --stop")
    quad = ChoiceQuad(*opts.get("quad", STANDARD_QUAD_TEXT, parse=lambda v: parse_angle_list(v, 4)))
    rt = opts.get("round_trip", parse=parse_time)
    rt_a = opts.get("round_trip_a", rt, parse=parse_time)
    rt_b = opts.get("round_trip_b", rt, parse=parse_time)
    kw_a = {"round_trip_time": rt_a} if rt_a is not None else {}
    kw_b = {"round_trip_time": rt_b} if rt_b is not None else {}
    nu_a = opts.get("nu_a", 0.0, parse=parse_frequency)
    nu_b = opts.get("nu_b", 0.0, parse=parse_frequency)
    alice = StationConfig(quad.a, quad.a_alt, nu_a, **kw_a)
    bob = StationConfig(quad.b, quad.b_alt, nu_b, **kw_b)
    engines = tuple(e for e in str(opts.get("engines", CLOSED_FORM)).split(",") if e)
    weights_text = opts.get("weights")
    weights = None
    if weights_text is not None:
        parts = [float(p) for p in str(weights_text).split(",")]
        if len(parts) != 2:
            raise ValidationError("--weights needs two comma-separated values")
        weights = (parts[0], parts[1])
    seed = opts.get("seed", DEFAULT_SEED, parse=int)
    spec = SweepSpec(
        variable=variable,
        start=start,
        stop=stop,
        num_points=opts.get("points", 1201, parse=int),
        quad=quad,
        alice=alice,
        bob=bob,
        engines=engines,
        mc_pairs_per_point=opts.get("mc_pairs", 200_000, parse=int),
        mc_duration=opts.get("duration", 1e-3, parse=parse_time),
        station_weights=weights,
        seed=seed,
    )
    params = {
        "variable": variable.value,
        "start": repr(start),
        "stop": repr(stop),
        "points": spec.num_points,
        "quad": _quad_text(quad),
        "nu_a": repr(nu_a),
        "nu_b": repr(nu_b),
        "round_trip_a": repr(alice.round_trip_time),
        "round_trip_b": repr(bob.round_trip_time),
        "engines": ",".join(engines),
        "format": opts.get("format", "csv"),
    }
    if MONTE_CARLO in engines:
        params.update(mc_pairs=spec.mc_pairs_per_point, duration=repr(spec.mc_duration))
    if weights is not None:
        params["weights"] = f"{weights[0]!r},{weights[1]!r}"
    return spec, params


def _series_rows(series) -> list[dict]:
    rows = []
    for p in series.points:
        row = {
            "x": p.x,
            "f_alice": p.f_alice,
            "f_bob": p.f_bob,
            "s_prime": p.s_prime,
            "s_chsh": p.s_chsh,
            "mc_s_prime": None if p.mc_s_prime is None else p.mc_s_prime.value,
            "mc_s_prime_err": None if p.mc_s_prime is None else p.mc_s_prime.std_error,
            "mc_s_chsh": None if p.mc_s_chsh is None else p.mc_s_chsh.value,
            "mc_s_chsh_err": None if p.mc_s_chsh is None else p.mc_s_chsh.std_error,
        }
        rows.append(row)
    return rows


def _sweep_plot(series, provenance, which: str) -> LinePlot:
    ref = series.reference
    if which == "s_prime":
        plot = LinePlot("S' vs switching frequency", "frequency (Hz)", "S'", provenance)
        plot.band = (ref.lhv_s_prime_min, ref.lhv_s_prime_max)
        plot.add_ref_line("quantum", ref.quantum_s_prime)
        plot.add_ref_line("semiclassical", ref.semiclassical_s_prime)
    else:
        plot = LinePlot("S vs switching frequency", "frequency (Hz)", "S", provenance)
        plot.band = (0.0, ref.lhv_s_max)
        plot.add_ref_line("quantum", ref.quantum_s)
        plot.add_ref_line("semiclassical", ref.semiclassical_s)
    xs = [p.x for p in series.points]
    plot.add_series(which, xs, [getattr(p, which) for p in series.points])
    if series.points[0].mc_s_prime is not None:
        field = "mc_s_prime" if which == "s_prime" else "mc_s_chsh"
        plot.add_series(field, xs, [getattr(p, field).value for p in series.points])
    return plot


def cmd_sweep(opts: Options) -> int:
    spec, params = _sweep_spec(opts)
    series = run_sweep(spec)
    provenance = _provenance("sweep", spec.seed, params)
    fmt = opts.get("format", "csv")
    which = opts.get("plot_field", "s_prime")
    if which not in ("s_prime", "s_chsh"):
        raise ValidationError(f"unknown plot field {which!r}")
    if fmt == "svg":
        plot = _sweep_plot(series, provenance, which)
        output = opts.get("output")
        if output is None:
            sys.stdout.write(plot.render())
        else:
            plot.write(output)
    else:
        _emit(opts, _series_rows(series), provenance)
    plot_path = opts.get("plot")
    if plot_path is not None and fmt != "svg":
        _sweep_plot(series, provenance, which).write(plot_path)
    return 0


# --- sync ---------------------------------------------------------------------


def cmd_sync(opts: Options) -> int:
    nu_a = opts.get("nu_a", parse=parse_frequency)
    if nu_a is None:
        raise ValidationError("sync needs --nu-a")
    nu_b = opts.get("nu_b", parse=parse_frequency)
    rt = opts.get("round_trip", 43e-9, parse=parse_time)
    rt_a = opts.get("round_trip_a", rt, parse=parse_time)
    rt_b = opts.get("round_trip_b", rt, parse=parse_time)
    from .choice import sync_fraction

    f_a = sync_fraction(nu_a, rt_a)
    row: dict = {"nu_a": nu_a, "round_trip_a": rt_a, "f_alice": f_a}
    params = {"nu_a": repr(nu_a), "round_trip_a": repr(rt_a),
              "format": opts.get("format", "csv")}
    if nu_b is not None:
        f_b = sync_fraction(nu_b, rt_b)
        sf = mix_fractions(f_a, f_b)
        row.update(nu_b=nu_b, round_trip_b=rt_b, f_bob=f_b, f=sf.f, f_prime=sf.f_prime)
        params.update(nu_b=repr(nu_b), round_trip_b=repr(rt_b))
    if opts.get("output") is None and opts.get("format") is None:
        for key, value in row.items():
            print(f"{key}: {format_float(value) if isinstance(value, float) else value}")
        return 0
    _emit(opts, [row], _provenance("sync", None, params))
    return 0


# --- aspect -------------------------------------------------------------------


def cmd_aspect(opts: Options) -> int:
    report = aspect_point()
    row = report.as_dict()
    if opts.get("output") is None and opts.get("format") is None:
        print("1982 periodic-switching reconstruction (46.2 / 48.4 MHz, 43 ns round trip)")
        for key, value in row.items():
            print(f"{key}: {format_float(value) if isinstance(value, float) else value}")
        print(
            f"predicted S' {format_float(report.reported.s_prime)} vs measured "
            f"{report.measured_s_prime} +/- {report.measured_s_prime_error}"
        )
        return 0
    _emit(opts, [row], _provenance("aspect", None, {"format": opts.get("format", "csv")}))
    return 0


# --- export-trials --------------------------------------------------------------


def cmd_export_trials(opts: Options) -> int:
    pairs = opts.get("pairs", parse=int)
    if pairs is None or pairs < 1:
        raise ValidationError("no trials requested (need --pairs >= 1)")
    output = opts.get("output")
    if output is None:
        raise ValidationError("export-trials needs --output")
    quad = ChoiceQuad(*opts.get("quad", STANDARD_QUAD_TEXT, parse=lambda v: parse_angle_list(v, 4)))
    nu_a = opts.get("nu_a", 0.0, parse=parse_frequency)
    nu_b = opts.get("nu_b", 0.0, parse=parse_frequency)
    rt = opts.get("round_trip", parse=parse_time)
    rt_a = opts.get("round_trip_a", rt, parse=parse_time)
    rt_b = opts.get("round_trip_b", rt, parse=parse_time)
    kw_a = {"round_trip_time": rt_a} if rt_a is not None else {}
    kw_b = {"round_trip_time": rt_b} if rt_b is not None else {}
    alice = StationConfig(quad.a, quad.a_alt, nu_a, opts.get("phase_a", 0.0, parse=float), **kw_a)
    bob = StationConfig(quad.b, quad.b_alt, nu_b, opts.get("phase_b", 0.0, parse=float), **kw_b)
    duration = opts.get("duration", 1e-3, parse=parse_time)
    emission = opts.get("emission", "uniform")
    workers = opts.get("workers", 1, parse=int)
    seed = opts.get("seed", DEFAULT_SEED, parse=int)
    trials = run_timeline(alice, bob, pairs, duration, RngSpec(seed),
                          emission=emission, workers=workers)
    params = {
        "quad": _quad_text(quad),
        "nu_a": repr(nu_a), "nu_b": repr(nu_b),
        "round_trip_a": repr(alice.round_trip_time),
        "round_trip_b": repr(bob.round_trip_time),
        "phase_a": alice.switch_phase, "phase_b": bob.switch_phase,
        "pairs": pairs, "duration": repr(duration),
        "emission": emission,
    }
    provenance = _provenance("export-trials", seed, params)
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(json.dumps({"provenance": provenance}, sort_keys=True) + "\n")
        for rec in trials:
            fh.write(json.dumps({
                "emission_time": rec.emission_time,
                "lambda": rec.hidden_angle,
                "a_v": rec.a_v, "b_v": rec.b_v,
                "a_m": rec.a_m, "b_m": rec.b_m,
                "alpha": rec.alpha, "beta": rec.beta,
            }) + "\n")
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="bellsim", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"bellsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--seed", help=f"RNG seed (default {DEFAULT_SEED})")
        p.add_argument("--output", help="output file path (default: stdout)")
        p.add_argument("--format", help="csv | jsonl | svg (where supported)")

    p = sub.add_parser("curves", help="correlation-vs-angle tables for the four models")
    common(p)
    p.add_argument("--models", help="comma list from qm,sc,vt,mclhv")
    p.add_argument("--points", help="grid points over [0, pi]")

    p = sub.add_parser("bell", help="one Bell value (S or S') with its components")
    common(p)
    p.add_argument("--quad", help="a,b,a',b' as tagged angles")
    p.add_argument("--form", help="sprime | s")
    p.add_argument("--engine", help="closed | mc | both")
    p.add_argument("--f", help="common sync fraction")
    p.add_argument("--f-a", help="Alice's sync fraction")
    p.add_argument("--f-b", help="Bob's sync fraction")
    p.add_argument("--nu-a", help="Alice's switching frequency")
    p.add_argument("--nu-b", help="Bob's switching frequency")
    p.add_argument("--round-trip", help="shared round trip time, e.g. 43ns (default 43ns)")
    p.add_argument("--round-trip-a", help="Alice's round trip time")
    p.add_argument("--round-trip-b", help="Bob's round trip time")
    p.add_argument("--phase-a", help="Alice's switching phase (rad)")
    p.add_argument("--phase-b", help="Bob's switching phase (rad)")
    p.add_argument("--pairs", help="Monte Carlo pairs")
    p.add_argument("--duration", help="Monte Carlo timeline duration")
    p.add_argument("--workers", help="Monte Carlo worker threads")

    p = sub.add_parser("sweep", help="sweep frequency, fraction, or distance split")
    common(p)
    p.add_argument("--variable", help="frequency_common | frequency_alice_only | f_direct | distance_ratio")
    p.add_argument("--start", help="sweep start (frequency or fraction)")
    p.add_argument("--stop", help="sweep stop")
    p.add_argument("--points", help="grid points (default 1201)")
    p.add_argument("--quad", help="a,b,a',b' as tagged angles")
    p.add_argument("--nu-a", help="Alice's fixed frequency (where applicable)")
    p.add_argument("--nu-b", help="Bob's fixed frequency (where applicable)")
    p.add_argument("--round-trip", help="shared round trip time")
    p.add_argument("--round-trip-a", help="Alice's round trip time")
    p.add_argument("--round-trip-b", help="Bob's round trip time")
    p.add_argument("--engines", help="closed_form[,monte_carlo]")
    p.add_argument("--mc-pairs", help="Monte Carlo pairs per sweep point")
    p.add_argument("--duration", help="Monte Carlo timeline duration per point")
    p.add_argument("--weights", help="station texture weights, e.g. 0.5,0.5")
    p.add_argument("--plot", help="also write an SVG plot to this path")
    p.add_argument("--plot-field", help="s_prime | s_chsh (default s_prime)")

    p = sub.add_parser("sync", help="square-wave sync fractions f_A, f_B, f, f'")
    common(p)
    p.add_argument("--nu-a", help="Alice's switching frequency")
    p.add_argument("--nu-b", help="Bob's switching frequency")
    p.add_argument("--round-trip", help="shared round trip time (default 43ns)")
    p.add_argument("--round-trip-a", help="Alice's round trip time")
    p.add_argument("--round-trip-b", help="Bob's round trip time")

    p = sub.add_parser("aspect", help="the 1982 reconstruction report")
    common(p)

    p = sub.add_parser("export-trials", help="write a Monte Carlo event stream as JSON lines")
    common(p)
    p.add_argument("--quad", help="a,b,a',b' as tagged angles")
    p.add_argument("--nu-a", help="Alice's switching frequency")
    p.add_argument("--nu-b", help="Bob's switching frequency")
    p.add_argument("--round-trip", help="shared round trip time")
    p.add_argument("--round-trip-a", help="Alice's round trip time")
    p.add_argument("--round-trip-b", help="Bob's round trip time")
    p.add_argument("--phase-a", help="Alice's switching phase (rad)")
    p.add_argument("--phase-b", help="Bob's switching phase (rad)")
    p.add_argument("--pairs", help="number of pairs to simulate")
    p.add_argument("--duration", help="timeline duration (default 1ms)")
    p.add_argument("--emission", help="uniform | grid | poisson")
    p.add_argument("--workers", help="worker threads")

    return parser


_COMMANDS = {
    "curves": cmd_curves,
    "bell": cmd_bell,
    "sweep": cmd_sweep,
    "sync": cmd_sync,
    "aspect": cmd_aspect,
    "export-trials": cmd_export_trials,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = Options(args, args.command)
        return _COMMANDS[args.command](opts)
    except ValidationError as exc:
        print(f"bellsim: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"bellsim: i/o error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # numeric / runtime failures
        print(f"bellsim: runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
