"""Command-line front end: bound sweeps, optimizers, decoder runs, simulations.

Every command takes flags and optionally `--config file.toml`; explicit flags
win over config values.  A config may hold top-level keys shared by all
commands plus a table named after the command.  Sweeps write CSV with `#`
header lines describing the parameters; runs write JSON lines.

Exit codes: 0 ok, 1 infeasible parameters or bad config, 2 internal error.
The worker count for sweep points and decoder runs comes from the
SUMRANK_ISD_WORKERS environment variable (default 1).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence

import click
import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__
from . import galois as gf
from .avgbounds import optimize_marginal, optimize_profile_exact, rcu_bounds_generic, rcu_bounds_randomized
from .counting import mean_rank
from .gendecode import GuessConfig, generic_decode, make_guess
from .mcsim import estimate_containment, estimate_intersection
from .prange import easy_interval, prange_decode, region_report
from .randlrs import LrsParams, wc_bounds_randomized
from .sumrank import random_code, rank_profile, sample_error
from .wcbounds import COST_MODELS, prange_reference, v_max, wc_bounds

log = logging.getLogger("sumrank_isd")

WORKERS_ENV = "SUMRANK_ISD_WORKERS"


class Infeasible(click.ClickException):
    exit_code = 1


# config handling

def _load_config(path: Optional[str], command: str) -> dict:
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise Infeasible(f"cannot read config {path}: {exc}")
    merged = {k: v for k, v in raw.items() if not isinstance(v, dict)}
    merged.update(raw.get(command, {}))
    return {k.replace("-", "_"): v for k, v in merged.items()}


def _resolve(ctx: click.Context, params: dict) -> dict:
    """Fill parameters left at their defaults from the config file."""
    cfg = _load_config(params.pop("config", None), ctx.info_name)
    unknown = set(cfg) - set(params)
    if unknown:
        raise Infeasible(f"unknown config keys for {ctx.info_name}: {', '.join(sorted(unknown))}")
    out = dict(params)
    for name, value in cfg.items():
        if ctx.get_parameter_source(name) != click.core.ParameterSource.COMMANDLINE:
            out[name] = value
    return out


def config_option(f):
    return click.option("--config", type=click.Path(dir_okay=False), help="TOML file with default values.")(f)


# output helpers

def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6f}"
    if isinstance(x, Fraction):
        return f"{float(x):.6f}"
    if isinstance(x, (tuple, list)):
        return " ".join(map(str, x))
    return str(x)


def _write_csv(out: Optional[str], meta: dict, columns: Sequence[str], rows: Iterable[dict]) -> None:
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}={value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c, "")) for c in columns])
    _emit(out, buf.getvalue())


def _write_jsonl(out: Optional[str], records: Iterable[dict]) -> None:
    _emit(out, "".join(json.dumps(r, sort_keys=True) + "\n" for r in records))


def _write_sidecar(path: Optional[str], rows: Sequence[dict]) -> None:
    if path:
        recs = [{"l": r["l"], "v": r["v"], "x": r["_x"]} for r in rows]
        with open(path, "w") as fh:
            fh.write("".join(json.dumps(x, sort_keys=True) + "\n" for x in recs))


def _emit(out: Optional[str], text: str) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _pmap(fn: Callable, items: Sequence) -> List:
    """Map over sweep points or runs; results come back in input order."""
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _ell_grid(n: int, ells: Optional[str]) -> List[int]:
    if not ells:
        return divisors(n)
    grid = [int(x) for x in str(ells).replace(",", " ").split()]
    bad = [e for e in grid if e <= 0 or n % e]
    if bad:
        raise Infeasible(f"block counts must divide n={n}: {bad}")
    return grid


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


# sweep point workers (module level so they pickle)

def _bounds_point(args):
    q, m, n, k, w, v_opt, ell, cost, rcu_cost, with_rcu = args
    eta = n // ell
    vm = v_max(m, eta, n, k)
    v = vm if v_opt in (None, "max") else int(v_opt)
    if not w <= v <= vm:
        return None, f"ell={ell}: need w <= v <= v_max={vm} (v={v})"
    if w > ell * min(m, eta):
        return None, f"ell={ell}: weight {w} exceeds ell*mu"
    wc = wc_bounds(q, m, n, k, ell, w, v, cost)
    row = {"l": ell, "eta": eta, "mu": min(m, eta), "v": v,
           "log2_W_lb": wc["lb"], "log2_W_ub": wc["ub"], "log2_W_ub_simple": wc["ub_simple"],
           "log2_W_ub_improved": wc["ub_improved"], "log2_W_prange": prange_reference(q, m, n, k, w, v)}
    if with_rcu:
        sol = optimize_marginal(q, m, eta, ell, w, v)
        rcu = rcu_bounds_generic(q, m, n, k, ell, w, v, profile=sol.profile, cost=rcu_cost)
        row.update(log2_W_rcu_lb=rcu["lb"], log2_W_rcu_ub=rcu["ub"], _x=list(sol.x))
    return row, None


def _rcu_point(args):
    q, m, n, k, w, v_opt, ell, cost, exact = args
    eta = n // ell
    vm = v_max(m, eta, n, k)
    v = vm if v_opt in (None, "max") else int(v_opt)
    if not w <= v <= vm or w > ell * min(m, eta):
        return None, f"ell={ell}: need w <= v <= v_max={vm} and w <= ell*mu"
    sol = optimize_marginal(q, m, eta, ell, w, v)
    profile = optimize_profile_exact(q, m, eta, ell, w, v) if exact else sol.profile
    rcu = rcu_bounds_generic(q, m, n, k, ell, w, v, profile=profile, cost=cost)
    return {"l": ell, "eta": eta, "v": v, "profile": profile, "log2_W_rcu_lb": rcu["lb"],
            "log2_W_rcu_ub": rcu["ub"], "_x": list(sol.x)}, None


def _rand_point(args):
    q, m, n, k, w, u, v_opt, ell, cost, gen_cost, rcu_cost, sweep_u = args
    eta = n // ell
    try:
        p = LrsParams(q, m, eta, ell, k)
    except ValueError as exc:
        return None, f"ell={ell}: {exc}"
    if w > ell * p.mu:
        return None, f"ell={ell}: weight {w} exceeds ell*mu"
    row = {"l": ell, "eta": eta, "u": u}
    if u == 2 * p.excess(w) and u <= w:
        rb = wc_bounds_randomized(q, m, n, k, ell, w, u, cost)
        row.update(log2_W_rand_lb=rb["lb"], log2_W_rand_ub=rb["ub"])
    rr = rcu_bounds_randomized(q, m, n, k, ell, w, u, cost=rcu_cost)
    row.update(log2_W_rand_rcu_lb=rr["lb"], log2_W_rand_rcu_ub=rr["ub"])
    if sweep_u:
        # the best sub-support dimension is not known in closed form: scan it
        best = min((rcu_bounds_randomized(q, m, n, k, ell, w, t, cost=rcu_cost)["ub"], t)
                   for t in range(max(2 * p.excess(w), 0), min(n - k, ell * p.mu) + 1))
        row.update(u_best=best[1], log2_W_rand_rcu_ub_best=best[0])
    vm = v_max(m, eta, n, k)
    v = vm if v_opt in (None, "max") else int(v_opt)
    if w <= v <= vm:
        gb = wc_bounds(q, m, n, k, ell, w, v, gen_cost)
        row.update(v=v, log2_W_gen_lb=gb["lb"], log2_W_gen_ub=gb["ub"])
    return row, None


def _collect(results) -> List[dict]:
    rows = []
    for row, reason in results:
        if row is None:
            log.warning("skipped %s", reason)
        else:
            rows.append(row)
    return rows


# commands

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
@click.option("-v", "--verbose", is_flag=True, help="Log skipped points and progress.")
def cli(verbose: bool) -> None:
    """Work-factor estimates and decoders for sum-rank-metric codes."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)


_cost_choice = click.Choice(sorted(COST_MODELS))


@cli.command("bounds-sweep")
@click.option("--q", type=int, default=2, show_default=True)
@click.option("--m", type=int, default=20, show_default=True)
@click.option("--n", type=int, default=60, show_default=True)
@click.option("--k", type=int, default=30, show_default=True)
@click.option("--w", type=int, default=9, show_default=True)
@click.option("--v", default="max", show_default=True, help="Guess dimension, or 'max' for v_max per point.")
@click.option("--ells", default=None, help="Block counts (default: every divisor of n).")
@click.option("--cost", default="gen_n3m3", show_default=True)
@click.option("--rcu-cost", default="erasure_nk3m3", show_default=True)
@click.option("--rcu/--no-rcu", "with_rcu", default=True, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--sidecar", type=click.Path(dir_okay=False), default=None,
              help="JSON-lines file with the optimized count vector per point.")
@config_option
@click.pass_context
def bounds_sweep(ctx, **params):
    """Worst-case and RCU work factors of generic decoding over block counts."""
    p = _resolve(ctx, params)
    grid = _ell_grid(p["n"], p["ells"])
    jobs = [(p["q"], p["m"], p["n"], p["k"], p["w"], p["v"], ell, p["cost"], p["rcu_cost"], p["with_rcu"])
            for ell in grid]
    rows = _collect(_pmap(_bounds_point, jobs))
    cols = ["l", "eta", "mu", "v", "log2_W_lb", "log2_W_ub", "log2_W_ub_simple", "log2_W_ub_improved",
            "log2_W_prange"]
    if p["with_rcu"]:
        cols += ["log2_W_rcu_lb", "log2_W_rcu_ub"]
    meta = {"command": "bounds-sweep", "q": p["q"], "m": p["m"], "n": p["n"], "k": p["k"], "w": p["w"],
            "v": p["v"], "cost": p["cost"], "rcu_cost": p["rcu_cost"], "prange_cost": "erasure_nk3m3_logq",
            "units": "log2 work"}
    _write_csv(p["out"], meta, cols, rows)
    if p["with_rcu"]:
        _write_sidecar(p["sidecar"], rows)


@cli.command("rcu-sweep")
@click.option("--q", type=int, default=2, show_default=True)
@click.option("--m", type=int, default=20, show_default=True)
@click.option("--n", type=int, default=60, show_default=True)
@click.option("--k", type=int, default=30, show_default=True)
@click.option("--w", type=int, default=9, show_default=True)
@click.option("--v", default="max", show_default=True)
@click.option("--ells", default=None)
@click.option("--cost", default="erasure_nk3m3", show_default=True)
@click.option("--exact", is_flag=True, help="Search all guess profiles instead of the heuristic.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--sidecar", type=click.Path(dir_okay=False), default=None,
              help="JSON-lines file with the optimized count vector per point.")
@config_option
@click.pass_context
def rcu_sweep(ctx, **params):
    """Average-case (RCU) work factors of generic decoding over block counts."""
    p = _resolve(ctx, params)
    grid = _ell_grid(p["n"], p["ells"])
    jobs = [(p["q"], p["m"], p["n"], p["k"], p["w"], p["v"], ell, p["cost"], p["exact"]) for ell in grid]
    rows = _collect(_pmap(_rcu_point, jobs))
    meta = {"command": "rcu-sweep", "q": p["q"], "m": p["m"], "n": p["n"], "k": p["k"], "w": p["w"],
            "v": p["v"], "cost": p["cost"], "profile": "exact" if p["exact"] else "heuristic",
            "units": "log2 work"}
    _write_csv(p["out"], meta, ["l", "eta", "v", "profile", "log2_W_rcu_lb", "log2_W_rcu_ub"], rows)
    _write_sidecar(p["sidecar"], rows)


@cli.command("rand-sweep")
@click.option("--q", type=int, default=8, show_default=True)
@click.option("--m", type=int, default=48, show_default=True)
@click.option("--n", type=int, default=48, show_default=True)
@click.option("--k", type=int, default=24, show_default=True)
@click.option("--w", type=int, default=13, show_default=True)
@click.option("--u", type=int, default=2, show_default=True)
@click.option("--v", default="24", show_default=True, help="Guess dimension for the generic comparison.")
@click.option("--ells", default=None)
@click.option("--cost", default="rand_n3m2", show_default=True)
@click.option("--gen-cost", default="gen_n3m3", show_default=True)
@click.option("--rcu-cost", default="ee_m2n2", show_default=True)
@click.option("--sweep-u", is_flag=True, help="Also scan u for the smallest RCU upper bound.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@config_option
@click.pass_context
def rand_sweep(ctx, **params):
    """Randomized decoding of LRS codes against generic decoding."""
    p = _resolve(ctx, params)
    grid = _ell_grid(p["n"], p["ells"])
    jobs = [(p["q"], p["m"], p["n"], p["k"], p["w"], p["u"], p["v"], ell, p["cost"], p["gen_cost"], p["rcu_cost"],
             p["sweep_u"]) for ell in grid]
    rows = _collect(_pmap(_rand_point, jobs))
    meta = {"command": "rand-sweep", "q": p["q"], "m": p["m"], "n": p["n"], "k": p["k"], "w": p["w"],
            "u": p["u"], "v": p["v"], "cost": p["cost"], "gen_cost": p["gen_cost"], "rcu_cost": p["rcu_cost"],
            "units": "log2 work"}
    cols = ["l", "eta", "u", "log2_W_rand_lb", "log2_W_rand_ub", "log2_W_rand_rcu_lb", "log2_W_rand_rcu_ub"]
    if p["sweep_u"]:
        cols += ["u_best", "log2_W_rand_rcu_ub_best"]
    cols += ["v", "log2_W_gen_lb", "log2_W_gen_ub"]
    _write_csv(p["out"], meta, cols, rows)


@cli.command("prange-regions")
@click.option("--q", type=int, default=2, show_default=True)
@click.option("--m", type=int, default=2, show_default=True)
@click.option("--eta", type=int, default=2, show_default=True)
@click.option("--grid", type=float, default=0.01, show_default=True)
@click.option("--ell", type=int, default=100, show_default=True, help="Block count for the finite-length GV radius.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@config_option
@click.pass_context
def prange_regions(ctx, **params):
    """Relative GV radius and easy interval against the code rate."""
    p = _resolve(ctx, params)
    if not 0 < p["grid"] <= 1:
        raise Infeasible("grid step must lie in (0, 1]")
    rows = [vars(r) for r in region_report(p["q"], p["m"], p["eta"], p["grid"], p["ell"])]
    meta = {"command": "prange-regions", "q": p["q"], "m": p["m"], "eta": p["eta"], "ell": p["ell"],
            "grid": p["grid"], "gv": "ball volume", "abar": _frac_str(mean_rank(p["q"], p["m"], p["eta"]))}
    _write_csv(p["out"], meta, ["R", "w_gv", "w_easy_minus", "w_easy_plus"], rows)


@cli.command("optimize-dist")
@click.option("--q", type=int, default=2, show_default=True)
@click.option("--m", type=int, default=20, show_default=True)
@click.option("--eta", type=int, required=False, default=6, show_default=True)
@click.option("--ell", type=int, default=10, show_default=True)
@click.option("--w", type=int, default=9, show_default=True)
@click.option("--v", type=int, default=10, show_default=True)
@click.option("--objective", type=click.Choice(["containment", "intersection", "exact"]), default="containment",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@config_option
@click.pass_context
def optimize_dist(ctx, **params):
    """Guessing distribution for given block count, weight and guess dimension."""
    p = _resolve(ctx, params)
    q, m, eta, ell, w, v = (p[x] for x in ("q", "m", "eta", "ell", "w", "v"))
    mu = min(m, eta)
    if not (0 <= w <= ell * mu and 0 <= v <= ell * mu):
        raise Infeasible(f"need w, v in [0, {ell * mu}]")
    if p["objective"] == "exact":
        if v < w:
            raise Infeasible("need w <= v")
        record = {"profile": list(optimize_profile_exact(q, m, eta, ell, w, v))}
    else:
        sol = optimize_marginal(q, m, eta, ell, w, v, objective=p["objective"])
        record = {"profile": list(sol.profile), "counts": list(sol.x),
                  "marginal": [_frac_str(x) for x in sol.marginal], "objective_value": sol.objective,
                  "boltzmann_lambda": sol.boltzmann.lam}
    record.update(q=q, m=m, eta=eta, ell=ell, w=w, v=v, objective=p["objective"])
    _emit(p["out"], json.dumps(record, sort_keys=True) + "\n")


def _decode_run(args):
    q, m, eta, ell, k, w, v, mode, seed, run, max_iters = args
    rng = np.random.default_rng([seed, run])
    code = random_code(q, m, eta, ell, k, rng)
    F = code.field
    msg = [F.random(rng) for _ in range(k)]
    c = gf.vecmat(F, msg, code.G) if k else [0] * code.n
    e = sample_error(q, m, eta, ell, w, rng)
    y = [F.add(a, b) for a, b in zip(c, e)]
    if mode == "design":
        guess = GuessConfig(v, "design", w=w)
    else:
        guess = make_guess(q, m, eta, ell, w, v)
    res = generic_decode(code, y, w, guess, rng, max_iters)
    return {"seed": seed, "run": run, "iterations": res.iterations,
            "outcome": "decoded" if res.success else "timeout",
            "planted": res.success and res.codeword == c,
            "rank_deficient": res.rank_deficient}


@cli.command("decode")
@click.option("--q", type=int, default=2, show_default=True)
@click.option("--m", type=int, default=4, show_default=True)
@click.option("--eta", type=int, default=2, show_default=True)
@click.option("--ell", type=int, default=4, show_default=True)
@click.option("--k", type=int, default=4, show_default=True)
@click.option("--w", type=int, default=2, show_default=True)
@click.option("--v", type=int, default=3, show_default=True)
@click.option("--mode", type=click.Choice(["profile", "design"]), default="profile", show_default=True)
@click.option("--runs", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-iters", type=int, default=100_000, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@config_option
@click.pass_context
def decode(ctx, **params):
    """Plant random errors in random codes and run the generic decoder."""
    p = _resolve(ctx, params)
    q, m, eta, ell, k, w, v = (p[x] for x in ("q", "m", "eta", "ell", "k", "w", "v"))
    n = ell * eta
    if not (0 <= k <= n and 0 <= w <= v <= v_max(m, eta, n, k)):
        raise Infeasible(f"need 0 <= w <= v <= v_max={v_max(m, eta, n, k)}")
    jobs = [(q, m, eta, ell, k, w, v, p["mode"], p["seed"], r, p["max_iters"]) for r in range(p["runs"])]
    _write_jsonl(p["out"], _pmap(_decode_run, jobs))


def _prange_run(args):
    q, m, eta, ell, k, w, mode, seed, run, max_iters = args
    rng = np.random.default_rng([seed, run])
    code = random_code(q, m, eta, ell, k, rng)
    F = code.field
    s = [F.random(rng) for _ in range(code.n - k)]
    res = prange_decode(F, code.H, s, w, eta, rng, max_iters, mode)
    ok = res.success and code.syndrome(res.error) == s and sum(rank_profile(F, res.error, eta)) == w
    return {"seed": seed, "run": run, "iterations": res.iterations, "success": bool(ok),
            "outcome": "decoded" if res.success else "timeout"}


@cli.command("prange-decode")
@click.option("--q", type=int, default=2, show_default=True)
@click.option("--m", type=int, default=2, show_default=True)
@click.option("--eta", type=int, default=2, show_default=True)
@click.option("--ell", type=int, default=24, show_default=True)
@click.option("--k", type=int, default=24, show_default=True)
@click.option("--w", default="mid", show_default=True, help="Target weight, or 'mid' for the easy-interval midpoint.")
@click.option("--mode", type=click.Choice(["uniform", "concentrated"]), default="uniform", show_default=True)
@click.option("--runs", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-iters", type=int, default=2400, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@config_option
@click.pass_context
def prange_decode_cmd(ctx, **params):
    """Solve random syndromes at large weight with the Prange-style decoder."""
    p = _resolve(ctx, params)
    q, m, eta, ell, k = (p[x] for x in ("q", "m", "eta", "ell", "k"))
    n = ell * eta
    if k % eta or not 0 <= k <= n:
        raise Infeasible("k must be a multiple of eta in [0, n]")
    if str(p["w"]) == "mid":
        lo, hi = easy_interval(q, m, eta, Fraction(k, n))
        w = round(n * (lo + hi) / 2)
    else:
        w = int(p["w"])
    if not 0 <= w <= ell * min(m, eta):
        raise Infeasible("weight out of range")
    jobs = [(q, m, eta, ell, k, w, p["mode"], p["seed"], r, p["max_iters"]) for r in range(p["runs"])]
    recs = _pmap(_prange_run, jobs)
    for r in recs:
        r["w"] = w
    _write_jsonl(p["out"], recs)


@cli.command("simulate")
@click.argument("experiment", type=click.Choice(["containment", "intersection"]))
@click.option("--q", type=int, default=None)
@click.option("--m", type=int, default=None)
@click.option("--eta", type=int, default=None)
@click.option("--ell", type=int, default=None)
@click.option("--k", type=int, default=4, show_default=True, help="Dimension (intersection only).")
@click.option("--w", type=int, default=None)
@click.option("--v", type=int, default=3, show_default=True, help="Guess dimension (containment only).")
@click.option("--u", type=int, default=2, show_default=True, help="Sub-support dimension (intersection only).")
@click.option("--mode", type=click.Choice(["profile", "design"]), default="profile", show_default=True,
              help="Guess law for containment.")
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@config_option
@click.pass_context
def simulate(ctx, experiment, **params):
    """Monte-Carlo estimate of a success probability against its closed form.

    Defaults: containment (q,m,eta,ell,w) = (2,4,2,3,2);
    intersection (q,m,eta,ell,w) = (8,6,3,4,5).
    """
    p = _resolve(ctx, params)
    defaults = {"containment": (2, 4, 2, 3, 2), "intersection": (8, 6, 3, 4, 5)}[experiment]
    q, m, eta, ell, w = (p[x] if p[x] is not None else d for x, d in zip(("q", "m", "eta", "ell", "w"), defaults))
    if p["trials"] < 1:
        raise Infeasible("need at least one trial")
    rng = np.random.default_rng(p["seed"])
    mu = min(m, eta)
    if not 0 <= w <= ell * mu:
        raise Infeasible("weight out of range")
    if experiment == "containment":
        v = p["v"]
        if not w <= v <= ell * mu:
            raise Infeasible("need w <= v <= ell*mu")
        guess = GuessConfig(v, "design", w=w) if p["mode"] == "design" else make_guess(q, m, eta, ell, w, v)
        rep = estimate_containment(q, m, eta, ell, w, guess, p["trials"], rng)
        params_out = {"v": v, "profile": list(guess.profile) if guess.profile else None, "mode": p["mode"]}
    else:
        u, k = p["u"], p["k"]
        if not 0 <= u <= w or not 0 <= k <= ell * eta:
            raise Infeasible("need 0 <= u <= w and 0 <= k <= n")
        rep = estimate_intersection(q, m, eta, ell, ell * eta, k, w, u, p["trials"], rng)
        params_out = {"u": u, "k": k}
    record = {"experiment": experiment, "q": q, "m": m, "eta": eta, "ell": ell, "w": w,
              "seed": p["seed"], **params_out, **rep.to_dict()}
    _emit(p["out"], json.dumps(record, sort_keys=True) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cli.main(args=argv, prog_name="sumrank-isd", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        # malformed flags are bad input, not an internal failure
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return 1
    except ValueError as exc:
        click.echo(f"Error: {exc}", err=True)
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort internal error report
        click.echo(f"Internal error: {type(exc).__name__}: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
