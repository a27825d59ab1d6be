"""Command-line frontend: reproducible experiments with file outputs.

Every run writes its data files plus a manifest (tool version, config echo,
timing, sha256 checksums); identical configurations and seeds produce
byte-identical data files.  Exit codes: 0 ok, 2 configuration error,
3 runtime error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import (
    ArithdynError,
    ConfigError,
    NotIrreducibleError,
    NotPrimeError,
    ParameterViolationError,
)
from .padic import encode_rat


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return 2
    runner = _Runner(args)
    try:
        handler = globals()[f"cmd_{args.command}"]
        handler(args, runner)
    except (ConfigError, NotPrimeError, NotIrreducibleError,
            ParameterViolationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ArithdynError as exc:
        kind = type(exc).__name__
        print(f"runtime error ({kind}): {exc}", file=sys.stderr)
        return 3
    runner.write_manifest()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="arithdyn",
        description="discrete integrable equations over finite fields, exactly")
    parser.add_argument("--version", action="version", version=f"arithdyn {__version__}")
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out-dir", default=".")
        p.add_argument("--format", default="csv",
                       choices=["csv", "json", "dot", "pgm", "ascii"])
        p.add_argument("--preset")
        p.add_argument("--threads", type=int, default=1,
                       help="accepted for interface compatibility; runs are serial")

    p = sub.add_parser("evolve", help="iterate a map and dump the trajectory")
    common(p)
    p.add_argument("--map", dest="map_kind")
    p.add_argument("--backend", default="rat", choices=["rat", "ff"])
    p.add_argument("--p", type=int)
    p.add_argument("--x0")
    p.add_argument("--x1")
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--out", default=None)
    _map_params(p)

    p = sub.add_parser("agr", help="almost-good-reduction reports")
    common(p)
    p.add_argument("--map", dest="map_kind", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--class", dest="class_name")
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--m-max", type=int, default=20)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--weak", action="store_true")
    _map_params(p)

    p = sub.add_parser("orbit", help="extended initial-value space and its cycles")
    common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha0", type=int, required=True)
    p.add_argument("--beta0", type=int, required=True)

    p = sub.add_parser("soliton", help="reduced soliton grids")
    common(p)
    p.add_argument("--p", type=int)
    p.add_argument("--delta0", type=int)
    p.add_argument("--gammas")
    p.add_argument("--ls")
    p.add_argument("--n-range", default="0:20")
    p.add_argument("--t-range", default="0:20")

    p = sub.add_parser("grid", help="lattice evolution grids")
    common(p)
    p.add_argument("--map", dest="map_kind", default="dkdv")
    p.add_argument("--backend", default="funcfield", choices=["funcfield", "padic", "rational"])
    p.add_argument("--p", type=int)
    p.add_argument("--delta0", type=int)
    p.add_argument("--delta")
    p.add_argument("--sites", type=int, default=16)
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--x-initial")
    p.add_argument("--y-boundary", default="2")

    p = sub.add_parser("entropy", help="exact height series and growth estimates")
    common(p)
    p.add_argument("--map", dest="map_kind")
    p.add_argument("--nmax", type=int, default=14)
    p.add_argument("--base", type=int, default=3)
    p.add_argument("--x0", default="1")
    p.add_argument("--x1", default="3")
    _map_params(p)

    p = sub.add_parser("bbs", help="box-ball evolution / valuation automaton")
    common(p)
    p.add_argument("--blocks", default="3,2,1")
    p.add_argument("--gap", type=int, default=3)
    p.add_argument("--capacity", type=int, default=1)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--valuation-ca", action="store_true")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--m", type=int, default=10)
    return parser


def _map_params(p):
    for name in ("a", "b", "c", "d", "q", "gamma", "delta", "z0", "tau0"):
        p.add_argument(f"--{name}")


class _Runner:
    def __init__(self, args):
        self.args = args
        self.out_dir = Path(args.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.t0 = time.time()
        self.outputs = {}

    def write(self, name: str, data) -> Path:
        path = self.out_dir / name
        if isinstance(data, bytes):
            path.write_bytes(data)
        else:
            path.write_text(data)
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        self.outputs[name] = digest
        return path

    def write_manifest(self):
        config = {k: v for k, v in vars(self.args).items() if v is not None}
        manifest = {
            "tool": "arithdyn",
            "version": __version__,
            "command": self.args.command,
            "config": config,
            "seed": getattr(self.args, "seed", None),
            "elapsed_s": round(time.time() - self.t0, 3),
            "outputs": self.outputs,
        }
        path = self.out_dir / "manifest.json"
        path.write_text(json.dumps(manifest, indent=1, default=str))


def _collect_params(args, kind):
    from .maps import _REQUIRED_PARAMS
    needed = _REQUIRED_PARAMS[kind]
    params = {}
    for name in ("a", "b", "c", "d", "q", "gamma", "delta", "z0", "tau0"):
        val = getattr(args, name, None)
        if val is not None:
            params[name] = Fraction(val)
    missing = needed - set(params)
    if missing:
        raise ConfigError(f"{kind} needs parameters {sorted(missing)}")
    return params


def _spec_from_args(args):
    from .maps import MapSpec, dp2_map
    kind = args.map_kind
    if kind is None:
        raise ConfigError("--map is required")
    params = _collect_params(args, kind)
    if kind == "dp2" and args.p:
        return dp2_map(a=params["a"], delta=params["delta"], z0=params["z0"], p=args.p)
    return MapSpec(kind, params)


# ---------------------------------------------------------------------------

def cmd_evolve(args, runner):
    if args.preset:
        from .presets import load_preset
        cfg = load_preset(args.preset)
        if cfg.get("system") == "dp2-rational":
            return _dp2_rational_table(cfg, runner)
        raise ConfigError(f"preset {args.preset!r} does not drive `evolve`")
    from .maps import FFBackend, RationalBackend, evolve
    spec = _spec_from_args(args)
    if args.x0 is None or args.x1 is None:
        raise ConfigError("need --x0 and --x1 initial values")
    if args.backend == "ff":
        if not args.p:
            raise ConfigError("--backend ff needs --p")
        from .fields import make_field
        if spec.kind == "dp2" and args.p >= 7:
            # over PF_p the extended seven-case rules never dead-end
            return _evolve_dp2_extended(args, runner, spec)
        backend = FFBackend(make_field(args.p))
    else:
        backend = RationalBackend()
    state = (backend.from_fraction(Fraction(args.x1)),
             backend.from_fraction(Fraction(args.x0)))
    # --steps N dumps x_0..x_N: N+1 rows; the initial state already holds x_1
    traj = evolve(spec, args.n0, state, max(0, args.steps - 1), backend)
    # the x column lists x_0, x_1, ... (the y of each state trails by one)
    xcol = [traj.states[0][1]] + [s[0] for s in traj.states]
    lines = ["n,x,event"]
    for i, x in enumerate(xcol):
        xs = encode_rat(x) if isinstance(x, Fraction) else str(x)
        event = traj.event if (i == len(xcol) - 1 and traj.event) else ""
        lines.append(f"{args.n0 + i},{xs},{event}")
    name = args.out or "trajectory.csv"
    runner.write(name, "\n".join(lines) + "\n")


def _evolve_dp2_extended(args, runner, spec):
    from .fields import make_field
    from .maps import dp2_extended_orbit
    field = make_field(args.p)
    sched = spec.params["schedule"]
    values = dp2_extended_orbit(args.p, sched, args.n0,
                                field.proj(int(Fraction(args.x0))),
                                field.proj(int(Fraction(args.x1))),
                                max(0, args.steps - 1))
    lines = ["n,x,event"]
    for i, v in enumerate(values):
        lines.append(f"{args.n0 + i},{v},")
    runner.write(args.out or "trajectory.csv", "\n".join(lines) + "\n")


def _dp2_rational_table(cfg, runner):
    from .solutions import TauTable, dp2_rational_reduced
    out = ["p,n,value"]
    for p in cfg["primes"]:
        table = TauTable(cfg["lam"])
        for n in range(1, cfg["periods"] * p + 1):
            v = dp2_rational_reduced(cfg["N"], cfg["lam"], p, n, table)
            out.append(f"{p},{n},{v}")
    runner.write("dp2_rational_table.csv", "\n".join(out) + "\n")


def cmd_agr(args, runner):
    from .agr import AGRConfig, class_names, test_agr, test_weak_agr
    config = AGRConfig(m_max=args.m_max, samples=args.samples, seed=args.seed)
    if args.weak:
        if args.map_kind != "dp2":
            raise ConfigError("--weak applies to dp2 only")
        report = test_weak_agr(args.p, config, n0=args.n0)
        data = {"p": report["p"], "n0": report["n0"], "classes": [
            {"residue": c.residue, "ybar": c.ybar, "kind": c.kind, "m": c.m,
             "limit": [str(v) for v in c.limit] if c.limit else None,
             "cycle": [[str(a), str(b)] for a, b in c.cycle] if c.cycle else None}
            for c in report["classes"]]}
        runner.write("weak_agr.json", json.dumps(data, indent=1))
        return
    spec = _spec_from_args(args)
    names = [args.class_name] if args.class_name else class_names(spec, args.p, args.n0)
    reports = [test_agr(spec, args.p, name, args.n0, config).to_json() for name in names]
    runner.write("agr_report.json", json.dumps(reports, indent=1))


def cmd_orbit(args, runner):
    from .initspace import (build_ext_space, cycles_csv, orbit_decomposition,
                            sakai_count, to_adjacency, to_dot)
    if args.preset:
        from .presets import load_preset
        cfg = load_preset(args.preset)
        q, a0, b0 = cfg["q"], cfg["alpha0"], cfg["beta0"]
    else:
        q, a0, b0 = args.q, args.alpha0, args.beta0
    space = build_ext_space(q, a0, b0)
    graph = orbit_decomposition(space)
    runner.write("orbit.dot", to_dot(space))
    runner.write("cycles.csv", cycles_csv(graph))
    summary = {"q": q, "alpha0": a0, "beta0": b0, "points": len(space.points),
               "sakai_count": sakai_count(q), "minimal_count": q * q + 6 * q - 3,
               "cycle_lengths": graph.cycle_lengths(), "ambiguous": space.ambiguous,
               "warnings": space.warnings, "adjacency": to_adjacency(space)}
    runner.write("orbit.json", json.dumps(summary, indent=1))


def _parse_range(text):
    lo, hi = text.split(":")
    return int(lo), int(hi)


def cmd_soliton(args, runner):
    from .fields import make_field
    from .lattice import render_ascii, render_csv, render_json, render_pgm
    cfg = None
    if args.preset:
        from .presets import load_preset
        cfg = load_preset(args.preset)
    if cfg and cfg.get("system") == "gen":
        from .solutions import GenDKdVEpsParams, GenDKdVParams, gen_dkdv_reduced_grids
        gp = GenDKdVParams(alpha=Fraction(cfg["alpha"]), beta=Fraction(cfg["beta"]),
                           ps=[Fraction(v) for v in cfg["ps"]],
                           gammas=[Fraction(v) for v in cfg["gammas"]])
        ep = GenDKdVEpsParams.from_rational(make_field(cfg["p"]), gp)
        plain, strict = gen_dkdv_reduced_grids(ep, tuple(cfg["n_range"]), tuple(cfg["t_range"]))
        meta = {"preset": args.preset, "p": cfg["p"]}
        _emit_grid(args, runner, plain, cfg["p"], "plain", meta)
        _emit_grid(args, runner, strict, cfg["p"], "strict", meta)
        return
    if cfg and cfg.get("system") == "dkdv-padic":
        from .padic import PadicContext
        from .solutions import DKdVSolitonParams, dkdv_soliton_rat
        params = DKdVSolitonParams(delta=Fraction(cfg["delta"]),
                                   gammas=[Fraction(g) for g in cfg["gammas"]],
                                   ls=[Fraction(l) for l in cfg["ls"]])
        ctx = PadicContext(cfg["p"])
        cells = {}
        (nlo, nhi), (tlo, thi) = cfg["n_range"], cfg["t_range"]
        for n in range(nlo, nhi + 1):
            for t in range(tlo, thi + 1):
                cells[(n - nlo + 1, t - tlo)] = ctx.reduce(dkdv_soliton_rat(params, n, t))
        _emit_grid(args, runner, cells, cfg["p"], "soliton", {"preset": args.preset})
        return
    if cfg:
        p, delta0 = cfg["p"], cfg["delta0"]
        gammas, ls = cfg["gammas"], cfg["ls"]
        n_range, t_range = tuple(cfg["n_range"]), tuple(cfg["t_range"])
    else:
        if not (args.p and args.gammas and args.ls and args.delta0 is not None):
            raise ConfigError("need --p, --delta0, --gammas, --ls (or --preset)")
        p, delta0 = args.p, args.delta0
        gammas = [int(v) for v in args.gammas.split(",")]
        ls = [int(v) for v in args.ls.split(",")]
        n_range, t_range = _parse_range(args.n_range), _parse_range(args.t_range)
    from .solutions import DKdVSolitonParams, dkdv_reduced_grid
    params = DKdVSolitonParams(delta="symbolic", gammas=gammas, ls=ls)
    grid = dkdv_reduced_grid(params, make_field(p), delta0, n_range, t_range)
    _emit_grid(args, runner, grid, p, "soliton", {"preset": args.preset, "p": p})


def _emit_grid(args, runner, cells, p, stem, meta):
    from .lattice import render_ascii, render_csv, render_json, render_pgm
    fmt = args.format
    if fmt == "csv":
        runner.write(f"{stem}.csv", render_csv(cells))
    elif fmt == "json":
        runner.write(f"{stem}.json", render_json(cells, meta))
    elif fmt == "ascii":
        runner.write(f"{stem}.txt", render_ascii(cells))
    elif fmt == "pgm":
        runner.write(f"{stem}.pgm", render_pgm(cells, p))
    else:
        raise ConfigError(f"format {fmt!r} not supported for grids")


def cmd_grid(args, runner):
    from .lattice import GridSpec, evolve_lattice, reduce_grid
    if args.preset:
        from .presets import load_preset
        cfg = load_preset(args.preset)
        spec = GridSpec(sites=cfg["sites"], steps=cfg["steps"],
                        x_initial=cfg["x_initial"],
                        y_boundary=[cfg["y_boundary"]] * cfg["steps"],
                        kind=cfg["kind"], backend=cfg["backend"], p=cfg["p"],
                        delta=cfg.get("delta"), delta0=cfg.get("delta0"))
        p = cfg["p"]
    else:
        if not args.p:
            raise ConfigError("need --p")
        x_init = ([Fraction(v) for v in args.x_initial.split(",")]
                  if args.x_initial else [6, 5, 4, 3] + [2] * (args.sites - 4))
        spec = GridSpec(sites=args.sites, steps=args.steps, x_initial=x_init[:args.sites],
                        y_boundary=[Fraction(args.y_boundary)] * args.steps,
                        kind=args.map_kind, backend=args.backend, p=args.p,
                        delta=Fraction(args.delta) if args.delta else None,
                        delta0=args.delta0)
        p = args.p
    gx, gy = evolve_lattice(spec)
    rx = reduce_grid(gx, spec)
    ry = reduce_grid(gy, spec)
    meta = {"map": spec.kind, "backend": spec.backend, "p": p}
    _emit_grid(args, runner, rx.values, p, "grid_x", meta)
    _emit_grid(args, runner, ry.values, p, "grid_y", meta)


def cmd_entropy(args, runner):
    from .entropy import (estimate_entropy, fit_growth, height_series,
                          series_csv, summary_json)
    if args.preset:
        from .presets import load_preset
        cfg = load_preset(args.preset)
        args.map_kind = cfg["map"]
        for k in ("a", "gamma"):
            if k in cfg:
                setattr(args, k, str(cfg[k]))
        x0, x1 = Fraction(cfg["x0"]), Fraction(cfg["x1"])
        nmax, base = cfg["nmax"], cfg["base"]
    else:
        x0, x1 = Fraction(args.x0), Fraction(args.x1)
        nmax, base = args.nmax, args.base
    spec = _spec_from_args(args)
    series = height_series(spec, (x1, x0), nmax, base=base)
    runner.write("heights.csv", series_csv(series))
    est = None
    fit = None
    try:
        est = estimate_entropy(series)
    except ArithdynError:
        pass
    try:
        fit = fit_growth(series, min(3, len(series) - 2))
    except ArithdynError:
        pass
    runner.write("entropy.json", json.dumps(summary_json(series, est, fit), indent=1))


def cmd_bbs(args, runner):
    from .lattice import BBSState, bbs_evolve, render_ascii, valuation_ca
    if args.preset:
        from .presets import load_preset
        cfg = load_preset(args.preset)
        blocks = cfg["blocks"]
        gap = cfg.get("gap", 3)
        steps = cfg["steps"]
        use_ca = cfg.get("valuation_ca", False)
        p, m = cfg.get("p", 2), cfg.get("m", 10)
        capacity = cfg.get("capacity", 1)
    else:
        blocks = [int(v) for v in args.blocks.split(",")]
        gap, steps, capacity = args.gap, args.steps, args.capacity
        use_ca, p, m = args.valuation_ca, args.p, args.m
    if use_ca:
        rows, meta = valuation_ca(p, m, blocks, steps, gap=gap)
        cells = {(n + 1, t): v for t, row in enumerate(rows) for n, v in enumerate(row)}
        out = ["n,t,value"]
        for (n, t) in sorted(cells, key=lambda k: (k[1], k[0])):
            out.append(f"{n},{t},{cells[(n, t)]}")
        runner.write("valuation_ca.csv", "\n".join(out) + "\n")
        runner.write("valuation_ca.txt", render_ascii(cells, background="0"))
        return
    balls = []
    for i, size in enumerate(blocks):
        balls.extend([1] * size)
        if i + 1 < len(blocks):
            balls.extend([0] * gap)
    history = bbs_evolve(BBSState([0] * 2 + balls, capacity), steps)
    cells = {(n + 1, t): v for t, st in enumerate(history) for n, v in enumerate(st.balls)}
    runner.write("bbs.txt", render_ascii(cells, background="0"))
    out = ["n,t,value"]
    for (n, t) in sorted(cells, key=lambda k: (k[1], k[0])):
        out.append(f"{n},{t},{cells[(n, t)]}")
    runner.write("bbs.csv", "\n".join(out) + "\n")


if __name__ == "__main__":
    sys.exit(main())
