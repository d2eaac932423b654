"""Command-line front end: ``spinchannel {sweep,evolve,ring,asymptotic,verify}``.

Exit codes: 0 success, 1 configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from . import reports
from .bessel import BesselRangeError
from .channel import CLASSICAL_FIDELITY, averaged_fidelity
from .closed_form import (
    BesselSeriesParams,
    LineSpec,
    RingSpec,
    asymptotic_entanglement,
    asymptotic_readout_time,
    line_amplitude_trace,
    line_bessel_entanglement,
    line_energies,
    line_mode_weights,
    ring_amplitude_trace,
    ring_dispersion,
    ring_mode_weights,
)
from .graph import amplitude_trace, build_sector_hamiltonian, diagonalize, endpoint_weights, read_graph_file
from .optimizer import SearchConfig, make_record, maximize_amplitude, thread_count
from .verify import run_checks

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2
EXACT_LIMIT = 2000
BENZENE_REFERENCE_T0 = 130.0


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> list[int]:
    """``A..B`` (inclusive), ``A`` or a comma list; values like ``1e12`` allowed."""
    text = text.strip()
    m = re.fullmatch(r"(\S+?)\.\.(\S+)", text)
    try:
        if m:
            a, b = int(float(m.group(1))), int(float(m.group(2)))
            if b < a:
                raise ConfigError(f"empty range {text!r}")
            return list(range(a, b + 1))
        return [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse N specification {text!r}") from None


def parse_sites(text: str | None) -> tuple[int, int] | None:
    if text is None:
        return None
    try:
        s, r = (int(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"--sites expects 's,r', got {text!r}") from None
    return s, r


def _config(args, default_tmax: float, default_step: float) -> SearchConfig:
    return SearchConfig(T_max=args.tmax if args.tmax is not None else default_tmax,
                        coarse_step=args.step if args.step is not None else default_step)


def _record_row(rec) -> dict:
    return {"N": rec.N, "t0": rec.t0, "f_max": rec.f_max, "F": rec.F, "E": rec.E, "alpha": rec.alpha}


def _graph_weights(args):
    if not args.graph:
        raise ConfigError("--preset graph requires --graph FILE")
    graph = read_graph_file(args.graph)
    sites = parse_sites(args.sites) or (1, graph.n_sites)
    spec = diagonalize(build_sector_hamiltonian(graph))
    return graph, sites, spec


# --- subcommands -------------------------------------------------------------

def cmd_sweep(args) -> reports.Table:
    cfg = _config(args, 4000.0, 0.05)
    columns = ["N", "t0", "f_max", "F", "E", "alpha"]
    rows = []
    if args.preset == "line":
        Ns = parse_range(args.n or "2..80")
        sites = parse_sites(args.sites)

        def job(N):
            s, r = sites or (1, N)
            line = LineSpec(N, J=args.j, B=args.b, s=s, r=r)
            opt = maximize_amplitude(line_mode_weights(line), line_energies(N, args.j), cfg)
            return _record_row(make_record(N, opt, args.j))
    elif args.preset == "ring":
        Ns = parse_range(args.n or "2..20")

        def job(N):
            ring = RingSpec(N, J=args.j, B=args.b)
            opt = maximize_amplitude(ring_mode_weights(ring), ring_dispersion(ring), cfg)
            return _record_row(make_record(N, opt, args.j))
    elif args.preset == "graph":
        graph, (s, r), spec = _graph_weights(args)
        Ns = [graph.n_sites]

        def job(N):
            opt = maximize_amplitude(endpoint_weights(spec, s, r), spec.energies, cfg)
            return _record_row(make_record(N, opt, 1.0))
    else:
        raise ConfigError(f"sweep does not support preset {args.preset!r}")

    rows = _parallel(job, Ns)
    above = sum(1 for row in rows if row["F"] > CLASSICAL_FIDELITY)
    print(f"classical bound F > 2/3 met by {above}/{len(rows)} rows", file=sys.stderr)
    return reports.Table("sweep", columns, rows, _params(args, cfg))


def cmd_evolve(args) -> reports.Table:
    tmax = args.tmax if args.tmax is not None else 20.0
    step = args.step if args.step is not None else 0.01
    if not (tmax > 0 and step > 0):
        raise ConfigError("--tmax and --step must be positive")
    times = np.arange(int(math.floor(tmax / step + 1e-9)) + 1) * step
    sites = parse_sites(args.sites)
    if args.preset == "line":
        N = parse_range(args.n or "8")[0]
        s, r = sites or (1, N)
        f = line_amplitude_trace(LineSpec(N, J=args.j, B=args.b, s=s, r=r), times)
    elif args.preset in ("ring", "benzene"):
        if args.preset == "benzene":
            ring = RingSpec.benzene(B=args.b)
        else:
            ring = RingSpec(parse_range(args.n or "2")[0], J=args.j, B=args.b)
        if sites:
            ring = RingSpec(ring.half_size, ring.J, ring.B, sites[0], sites[1], ring.couplings)
        f = ring_amplitude_trace(ring, times)
    elif args.preset == "graph":
        _, (s, r), spec = _graph_weights(args)
        f = amplitude_trace(spec, s, r, times)
    else:
        raise ConfigError(f"unknown preset {args.preset!r}")
    a = np.minimum(np.abs(f), 1.0)
    rows = [{"t": float(t), "re_f": float(z.real), "im_f": float(z.imag), "abs_f": float(x),
             "F": averaged_fidelity(float(x)), "E": float(x)}
            for t, z, x in zip(times, f, a)]
    params = _params(args, None) | {"tmax": tmax, "step": step}
    return reports.Table("evolve", ["t", "re_f", "im_f", "abs_f", "F", "E"], rows, params,
                         three_decimal=(), sig_digits=12)


def cmd_ring(args) -> reports.Table:
    columns = ["N", "sites", "t0", "f_max", "F", "E", "alpha", "line_f_max", "delta_E"]
    if args.preset == "benzene":
        cfg = _config(args, 500.0, 0.05)
        ring = RingSpec.benzene(B=args.b)
        opt = maximize_amplitude(ring_mode_weights(ring), ring_dispersion(ring), cfg)
        row = _record_row(make_record(ring.half_size, opt))
        row.update(sites=ring.n_sites, line_f_max=None, delta_E=None)
        print(f"benzene peak F = {row['F']:.4f} at t0 = {row['t0']:.4g} "
              f"(reference readout time {BENZENE_REFERENCE_T0:g})", file=sys.stderr)
        return reports.Table("ring", columns, [row], _params(args, cfg))
    if args.preset != "ring":
        raise ConfigError(f"ring does not support preset {args.preset!r}")
    cfg = _config(args, 4000.0, 0.05)

    def job(N):
        ring = RingSpec(N, J=args.j, B=args.b)
        ring_opt = maximize_amplitude(ring_mode_weights(ring), ring_dispersion(ring), cfg)
        row = _record_row(make_record(N, ring_opt, args.j))
        line = LineSpec(N, J=args.j, B=args.b)
        line_best = maximize_amplitude(line_mode_weights(line), line_energies(N, args.j), cfg).best
        row.update(sites=ring.n_sites, line_f_max=line_best, delta_E=abs(line_best - ring_opt.best))
        return row

    rows = _parallel(job, parse_range(args.n or "2..12"))
    return reports.Table("ring", columns, rows, _params(args, cfg))


def cmd_asymptotic(args) -> reports.Table:
    Ns = parse_range(args.n or "100,1000,10000,1000000,1000000000000")
    rows = []
    for N in Ns:
        if N < 1:
            raise ConfigError("N must be >= 1")
        t0 = asymptotic_readout_time(N, args.j)
        row = {"N": N, "t0_formula": t0, "E_formula": asymptotic_entanglement(N),
               "E_exact_if_feasible": None}
        if N <= EXACT_LIMIT:
            try:
                row["E_exact_if_feasible"] = line_bessel_entanglement(BesselSeriesParams(N, 2 * args.j * t0))
            except BesselRangeError as exc:
                row["note"] = str(exc)
        else:
            row["note"] = f"exact series skipped for N > {EXACT_LIMIT}"
        if "note" in row:
            print(f"N={N}: {row['note']}", file=sys.stderr)
        rows.append(row)
    return reports.Table("asymptotic", ["N", "t0_formula", "E_formula", "E_exact_if_feasible"],
                         rows, _params(args, None))


def cmd_verify(args) -> int:
    results = run_checks(max_n=args.max_n, fault=args.inject_fault)
    for res in results:
        print(f"[{'PASS' if res.passed else 'FAIL'}] {res.name}: {res.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# --- plumbing ----------------------------------------------------------------

def _parallel(job, items):
    threads = thread_count()
    if threads > 1 and len(items) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(job, items))
    return [job(x) for x in items]


def _params(args, cfg: SearchConfig | None) -> dict:
    params = {"preset": args.preset, "n": args.n, "J": args.j, "B": args.b, "sites": args.sites}
    if cfg is not None:
        params.update(tmax=cfg.T_max, step=cfg.coarse_step)
    return params


def _write(table: reports.Table, fmt: str, out: str | None) -> None:
    text = {"csv": reports.to_csv, "json": reports.to_json, "svg": reports.to_svg}[fmt](table)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinchannel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, presets, default_preset):
        p.add_argument("--preset", choices=presets, default=default_preset)
        p.add_argument("--n", help="N range 'A..B', single value, or comma list")
        p.add_argument("--j", type=float, default=1.0, help="coupling scale J")
        p.add_argument("--b", type=float, default=0.0, help="uniform field B")
        p.add_argument("--tmax", type=float, help="time horizon in units of 1/J")
        p.add_argument("--step", type=float, help="time grid step")
        p.add_argument("--sites", help="sender,receiver sites 's,r' (1-based)")
        p.add_argument("--graph", help="edge-list file for --preset graph")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=["csv", "json", "svg"], default="csv")

    common(sub.add_parser("sweep", help="max fidelity / entanglement per N"), ["line", "ring", "graph"], "line")
    common(sub.add_parser("evolve", help="time trace of f(t)"), ["line", "ring", "benzene", "graph"], "line")
    common(sub.add_parser("ring", help="ring optima and line/ring coincidence"), ["ring", "benzene"], "ring")
    common(sub.add_parser("asymptotic", help="large-N readout time and entanglement"), ["line"], "line")
    pv = sub.add_parser("verify", help="run the oracle / property suite")
    pv.add_argument("--max-n", type=int, default=8)
    pv.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


COMMANDS = {"sweep": cmd_sweep, "evolve": cmd_evolve, "ring": cmd_ring, "asymptotic": cmd_asymptotic}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if not args.j > 0:
            raise ConfigError("--j must be positive")
        if args.b < 0:
            raise ConfigError("--b must be non-negative")
        table = COMMANDS[args.command](args)
        _write(table, args.format, args.out)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"spinchannel: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
