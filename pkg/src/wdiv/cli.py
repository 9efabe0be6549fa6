"""Command-line front end.

Subcommands: dsum, weighted, voronoi, constants, moments, census, sweep.
Data files are CSV with a mandatory header row, 15-significant-digit
numbers, '.' decimal separator and '\\n' line endings; no timestamps go
into data files, so identical argv and version reproduce byte-identical
output.  A JSON run manifest (parameters, version, duration, sha256 of
each output) is written next to each data file.

Exit codes: 0 success, 1 argument errors, 2 numeric/budget failures.
``WDIV_OUT_DIR`` sets the default output directory; ``--config`` points
at a key=value file whose entries act as defaults (flags override).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, backend
from .arith import BudgetError, CongruenceSpec
from .congruence import D_step_values, delta_cong, main_term
from .constants import B2_constant, Bk_constant
from .moments import integrate_S_power, large_value_census, moment_report
from .voronoi import CoefficientTable, R0_series_batch
from .weighted import S_direct, S_step_series, phases


def _fmt(v) -> str:
    """15 significant digits, locale-free."""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".15g")


#: argv of the run in progress, recorded into manifests.
_ARGV: list[str] = []


@dataclass
class RunManifest:
    """Reproducibility record written alongside every data file."""

    command: str
    argv: list[str]
    params: dict
    version: str = __version__
    backend: str = field(default_factory=backend.backend_name)
    started: str = ""
    duration_s: float = 0.0
    outputs: dict = field(default_factory=dict)

    def write(self, path: str) -> None:
        with open(path, "w", newline="\n") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, (int, float, np.floating, np.integer)) else v for v in row])


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; the contract here is exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_config(path: str) -> dict:
    """key=value lines; '#' comments; values coerced to int/float if possible."""
    out: dict = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            for conv in (int, float):
                try:
                    val = conv(val)
                    break
                except ValueError:
                    continue
            out[key.replace("-", "_")] = val
    return out


def _add_phase_args(p: _Parser) -> None:
    p.add_argument("--q1", type=int, required=True)
    p.add_argument("--a1", type=int, required=True)
    p.add_argument("--q2", type=int, required=True)
    p.add_argument("--a2", type=int, required=True)


def _add_spec_args(p: _Parser) -> None:
    p.add_argument("--r1", type=int, required=True)
    p.add_argument("--q1", type=int, required=True)
    p.add_argument("--r2", type=int, required=True)
    p.add_argument("--q2", type=int, required=True)


def _add_common(p: _Parser) -> None:
    p.add_argument("--out", help="output CSV path (relative paths land in --outdir)")
    p.add_argument("--manifest", help="manifest path (default: <out>.manifest.json)")
    p.add_argument("--config", help="key=value defaults file")
    p.add_argument("--outdir", help="output directory (default: $WDIV_OUT_DIR or '.')")
    p.add_argument("--threads", type=int, default=1, help="worker cap for sweeps")


def build_parser() -> _Parser:
    ap = _Parser(prog="wdiv", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dsum", help="congruence divisor summatory function at one point")
    _add_spec_args(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--mode", choices=("hyperbola", "brute"), default="hyperbola")
    _add_common(p)

    p = sub.add_parser("weighted", help="weighted divisor sum; optional step-series table")
    _add_phase_args(p)
    p.add_argument("--t", type=float, help="argument of the direct sum")
    p.add_argument("--x", type=float, help="alternative: t = q1*q2*x")
    p.add_argument("--tmax", type=int, help="emit series.csv rows for t_left = 1..tmax-1")
    p.add_argument("--r1", type=int, help="residue for the D/delta columns (default a1 mod q1)")
    p.add_argument("--r2", type=int, help="residue for the D/delta columns (default a2 mod q2)")
    _add_common(p)

    p = sub.add_parser("voronoi", help="head-series residual-variance ratios")
    _add_phase_args(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--ys", default="100,1000", help="comma-separated head cuts")
    _add_common(p)

    p = sub.add_parser("constants", help="moment-series constants B_k")
    _add_phase_args(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--y", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("moments", help="empirical moment vs. main term at one T")
    _add_phase_args(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--y", type=int, default=100_000, help="B-series head cut")
    _add_common(p)

    p = sub.add_parser("census", help="well-spaced large values of |Delta| on [T/2, T]")
    _add_spec_args(p)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--V", type=float, help="single threshold")
    p.add_argument("--vmin", type=float)
    p.add_argument("--vmax", type=float)
    p.add_argument("--vcount", type=int, default=8)
    p.add_argument("--spacing", type=float, help="default: spacing = V")
    _add_common(p)

    p = sub.add_parser("sweep", help="dyadic T batch of moment reports")
    _add_phase_args(p)
    p.add_argument("--Tmin", type=float, required=True)
    p.add_argument("--Tmax", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--y", type=int, default=100_000)
    _add_common(p)

    return ap


def _resolve_out(args) -> tuple[str | None, str | None]:
    if not args.out:
        return None, None
    outdir = args.outdir or os.environ.get("WDIV_OUT_DIR") or "."
    out = args.out if os.path.isabs(args.out) else os.path.join(outdir, args.out)
    manifest = args.manifest or out + ".manifest.json"
    os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
    return out, manifest


def _phases_of(args):
    return phases(args.a1, args.q1, args.a2, args.q2)


def _spec_of(args) -> CongruenceSpec:
    return CongruenceSpec(args.r1, args.q1, args.r2, args.q2)


def _finish(args, command: str, params: dict, out: str | None, manifest: str | None, t0: float, started: str) -> None:
    if out is None:
        return
    man = RunManifest(
        command=command,
        argv=list(_ARGV),
        params=params,
        started=started,
        duration_s=round(time.time() - t0, 6),
        outputs={out: _sha256(out)},
    )
    man.write(manifest)


def _cmd_dsum(args) -> int:
    spec = _spec_of(args)
    s = delta_cong(args.x, spec, mode=args.mode)
    print(f"D={_fmt(s.D)} main={_fmt(s.main)} delta={_fmt(s.delta)}")
    return 0


def _cmd_weighted(args, t0, started) -> int:
    pair = _phases_of(args)
    if args.t is None and args.x is None and args.tmax is None:
        raise ValueError("weighted needs --t, --x or --tmax")
    if args.t is not None or args.x is not None:
        t = args.t if args.t is not None else pair.Q * args.x
        print(f"S={_fmt(S_direct(t, pair))}")
    out, manifest = _resolve_out(args)
    if args.tmax is not None and out:
        r1 = args.r1 if args.r1 is not None else (args.a1 - 1) % args.q1 + 1
        r2 = args.r2 if args.r2 is not None else (args.a2 - 1) % args.q2 + 1
        spec = CongruenceSpec(r1, args.q1, r2, args.q2)
        series = S_step_series(args.tmax, pair)
        Dv = D_step_values(args.tmax - 1, spec)
        mids = np.arange(1, args.tmax) + 0.5
        deltas = Dv[1:] - main_term(mids, spec, allow_small=True)
        rows = [
            (m, float(series.values[m]), float(Dv[m]), float(deltas[m - 1]))
            for m in range(1, args.tmax)
        ]
        _write_csv(out, ["t_left", "S", "D", "delta"], rows)
        _finish(args, "weighted", _public_params(args), out, manifest, t0, started)
    return 0


def _cmd_voronoi(args, t0, started) -> int:
    pair = _phases_of(args)
    ys = sorted(int(s) for s in str(args.ys).split(","))
    T = args.T
    Q = pair.Q
    need = int(math.ceil(Q * T))
    series = S_step_series(need, pair)
    table = CoefficientTable.build(max(ys), pair)
    nodes, wts = np.polynomial.legendre.leggauss(2)
    m = np.arange(Q, need)
    den = 0.0
    num = {y: 0.0 for y in ys}
    for xi, wi in zip(nodes, wts):
        tt = m + 0.5 * (xi + 1.0)
        xx = tt / Q
        sv = series.values[m]
        den += wi * float(np.sum(sv**2))
        r0 = R0_series_batch(xx, ys, pair, table)
        for j, y in enumerate(ys):
            num[y] += wi * float(np.sum((sv - r0[j]) ** 2))
    rows = [(y, num[y] / den) for y in ys]
    for y, ratio in rows:
        print(f"y={y} residual_variance_ratio={_fmt(ratio)}")
    out, manifest = _resolve_out(args)
    if out:
        _write_csv(out, ["y", "residual_variance_ratio"], rows)
        _finish(args, "voronoi", _public_params(args), out, manifest, t0, started)
    return 0


def _cmd_constants(args, t0, started) -> int:
    pair = _phases_of(args)
    const = B2_constant(pair, args.y) if args.k == 2 else Bk_constant(args.k, pair, args.y)
    name = f"B{args.k}"
    print(f"{name} head={_fmt(const.value)} y={const.y} tail_envelope={_fmt(const.tail_envelope)}")
    out, manifest = _resolve_out(args)
    if out:
        _write_csv(out, ["name", "y", "head", "tail_envelope"],
                   [(name, const.y, const.value, const.tail_envelope)])
        _finish(args, "constants", _public_params(args), out, manifest, t0, started)
    return 0


def _cmd_moments(args, t0, started) -> int:
    pair = _phases_of(args)
    rep = moment_report(args.T, args.k, pair, args.y)
    print(
        f"T={_fmt(rep.T)} k={args.k} empirical={_fmt(rep.empirical)} "
        f"main={_fmt(rep.main_term)} ratio={_fmt(rep.ratio)}"
    )
    out, manifest = _resolve_out(args)
    if out:
        _write_csv(out, ["T", "k", "empirical", "main_term", "ratio", "B_used"],
                   [(rep.T, rep.k, rep.empirical, rep.main_term, rep.ratio, rep.B_used)])
        _finish(args, "moments", _public_params(args), out, manifest, t0, started)
    return 0


def _cmd_census(args, t0, started) -> int:
    spec = _spec_of(args)
    if args.V is not None:
        Vs = [args.V]
    elif args.vmin is not None and args.vmax is not None:
        Vs = list(np.geomspace(args.vmin, args.vmax, args.vcount))
    else:
        raise ValueError("census needs --V or --vmin/--vmax")
    need = int(math.ceil(spec.Q * args.T))
    Dv = D_step_values(need, spec)
    rows = []
    for V in Vs:
        spacing = args.spacing if args.spacing is not None else V
        rep = large_value_census(args.T, V, spacing, spec, D_values=Dv)
        rows.append((rep.V, rep.spacing, rep.M))
        print(f"V={_fmt(rep.V)} spacing={_fmt(rep.spacing)} M={rep.M}")
    out, manifest = _resolve_out(args)
    if out:
        _write_csv(out, ["V", "spacing", "M"], rows)
        _finish(args, "census", _public_params(args), out, manifest, t0, started)
    return 0


def _cmd_sweep(args, t0, started) -> int:
    pair = _phases_of(args)
    Ts = []
    T = args.Tmin
    while T <= args.Tmax:
        Ts.append(T)
        T *= 2
    if not Ts:
        raise ValueError("empty dyadic range")
    series = S_step_series(int(math.ceil(pair.Q * Ts[-1])), pair)
    table = CoefficientTable.build(args.y, pair) if args.k >= 2 else None

    def one(T):
        return moment_report(T, args.k, pair, args.y, series=series, table=table)

    workers = max(1, args.threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            reps = list(ex.map(one, Ts))
    else:
        reps = [one(T) for T in Ts]
    rows = [(r.T, r.k, r.empirical, r.main_term, r.ratio, r.B_used) for r in reps]
    for r in reps:
        print(f"T={_fmt(r.T)} k={args.k} empirical={_fmt(r.empirical)} ratio={_fmt(r.ratio)}")
    out, manifest = _resolve_out(args)
    if out:
        _write_csv(out, ["T", "k", "empirical", "main_term", "ratio", "B_used"], rows)
        _finish(args, "sweep", _public_params(args), out, manifest, t0, started)
    return 0


def _public_params(args) -> dict:
    skip = {"command", "config", "manifest", "outdir"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def run(argv: list[str]) -> int:
    _ARGV[:] = argv
    ap = build_parser()
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1]
        ap.set_defaults(**_load_config(cfg_path))
    args = ap.parse_args(argv)
    t0 = time.time()
    started = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
    if args.command == "dsum":
        return _cmd_dsum(args)
    if args.command == "weighted":
        return _cmd_weighted(args, t0, started)
    if args.command == "voronoi":
        return _cmd_voronoi(args, t0, started)
    if args.command == "constants":
        return _cmd_constants(args, t0, started)
    if args.command == "moments":
        return _cmd_moments(args, t0, started)
    if args.command == "census":
        return _cmd_census(args, t0, started)
    if args.command == "sweep":
        return _cmd_sweep(args, t0, started)
    raise ValueError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return run(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 1
    except BrokenPipeError:
        return 0
    except (BudgetError, ValueError, OverflowError, FloatingPointError, ZeroDivisionError) as exc:
        print(f"wdiv: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
