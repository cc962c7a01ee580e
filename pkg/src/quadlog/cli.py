"""Command-line front end.

Subcommands: `logm` (compute one logarithm), `study convergence` (fixed-m
error sweeps), `study adaptive` (adaptive-algorithm comparison), and
`genmat` (write a generator matrix to a file). Matrices travel in Matrix
Market format; stats are flat key=value records; studies emit CSV.

Exit codes: 0 success, 2 evaluation budget exhausted, 1 runtime error,
64 usage error, 65 parse error. QUADLOG_THREADS caps study parallelism
(0 or 1 means sequential).
"""

import argparse
import csv
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import backend
from .algorithms import logm_de, logm_de_adaptive, logm_gl, logm_gl_adaptive
from .errors import NotSPD, ParseError, QuadlogError
from .linalg import eig_logm_spd, is_symmetric, validate_matrix
from .testmats import (
    parse_matrix_spec,
    precondition_scale,
    read_matrix_market,
    realize,
    spec_name,
    write_matrix_market,
)
from .truncation import ToleranceConfig

DEFAULT_EPS_FIXED = 2.0 ** -53
METHODS = ("de", "gl", "de-adaptive", "gl-adaptive")
REFERENCE_DE_M = 3841


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting itself."""

    def error(self, message):
        raise _UsageError(message)


def _fmt(value):
    """Shortest round-trip text for floats; plain str otherwise."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _thread_count():
    raw = os.environ.get("QUADLOG_THREADS", "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        raise _UsageError(f"QUADLOG_THREADS must be an integer, got {raw!r}") from None
    if count < 0:
        raise _UsageError(f"QUADLOG_THREADS must be nonnegative, got {count}")
    return max(count, 1)


def _map_ordered(func, items):
    """Apply func over items, possibly in parallel, preserving order."""
    threads = _thread_count()
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def _load_input(text):
    """Resolve a --input argument to (name, matrix). Handles identity:n=K."""
    stripped = text.strip()
    if stripped.lower().startswith("identity:"):
        kv = stripped.partition(":")[2]
        key, _, value = kv.partition("=")
        if key.strip() != "n":
            raise ParseError(f"identity spec needs n=..., got {text!r}")
        try:
            n = int(value)
        except ValueError:
            raise ParseError(f"identity order must be an integer in {text!r}") from None
        if n < 1:
            raise ParseError(f"identity order must be positive, got {n}")
        return f"identity:n={n}", np.eye(n)
    spec = parse_matrix_spec(stripped)
    return spec_name(spec), validate_matrix(realize(spec))


def _open_out(path_or_dash, default_stream):
    if path_or_dash is None:
        return default_stream, False
    if path_or_dash == "-":
        return sys.stdout, False
    return open(path_or_dash, "w", encoding="utf-8"), True


def _write_matrix(stream_path, a):
    """Write a matrix to a path, or to stdout when the target is '-'/None."""
    if stream_path is None or stream_path == "-":
        n = a.shape[0]
        sys.stdout.write("%%MatrixMarket matrix array real general\n")
        sys.stdout.write(f"{n} {n}\n")
        for j in range(n):
            for i in range(n):
                sys.stdout.write(f"{float(a[i, j])!r}\n")
    else:
        write_matrix_market(stream_path, a)


def _reference_for(a_scaled):
    """Study reference: eigendecomposition for SPD, the 3841-point DE value
    otherwise. Returns (tag, matrix)."""
    if is_symmetric(a_scaled):
        try:
            return "eig", eig_logm_spd(a_scaled)
        except NotSPD:
            pass
    return f"de:{REFERENCE_DE_M}", logm_de(a_scaled, REFERENCE_DE_M, DEFAULT_EPS_FIXED).X


def cmd_logm(args):
    name, a = _load_input(args.input)
    t_start = time.perf_counter()
    n = a.shape[0]
    stats = {"matrix": name, "n": n, "method": args.method, "backend": backend.BACKEND}
    if bool((a == np.eye(n)).all()):
        x = np.zeros((n, n))
        stats.update(
            {
                "scale": 1.0,
                "evals": 0,
                "stop": "converged",
                "l": "NA",
                "r": "NA",
                "eps_effective": "NA",
                "clamped": "NA",
                "estimate": "NA",
            }
        )
        result_stop = "converged"
    else:
        if args.no_scale:
            a_run, scale = a, 1.0
        else:
            a_run, scale = precondition_scale(a, param_mode=args.param_mode)
        if args.method == "de":
            eps = DEFAULT_EPS_FIXED if args.eps is None else args.eps
            res = logm_de(a_run, args.m, eps, param_mode=args.param_mode)
        elif args.method == "gl":
            res = logm_gl(a_run, args.m)
        elif args.method == "de-adaptive":
            # Interval selection follows the quadrature tolerance unless
            # an interval tolerance is given explicitly.
            eps = args.zeta if args.eps is None else args.eps
            cfg = ToleranceConfig(eps=eps, zeta=args.zeta, m0=args.m0)
            res = logm_de_adaptive(a_run, cfg, param_mode=args.param_mode).final
        else:
            cfg = ToleranceConfig(eps=args.zeta, zeta=args.zeta, m0=args.m0)
            res = logm_gl_adaptive(a_run, cfg).final
        x = res.X if scale == 1.0 else res.X - math.log(scale) * np.eye(n)
        stats["scale"] = scale
        stats["evals"] = res.evals
        stats["stop"] = res.stop
        stats["l"] = res.interval.l if res.interval is not None else "NA"
        stats["r"] = res.interval.r if res.interval is not None else "NA"
        stats["eps_effective"] = res.interval.eps_effective if res.interval is not None else "NA"
        stats["clamped"] = res.interval.clamped if res.interval is not None else "NA"
        stats["estimate"] = res.err_estimate if res.err_estimate is not None else "NA"
        result_stop = res.stop
    stats["wall_time_s"] = time.perf_counter() - t_start
    _write_matrix(args.out, x)
    stream, close = _open_out(args.stats_out, sys.stderr)
    try:
        for key, value in stats.items():
            stream.write(f"{key}={_fmt(value)}\n")
    finally:
        if close:
            stream.close()
    return 2 if result_stop == "eval_limit" else 0


def _study_convergence_cell(task):
    a_scaled, ref, ref_norm, method, m = task
    if method == "de":
        res = logm_de(a_scaled, m, DEFAULT_EPS_FIXED)
    else:
        res = logm_gl(a_scaled, m)
    return float(np.linalg.norm(res.X - ref)) / ref_norm


def cmd_study_convergence(args):
    name, a = _load_input(args.matrix)
    a_scaled, _scale = precondition_scale(a)
    ref_tag, ref = _reference_for(a_scaled)
    ref_norm = float(np.linalg.norm(ref))
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for method in methods:
        if method not in ("de", "gl"):
            raise _UsageError(f"convergence methods must be de/gl, got {method!r}")
    m_list = _parse_int_list(args.m_list)
    tasks = [(a_scaled, ref, ref_norm, method, m) for method in methods for m in m_list]
    errors = _map_ordered(_study_convergence_cell, tasks)
    stream, close = _open_out(args.out, sys.stdout)
    try:
        stream.write(f"# reference={ref_tag}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["matrix", "method", "m", "rel_err_fro"])
        for (_a, _ref, _rn, method, m), err in zip(tasks, errors):
            writer.writerow([name, method, m, _fmt(float(err))])
    finally:
        if close:
            stream.close()
    return 0


def _study_adaptive_cell(task):
    a_scaled, ref, ref_norm, algorithm, zeta = task
    cfg = ToleranceConfig(eps=zeta, zeta=zeta, m0=16)
    if algorithm == "de-adaptive":
        res = logm_de_adaptive(a_scaled, cfg).final
    else:
        res = logm_gl_adaptive(a_scaled, cfg).final
    err = float(np.linalg.norm(res.X - ref)) / ref_norm
    return res.evals, err, res.stop


def cmd_study_adaptive(args):
    zetas = [float(z) for z in args.zetas.split(",") if z.strip()]
    loaded = []
    for text in args.matrices:
        name, a = _load_input(text)
        a_scaled, _scale = precondition_scale(a)
        ref_tag, ref = _reference_for(a_scaled)
        loaded.append((name, a_scaled, ref_tag, ref, float(np.linalg.norm(ref))))
    tasks = []
    for name, a_scaled, _tag, ref, ref_norm in loaded:
        for algorithm in ("de-adaptive", "gl-adaptive"):
            for zeta in zetas:
                tasks.append((a_scaled, ref, ref_norm, algorithm, zeta))
    results = _map_ordered(_study_adaptive_cell, tasks)
    stream, close = _open_out(args.out, sys.stdout)
    try:
        refs = ";".join(f"{name}={tag}" for name, _a, tag, _r, _n in loaded)
        stream.write(f"# reference={refs}\n")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["matrix", "algorithm", "zeta", "evals", "rel_err_fro", "stop"])
        idx = 0
        for name, _a, _tag, _ref, _rn in loaded:
            for algorithm in ("de-adaptive", "gl-adaptive"):
                for zeta in zetas:
                    evals, err, stop = results[idx]
                    idx += 1
                    writer.writerow([name, algorithm, _fmt(zeta), evals, _fmt(err), stop])
    finally:
        if close:
            stream.close()
    return 0


def cmd_genmat(args):
    spec = parse_matrix_spec(args.spec)
    if spec.kind == "file":
        raise _UsageError(f"genmat needs a generator spec, got {args.spec!r}")
    a = realize(spec)
    _write_matrix(args.out, a)
    return 0


def _parse_int_list(text):
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            out.append(int(piece))
        except ValueError:
            raise _UsageError(f"expected integer list, got {piece!r}") from None
    if not out:
        raise _UsageError("empty m list")
    return out


def _build_parser():
    parser = _Parser(prog="quadlog", description="Matrix logarithms by double-exponential and Gauss-Legendre quadrature.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_logm = sub.add_parser("logm", help="compute log(A) for one matrix")
    p_logm.add_argument("--input", required=True, help="Matrix Market path or generator spec (spd:n=50,kappa=1e4,seed=7; parter:n=10; identity:n=4; ...)")
    p_logm.add_argument("--method", choices=METHODS, default="de-adaptive")
    p_logm.add_argument("--m", type=int, default=121, help="abscissa count for fixed-m methods")
    p_logm.add_argument("--eps", type=float, default=None, help="interval-truncation tolerance (default: 2^-53 for fixed-m DE, zeta for de-adaptive)")
    p_logm.add_argument("--zeta", type=float, default=1e-8, help="adaptive quadrature tolerance")
    p_logm.add_argument("--m0", type=int, default=16, help="initial abscissa count for adaptive methods")
    p_logm.add_argument("--param-mode", choices=("exact", "approximate"), default="exact")
    p_logm.add_argument("--no-scale", action="store_true", help="skip the spectral-radius preconditioning scale")
    p_logm.add_argument("--out", default=None, help="output matrix path ('-' or omitted: stdout)")
    p_logm.add_argument("--stats-out", default=None, help="stats record path ('-': stdout; omitted: stderr)")
    p_logm.set_defaults(func=cmd_logm)

    p_study = sub.add_parser("study", help="reproduce the convergence / adaptive comparisons")
    study_sub = p_study.add_subparsers(dest="study_command", required=True)

    p_conv = study_sub.add_parser("convergence", help="fixed-m error sweep for one matrix")
    p_conv.add_argument("--matrix", required=True, help="matrix spec or file")
    p_conv.add_argument("--m-list", default="9,17,31,61,121,241,481,961", dest="m_list")
    p_conv.add_argument("--methods", default="de,gl")
    p_conv.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_conv.set_defaults(func=cmd_study_convergence)

    p_adapt = study_sub.add_parser("adaptive", help="adaptive DE vs GL comparison table")
    p_adapt.add_argument("--matrices", nargs="+", required=True)
    p_adapt.add_argument("--zetas", default="1e-8,1e-11")
    p_adapt.add_argument("--out", default=None, help="CSV path (default stdout)")
    p_adapt.set_defaults(func=cmd_study_adaptive)

    p_gen = sub.add_parser("genmat", help="write a generator matrix to a Matrix Market file")
    p_gen.add_argument("--spec", required=True)
    p_gen.add_argument("--out", default=None, help="output path (default stdout)")
    p_gen.set_defaults(func=cmd_genmat)

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 64
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 65
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QuadlogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
