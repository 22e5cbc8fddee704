"""Command-line front end.

Relative ``--out`` paths are resolved against ``$MOEBIUS_OUT_DIR`` when it is
set.  Outputs are written atomically and contain no timestamps, so repeating a
command reproduces its artifact byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .analysis import DEFAULT_INIT, DEFAULT_WINDOW, DISCARD_THRESHOLD, FitError, fit_lowp, fit_threshold, read_mc_csv
from .decoder import DecoderKind, decode
from .lattice import build_lattice, logical_parity, syndrome
from .noise import CSV_HEADER, default_jobs, failure_log_lines, run_exhaustive, run_mc
from .unified import build_unified

OUT_DIR_ENV = "MOEBIUS_OUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_OUTPUT = 4
EXIT_COMPUTE = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _odd_distance(s: str) -> int:
    try:
        d = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"distance must be an integer, got {s!r}") from None
    if d < 3 or d % 2 == 0:
        raise argparse.ArgumentTypeError(f"distance must be odd and >= 3, got {d}")
    return d


def _probability(s: str) -> float:
    try:
        p = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"probability must be a number, got {s!r}") from None
    if not 0.0 <= p <= 0.5:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 0.5], got {p}")
    return p


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _non_negative(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _pair(s: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {s!r}") from None
    return a, b


def resolve_out(path: str | None) -> Path | None:
    if path is None or path == "-":
        return None
    p = Path(path)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def write_atomic(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_OUTPUT) from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def read_error_file(path: str) -> tuple[int | None, list[int]]:
    """Accepts a JSON list of qubits or an object ``{"d": ..., "error": [...]}``; ``-`` reads stdin."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        obj = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read error file {path}: {exc}", EXIT_INPUT) from exc
    if isinstance(obj, dict):
        d, qubits = obj.get("d"), obj.get("error")
    else:
        d, qubits = None, obj
    if not isinstance(qubits, list) or not all(isinstance(q, int) for q in qubits):
        raise CliError(f"{path}: error must be a list of qubit indices", EXIT_INPUT)
    return d, qubits


def cmd_lattice(args) -> str:
    write_atomic(resolve_out(args.out), _dump(build_lattice(args.d).to_dict()))
    return f"lattice d={args.d}"


def cmd_unified(args) -> str:
    write_atomic(resolve_out(args.out), _dump(build_unified(args.d).to_dict()))
    return f"unified graph d={args.d}"


def decode_report(d: int, qubits: list[int], variant: str, upsilon: int) -> dict:
    lat = build_lattice(d)
    bad = [q for q in qubits if not 0 <= q < lat.n_qubits]
    if bad:
        raise CliError(f"qubit indices {bad} out of range for d={d} ({lat.n_qubits} qubits)", EXIT_INPUT)
    u = build_unified(d)
    res = decode(u, syndrome(lat, qubits), variant, upsilon)
    if res.ell_alt is None and DecoderKind.parse(variant) is DecoderKind.MOEBIUS:
        from .decoder import alternative_matching
        alt = alternative_matching(u, syndrome(lat, qubits), res)
        ell_alt = None if alt is None else alt.ell
    else:
        ell_alt = res.ell_alt
    return {
        "d": d,
        "error": sorted(set(qubits)),
        "defects": list(res.defects),
        "ell_or": res.ell_or,
        "ell_alt": ell_alt,
        "ell": res.ell,
        "predicted_parity": res.predicted_parity,
        "variant": res.variant.value,
        "decoder": DecoderKind.parse(variant).value,
        "success": res.predicted_parity == logical_parity(lat, qubits),
    }


def cmd_decode(args) -> str:
    d_file, qubits = read_error_file(args.error)
    d = args.d if args.d is not None else d_file
    if d is None:
        raise CliError("distance not given on the command line or in the error file", EXIT_USAGE)
    if d_file is not None and d_file != d:
        raise CliError(f"--d {d} disagrees with d={d_file} in {args.error}", EXIT_USAGE)
    report = decode_report(d, qubits, args.variant, args.upsilon)
    write_atomic(resolve_out(args.out), _dump(report))
    return f"decode d={d} ell_or={report['ell_or']} success={report['success']}"


def cmd_mc(args) -> str:
    rows = [CSV_HEADER]
    for d in args.d:
        for p in args.p:
            rows.append(run_mc(d, p, args.trials, args.seed, args.variant, args.upsilon, args.jobs).csv_row())
    write_atomic(resolve_out(args.out), "\n".join(rows) + "\n")
    return f"mc {len(rows) - 1} point(s)"


def cmd_exhaust(args) -> str:
    res = run_exhaustive(args.d, args.w_max, args.variant, args.upsilon, args.chunk_size, args.jobs,
                         args.chunks)
    out = resolve_out(args.out)
    summary = res.to_dict()
    write_atomic(out, _dump(summary))
    if args.failure_log:
        write_atomic(resolve_out(args.failure_log), "".join(x + "\n" for x in failure_log_lines(res)))
    return f"exhaust d={res.d} configs_tested={res.configs_tested} failures={res.n_failures}"


def _read_csv(path: str):
    try:
        return read_mc_csv(path)
    except (OSError, KeyError, ValueError) as exc:
        raise CliError(f"cannot read MC table {path}: {exc}", EXIT_INPUT) from exc


def cmd_fit_lowp(args) -> str:
    fit = fit_lowp(_read_csv(args.input), args.discard)
    write_atomic(resolve_out(args.out), _dump(fit.to_dict()))
    return f"fit-lowp alpha={fit.alpha:.4f} gamma={fit.gamma:.4f}"


def cmd_fit_threshold(args) -> str:
    fit = fit_threshold(_read_csv(args.input), args.init, args.window)
    write_atomic(resolve_out(args.out), _dump(fit.to_dict()))
    return f"fit-threshold p_c={fit.p_c:.5f} nu0={fit.nu0:.4f}"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="moebius-decoder", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, multi_d=False, decoder=False, jobs=False):
        if multi_d:
            p.add_argument("--d", type=_odd_distance, nargs="+", required=True)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if decoder:
            p.add_argument("--variant", choices=[k.value for k in DecoderKind], default="comparative")
            p.add_argument("--upsilon", type=_positive, default=1)
        if jobs:
            p.add_argument("--jobs", type=_positive, default=default_jobs())

    p = sub.add_parser("lattice", help="dump the code lattice as JSON")
    p.add_argument("--d", type=_odd_distance, required=True)
    common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("unified", help="dump the unified matching graph as JSON")
    p.add_argument("--d", type=_odd_distance, required=True)
    common(p)
    p.set_defaults(func=cmd_unified)

    p = sub.add_parser("decode", help="decode one error read from a JSON file")
    p.add_argument("--d", type=_odd_distance, default=None)
    p.add_argument("--error", required=True, help="JSON file or - for stdin")
    common(p, decoder=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("mc", help="Monte Carlo logical failure rates")
    p.add_argument("--p", type=_probability, nargs="+", required=True)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=_non_negative, default=0)
    common(p, multi_d=True, decoder=True, jobs=True)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("exhaust", help="decode every error up to a given weight")
    p.add_argument("--d", type=_odd_distance, required=True)
    p.add_argument("--w-max", type=_positive, default=None)
    p.add_argument("--chunk-size", type=_positive, default=200_000)
    p.add_argument("--chunks", type=_non_negative, nargs="+", default=None, help="only run these chunk indices")
    p.add_argument("--failure-log", default=None, help="JSON-lines file with one failing support per line")
    common(p, decoder=True, jobs=True)
    p.set_defaults(func=cmd_exhaust)

    p = sub.add_parser("fit-lowp", help="fit the low-p power law to an MC table")
    p.add_argument("--input", required=True)
    p.add_argument("--discard", type=float, default=DISCARD_THRESHOLD)
    common(p)
    p.set_defaults(func=cmd_fit_lowp)

    p = sub.add_parser("fit-threshold", help="fit the threshold crossing to an MC table")
    p.add_argument("--input", required=True)
    p.add_argument("--init", type=_pair, default=DEFAULT_INIT, help="p_c,nu0")
    p.add_argument("--window", type=_pair, default=DEFAULT_WINDOW, help="p_min,p_max")
    common(p)
    p.set_defaults(func=cmd_fit_threshold)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "exhaust" and args.w_max is not None and args.w_max > (args.d - 1) // 2:
        print(f"error: --w-max must be <= {(args.d - 1) // 2} at d={args.d}", file=sys.stderr)
        return EXIT_USAGE
    try:
        summary = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
