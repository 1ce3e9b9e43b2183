"""Command-line surface and file formats.

Subcommands: params (theorem parameter table), generate (write a net file),
analyze (quality report), gap (averaging-operator spectrum on S^2), su2
(export an S^3 net as special-unitary matrices).

Net files are plain text ("SPHNET 1" header, one point per line with 17
significant digits and an integer multiplicity); reports are JSON.  Output
files are written atomically (temp file + rename).  Exit codes: 0 success,
1 domain or runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import __version__, analysis, netgen, params
from .errors import (
    CapacityError,
    DimensionError,
    DomainError,
    NetFormatError,
    ResolutionError,
)
from .geometry import UnitVector, sample_generator_set
from .netgen import SphericalNet

NET_MAGIC = "SPHNET 1"
REPORT_SCHEMA_VERSION = 1


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".spherenet-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_net(net: SphericalNet, path: str):
    """Write a net file; points round-trip exactly at 17 significant digits."""
    meta = net.meta
    lines = [
        NET_MAGIC,
        f"n={net.dim} count={net.distinct_count} mode={meta['mode']} "
        f"seed={meta['seed']} k={meta['k']} l={meta['l']}",
    ]
    for row, mult in zip(net.points, net.multiplicities):
        coords = " ".join(f"{v:.17g}" for v in row)
        lines.append(f"{coords} {int(mult)}")
    _atomic_write(path, "\n".join(lines) + "\n")


def _parse_header(line: str):
    fields = {}
    for token in line.split():
        if "=" not in token:
            raise NetFormatError(f"malformed header token {token!r}", line=2)
        key, value = token.split("=", 1)
        fields[key] = value
    required = ("n", "count", "mode", "seed", "k", "l")
    missing = [key for key in required if key not in fields]
    if missing:
        raise NetFormatError(f"header missing {', '.join(missing)}", line=2)
    try:
        n = int(fields["n"])
        count = int(fields["count"])
        seed = int(fields["seed"])
        k = int(fields["k"])
        l = int(fields["l"])
    except ValueError:
        raise NetFormatError("header fields n/count/seed/k/l must be integers", line=2)
    mode = fields["mode"]
    if mode not in ("full", "sampled"):
        raise NetFormatError(f"mode must be 'full' or 'sampled', got {mode!r}", line=2)
    if n < 1 or count < 1:
        raise NetFormatError("need n >= 1 and count >= 1", line=2)
    return n, count, mode, seed, k, l


def load_net(path: str) -> SphericalNet:
    """Parse a net file, reporting the offending line on malformed input."""
    with open(path) as handle:
        lines = handle.read().splitlines()
    if not lines or lines[0].strip() != NET_MAGIC:
        raise NetFormatError(f"expected magic {NET_MAGIC!r}", line=1)
    if len(lines) < 2:
        raise NetFormatError("missing header", line=2)
    n, count, mode, seed, k, l = _parse_header(lines[1])
    body = lines[2:]
    while body and not body[-1].strip():
        body.pop()
    if len(body) != count:
        raise NetFormatError(
            f"expected {count} point lines, found {len(body)}", line=3 + len(body))
    points = np.empty((count, n + 1))
    mults = np.empty(count, dtype=np.int64)
    for i, line in enumerate(body):
        lineno = 3 + i
        tokens = line.split()
        if len(tokens) != n + 2:
            raise NetFormatError(
                f"expected {n + 1} coordinates and a multiplicity", line=lineno)
        try:
            coords = [float(t) for t in tokens[:-1]]
            mult = int(tokens[-1])
        except ValueError:
            raise NetFormatError("unparseable numeric field", line=lineno)
        if not all(math.isfinite(c) for c in coords):
            raise NetFormatError("coordinates must be finite", line=lineno)
        if abs(math.sqrt(sum(c * c for c in coords)) - 1.0) > 1e-10:
            raise NetFormatError("point is not unit-norm within 1e-10", line=lineno)
        if mult < 1:
            raise NetFormatError("multiplicity must be positive", line=lineno)
        points[i] = coords
        mults[i] = mult
    meta = {"mode": mode, "seed": seed, "k": k, "l": l}
    try:
        return SphericalNet(dim=n, points=points, multiplicities=mults, meta=meta)
    except ValueError as exc:
        raise NetFormatError(str(exc)) from exc


def save_su2(matrices: np.ndarray, path: str):
    """One matrix per line: re/im of the entries m00 m01 m10 m11 (8 floats)."""
    lines = []
    for mat in matrices:
        flat = [mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]]
        parts = []
        for entry in flat:
            parts.append(f"{entry.real:.17g}")
            parts.append(f"{entry.imag:.17g}")
        lines.append(" ".join(parts))
    _atomic_write(path, "\n".join(lines) + "\n")


def load_su2(path: str) -> np.ndarray:
    """Inverse of save_su2."""
    matrices = []
    with open(path) as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            tokens = line.split()
            if len(tokens) != 8:
                raise NetFormatError("expected 8 floats per line", line=lineno)
            vals = [float(t) for t in tokens]
            matrices.append([
                [vals[0] + 1j * vals[1], vals[2] + 1j * vals[3]],
                [vals[4] + 1j * vals[5], vals[6] + 1j * vals[7]],
            ])
    return np.array(matrices, dtype=complex)


def _validate_finite(value, context="report"):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return
    if isinstance(value, (int, float)):
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError(f"non-finite numeric field in {context}: {value!r}")
        return
    if isinstance(value, dict):
        for key, item in value.items():
            _validate_finite(item, f"{context}.{key}")
        return
    if isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _validate_finite(item, f"{context}[{i}]")
        return
    raise ValueError(f"unserializable field in {context}: {type(value).__name__}")


def cmd_params(args) -> int:
    bundle = params.theorem_params(args.n, args.eps, args.delta, args.cn)
    rows = [
        ("n", bundle.n),
        ("eps", f"{bundle.eps:.6g}"),
        ("delta", f"{bundle.delta:.6g}"),
        ("C_n", f"{bundle.c_n:.6g}"),
        ("a_n", f"{bundle.a_n:.10g}"),
        ("t", f"{bundle.t:.10g}"),
        ("r", f"{bundle.r:.10g}"),
        ("k", bundle.k),
        ("l", bundle.l),
        ("l_alt (variant without dimension factor)", bundle.l_alt),
        ("log2((2k)^l)", f"{bundle.log2_words:.2f}"),
    ]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}")
    return 0


def cmd_generate(args) -> int:
    gens = sample_generator_set(args.n, args.k, args.seed)
    x0 = UnitVector.north_pole(args.n)
    if args.sample is None:
        net = netgen.enumerate_net(gens, args.l, x0, cap=args.cap,
                                   dedupe_tol=args.dedupe_tol)
    else:
        word_rng = np.random.default_rng(
            np.random.SeedSequence(args.seed, spawn_key=(1,)))
        net = netgen.sample_words_net(gens, args.l, x0, args.sample, word_rng,
                                      dedupe_tol=args.dedupe_tol)
    save_net(net, args.out)
    print(f"wrote {args.out}: {net.distinct_count} distinct points, "
          f"total weight {net.total_weight} ({net.meta['mode']} mode)")
    return 0


def cmd_analyze(args) -> int:
    net = load_net(args.net)
    rng = np.random.default_rng(args.seed)
    report = analysis.quality_report(
        net, probes=args.probes, max_degree=args.max_degree, rng=rng)
    print(f"net: {net.distinct_count} distinct points on S^{net.dim}, "
          f"total weight {net.total_weight}")
    print(f"covering radius estimate: {report.covering_radius_est:.6f} rad "
          f"({report.probes} probes, statistical lower estimate)")
    for d in sorted(report.discrepancy):
        print(f"harmonic discrepancy d={d}: {report.discrepancy[d]:.6e}")
    print(f"W1 lower bound: {report.w1_lower_bound:.6e}")
    worst = max(report.integration_errors, key=report.integration_errors.get)
    print(f"largest integration error: {report.integration_errors[worst]:.6e} ({worst})")
    if args.report:
        payload = {
            "schema_version": REPORT_SCHEMA_VERSION,
            "tool": "spherenet",
            "tool_version": __version__,
            "inputs": {
                "net": args.net,
                "probes": args.probes,
                "max_degree": args.max_degree,
                "seed": args.seed,
            },
            "report": report.to_dict(),
        }
        _validate_finite(payload)
        _atomic_write(args.report, json.dumps(payload, indent=2) + "\n")
        print(f"wrote {args.report}")
    return 0


def cmd_gap(args) -> int:
    gens = sample_generator_set(2, args.k, args.seed)
    gaps = analysis.averaging_gap(gens, args.max_degree, args.resolution)
    print("degree  top_eigenvalue")
    for d in sorted(gaps):
        print(f"{d:>6d}  {gaps[d]:.8f}")
    return 0


def cmd_su2(args) -> int:
    net = load_net(args.net)
    matrices = analysis.su2_export(net)
    save_su2(matrices, args.out)
    print(f"wrote {args.out}: {len(matrices)} special-unitary matrices")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherenet",
        description="Equidistributed nets on the unit n-sphere from random rotations.")
    parser.add_argument("--version", action="version", version=f"spherenet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="evaluate the closed-form parameter formulas")
    p.add_argument("--n", type=int, required=True, help="sphere dimension (>= 2)")
    p.add_argument("--eps", type=float, required=True, help="target scale in (0, 1/(3n))")
    p.add_argument("--delta", type=float, required=True, help="failure probability in (0, 1)")
    p.add_argument("--cn", type=float, default=1.0, help="the constant C_n (default 1.0)")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("generate", help="generate a net and write it to a net file")
    p.add_argument("--n", type=int, required=True, help="sphere dimension")
    p.add_argument("--k", type=int, required=True, help="number of random generators")
    p.add_argument("--l", type=int, required=True, help="word length")
    p.add_argument("--seed", type=int, required=True, help="64-bit generator seed")
    p.add_argument("--out", required=True, help="output net file path")
    p.add_argument("--cap", type=int, default=netgen.DEFAULT_LEAF_CAP,
                   help="full-enumeration leaf cap (default 1e7)")
    p.add_argument("--sample", type=int, default=None,
                   help="sample this many words instead of enumerating")
    p.add_argument("--dedupe-tol", type=float, default=netgen.DEFAULT_DEDUPE_TOL,
                   help="point deduplication tolerance (default 1e-9)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="measure the quality of a stored net")
    p.add_argument("net", help="net file to analyze")
    p.add_argument("--probes", type=int, default=100_000,
                   help="probe count for the covering-radius estimate")
    p.add_argument("--max-degree", type=int, default=6,
                   help="largest harmonic degree for the discrepancy")
    p.add_argument("--seed", type=int, default=0, help="probe RNG seed")
    p.add_argument("--report", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gap", help="averaging-operator spectrum for random generators on S^2")
    p.add_argument("--k", type=int, required=True, help="number of random generators")
    p.add_argument("--seed", type=int, required=True, help="generator seed")
    p.add_argument("--max-degree", type=int, default=6, help="largest degree (<= 20)")
    p.add_argument("--resolution", type=int, default=None,
                   help="latitude node count (default 2*max_degree + 6)")
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("su2", help="export an S^3 net as special-unitary matrices")
    p.add_argument("net", help="net file with n=3")
    p.add_argument("--out", required=True, help="output text file")
    p.set_defaults(func=cmd_su2)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    try:
        return args.func(args)
    except (DomainError, DimensionError, CapacityError, ResolutionError,
            NetFormatError, ArithmeticError, ValueError, OSError) as exc:
        print(f"spherenet: error: {exc}", file=sys.stderr)
        return 1


def console_main():
    sys.exit(main())
