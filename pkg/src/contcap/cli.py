"""Batch front-end.  Subcommands: depolarizing-bounds, five-qubit-continuous,
classical-repetition, decoupling-mc, f-surface, entropy-checks, selftest.

Grids accept `start:stop:step` (inclusive endpoints within 1e-12) or
comma-separated lists; every subcommand takes `--config FILE` with a JSON
object mirroring its flags (command-line values win).  CSV output uses '.'
decimals at 17 significant digits.  The THREADS environment variable (positive
integer) caps the worker pool used for grid evaluation; cells are written in
grid order regardless of completion order.  Exit status is non-zero when any
pass field is false (1) or the flags are unusable (2).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import selftest as accept
from .bounds import cd_upper_bound, unitary_upper_bound_depolarizing
from .channels import (
    amplitude_damping_channel,
    channel_from_json,
    depolarizing_channel,
    Isometry,
    random_channel,
)
from .classical import classical_alpha_check
from .decoupling import decoupling_bound_check, decoupling_experiment
from .linalg import default_rng, max_entangled
from .qec import alpha_lower_bound_check, f_closed_form, five_qubit_code
from .selftest import DEFAULT_SEED


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def parse_grid(spec: str) -> list[float]:
    """`start:stop:step` inclusive of endpoints within 1e-12, or a comma list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad range syntax {spec!r}, expected start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be positive")
        n = int(np.floor((stop - start) / step + 1e-12)) + 1
        return [start + i * step for i in range(n)]
    return [float(p) for p in spec.split(",") if p.strip() != ""]


def _worker_count() -> int:
    raw = os.environ.get("THREADS", "").strip()
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise SystemExit(f"THREADS must be a positive integer, got {raw!r}")
        if n < 1:
            raise SystemExit(f"THREADS must be a positive integer, got {raw!r}")
        return n
    return min(4, os.cpu_count() or 1)


def grid_map(fn, cells: list):
    workers = _worker_count()
    if workers == 1 or len(cells) <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


def emit(header: list[str], rows: list[dict], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    else:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(row[h]) for h in header))
        text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser,
                  raw: list[str]) -> argparse.Namespace:
    if getattr(args, "config", None):
        doc = json.loads(Path(args.config).read_text())
        if not isinstance(doc, dict):
            parser.error("config file must contain a single JSON object")
        explicit = {a.split("=")[0].lstrip("-").replace("-", "_")
                    for a in raw if a.startswith("--")}
        for key, value in doc.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                parser.error(f"config key {key!r} does not mirror a flag")
            if attr not in explicit:
                setattr(args, attr, value)
    return args


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON file whose keys mirror this subcommand's flags")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")


def cmd_depolarizing_bounds(args) -> int:
    rs = parse_grid(str(args.r))
    ts = parse_grid(str(args.t))
    d = int(args.d)
    if args.s0:
        eigs = [float(x) for x in str(args.s0).split(",")]
        if len(eigs) != d or abs(sum(eigs) - 1) > 1e-9 or min(eigs) < 0:
            raise SystemExit("--s0 must list d nonnegative eigenvalues summing to 1")
        rho0 = np.diag(eigs).astype(complex)
    else:
        rho0 = np.eye(d, dtype=complex) / d
    cells = [(r, t) for r in rs for t in ts]

    def one(cell):
        r, t = cell
        up = unitary_upper_bound_depolarizing(r, t, rho0, d).value
        cd = cd_upper_bound(r, t, d).value
        return {"r": r, "t": t, "d": d, "upper_depolarizing": up, "upper_cd": cd}

    rows = grid_map(one, cells)
    emit(["r", "t", "d", "upper_depolarizing", "upper_cd"], rows, args.format, args.out)
    return 0


def cmd_five_qubit(args) -> int:
    ts = parse_grid(str(args.t))
    rs = parse_grid(str(args.r))
    code = five_qubit_code()
    cells = [(t, r) for t in ts for r in rs]

    def one(cell):
        t, r = cell
        fe, fb, passed = alpha_lower_bound_check(code, t, r)
        return {"t": t, "r": r, "F_e": fe, "f_bound": fb, "pass": passed}

    rows = grid_map(one, cells)
    emit(["t", "r", "F_e", "f_bound", "pass"], rows, args.format, args.out)
    return 0 if all(row["pass"] for row in rows) else 1


def cmd_classical(args) -> int:
    ts = parse_grid(str(args.t))
    rs = parse_grid(str(args.r))
    cells = [(t, r) for t in ts for r in rs]

    def one(cell):
        t, r = cell
        tv, fb, passed = classical_alpha_check(t, r)
        return {"t": t, "r": r, "tv_distance": tv, "f_bound": fb, "pass": passed}

    rows = grid_map(one, cells)
    emit(["t", "r", "tv_distance", "f_bound", "pass"], rows, args.format, args.out)
    return 0 if all(row["pass"] for row in rows) else 1


def cmd_f_surface(args) -> int:
    ts = parse_grid(str(args.t))
    rs = parse_grid(str(args.r))
    cells = [(t, r) for t in ts for r in rs]

    def one(cell):
        t, r = cell
        return {"t": t, "r": r, "f": f_closed_form(t, r)}

    rows = grid_map(one, cells)
    emit(["t", "r", "f"], rows, args.format, args.out)
    return 0


def _build_channel(args):
    family = args.family
    if family == "json":
        if not args.channel_file:
            raise SystemExit("--channel-file required for --family json")
        return channel_from_json(json.loads(Path(args.channel_file).read_text()))
    d = int(args.dim)
    if family == "depolarizing":
        return depolarizing_channel(d, float(args.param))
    if family == "amplitude-damping":
        if d != 2:
            raise SystemExit("amplitude damping is a qubit family")
        return amplitude_damping_channel(float(args.param))
    if family == "random":
        return random_channel(d, d, max(int(args.kraus), 1), default_rng(int(args.seed)))
    raise SystemExit(f"unknown channel family {family!r}")


def cmd_decoupling(args) -> int:
    ch = _build_channel(args)
    probe = max_entangled(ch.d_in)
    emb = Isometry(np.eye(ch.d_in, dtype=complex))
    run = decoupling_experiment(ch, probe, emb, int(args.samples), int(args.seed),
                                label=f"{args.family}({args.param})")
    lhs, rhs, passed = decoupling_bound_check(run, ch)
    doc = run.to_json()
    doc["pass"] = passed
    if args.format == "csv":
        emit(["channel", "n_samples", "seed", "mean", "std_error", "bound", "pass"],
             [{"channel": doc["channel"], "n_samples": doc["n_samples"],
               "seed": doc["seed"], "mean": doc["mean"],
               "std_error": doc["std_error"], "bound": doc["bound"],
               "pass": passed}],
             "csv", args.out)
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    return 0 if passed else 1


def cmd_entropy_checks(args) -> int:
    res = accept.check_entropy_suite(int(args.seed))
    rows = [{"check": res.name, "pass": res.passed, "detail": res.detail}]
    emit(["check", "pass", "detail"], rows, args.format, args.out)
    return 0 if res.passed else 1


def cmd_selftest(args) -> int:
    results, artifacts = accept.run_acceptance(int(args.seed), int(args.samples))
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] criterion {r.criterion}: {r.name} — {r.detail}")
    if args.out:
        written = accept.write_artifacts(artifacts, args.out)
        print(f"wrote {len(written)} artifact(s) to {args.out}", file=sys.stderr)
    ok = all(r.passed for r in results)
    print(f"selftest: {'all criteria passed' if ok else 'FAILURES PRESENT'}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="contcap",
        description="Continuous-time quantum coding experiments at desk scale.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("depolarizing-bounds", help="closed-form capacity bounds over an (r,t) grid")
    sp.add_argument("--r", required=True, help="rate grid")
    sp.add_argument("--t", required=True, help="time grid")
    sp.add_argument("--d", default=2, help="system dimension")
    sp.add_argument("--s0", default=None, help="eigenvalues of the target state (comma list)")
    _add_common(sp)
    sp.set_defaults(func=cmd_depolarizing_bounds)

    sp = sub.add_parser("five-qubit-continuous", help="continuous correction of the five-qubit code")
    sp.add_argument("--t", required=True)
    sp.add_argument("--r", required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_five_qubit)

    sp = sub.add_parser("classical-repetition", help="continuous majority-vote repetition code")
    sp.add_argument("--t", required=True)
    sp.add_argument("--r", required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_classical)

    sp = sub.add_parser("f-surface", help="the recovery bound f(t,r) over a grid")
    sp.add_argument("--t", required=True)
    sp.add_argument("--r", required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_f_surface)

    sp = sub.add_parser("decoupling-mc", help="Haar Monte-Carlo decoupling run")
    sp.add_argument("--family", default="depolarizing",
                    choices=("depolarizing", "amplitude-damping", "random", "json"))
    sp.add_argument("--param", default=0.5, help="family parameter (mixing/damping)")
    sp.add_argument("--dim", default=2)
    sp.add_argument("--kraus", default=2, help="Kraus count for the random family")
    sp.add_argument("--samples", default=200)
    sp.add_argument("--seed", default=DEFAULT_SEED)
    sp.add_argument("--channel-file", default=None, help="channel JSON for --family json")
    _add_common(sp)
    sp.set_defaults(func=cmd_decoupling)

    sp = sub.add_parser("entropy-checks", help="entropy inequality sweeps")
    sp.add_argument("--seed", default=DEFAULT_SEED)
    _add_common(sp)
    sp.set_defaults(func=cmd_entropy_checks)

    sp = sub.add_parser("selftest", help="run the full acceptance suite")
    sp.add_argument("--seed", default=DEFAULT_SEED)
    sp.add_argument("--samples", default=200, help="decoupling Monte-Carlo samples")
    sp.add_argument("--out", default=None, help="artifact directory")
    sp.add_argument("--config", help="JSON file whose keys mirror this subcommand's flags")
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(raw)
    args = _merge_config(args, parser, raw[1:])
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
