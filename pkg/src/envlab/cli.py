"""Command-line surface: reproducible envelope/projection experiments.

Subcommands
  env      compute all envelopes of a subspace and their comparison flags
  verify   run a named property suite with seeded trials
  c2       tabulate the euclidean complementation curve to CSV
  proj     minimal projection norm onto a subspace
  pushout  glue two copies along a subspace / search for the counterexample
  ergodic  Cesaro projection (and optional ergodic value) of an operator

Every run emits a RunReport JSON: the echoed inputs, outputs, seed,
tolerance set, wall time and tool version.  Exit codes: 0 ok, 1 verification
failure, 2 usage error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__, complement, ergodic, isometry, partition, subspace
from .errors import ConvergenceError, EnvlabError, ParseError, UsageError
from .serialize import parse_operator, parse_space, parse_subspace, parse_vector
from .space import norm as space_norm
from .subspace import Subspace
from .suites import run_suite, suite_names

DEFAULT_TOL = 1e-9


def _default_seed() -> int:
    try:
        return int(os.environ.get("ENVLAB_SEED", "42"))
    except ValueError:
        return 42


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")


def _report(command: str, inputs: dict, outputs: dict, seed: int, tolerances: dict,
            t0: float) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "seed": seed,
        "tolerances": tolerances,
        "wall_time_ms": int(1000 * (time.perf_counter() - t0)),
        "version": __version__,
    }


def _emit(report: dict, out: str | None):
    text = json.dumps(report, indent=2, sort_keys=True, allow_nan=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _sanitize(value):
    """Replace non-finite floats for strict-JSON emission."""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def _subspace_json(sub: Subspace) -> dict:
    return {"dim": sub.dim, "basis": [list(map(float, b)) for b in sub.basis]}


def cmd_env(args) -> int:
    t0 = time.perf_counter()
    space = parse_space(_load_json(args.space))
    y = parse_subspace(space, _load_json(args.subspace), tol=args.tol)
    outputs: dict = {}
    envs: dict[str, Subspace] = {}
    if not math.isinf(space.p):
        envs["conditional"] = partition.conditional_envelope(y)
        envs["lattice"] = subspace.lattice_closure(space, y)
    if space.p == 2:
        envs["isometric"] = y
        envs["algebraic"] = y
        outputs["note"] = (
            "p=2: every subspace equals its envelope and is the range of the "
            "reference-orthogonal projection; no group enumeration performed"
        )
    else:
        envs["isometric"] = isometry.isometric_envelope(space, y, args.tol).subspace
        envs["algebraic"] = isometry.algebraic_envelope(space, y, args.tol)
        outputs["note"] = isometry.DISCRETE_NOTE
    minimal = None
    if space.p == 2:
        minimal = y
    elif subspace.is_unital(y, 1e-8) and not math.isinf(space.p):
        minimal = envs["conditional"]
        outputs["minimal_rule"] = (
            "unital range: the only contractive projection fixing the constants "
            "is the block average, so the minimal envelope is the conditional one"
        )
    outputs["envelopes"] = {k: _subspace_json(v) for k, v in envs.items()}
    outputs["minimal"] = _subspace_json(minimal) if minimal is not None else None
    names = sorted(envs)
    outputs["equal"] = {
        f"{a}=={b}": subspace.equal(envs[a], envs[b], 1e-7)
        for i, a in enumerate(names)
        for b in names[i + 1 :]
    }
    chain = {}
    if minimal is not None:
        chain["minimal<=isometric"] = all(
            subspace.contains(envs["isometric"], b, 1e-7) for b in minimal.basis
        )
    chain["isometric<=algebraic"] = all(
        subspace.contains(envs["algebraic"], b, 1e-7) for b in envs["isometric"].basis
    )
    chain["contains_input"] = all(
        subspace.contains(envs["isometric"], b, 1e-7) for b in y.basis
    )
    outputs["chain"] = chain
    report = _report(
        "env",
        {"space": space.to_json(), "subspace": y.to_json()},
        _sanitize(outputs),
        args.seed,
        {"subspace_tol": args.tol, "equality_tol": 1e-7},
        t0,
    )
    _emit(report, args.out)
    return 0


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    result = run_suite(args.suite, trials=args.trials, seed=args.seed)
    status = "PASS" if result.ok else "FAIL"
    print(
        f"{status} {result.name}: {result.passes}/{result.trials} checks, "
        f"worst residual {result.worst_residual:.3g}",
        file=sys.stderr,
    )
    report = _report(
        "verify",
        {"suite": args.suite, "trials": args.trials},
        _sanitize(result.to_json()),
        args.seed,
        {},
        t0,
    )
    _emit(report, args.out)
    return 0 if result.ok else 1


def _parse_grid(spec: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"bad grid spec {spec!r}; expected start:stop:step")
    if step <= 0 or stop < start:
        raise UsageError(f"bad grid spec {spec!r}")
    pts = list(np.arange(start, stop + 0.5 * step, step))
    return [float(p) for p in pts]


def cmd_c2(args) -> int:
    t0 = time.perf_counter()
    grid = _parse_grid(args.grid)
    rows = complement.scan_c2(grid)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["p", "c2", "monotone_flag"])
    for row in rows:
        writer.writerow([f"{row['p']:.12g}", f"{row['c2']:.15g}", int(row["monotone_flag"])])
    csv_text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        print(csv_text, end="")
    outputs = {
        "rows": len(rows),
        "monotone_all": all(r["monotone_flag"] for r in rows),
        "csv": args.out or "<stdout>",
    }
    report = _report("c2", {"grid": args.grid}, outputs, args.seed, {}, t0)
    _emit(report, args.out + ".report.json" if args.out else None)
    return 0


def cmd_proj(args) -> int:
    t0 = time.perf_counter()
    space = parse_space(_load_json(args.space))
    if args.p is not None:
        space = space.with_p(args.p)
    y = parse_subspace(space, _load_json(args.subspace), tol=args.tol)
    cfg = complement.SearchConfig(seed=args.seed)
    result = complement.min_projection_norm(space, y, space.p, cfg)
    check = complement.is_one_complemented(space, y, space.p, tol=1e-6)
    outputs = {
        "search": result.to_json(),
        "one_complemented": {
            "verdict": check.verdict,
            "minimax": check.minimax_verdict,
            "duality_linear": check.duality_linear,
            "expectation": check.expectation_verdict,
            "agree": check.agree,
        },
    }
    report = _report(
        "proj",
        {"space": space.to_json(), "subspace": y.to_json(), "p": space.p},
        _sanitize(outputs),
        args.seed,
        {"subspace_tol": args.tol, "one_complemented_tol": 1e-6},
        t0,
    )
    _emit(report, args.out)
    return 0


def cmd_pushout(args) -> int:
    t0 = time.perf_counter()
    if args.space and args.subspace:
        space = parse_space(_load_json(args.space))
        y = parse_subspace(space, _load_json(args.subspace), tol=args.tol)
        q = complement.pushout(space, y)
        rng = np.random.default_rng(args.seed)
        kernel_resid = max(
            q.quotient_norm(np.concatenate([b, -b])) for b in y.basis
        )
        emb_resid = 0.0
        for _ in range(12):
            x = rng.standard_normal(space.n)
            w = np.zeros(2 * space.n)
            w[: space.n] = x
            emb_resid = max(emb_resid, abs(q.quotient_norm(w) - space_norm(space, x)))
        outputs = {
            "quotient_dim": q.dim,
            "kernel_residual": kernel_resid,
            "embedding_residual": emb_resid,
        }
        if space.p == 1 or math.isinf(space.p):
            outputs["copy_norms"] = [
                q.op_norm_polyhedral(q.copy_projection(0)),
                q.op_norm_polyhedral(q.copy_projection(1)),
            ]
            outputs["lambda_glued"] = complement._lambda_in_quotient(q)
        inputs = {"space": space.to_json(), "subspace": y.to_json()}
    else:
        witness = complement.find_pushout_counterexample(seed=args.seed, tries=args.tries)
        outputs = witness.to_json()
        inputs = {"search": {"tries": args.tries}}
    report = _report(
        "pushout", inputs, _sanitize(outputs), args.seed, {"subspace_tol": args.tol}, t0
    )
    _emit(report, args.out)
    return 0


def cmd_ergodic(args) -> int:
    t0 = time.perf_counter()
    space = parse_space(_load_json(args.space))
    entries = parse_operator(space, _load_json(args.op))
    op = ergodic.certify(space, entries)
    rep = ergodic.cesaro_projection(op, tol=args.tol, max_iter=args.max_iter)
    outputs = {"cesaro": rep.to_json(), "certificate": op.certificate}
    if args.x:
        x = parse_vector(space, _load_json(args.x))
        value = ergodic.mean_ergodic_value(op, x, tol=args.tol, max_iter=args.max_iter)
        outputs["ergodic_value"] = [float(v) for v in value]
    report = _report(
        "ergodic",
        {"space": space.to_json(), "op": args.op, "x": args.x},
        _sanitize(outputs),
        args.seed,
        {"tol": args.tol, "max_iter": args.max_iter},
        t0,
    )
    _emit(report, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="envlab",
        description="envelopes, contractive projections and projection constants "
        "in finite weighted Lebesgue spaces",
    )
    top.add_argument("--version", action="version", version=f"envlab {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--seed", type=int, default=_default_seed(),
                       help="seed (default: ENVLAB_SEED or 42)")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--out", type=str, default=None, help="write the RunReport here")

    p_env = sub.add_parser("env", help="compute all envelopes of a subspace")
    p_env.add_argument("--space", required=True)
    p_env.add_argument("--subspace", required=True)
    common(p_env)
    p_env.set_defaults(fn=cmd_env)

    p_ver = sub.add_parser("verify", help="run a property suite")
    p_ver.add_argument("--suite", required=True,
                       help=f"one of: {', '.join(suite_names())}")
    p_ver.add_argument("--trials", type=int, default=None)
    common(p_ver)
    p_ver.set_defaults(fn=cmd_verify)

    p_c2 = sub.add_parser("c2", help="tabulate the euclidean complementation curve")
    p_c2.add_argument("--grid", required=True, help="start:stop:step, e.g. 1.1:6:0.1")
    common(p_c2)
    p_c2.set_defaults(fn=cmd_c2)

    p_proj = sub.add_parser("proj", help="minimal projection norm onto a subspace")
    p_proj.add_argument("--space", required=True)
    p_proj.add_argument("--subspace", required=True)
    p_proj.add_argument("--p", type=float, default=None)
    common(p_proj)
    p_proj.set_defaults(fn=cmd_proj)

    p_push = sub.add_parser("pushout", help="pushout gluing / counterexample search")
    p_push.add_argument("--space")
    p_push.add_argument("--subspace")
    p_push.add_argument("--tries", type=int, default=200)
    common(p_push)
    p_push.set_defaults(fn=cmd_pushout)

    p_erg = sub.add_parser("ergodic", help="Cesaro projection of a certified operator")
    p_erg.add_argument("--space", required=True)
    p_erg.add_argument("--op", required=True)
    p_erg.add_argument("--x", default=None)
    p_erg.add_argument("--max-iter", type=int, default=100_000)
    common(p_erg)
    p_erg.set_defaults(fn=cmd_ergodic)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ConvergenceError as exc:
        print(f"envlab: did not converge: {exc}", file=sys.stderr)
        return 3
    except (UsageError, ParseError) as exc:
        print(f"envlab: {exc}", file=sys.stderr)
        return 2
    except EnvlabError as exc:
        print(f"envlab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
