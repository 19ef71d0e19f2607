"""Command line front end: ``plsig <command> [options]``.

Results go to stdout as JSON (or a readable rendering with --format pretty);
the resolved configuration and diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import analysis, cumulants, lie, path, tensor, verify

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(filename: str):
    try:
        with open(filename) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {filename}: {exc}") from exc


def _load_path(filename: str, exact: bool) -> path.PiecewiseLinearPath:
    try:
        return path.PiecewiseLinearPath.from_json(_load_json(filename), exact)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed path file {filename}: {exc}") from exc


def _load_tensor(filename: str, exact: bool) -> tensor.TensorSeries:
    try:
        return tensor.TensorSeries.from_json(_load_json(filename), exact)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed tensor file {filename}: {exc}") from exc


def _pretty_tensor(t: tensor.TensorSeries) -> str:
    lines = [f"dim={t.dim} level={t.level}"]
    for k, level in enumerate(t.by_level()):
        for w, c in sorted(level.items()):
            lines.append(f"  ({tensor.format_word(w)}): {tensor.format_scalar(c)}")
    return "\n".join(lines)


def _pretty_lie(p: lie.LiePolynomial) -> str:
    lines = [f"dim={p.dim} level={p.level}"]
    lines += [f"  {k}: {v}" for k, v in p.bracket_json().items()]
    return "\n".join(lines)


def _emit(obj, args, pretty: str | None = None) -> None:
    if args.format == "pretty" and pretty is not None:
        print(pretty)
    else:
        print(json.dumps(obj, indent=None if args.format == "json" else 2))


# -- commands ----------------------------------------------------------------

def cmd_sig(args) -> int:
    t = path.signature(_load_path(args.path, args.exact), args.level)
    _emit(t.to_json(), args, _pretty_tensor(t))
    return EXIT_OK


def cmd_logsig(args) -> int:
    p = _load_path(args.path, args.exact)
    if args.basis == "tensor":
        t = path.log_signature_tensor(p, args.level)
        _emit(t.to_json(), args, _pretty_tensor(t))
    else:
        poly = path.log_signature(p, args.level)
        _emit(poly.to_json(), args, _pretty_lie(poly))
    return EXIT_OK


def cmd_bch(args) -> int:
    if args.vectors:
        data = _load_json(args.vectors)
        try:
            vs = [[tensor.parse_scalar(x, args.exact) for x in v] for v in data]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed vector list {args.vectors}: {exc}") from exc
        poly = lie.bch_iterated(vs, args.level, args.exact)
    elif args.a and args.b:
        a, b = _load_tensor(args.a, args.exact), _load_tensor(args.b, args.exact)
        try:
            poly = lie.tensor_to_lyndon(lie.bch(a, b, args.level))
        except (lie.NotLieError, tensor.TensorError) as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError("bch needs --vectors FILE or both --a FILE and --b FILE")
    _emit(poly.to_json(), args, _pretty_lie(poly))
    return EXIT_OK


def cmd_reduce(args) -> int:
    p = path.reduce(_load_path(args.path, args.exact))
    _emit(p.to_json(), args)
    return EXIT_OK


def cmd_oracle(args) -> int:
    try:
        sampled = path.SampledPath.from_json(_load_json(args.samples))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed samples file {args.samples}: {exc}") from exc
    t = path.signature_numeric_oracle(sampled, args.level, args.steps)
    _emit(t.to_json(), args, _pretty_tensor(t))
    return EXIT_OK


def cmd_vanish_search(args) -> int:
    report = analysis.vanish_search(args.n1, args.pieces, args.dim, args.max_level,
                                    args.trials, args.seed)
    _emit(report.to_json(), args)
    return EXIT_OK


def cmd_lp_profile(args) -> int:
    if args.path:
        p = _load_path(args.path, args.exact)
        t = path.signature(p, args.level)
        extra = {"path_length_l1": analysis.path_length(p, "l1"),
                 "path_length_l2": analysis.path_length(p, "l2")}
    elif args.tensor:
        t, extra = _load_tensor(args.tensor, args.exact), {}
    else:
        raise InputError("lp-profile needs --path FILE or --tensor FILE")
    out = analysis.lp_profile(t, args.p, min(args.level, t.level)).to_json()
    out.update(extra)
    _emit(out, args)
    return EXIT_OK


def cmd_moments(args) -> int:
    try:
        g = cumulants.GaussianSpec.from_json(_load_json(args.gaussian))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed Gaussian file {args.gaussian}: {exc}") from exc
    if args.kind == "isserlis":
        out = cumulants.isserlis_moments(g, args.level).to_json()
    elif args.kind == "cumulant":
        out = cumulants.gaussian_cumulant(g, args.level).to_json()
    else:
        out = cumulants.brownian_expected_signature(g.mean, g.cov, args.level).to_json()
    _emit(out, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    failures, first = verify.run_all(sys.stdout)
    total = len(verify.CHECKS)
    print(f"{total - failures}/{total} checks passed")
    if failures:
        print(f"first failing check: {first}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level", type=int, default=4, help="truncation level N (default 4)")
    common.add_argument("--format", choices=("json", "pretty"), default="json")
    common.add_argument("--backend", choices=("rational", "float"), default="rational")

    parser = argparse.ArgumentParser(prog="plsig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sig", parents=[common], help="signature of a PL path")
    p.add_argument("--path", required=True)
    p.set_defaults(func=cmd_sig)

    p = sub.add_parser("logsig", parents=[common], help="log-signature of a PL path")
    p.add_argument("--path", required=True)
    p.add_argument("--basis", choices=("lyndon", "tensor"), default="lyndon")
    p.set_defaults(func=cmd_logsig)

    p = sub.add_parser("bch", parents=[common], help="BCH of tensors or of a vector list")
    p.add_argument("--vectors", help="JSON list of vectors v_1..v_m")
    p.add_argument("--a", help="tensor JSON file")
    p.add_argument("--b", help="tensor JSON file")
    p.set_defaults(func=cmd_bch)

    p = sub.add_parser("reduce", parents=[common], help="reduce a PL path")
    p.add_argument("--path", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle", parents=[common], help="Euler-scheme signature of sampled points")
    p.add_argument("--samples", required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("vanish-search", parents=[common], help="search for vanishing log-signature levels")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--pieces", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--max-level", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_vanish_search)

    p = sub.add_parser("lp-profile", parents=[common], help="finite-level L_p growth profile")
    p.add_argument("--path")
    p.add_argument("--tensor")
    p.add_argument("--p", type=float, default=1.0)
    p.set_defaults(func=cmd_lp_profile)

    p = sub.add_parser("moments", parents=[common], help="Gaussian moment/cumulant transforms")
    p.add_argument("--gaussian", required=True)
    p.add_argument("--kind", choices=("isserlis", "cumulant", "expected-signature"), default="isserlis")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("verify", parents=[common], help="run the reproduction checks")
    p.set_defaults(func=cmd_verify)
    return parser


def _config_line(args) -> str:
    items = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "exact")}
    text = "config: " + " ".join(f"{k}={v}" for k, v in items.items())
    if os.environ.get("PLSIG_COLOR") == "1" and sys.stderr.isatty():
        return f"\033[2m{text}\033[0m"
    return text


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.exact = args.backend == "rational"
    print(_config_line(args), file=sys.stderr)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
