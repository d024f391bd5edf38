"""disc-sos command line.

Exit codes: 0 success, 1 certificate invalid (or rejected), 2 usage or
input error, 3 an internal check failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .exactalg import canon, format_scalar

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None = None):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _parse_space(text: str):
    kind, _, num = text.partition(":")
    if kind not in ("wedge", "sym") or not num.isdigit():
        raise UsageError(f"--space must look like wedge:<k> or sym:<d>, got {text!r}")
    return kind, int(num)


def _make_space(n: int, text: str):
    from .reptheory import PolySpace, WedgeSpace

    kind, k = _parse_space(text)
    return WedgeSpace(n, k) if kind == "wedge" else PolySpace(n, k)


def _wedge_str(xi: dict, names) -> str:
    parts = []
    for key in sorted(xi, reverse=True):
        c = canon(xi[key])
        if c == 0:
            continue
        mono = "^".join(names[i] for i in key)
        text = format_scalar(c)
        if any(ch in text[1:] for ch in "+-"):
            text = f"({text})"
        parts.append(mono if c == 1 else f"{text}*{mono}")
    return " + ".join(parts) or "0"


# -- subcommands ---------------------------------------------------------------

def cmd_discriminant(args) -> int:
    from .symspace import discriminant

    if args.n < 2:
        raise UsageError("--n must be at least 2")
    p = discriminant(args.n)
    _emit(json.dumps(p.to_json(), indent=1), args.out)
    return EXIT_OK


def _load_cert(spec: str):
    from .certificates import BUILTIN_NAMES, Certificate, builtin

    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        if name not in BUILTIN_NAMES:
            raise UsageError(f"unknown built-in {name!r}; known: {', '.join(BUILTIN_NAMES)}")
        return builtin(name)
    try:
        return Certificate.from_json(_load_json(spec))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{spec} is not a certificate: {exc}") from None


def cmd_verify(args) -> int:
    from .certificates import quick_reject, verify

    cert = _load_cert(args.cert)
    if args.quick:
        # the random check can only refute, so it never prints "valid"
        if quick_reject(cert, points=args.points, seed=args.seed):
            print(f"invalid: identity fails at a random rational point, {cert.term_count} terms")
            return EXIT_INVALID
        print(f"not rejected at {args.points} random points (no proof; run without --quick)")
        return EXIT_OK
    rep = verify(cert, threads=args.threads)
    print(rep.summary())
    if not rep.valid and args.show_difference and rep.difference is not None:
        print(rep.difference)
    return EXIT_OK if rep.valid else EXIT_INVALID


def cmd_generate(args) -> int:
    from .certificates import generate_from_span, generate_n3_five, generate_n4_seven
    from .polyring import Poly
    from .symspace import sym_space

    tag = f"generated:{args.pipeline}@{args.seed}"
    if args.pipeline == "five3":
        cert = generate_n3_five()
    elif args.pipeline == "seven4":
        cert = generate_n4_seven()
    else:
        if not args.input:
            raise UsageError("--pipeline gram needs --in <module-basis file>")
        data = _load_json(args.input)
        try:
            n = int(data["n"])
            vs = sym_space(n).vs
            basis = [Poly.from_json(p).to_varset(vs) for p in data["basis"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.input} is not a module-basis file: {exc}") from None
        try:
            cert = generate_from_span(basis, n, tag)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    cert.provenance = tag
    _emit(cert.dumps(), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    from .reptheory import character, decompose, irr_dimension

    if args.n not in (3, 4):
        raise UsageError("decompose supports --n 3 or 4")
    space = _make_space(args.n, args.space)
    chi = character(space)
    parts = decompose(chi, args.n)
    dims = [irr_dimension(lam, args.n) for lam in parts]
    if args.json:
        out = {
            "n": args.n,
            "space": args.space,
            "character": str(chi),
            "irreducibles": [{"weight": list(lam), "dim": d} for lam, d in zip(parts, dims)],
            "dimension": sum(dims),
        }
        print(json.dumps(out, indent=1))
        return EXIT_OK
    print(f"character: {chi}")
    for lam, d in zip(parts, dims):
        print(f"W{tuple(lam)}  dim {d}")
    print(f"total dimension {sum(dims)}")
    return EXIT_OK


def cmd_hwv(args) -> int:
    from .reptheory import highest_weight_vectors

    space = _make_space(args.n, args.space)
    try:
        w = tuple(int(x) for x in args.weight.split(","))
    except ValueError:
        raise UsageError("--weight must be comma-separated integers, e.g. 3,1") from None
    if len(w) != args.n // 2:
        raise UsageError(f"--weight needs {args.n // 2} entries for n={args.n}")
    vecs = highest_weight_vectors(space, w)
    names = space.vs.names if hasattr(space, "vs") else None
    if names is None:
        from .symspace import j_space

        names = j_space(args.n).vs.names
    print(f"{len(vecs)} highest weight vector(s) of weight {w}")
    for v in vecs:
        print(_wedge_str(v, names) if isinstance(v, dict) else str(v))
    return EXIT_OK


def cmd_tmap(args) -> int:
    from .equivariant import coord_space, tmap
    from .symspace import is_symmetric, matrix_from_json, trace

    try:
        M, _ = matrix_from_json(_load_json(args.matrix))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.matrix} is not a matrix file: {exc}") from None
    n = M.shape[0]
    if n < 2 or not is_symmetric(M) or canon(trace(M)) != 0:
        raise UsageError("tmap needs a symmetric trace-zero matrix")
    coords = tmap(M, "real")
    names = coord_space(n, "real").vs.names
    entries = {"^".join(names[i] for i in S): format_scalar(canon(v)) for S, v in coords.items()}
    zero = all(canon(v) == 0 for v in coords.values())
    print(json.dumps({"n": n, "zero": zero, "coordinates": entries}, indent=1))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run

    results = run(args.level, echo=print, timings=args.timings)
    failed = [r.number for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_INTERNAL


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="disc-sos", description="Sums of squares for discriminants of symmetric matrices.")
    ap.add_argument("--threads", type=int, default=None, help="worker processes for verification (default: DISC_SOS_THREADS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discriminant", help="discriminant of trace-zero symmetric n x n matrices as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_discriminant)

    p = sub.add_parser("verify", help="check a certificate exactly")
    p.add_argument("--cert", required=True, help="JSON file or builtin:NAME")
    p.add_argument("--quick", action="store_true", help="only try to refute by random evaluation")
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--show-difference", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="build a certificate")
    p.add_argument("--pipeline", choices=["five3", "seven4", "gram"], required=True)
    p.add_argument("--in", dest="input")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("decompose", help="character and irreducible summands")
    p.add_argument("--space", required=True, help="wedge:<k> or sym:<d>")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("hwv", help="highest weight vectors of a given weight")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--space", required=True, help="wedge:<k> or sym:<d>")
    p.add_argument("--weight", required=True, help="comma-separated, e.g. 3 or 3,1")
    p.set_defaults(func=cmd_hwv)

    p = sub.add_parser("tmap", help="wedge coordinates of A ^ H_2(A) ^ ... ^ H_{n-1}(A)")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_tmap)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.add_argument("--timings", action="store_true", help="show wall-clock times (output is then not reproducible)")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be positive", file=sys.stderr)
            return EXIT_USAGE
        os.environ["DISC_SOS_THREADS"] = str(args.threads)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # anything else means one of our own checks broke
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
