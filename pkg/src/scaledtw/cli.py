"""Command-line entry point: ``scaledtw``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import certfile, proofs
from .anodyne import HypothesisViolated, lemma36, trust_base, verify
from .complex import Ambient, ComplexError, Subcomplex, face_key, horn, popcount
from .constructions import (
    FILTRATION_KINDS,
    PathComplex,
    co_segal_sub,
    latching,
    omega_full,
    q_of,
    t_of,
)
from .scaling import ScaledComplex
from .suites import SUITES, UnknownSuite, run_all, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_LEVEL = 6


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _level(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= v <= MAX_LEVEL:
        raise argparse.ArgumentTypeError(f"level must be between 0 and {MAX_LEVEL}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an unsigned 64-bit integer, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


# --------------------------------------------------------------------------
# describe / export

def _path_text(p: PathComplex) -> str:
    rows = sorted(p.simplices, key=lambda s: (len(s), s))
    return "".join(f"{len(s) - 1}: {' '.join(map(str, s))}\n" for s in rows)


def _facet_text(x) -> str:
    k = x.complex if isinstance(x, ScaledComplex) else x
    amb = k.ambient
    lines = [f"{popcount(f) - 1}: {amb.format_face(f)}" for f in sorted(k.facets(), key=face_key)]
    if isinstance(x, ScaledComplex):
        lines += [f"thin: {amb.format_face(t)}" for t in x.sorted_thin()]
    return "\n".join(lines)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this target")


def build_target(args):
    t = args.target
    if t in ("q", "t", "tcart", "omega", "latching", "cosegal"):
        _need(args, "n")
    if t == "q":
        return q_of(args.n)
    if t == "t":
        return t_of(args.n)
    if t == "tcart":
        if args.n < 1:
            raise UsageError("tcart needs --n >= 1")
        return t_of(args.n, "cart")
    if t == "omega":
        return omega_full(args.n)
    if t == "horn":
        _need(args, "I", "M")
        if not args.I:
            raise UsageError("--I must be nonempty")
        return horn(Ambient.simplex(max(args.I)), args.I, args.M)
    if t == "filtration":
        _need(args, "kind")
        params = {k: getattr(args, k) for k in ("n", "i", "s", "k", "l", "j") if getattr(args, k) is not None}
        if args.kind in ("SpineSp",):
            params.setdefault("i", 0)
            params.setdefault("j", params.get("n"))
        from .constructions import filtration
        try:
            return filtration(args.kind, **params)
        except KeyError as exc:
            raise UsageError(f"missing parameter --{exc.args[0]} for {args.kind}") from None
        except TypeError:
            raise UsageError(f"missing parameters for {args.kind}") from None
    if t == "latching":
        if args.n < 1:
            raise UsageError("latching needs --n >= 1")
        return latching(args.family, args.n)
    if t == "cosegal":
        if args.family not in ("Q", "T"):
            raise UsageError("cosegal supports --family Q or T")
        return co_segal_sub(args.family, args.n)
    raise UsageError(f"unknown target {t!r}")


def render(x, facets: bool = False) -> str:
    if isinstance(x, PathComplex):
        return _path_text(x)
    text = _facet_text(x) if facets else x.to_text()
    return text + "\n" if text else ""


def cmd_describe(args) -> int:
    print(render(build_target(args), args.facets), end="")
    return EXIT_OK


def cmd_export(args) -> int:
    text = render(build_target(args), args.facets)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# certificates

NAMED = {
    "inner-horn-T": (("n", "i"), proofs.inner_horn_T),
    "t-in-q": (("n",), proofs.t_in_q),
    "cart": (("n",), proofs.cart),
    "cart-prime": (("n",), proofs.cart_prime),
    "q-cosegal": (("n",), proofs.q_cosegal),
    "t-cosegal": (("n",), proofs.t_cosegal),
    "q-consec": (("n", "i"), proofs.q_consec),
    "spine-p": ((), proofs.spine_P),
}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_cert(args) -> int:
    if args.action == "emit-lemma36":
        if args.n is None or args.M is None:
            raise UsageError("emit-lemma36 needs --n and --M")
        amb = Ambient.simplex(args.n)
        thin = [amb.mask(t) for t in args.thin]
        S = ScaledComplex(Subcomplex.full_simplex(amb), thin)
        try:
            cert = lemma36(S, args.M, dual=args.dual)
        except HypothesisViolated as exc:
            print(f"error: {exc.detail}", file=sys.stderr)
            return EXIT_USAGE
        _emit(certfile.dumps(cert), args.out)
        return EXIT_OK
    if args.action == "emit":
        if args.name not in NAMED:
            raise UsageError(f"unknown certificate {args.name!r}; known: {', '.join(sorted(NAMED))}")
        keys, fn = NAMED[args.name]
        _need(args, *keys)
        try:
            cert = fn(*(getattr(args, k) for k in keys))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _emit(certfile.dumps(cert), args.out)
        return EXIT_OK
    if args.path is None:
        raise UsageError(f"{args.action} needs a certificate file")
    try:
        cert, store = certfile.read(args.path)
    except certfile.CertificateParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.action == "trust":
        try:
            tb = trust_base(cert, store)
        except Exception as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(" ".join(tb) if tb else "(empty)")
        return EXIT_OK
    rep = verify(cert, store)
    print(rep.summary())
    return EXIT_OK if rep.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# suites

def cmd_suite(args) -> int:
    if args.action == "list":
        for name in SUITES:
            print(name)
        return EXIT_OK
    if args.name is None:
        raise UsageError("suite run needs a suite name or 'all'")
    try:
        if args.name == "all":
            rep = run_all(args.n_max, args.seed)
        else:
            rep = run_suite(args.name, args.n_max, args.seed)
    except UnknownSuite:
        print(f"error: unknown suite {args.name!r}; try 'suite list'", file=sys.stderr)
        return EXIT_USAGE
    text = rep.to_records(args.timings) if args.format == "records" else rep.to_text(args.timings)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"digest {rep.digest}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.ok else EXIT_FAIL


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scaledtw", description="Scaled simplicial sets over twisted arrows.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, hlp in (("describe", cmd_describe, "print a construction as a face list"),
                          ("export", cmd_export, "write a construction as a face list")):
        d = sub.add_parser(name, help=hlp)
        d.add_argument("target", choices=["q", "t", "tcart", "omega", "horn", "filtration", "latching", "cosegal"])
        d.add_argument("--n", type=_level)
        d.add_argument("--i", type=int)
        d.add_argument("--s", type=int)
        d.add_argument("--k", type=int)
        d.add_argument("--l", type=int)
        d.add_argument("--j", type=int)
        d.add_argument("--I", type=_int_list)
        d.add_argument("--M", type=_int_list)
        d.add_argument("--kind", choices=FILTRATION_KINDS)
        d.add_argument("--family", default="Q", choices=["Q", "T", "DeltaSharp", "E"])
        d.add_argument("--facets", action="store_true", help="only maximal faces")
        if name == "export":
            d.add_argument("--out", help="output path (default stdout)")
        d.set_defaults(func=fn)

    c = sub.add_parser("cert", help="emit, verify or inspect certificates")
    c.add_argument("action", choices=["emit-lemma36", "emit", "verify", "trust"])
    c.add_argument("path", nargs="?", help="certificate file (verify, trust) or name (emit)")
    c.add_argument("--n", type=_level)
    c.add_argument("--i", type=int)
    c.add_argument("--M", type=_int_list)
    c.add_argument("--thin", type=_int_list, action="append", default=[])
    c.add_argument("--dual", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_cert)

    s = sub.add_parser("suite", help="run verification suites")
    s.add_argument("action", choices=["run", "list"])
    s.add_argument("name", nargs="?")
    s.add_argument("--n-max", type=_level, default=None)
    s.add_argument("--seed", type=_seed, default=None)
    s.add_argument("--report")
    s.add_argument("--format", choices=["text", "records"], default="text")
    s.add_argument("--timings", action="store_true", help="fill the millis column")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "cert":
        if args.action == "emit":
            args.name = args.path
        for t in args.thin:
            if len(t) != 3:
                print("error: --thin takes three vertices", file=sys.stderr)
                return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ComplexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
