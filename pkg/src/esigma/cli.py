"""Command-line front end: ``esigma {gbin,lattices,rank,basis,fgl,verify}``."""

import argparse
import json
import sys

from . import exact_arith as ea
from . import fgl as fg
from . import lattice_count as lc
from . import subgroup_basis as sb
from . import sym_rank as sr
from .errors import BudgetExceeded, EsigmaError
from .pseries import weierstrass_degree
from .rings import cyclic_ring, finite_field, prime_field
from .verify import SUITES, GridOptions, run_verification

EXIT_USAGE = 2
EXIT_BUDGET = 3


def _dump(obj):
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


def cmd_gbin(args):
    value = ea.gaussian_binomial(ea.GaussianParams(args.p, args.n, args.k))
    if args.format == "json":
        return _dump({"p": args.p, "n": args.n, "k": args.k, "dbar": str(value)})
    if args.format == "csv":
        return f"p,n,k,dbar\n{args.p},{args.n},{args.k},{value}"
    return str(value)


def cmd_lattices(args):
    spec = lc.LatticeIndexSpec(args.p, args.n, args.k)
    lattices = lc.enumerate_sublattices(spec, args.budget or lc.DEFAULT_BUDGET)
    if args.count:
        return str(len(lattices))
    if args.format == "json":
        return lc.lattices_json(spec, lattices)
    if args.format == "csv":
        return "\n".join(",".join(map(str, lat.flat())) for lat in lattices)
    return "\n".join(str(lat.tolist()) for lat in lattices)


def cmd_rank(args):
    ranks = sr.rank_series(args.kmax, args.p, args.n)
    if args.format == "json":
        rows = []
        for k, d in enumerate(ranks):
            row = {"k": k, "d": str(d)}
            if args.witnesses:
                row["orbit_types"] = [t.tolist() for t in sr.enumerate_orbit_types(k, args.p, args.n, args.budget or sr.ORBIT_TYPE_BUDGET)]
            rows.append(row)
        return _dump({"p": args.p, "n": args.n, "ranks": rows})
    lines = ["k,d(k)"] + [f"{k},{d}" for k, d in enumerate(ranks)]
    return "\n".join(lines)


def cmd_basis(args):
    if args.kl:
        k, l = args.kl
        monos = sb.generate_basis_kl(k, l, args.m, args.n, args.p)
    else:
        monos = sb.generate_basis(args.m, args.n, args.p)
    if args.format == "json":
        return _dump([mono.to_json_obj() for mono in monos])
    if args.format == "csv":
        return "\n".join(["mu,nu,alpha,total,string"] + [
            f"{' '.join(map(str, m.provenance.mu))},{' '.join(map(str, m.provenance.nu))},"
            f"{' '.join(map(str, m.alpha))},{' '.join(map(str, m.total))},{m}"
            for m in monos
        ])
    if args.chern:
        return "\n".join(m.chern_string(args.p) for m in monos)
    return "\n".join(str(m) for m in monos)


def _ring(args):
    p = args.p
    if args.ring == "fp":
        return prime_field(p)
    if args.ring == "zpa":
        return cyclic_ring(p, args.a)
    return finite_field(p, args.degree or (args.height if args.type == "honda" else 1))


def _make_law(args):
    ring = _ring(args)
    if args.type == "honda":
        order = fg.default_honda_order(args.p, args.height, args.order)
        return fg.make_honda(args.p, args.height, ring=ring, order=order)
    order = args.order or max(args.p + 2, 8)
    if args.type == "additive":
        return fg.make_additive(ring, order)
    return fg.make_multiplicative(ring, order)


def cmd_fgl(args):
    if args.action == "check":
        return _fgl_check(args)
    F = _make_law(args)
    if args.emit == "sum":
        s = F.series
    elif args.emit == "p-series":
        s = fg.r_series(F, args.p)
    elif args.emit == "r-series":
        s = fg.r_series(F, args.r)
    elif args.emit == "negation":
        s = F.negation()
    else:
        s = fg.euler_class_U_minus_1(F)
    if args.format == "text":
        return str(s)
    return s.to_json()


def _fgl_check(args):
    """Returns (output, exit status)."""
    args.type = "honda"
    F = _make_law(args)
    lines, ok = [], True
    if args.socle or not (args.axioms or args.height_check):
        exponent, nonzero = fg.socle_nonvanishing_check(F, args.p, args.height)
        lines.append(f"socle: e(U-1)^{exponent} {'!= 0' if nonzero else '== 0'} in {F.ring}[x]/x^{args.p ** args.height}")
        ok &= nonzero
    if args.axioms:
        failures = F.axiom_failures()
        lines.append(f"axioms: {'ok' if not failures else ', '.join(failures)}")
        ok &= not failures
    if args.height_check:
        d = weierstrass_degree(fg.r_series(F, args.p))
        lines.append(f"height: [{args.p}](x) has Weierstrass degree {d}")
        ok &= d == args.p**args.height
    return "\n".join(lines), 0 if ok else 1


def cmd_verify(args):
    primes = tuple(args.p) if args.p else None
    heights = tuple(args.height) if args.height else None
    opts = GridOptions(primes=primes, heights=heights, extended=args.extended, budget=args.budget)
    report = run_verification(args.suite, opts)
    if args.format == "json":
        out = _dump(report.to_json_obj(args.timings))
    else:
        out = report.to_text(args.timings)
    return out, 0 if report.ok else 1


def _positive(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--budget", type=_positive, default=argparse.SUPPRESS, help="enumeration bound")
    common.add_argument("--extended", action="store_true", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="esigma", description=__doc__, parents=[common])
    parser.set_defaults(format="text", budget=None, extended=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gbin", parents=[common], help="Gaussian binomial dbar(k)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_gbin)

    p = sub.add_parser("lattices", parents=[common], help="index-p^k sublattices of Z^n")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", action="store_true", help="print only the number of lattices")
    p.set_defaults(func=cmd_lattices)

    p = sub.add_parser("rank", parents=[common], help="ranks d(k) for k <= kmax")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--witnesses", action="store_true", help="include orbit types in JSON output")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("basis", parents=[common], help="monomial basis C or C_kl")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kl", type=int, nargs=2, metavar=("K", "L"))
    p.add_argument("--chern", action="store_true", help="label generators by Chern index")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("fgl", parents=[common], help="formal group law series and checks")
    p.add_argument("action", nargs="?", choices=("emit", "check"), default="emit")
    p.add_argument("--type", choices=("honda", "additive", "multiplicative"), default="honda")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--height", type=int, default=1)
    p.add_argument("--order", type=int)
    p.add_argument("--ring", choices=("fq", "fp", "zpa"), default="fq")
    p.add_argument("--a", type=int, default=2, help="exponent for Z/p^a")
    p.add_argument("--degree", type=int, help="degree of F_q over F_p (default: height)")
    p.add_argument("--emit", choices=("p-series", "sum", "euler-u", "r-series", "negation"), default="p-series")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--socle", action="store_true")
    p.add_argument("--axioms", action="store_true")
    p.add_argument("--height-check", action="store_true")
    p.set_defaults(func=cmd_fgl)

    p = sub.add_parser("verify", parents=[common], help="run the verification grid")
    p.add_argument("suite", nargs="?", choices=("all",) + SUITES, default="all")
    p.add_argument("--p", type=int, action="append", help="restrict to this prime (repeatable)")
    p.add_argument("--height", type=int, action="append", help="restrict to this height (repeatable)")
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except BudgetExceeded as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (EsigmaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    status = 0
    if isinstance(result, tuple):
        result, status = result
    print(result)
    return status


if __name__ == "__main__":
    sys.exit(main())
