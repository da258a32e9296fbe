"""Command-line surface for the full pipeline.

Machine consumption first: every command reads and writes the JSON formats
of serialize.py deterministically, and failures map to a fixed exit-code
taxonomy so drivers never parse error text.

  0   success (fuchsian / oracle agreement / computation done)
  1   non-fuchsian verdict            (check-fuchsian)
  2   undecidable-at-order verdict    (check-fuchsian)
  3   refusal: non-fuchsian surface   (symmetries)
  4   oracle disagreement             (derive-ode, selftest)
  10  parse or format error
  11  truncation order too low
  12  reality violation
  13  numeric non-convergence
  14  other domain error
"""

import argparse
import random
import sys
from fractions import Fraction

from . import serialize
from .errors import (FormatError, OrderTooLowError, RealityViolation,
                     NonFuchsianError, NonConvergenceError, SegrefuchsError)
from .surfaces import (RealDefining, ComplexDefining, real_to_complex,
                       check_reality, validate_complex, min_order)
from .segre import eliminate, closed_form_coeffs, families_agree
from .fuchs import (check_fuchsian_real, check_fuchsian_complex,
                    check_fuchsian_ode, FUCHSIAN, NON_FUCHSIAN, UNDECIDABLE)
from .frobenius import formal_symmetries, real_form_basis
from .blowup import BlowupMap, pullback_surface, find_blowup_exponent
from .monodromy import LoopSpec, monodromy_matrix

EXIT_OK = 0
EXIT_NON_FUCHSIAN = 1
EXIT_UNDECIDABLE = 2
EXIT_REFUSED = 3
EXIT_ORACLE_DISAGREE = 4
EXIT_FORMAT = 10
EXIT_ORDER = 11
EXIT_REALITY = 12
EXIT_NUMERIC = 13
EXIT_DOMAIN = 14


def _read_surface(path):
    with open(path) as f:
        return serialize.surface_from_json(serialize.loads(f.read()))


def _as_complex(M, order=None):
    if isinstance(M, RealDefining):
        return real_to_complex(M, order or M.order)
    if order is not None and order < M.order:
        return ComplexDefining(M.m, M.eps, M.phi.truncate(order), order,
                               M.scale_sq)
    return M


def _emit(payload, out):
    text = serialize.dumps(payload)
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args):
    M = _read_surface(args.surface)
    Mc = _as_complex(M, args.order)
    rep = validate_complex(Mc)
    _emit({"surface": serialize.surface_to_json(Mc),
           "report": rep.as_dict()}, args.output)
    return EXIT_OK if rep.reality_ok else EXIT_REALITY


def cmd_derive_ode(args):
    M = _read_surface(args.surface)
    Mc = _as_complex(M, args.order)
    res = check_reality(Mc)
    if not res.is_zero():
        raise RealityViolation(res)
    E = eliminate(Mc, args.order or Mc.order)
    ok, report = families_agree(E.coeffs, closed_form_coeffs(Mc))
    payload = serialize.ode_to_json(E)
    payload["oracle_agreement"] = ok
    payload["oracle_report"] = {k: v[0] if v[0] == "agree" else "differ"
                                for k, v in report.items()}
    _emit(payload, args.output)
    return EXIT_OK if ok else EXIT_ORACLE_DISAGREE


def cmd_check_fuchsian(args):
    M = _read_surface(args.surface)
    if isinstance(M, RealDefining):
        rep = check_fuchsian_real(M)
    else:
        rep = check_fuchsian_complex(M)
    if args.format == "table":
        lines = ["verdict: %s (m = %d, %s form)" % (rep.verdict, rep.m,
                                                    rep.form)]
        lines.append("%-8s %-10s %-10s %s" % ("row", "measured", "bound",
                                              "status"))
        for r in rep.rows:
            meas = r.measured if r.measured is not None else \
                ">=%d" % (r.available + 1)
            lines.append("%-8s %-10s >=%-8d %s" % (r.name, meas, r.bound,
                                                   r.status))
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(rep.as_dict(), args.output)
    return {FUCHSIAN: EXIT_OK, NON_FUCHSIAN: EXIT_NON_FUCHSIAN,
            UNDECIDABLE: EXIT_UNDECIDABLE}[rep.verdict]


def cmd_symmetries(args):
    M = _read_surface(args.surface)
    Mc = _as_complex(M, args.order)
    try:
        basis = formal_symmetries(Mc, args.order or Mc.order)
    except NonFuchsianError as exc:
        _emit({"refused": str(exc), "ledger_row": exc.ledger_row},
              args.output)
        return EXIT_REFUSED
    real = real_form_basis(basis, Mc) if args.real_form else None
    _emit(serialize.basis_to_json(basis, real), args.output)
    return EXIT_OK


def _parse_blowup(spec):
    parts = dict(p.split("=") for p in spec.split(","))
    return BlowupMap(int(parts["s"]), int(parts.get("l", 2)))


def cmd_blowup(args):
    M = _read_surface(args.surface)
    Mc = _as_complex(M, args.order)
    if args.auto:
        s, P = find_blowup_exponent(Mc, args.auto)
        if s is None:
            _emit({"found": None, "diagnostics": P}, args.output)
            return EXIT_DOMAIN
    else:
        P = pullback_surface(Mc, _parse_blowup(args.blowup))
        s = P.s
    payload = {"s": s, "l": P.l, "m_star": P.m_star,
               "defining": serialize.series_to_json(P.defining)}
    if P.surface is not None:
        payload["surface"] = serialize.surface_to_json(P.surface)
    _emit(payload, args.output)
    return EXIT_OK


def cmd_monodromy(args):
    with open(args.system) as f:
        S = serialize.system_from_json(serialize.loads(f.read()))
    loop = LoopSpec(radius=args.radius, steps=args.steps,
                    direction=-1 if args.reverse else 1, tol=args.tol)
    res = monodromy_matrix(S, loop, trusted_radius=args.trusted_radius)
    _emit(res.as_dict(), args.output)
    return EXIT_OK


def cmd_selftest(args):
    """Randomized oracle equivalence at desk scale (seeded)."""
    from .series import MultiSeries
    from .surfaces import build_complex
    from .qfield import qi
    rng = random.Random(args.seed)
    for m in (1, 2):
        order = 3 * m + 4
        tbl = {}
        for (k, l) in [(2, 2), (2, 3), (3, 2), (3, 3)]:
            terms = {}
            for _ in range(2):
                terms[(rng.randint(0, max(order - k - l, 0)),)] = qi(
                    Fraction(rng.randint(-3, 3), rng.randint(1, 3)),
                    Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
            s = MultiSeries(("wb",), order - k - l, terms)
            if not s.is_zero():
                tbl[(k, l)] = s
        M = build_complex(m, rng.choice((1, -1)), tbl, order)
        ok, _ = families_agree(eliminate(M).coeffs, closed_form_coeffs(M))
        if not ok:
            sys.stderr.write("selftest: oracle disagreement at m=%d\n" % m)
            return EXIT_ORACLE_DISAGREE
    sys.stdout.write("selftest: oracle equivalence holds\n")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="segrefuchs",
        description="Exact workbench for nonminimal hypersurfaces in C^2: "
                    "associated singular ODEs, Fuchsian classification, "
                    "infinitesimal automorphisms, blow-ups and numeric "
                    "monodromy.")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized self-tests")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, surface=True):
        if surface:
            sp.add_argument("surface", help="surface JSON file")
        sp.add_argument("--order", type=int, default=None)
        sp.add_argument("-o", "--output", default=None)
        sp.add_argument("--format", choices=["json", "table"],
                        default="json")

    sp = sub.add_parser("verify", help="reality/normality validation")
    common(sp)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("derive-ode", help="eliminate to the associated ODE")
    common(sp)
    sp.set_defaults(fn=cmd_derive_ode)

    sp = sub.add_parser("check-fuchsian", help="Fuchsian-type classification")
    common(sp)
    sp.set_defaults(fn=cmd_check_fuchsian)

    sp = sub.add_parser("symmetries",
                        help="formal infinitesimal automorphisms")
    common(sp)
    sp.add_argument("--real-form", action="store_true")
    sp.set_defaults(fn=cmd_symmetries)

    sp = sub.add_parser("blowup", help="monomial blow-up of the surface")
    common(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--blowup", help="s=K,l=2")
    g.add_argument("--auto", type=int, help="search s in [2, S_MAX]")
    sp.set_defaults(fn=cmd_blowup)

    sp = sub.add_parser("monodromy", help="numeric monodromy of a system")
    sp.add_argument("system", help="linear system JSON file")
    sp.add_argument("--radius", type=float, default=0.2)
    sp.add_argument("--trusted-radius", type=float, default=0.25)
    sp.add_argument("--steps", type=int, default=256)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--reverse", action="store_true")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(fn=cmd_monodromy)

    sp = sub.add_parser("selftest", help="seeded randomized oracle check")
    sp.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FormatError as exc:
        sys.stderr.write("format error: %s\n" % exc)
        return EXIT_FORMAT
    except FileNotFoundError as exc:
        sys.stderr.write("format error: %s\n" % exc)
        return EXIT_FORMAT
    except OrderTooLowError as exc:
        sys.stderr.write("order too low: %s\n" % exc)
        return EXIT_ORDER
    except RealityViolation as exc:
        sys.stderr.write("reality violation: %s\n" % exc)
        return EXIT_REALITY
    except NonConvergenceError as exc:
        sys.stderr.write("numeric non-convergence: %s\n" % exc)
        return EXIT_NUMERIC
    except SegrefuchsError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
