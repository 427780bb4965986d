"""Batch command-line interface.

Commands::

    hopfw analyze FORM                      # nondegeneracy / twist / polar report
    hopfw present --algebra hw --form FORM  # write a presentation dump
    hopfw gb PRESENTATION --degree D        # complete to a truncated rewriting system
    hopfw nf SYSTEM --poly "u[1,1]*s[1,1]"  # normal form against a saved system
    hopfw verify --suite axioms --form FORM # per-identity PASS/FAIL/UNCERTIFIED
    hopfw example cyclic2                   # built-in example forms

Exit codes: 0 success / all checks pass, 1 a check failed (refutation),
2 at least one check was uncertified at the degree bound (none failed),
3 usage or input parse error.  ``HOPFW_DEFAULT_DEGREE`` overrides the
degree default (twice the arity) when ``--degree`` is not given.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

from .exactnum import format_matrix, format_rational, is_invertible, rat
from .formats import (
    FormFileError,
    dump_form,
    dump_presentation,
    load_form,
    parse_presentation,
)
from .forms import (
    MultilinearForm,
    analyze,
    check_condition_i_prime,
    in_polar,
    make_bilinear,
    make_orthogonal,
    make_signature,
    polar,
)
from .hopf import (
    CheckResult,
    Presentation,
    Status,
    bilinear_iso_suite,
    build_ahmn,
    build_bw,
    build_hb,
    build_hw,
    build_hww,
    check_left_inverse_identity,
    default_degree,
    derived_relations_suite,
    diagonal_iso_suite,
    hopf_axiom_suite,
    manin_suite,
    noninjectivity_probe,
    pair_reduction_suite,
    system_for,
)
from .ncalg import parse_poly
from .rewrite import NotCertifiedError, RewriteSystem, complete, normal_form

OK = 0
REFUTED = 1
UNCERTIFIED = 2
USAGE = 3

_SUITES = (
    "axioms",
    "derived",
    "pair-reduction",
    "manin",
    "diagonal-iso",
    "bilinear-iso",
    "noninjectivity",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; the contract here is 3."""

    def error(self, message):
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="hopfw", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="nondegeneracy, twist and polar report")
    pa.add_argument("form", help="form file (JSON)")
    pa.set_defaults(func=_cmd_analyze)

    pp = sub.add_parser("present", help="build a presentation and dump it")
    pp.add_argument(
        "--algebra",
        required=True,
        choices=("bw", "hw", "hb", "hww", "ahmn"),
    )
    pp.add_argument("--form", help="form file (all algebras except ahmn)")
    pp.add_argument("--polar", help="polar tensor file (hww; default: canonical member)")
    pp.add_argument("--m", type=int, help="arity (ahmn)")
    pp.add_argument("--n", type=int, help="dimension (ahmn)")
    pp.add_argument("--out", help="output file (default stdout)")
    pp.set_defaults(func=_cmd_present)

    pg = sub.add_parser("gb", help="complete a presentation through a degree bound")
    pg.add_argument("presentation", help="presentation dump file")
    pg.add_argument("--degree", type=int, help="truncation degree")
    pg.add_argument("--out", help="output file (default stdout)")
    pg.set_defaults(func=_cmd_gb)

    pn = sub.add_parser("nf", help="normal form of a polynomial against a saved system")
    pn.add_argument("system", help="system dump file")
    pn.add_argument("--poly", required=True, help="polynomial, e.g. 'u[1,1]*s[1,1] - 1'")
    pn.set_defaults(func=_cmd_nf)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("--suite", required=True, choices=_SUITES)
    pv.add_argument("form", nargs="?", help="form file (suite-dependent)")
    pv.add_argument("--algebra", choices=("bw", "hw", "hb", "hww", "ahmn"), default="hw")
    pv.add_argument("--polar", help="polar tensor file")
    pv.add_argument("--degree", type=int)
    pv.add_argument("--m", type=int, help="arity (ahmn / diagonal-iso)")
    pv.add_argument("--n", type=int, help="dimension (ahmn / diagonal-iso)")
    pv.set_defaults(func=_cmd_verify)

    pe = sub.add_parser("example", help="write a built-in example form")
    pe.add_argument(
        "name", help="signature-M | orthogonal-N-M | symplectic2 | cyclic2"
    )
    pe.add_argument("--out", help="output file (default stdout)")
    pe.set_defaults(func=_cmd_example)

    return p


def _write_out(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_degree(flag: int | None, m: int) -> int:
    if flag is not None:
        if flag < 1:
            raise _UsageError("--degree must be positive")
        return flag
    env = os.environ.get("HOPFW_DEFAULT_DEGREE")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise _UsageError(f"HOPFW_DEFAULT_DEGREE is not an integer: {env!r}")
        if value < 1:
            raise _UsageError("HOPFW_DEFAULT_DEGREE must be positive")
        return value
    return default_degree(m)


def _bool(v: bool) -> str:
    return "true" if v else "false"


# ---------------------------------------------------------------------------
# commands


def _cmd_analyze(args) -> int:
    w = load_form(args.form)
    report = analyze(w)
    lines = [f"dim: {w.dim}", f"arity: {w.arity}"]
    lines.append(f"one_site_nondegenerate: {_bool(report.nondegenerate)}")
    lines.append(f"all_slots_nondegenerate: {_bool(check_condition_i_prime(w))}")
    if report.twist_ambiguous:
        lines.append("twist: ambiguous")
    elif report.q is None:
        lines.append("twist: none")
    else:
        lines.append(f"twist: {format_matrix(report.q)}")
        lines.append(f"twist_invertible: {_bool(is_invertible(report.q))}")
    lines.append(f"preregular: {_bool(report.preregular)}")
    sol = polar(w) if report.nondegenerate else None
    if sol is not None:
        lines.append(f"polar_affine_dimension: {sol.affine_dimension()}")
        for c in (rat(1, math.factorial(w.arity - 1)), rat(1, w.arity)):
            verdict = "member" if in_polar(w.scale(c), w) else "mismatch"
            lines.append(f"self_scale[{format_rational(c)}]: {verdict}")
    else:
        lines.append("polar_affine_dimension: none")
    print("\n".join(lines))
    return OK


def _build_algebra(args) -> Presentation:
    kind = args.algebra
    if kind == "ahmn":
        if args.m is None or args.n is None:
            raise _UsageError("ahmn needs --m and --n")
        return build_ahmn(args.m, args.n)
    if not args.form:
        raise _UsageError(f"--algebra {kind} needs --form")
    w = load_form(args.form)
    if kind == "bw":
        return build_bw(w)
    if kind == "hw":
        return build_hw(w)
    if kind == "hb":
        return build_hb(w)
    # hww
    wt = _polar_choice(w, args.polar)
    return build_hww(w, wt)


def _polar_choice(w: MultilinearForm, path: str | None) -> MultilinearForm:
    if path:
        return load_form(path)
    sol = polar(w)
    if sol is None:
        raise _UsageError("form has no polar tensor (one-site degenerate)")
    return sol.particular


def _cmd_present(args) -> int:
    pres = _build_algebra(args)
    _write_out(dump_presentation(pres), args.out)
    return OK


def _cmd_gb(args) -> int:
    with open(args.presentation, "r", encoding="utf-8") as fh:
        pres = parse_presentation(fh.read())
    degree = _resolve_degree(args.degree, pres.m)

    def progress(deg: int, nrules: int) -> None:
        print(f"degree {deg}: {nrules} rules", file=sys.stderr)

    system = complete(list(pres.relations), degree, on_progress=progress)
    _write_out(system.dump(), args.out)
    return OK


def _cmd_nf(args) -> int:
    with open(args.system, "r", encoding="utf-8") as fh:
        system = RewriteSystem.parse(fh.read())
    poly = parse_poly(system.alphabet, args.poly)
    try:
        nf = normal_form(poly, system)
    except NotCertifiedError as exc:
        print(f"uncertified: {exc}", file=sys.stderr)
        return UNCERTIFIED
    print(nf.to_str())
    return OK


def _print_results(results) -> None:
    for r in results:
        line = f"{r.status.value} {r.name}"
        if r.detail:
            line += f" ({r.detail})"
        print(line)
    npass = sum(1 for r in results if r.status is Status.PASS)
    nfail = sum(1 for r in results if r.status is Status.FAIL)
    nunc = sum(1 for r in results if r.status is Status.UNCERTIFIED)
    print(f"summary: {npass} pass, {nfail} fail, {nunc} uncertified")


def _exit_code(results) -> int:
    if any(r.status is Status.FAIL for r in results):
        return REFUTED
    if any(r.status is Status.UNCERTIFIED for r in results):
        return UNCERTIFIED
    return OK


def _load_verify_form(args, fallback: MultilinearForm | None = None) -> MultilinearForm:
    if args.form:
        return load_form(args.form)
    if fallback is not None:
        return fallback
    raise _UsageError(f"suite {args.suite!r} needs a form file")


def _cmd_verify(args) -> int:
    suite = args.suite

    if suite == "axioms":
        if args.algebra == "ahmn":
            if args.m is None or args.n is None:
                raise _UsageError("ahmn needs --m and --n")
            pres = build_ahmn(args.m, args.n)
            degree = _resolve_degree(args.degree, args.m)
            results = hopf_axiom_suite(pres, degree)
        else:
            w = _load_verify_form(args)
            degree = _resolve_degree(args.degree, w.arity)
            if args.algebra == "hww":
                pres = build_hww(w, _polar_choice(w, args.polar))
            elif args.algebra == "bw":
                pres = build_bw(w)
            elif args.algebra == "hb":
                pres = build_hb(w)
            else:
                pres = build_hw(w)
            system = system_for(pres, degree)
            results = hopf_axiom_suite(pres, degree, system)
            if args.algebra == "bw":
                wt = _polar_choice(w, args.polar)
                results += check_left_inverse_identity(pres, wt, degree, system)
        _print_results(results)
        return _exit_code(results)

    if suite == "derived":
        w = _load_verify_form(args)
        degree = _resolve_degree(args.degree, w.arity)
        pres = build_hw(w)
        system = system_for(pres, degree)
        if args.polar:
            samples = [load_form(args.polar)]
        else:
            sol = polar(w)
            samples = [sol.particular]
            if sol.kernel_basis:
                samples.append(sol.member([1] + [0] * (len(sol.kernel_basis) - 1)))
        results = []
        for i, wt in enumerate(samples, start=1):
            part = derived_relations_suite(pres, wt, degree, system)
            results += [
                CheckResult(f"sample{i}:{r.name}", r.status, r.detail) for r in part
            ]
        _print_results(results)
        return _exit_code(results)

    if suite == "pair-reduction":
        w = _load_verify_form(args)
        degree = _resolve_degree(args.degree, w.arity)
        pres = build_hw(w)
        results = pair_reduction_suite(pres, degree)
        _print_results(results)
        return _exit_code(results)

    if suite == "manin":
        w = _load_verify_form(args, fallback=make_signature(3))
        if w != make_signature(3):
            raise _UsageError("the manin suite is for the alternating 3x3 form")
        degree = _resolve_degree(args.degree, 3)
        results = manin_suite(degree)
        _print_results(results)
        return _exit_code(results)

    if suite == "diagonal-iso":
        n = args.n if args.n is not None else 2
        m = args.m if args.m is not None else 3
        degree = _resolve_degree(args.degree, m)
        results = diagonal_iso_suite(n, m, degree)
        _print_results(results)
        return _exit_code(results)

    if suite == "bilinear-iso":
        w = _load_verify_form(args)
        if w.arity != 2:
            raise _UsageError("the bilinear-iso suite needs an arity-2 form")
        degree = _resolve_degree(args.degree, 2)
        results = bilinear_iso_suite(w, degree)
        _print_results(results)
        return _exit_code(results)

    # noninjectivity
    w = _load_verify_form(args, fallback=make_signature(3))
    degree = _resolve_degree(args.degree, w.arity)
    wt = _polar_choice(w, args.polar)
    report = noninjectivity_probe(w, wt, degree)
    _print_results(report.details)
    print(f"verdict: {report.verdict}")
    if not report.witness_ok:
        return REFUTED
    return OK if report.commutator_certified else UNCERTIFIED


_EXAMPLE_SIG = re.compile(r"signature-(\d+)\Z")
_EXAMPLE_ORTH = re.compile(r"orthogonal-(\d+)-(\d+)\Z")


def _example_form(name: str) -> MultilinearForm:
    if name == "symplectic2":
        return make_bilinear([[0, 1], [-1, 0]])
    if name == "cyclic2":
        return MultilinearForm(
            2, 3, {(1, 1, 2): rat(1), (1, 2, 1): rat(1), (2, 1, 1): rat(1)}
        )
    m = _EXAMPLE_SIG.match(name)
    if m:
        return make_signature(int(m.group(1)))
    m = _EXAMPLE_ORTH.match(name)
    if m:
        return make_orthogonal(int(m.group(1)), int(m.group(2)))
    raise _UsageError(f"unknown example {name!r}")


def _cmd_example(args) -> int:
    w = _example_form(args.name)
    _write_out(dump_form(w), args.out)
    return OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"hopfw: error: {exc}", file=sys.stderr)
        return USAGE
    except (FormFileError, ValueError) as exc:
        print(f"hopfw: error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"hopfw: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
