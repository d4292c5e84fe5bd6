"""Command-line surface: expression evaluation, module construction from
config files, verification suites and report emission.

Exit codes: 0 all checks pass, 1 a check failed, 2 parse/config error,
3 a result was inconclusive at its truncation.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import (
    PRESENTATIONS,
    TWISTED,
    format_half,
    jacobi_check,
    parse_combo,
    parse_generator,
    parse_half,
)
from .engine import InducedModule, supp_deg
from .errors import EngineError, ParseError, TruncationError, ValidationError
from .modules import (
    BModuleSpec,
    b_plus_t0_induce,
    check_conditions,
    generalized_whittaker_spec,
    highorder_whittaker_spec,
    load_spec_config,
    whittaker_spec,
)
from .orders import enumerate_vectors, parse_exponent_vector
from .scalars import parse_scalar
from .suites import SUITES
from .theorems import annihilator_Mt, closure_check, reduce_to_M

PASS, FAIL, USAGE, INCONCLUSIVE = 0, 1, 2, 3


def _load_module(path: str) -> tuple[InducedModule, BModuleSpec]:
    with open(path, encoding="utf-8") as fh:
        obj = load_spec_config(fh.read())
    if isinstance(obj, InducedModule):
        raise ParseError(
            f"{path} describes a standalone module, not an inducible seed"
        )
    return obj.induced(), obj


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_bracket(args) -> int:
    pres = PRESENTATIONS[args.algebra]
    x = parse_combo(args.x)
    y = parse_combo(args.y)
    for combo in (x, y):
        for g in combo:
            pres.check_member(g)
    _emit(args, str(pres.bracket_combo(x, y)) + "\n")
    return PASS


def _cmd_jacobi(args) -> int:
    pres = PRESENTATIONS[args.algebra]
    report = jacobi_check(pres, args.window)
    _emit(args, str(report) + "\n")
    return PASS if report.ok else FAIL


def _cmd_act(args) -> int:
    module, spec = _load_module(args.spec)
    word = [parse_generator(tok) for tok in args.word.replace("*", " ").split()]
    ev = parse_exponent_vector(args.vector)
    label = spec.parse_label(args.label) if args.label else spec.labels()[0]
    result = module.act_word(word, module.basis_vector(ev, label))
    _emit(args, str(result) + "\n")
    return PASS


def _cmd_reduce(args) -> int:
    module, spec = _load_module(args.spec)
    ev = parse_exponent_vector(args.vector)
    label = spec.parse_label(args.label) if args.label else spec.labels()[0]
    v = module.basis_vector(ev, label)
    trace = reduce_to_M(module, v, parse_half(args.u), args.budget)
    _emit(args, "\n".join(trace.lines()) + "\n")
    return PASS if trace.succeeded else FAIL


def _cmd_annihilator(args) -> int:
    module, _ = _load_module(args.spec)
    basis, ops = annihilator_Mt(
        module, parse_half(args.t), parse_half(args.max_weight), args.max_length
    )
    lines = [
        f"# t={args.t} truncation=({args.max_weight},{args.max_length}) "
        f"operators={len(ops)}"
    ]
    lines += [str(b) for b in basis] or ["(zero space)"]
    _emit(args, "\n".join(lines) + "\n")
    return PASS


def _cmd_enumerate(args) -> int:
    evs = enumerate_vectors(parse_half(args.max_weight), args.max_length)
    _emit(args, "\n".join(str(ev) for ev in evs) + "\n")
    return PASS


def _cmd_closure(args) -> int:
    module, spec = _load_module(args.spec)
    max_w2 = parse_half(args.max_weight)
    evs = enumerate_vectors(max_w2, args.max_length)
    if args.subspace.startswith("file:"):
        with open(args.subspace[5:], encoding="utf-8") as fh:
            subspace = [module.parse_vector(line) for line in fh if line.strip()]
        universe = None
    elif args.subspace == "full":
        subspace = [module.basis_vector(ev, lbl)
                    for ev in evs for lbl in spec.labels()]
        universe = None
    else:
        if not args.subspace.startswith("seed:"):
            raise ParseError(
                "subspace must be 'full', 'seed:<label>' or 'file:<path>'"
            )
        seed_label = args.subspace[5:]
        want = [lbl for lbl in spec.labels()
                if getattr(spec, "slice_labels", None)
                and lbl in spec.slice_labels(spec.inner.seed.parse_label(seed_label))]
        if not want:
            want = [spec.parse_label(seed_label)]
        subspace = [module.basis_vector(ev, lbl) for ev in evs for lbl in want]
        universe = {(ev, lbl) for ev in evs for lbl in spec.labels()}
    report = closure_check(module, subspace, args.window, universe=universe)
    _emit(args, str(report) + "\n")
    if not report.closed:
        return FAIL
    if report.checked and report.checked == report.boundary_skips:
        return INCONCLUSIVE
    return PASS


def _cmd_verify(args) -> int:
    fn = SUITES[args.suite]
    kwargs = {}
    import inspect

    params = inspect.signature(fn).parameters
    if "seed" in params:
        kwargs["seed"] = args.seed
    if args.window is not None and "window2" in params:
        kwargs["window2"] = args.window
    if args.max_weight is not None and "max_weight2" in params:
        kwargs["max_weight2"] = parse_half(args.max_weight)
    if args.max_length is not None and "max_length" in params:
        kwargs["max_length"] = args.max_length
    if args.algebra is not None and "algebra" in params:
        kwargs["algebra"] = args.algebra
    report = fn(**kwargs)
    _emit(args, report.tsv())
    return PASS if report.ok else FAIL


def _demo_lines(which: str) -> list[str]:
    out = [f"demo: {which}"]
    if which == "whittaker":
        spec = whittaker_spec(1, 0)
        module = spec.induced()
        out.append(f"seed labels: {', '.join(spec.labels())}")
        out.append(f"conditions (i),(ii) at u=1/2: {check_conditions(spec, 1)}")
        v = module.basis_vector(parse_exponent_vector("{1:1,2:1}"))
        trace = reduce_to_M(module, v, 1)
        out += trace.lines()
    elif which == "generalized":
        for phi_t32 in (0, 1):
            spec = generalized_whittaker_spec(1, phi_t32, 0, (4, 3))
            module = spec.induced()
            evs = enumerate_vectors(4, 3)
            subspace = [module.basis_vector(ev, lbl)
                        for ev in evs for lbl in spec.slice_labels("v1")]
            universe = {(ev, lbl) for ev in evs for lbl in spec.labels()}
            report = closure_check(module, subspace, 4, universe=universe)
            out.append(f"phi(T3/2)={phi_t32}: odd slice {report}")
    elif which == "highorder":
        from .algebra import T as Tgen

        spec = highorder_whittaker_spec(3, {Tgen(7): parse_scalar("1")}, 0, (4, 2))
        out.append(f"labels: {len(spec.labels())}")
        out.append(f"conditions at u=7/2: {check_conditions(spec, 7)}")
    elif which == "b-t0":
        spec = b_plus_t0_induce(whittaker_spec(1, 0), 3)
        out.append(f"labels: {', '.join(spec.label_text(l) for l in spec.labels())}")
        from .algebra import G as Ggen, T as Tgen

        g0v0 = spec.labels()[1]
        image = spec.act(Tgen(1), g0v0)
        shown = ", ".join(f"{spec.label_text(k)}: {s}" for k, s in image.items())
        out.append(f"T[1/2] . {spec.label_text(g0v0)} = {shown}")
    else:
        raise ParseError(f"unknown demo {which!r}")
    return out


def _cmd_demo(args) -> int:
    _emit(args, "\n".join(_demo_lines(args.which)) + "\n")
    return PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="n2sca",
        description="Exact computations in the twisted/untwisted N=2 "
        "superconformal algebras and their induced modules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("--output", help="write the report to a file")

    p = sub.add_parser("bracket", help="bracket of two linear combinations")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--algebra", default="twisted", choices=sorted(PRESENTATIONS))
    add_output(p)
    p.set_defaults(fn=_cmd_bracket)

    p = sub.add_parser("jacobi", help="exhaustive graded Jacobi check")
    p.add_argument("--algebra", default="twisted", choices=sorted(PRESENTATIONS))
    p.add_argument("--window", type=int, default=6)
    add_output(p)
    p.set_defaults(fn=_cmd_jacobi)

    p = sub.add_parser("act", help="act by a generator word on a basis vector")
    p.add_argument("word", help="e.g. 'L[1] T[-1/2]'")
    p.add_argument("--spec", required=True)
    p.add_argument("--vector", default="{}")
    p.add_argument("--label", default=None)
    add_output(p)
    p.set_defaults(fn=_cmd_act)

    p = sub.add_parser("reduce", help="reduce a vector into the seed module")
    p.add_argument("vector", help="exponent vector, e.g. '{1:1}'")
    p.add_argument("--spec", required=True)
    p.add_argument("--u", default="1/2")
    p.add_argument("--label", default=None)
    p.add_argument("--budget", type=int, default=None)
    add_output(p)
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("annihilator", help="annihilator space at threshold t")
    p.add_argument("--spec", required=True)
    p.add_argument("--t", default="1/2")
    p.add_argument("--max-weight", default="2")
    p.add_argument("--max-length", type=int, default=3)
    add_output(p)
    p.set_defaults(fn=_cmd_annihilator)

    p = sub.add_parser("enumerate", help="list exponent vectors in a box")
    p.add_argument("--max-weight", default="2")
    p.add_argument("--max-length", type=int, default=3)
    add_output(p)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("closure", help="is a subspace closed under the window?")
    p.add_argument("--spec", required=True)
    p.add_argument("--subspace", default="full",
                   help="'full', 'seed:<label>' or 'file:<path>'")
    p.add_argument("--window", type=int, default=6)
    p.add_argument("--max-weight", default="2")
    p.add_argument("--max-length", type=int, default=3)
    add_output(p)
    p.set_defaults(fn=_cmd_closure)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--max-weight", default=None)
    p.add_argument("--max-length", type=int, default=None)
    p.add_argument("--algebra", default=None, choices=sorted(PRESENTATIONS))
    add_output(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("demo", help="narrated worked example")
    p.add_argument("which", choices=["whittaker", "generalized", "highorder", "b-t0"])
    add_output(p)
    p.set_defaults(fn=_cmd_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ParseError, ValidationError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except TruncationError as exc:
        sys.stderr.write(f"inconclusive at truncation: {exc}\n")
        return INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
