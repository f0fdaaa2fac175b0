"""
Command-line front end.

Every subcommand writes results to stdout and progress to stderr. With
--format machine the results are space separated lines with fixed columns.
Exit codes: 0 success, 1 domain failure, 2 usage error.
"""

import argparse
import math
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from ..core import bundled
from ..core.config import SearchConfig, SolveConfig, VerifyConfig
from ..core.errors import CubatureError, StructureError
from ..core.moments import moment_table, monomial_moment
from ..core.product import efficiency_table, u3_product_rule
from ..core.rules import AnyRule, CubatureRule, classify, expand, integrate, rule_from_solution, verify
from ..core.search import RuleStructure, enumerate_structures, first_minima, lp_lower_bound
from ..core.solver import MomentSolver
from ..core.star import assemble, render_star
from ..core.symmetry import count_class_types, count_class_types_brute
from ..utils import ruleio
from ..utils.helpers import default_workers, format_counts, format_real, parse_int_list, parse_structure_counts

Emit = Callable[[str], None]

EXP_EXACT = 4.0 * math.pi * math.sinh(math.sqrt(3.0)) / math.sqrt(3.0)


def _out(line: str = "") -> None:
    print(line)


def _machine(args) -> bool:
    return args.format == "machine"


def resolve_rule(address: str) -> AnyRule:
    """A bundled rule by alias or name, otherwise a rule file."""
    rule = bundled.find_rule(address)
    if rule is not None:
        return rule
    if address.startswith("bundled:"):
        return bundled.get_rule(address)
    return ruleio.load(address)


def _print_rule(rule: CubatureRule, machine: bool) -> None:
    if machine:
        _out(f"{rule.name} {rule.cost} {rule.degree}")
        for label, weight, generator in rule.generators():
            _out(" ".join([label, format_real(weight)] + [format_real(p) for p in generator.params]))
        return
    _out(f"{rule.name}: {rule.cost} points, degree {rule.degree}")
    for label, weight, generator in rule.generators():
        names = generator.gtype.param_names
        params = ", ".join(f"{n}{label[1:]} = {format_real(p)}" for n, p in zip(names, generator.params))
        _out(f"  {label} = {format_real(weight)}   {params}")


def _print_goodness(rule: AnyRule, machine: bool, sphere_tol: float) -> None:
    report = classify(rule, sphere_tol)
    if machine:
        _out(f"good {int(report.good)}")
        return
    if report.good:
        _out("✅ good: all weights positive, all points on the sphere")
        return
    reasons = [f"{label} = {format_real(w)} <= 0" for label, w in report.negative_weights]
    if not report.all_points_on_sphere:
        reasons.append(f"points off the sphere by {report.max_norm_deviation:.3e}")
    _out(f"⚠️  not good: {'; '.join(reasons)}")


# Subcommands

def cmd_classes(args, emit: Emit) -> int:
    start = args.n if args.start is None else args.start
    if start < 1 or start > args.n:
        raise StructureError(f"--start must be in 1..{args.n}, got {start}")
    count = count_class_types_brute if args.brute else count_class_types
    if not _machine(args):
        _out(f"{'n':>4} {'e+1':>12}")
    for n in range(start, args.n + 1):
        emit(f"n={n}")
        _out(f"{n} {count(n)}" if _machine(args) else f"{n:>4} {count(n):>12}")
    return 0


def cmd_search(args, emit: Emit) -> int:
    cfg = SearchConfig(k_bound=args.kbound, n_max=args.nmax, minima=args.minima, general3d=args.general3d)
    cfg.validate()
    if cfg.n_max is None:
        solutions = first_minima(args.m, cfg.minima, cfg.k_bound, cfg.general3d, emit)
    else:
        solutions = enumerate_structures(args.m, cfg.k_bound, cfg.n_max, cfg.general3d, emit)

    def counts(s):
        return s.structure.counts if cfg.general3d else s.structure.sphere_counts

    if _machine(args):
        for s in solutions:
            _out(f"{args.m} {s.minimum_index} {s.lexical_index} {s.N} {' '.join(map(str, counts(s)))} {s.v}")
        return 0
    _out(f"{'m':>3} {'i.j':>6} {'N':>5}  {'structure':<20} {'v':>4}")
    for s in solutions:
        index = f"{s.minimum_index}.{s.lexical_index}"
        _out(f"{args.m:>3} {index:>6} {s.N:>5}  {'(' + format_counts(counts(s)) + ')':<20} {s.v:>4}")
    if not solutions:
        _out("no feasible structures in range")
    return 0


def cmd_lowerbound(args, emit: Emit) -> int:
    bound = lp_lower_bound(args.m, args.general3d)
    ks = bound.fractional_K if args.general3d else bound.fractional_K[1:]
    if _machine(args):
        _out(" ".join([str(args.m), f"{bound.N_lb:.10g}"] + [f"{k:.10g}" for k in ks]))
        return 0
    _out(f"m={args.m}: N_lb = {bound.N_lb:.10g}, so N >= {bound.n_min}")
    _out("  relaxed K = (" + ", ".join(f"{k:.6g}" for k in ks) + ")")
    return 0


def cmd_moments(args, emit: Emit) -> int:
    table = moment_table(args.m)
    for entry in table:
        j1, j2, j3 = entry.exponents
        if _machine(args):
            _out(f"{j1} {j2} {j3} {entry.numerator} {entry.denominator}")
        else:
            _out(f"({j1},{j2},{j3})  {entry}")
    return 0


def cmd_star(args, emit: Emit) -> int:
    structure = RuleStructure(parse_structure_counts(args.structure))
    _out(render_star(assemble(args.m, structure), latex=args.latex))
    return 0


def cmd_solve(args, emit: Emit) -> int:
    structure = RuleStructure(parse_structure_counts(args.structure))
    cfg = SolveConfig(seed=args.seed, collect=args.collect, workers=default_workers(args.workers))
    if args.restarts is not None:
        cfg.restarts = args.restarts
    if args.max_iterations is not None:
        cfg.max_iterations = args.max_iterations
    if args.tol is not None:
        cfg.residual_tol = args.tol
    system = assemble(args.m, structure)
    outcome = MomentSolver(cfg, emit).solve(system)

    machine = _machine(args)
    if not outcome.converged:
        _out(f"not converged {format_real(outcome.best_residual_norm)}" if machine else
             f"❌ no restart converged; best residual {outcome.best_residual_norm:.3e} "
             f"(restart {outcome.restart_index})")
        return 1

    rule = rule_from_solution(system, outcome.best_x)
    if not machine:
        _out(f"✅ converged at restart {outcome.restart_index}, residual {outcome.best_residual_norm:.3e}")
    _print_rule(rule, machine)
    _print_goodness(rule, machine, VerifyConfig().sphere_tol)
    for k, x in enumerate(outcome.solutions[1:], start=2):
        other = rule_from_solution(system, x)
        if not machine:
            _out(f"solution {k}:")
        _print_rule(other, machine)
    if args.out:
        path = ruleio.save(rule, args.out)
        emit(f"saved {path}")
    return 0


def cmd_verify(args, emit: Emit) -> int:
    cfg = VerifyConfig(tol=args.tol)
    cfg.validate()
    rule = resolve_rule(args.rule)
    report = verify(rule, args.degree, cfg.effective_tol)
    if _machine(args):
        _out(" ".join([
            str(report.degree),
            str(int(report.passes)),
            f"{report.max_even_error:.3e}",
            f"{report.max_odd_error:.3e}",
            format_real(report.weight_min),
            f"{report.max_norm_deviation:.3e}",
        ]))
    else:
        name = getattr(rule, "name", "") or args.rule
        mark = "✅ passes" if report.passes else "❌ fails"
        _out(f"{name}: {len(expand(rule))} points, {mark} at degree {report.degree}")
        _out(f"  max even error {report.max_even_error:.3e} at x^{report.worst_monomial[0]} "
             f"y^{report.worst_monomial[1]} z^{report.worst_monomial[2]}")
        _out(f"  max odd error  {report.max_odd_error:.3e}")
        _out(f"  min weight {format_real(report.weight_min)}, max |‖p‖-1| {report.max_norm_deviation:.3e}")
        _out(f"  tolerance {report.tolerance:.3e}")
    _print_goodness(rule, _machine(args), cfg.sphere_tol)
    return 0 if report.passes else 1


def cmd_product(args, emit: Emit) -> int:
    if args.m is None and not args.compare:
        raise StructureError("product needs --m or --compare")
    machine = _machine(args)
    if args.m is not None:
        rule = u3_product_rule(args.m)
        if machine:
            _out(f"{rule.name} {len(rule)} {rule.degree}")
        else:
            _out(f"{rule.name}: {len(rule)} points, degree {rule.degree}, Σw = {format_real(rule.weights.sum())}")
        if args.out:
            path = ruleio.save(rule, args.out)
            emit(f"saved {path}")
    if args.compare:
        rows = efficiency_table(bundled.recommended_rules())
        if not machine:
            _out(f"{'degree':>6} {'FS N':>6} {'product N':>10} {'%':>5}")
        for degree, n_fs, n_product, percent in rows:
            _out(f"{degree} {n_fs} {n_product} {percent}" if machine else
                 f"{degree:>6} {n_fs:>6} {n_product:>10} {percent:>5}")
    return 0


def _integrand(args):
    if args.function == "constant":
        return (lambda p: 1.0), 4.0 * math.pi, "1"
    if args.function == "exp":
        return (lambda p: math.exp(p[0] + p[1] + p[2])), EXP_EXACT, "exp(x+y+z)"
    if args.exponents is None:
        raise StructureError("--function monomial needs --exponents a,b,c")
    exps = parse_int_list(args.exponents, "exponents")
    if len(exps) != 3 or any(e < 0 for e in exps):
        raise StructureError(f"--exponents needs three nonnegative integers, got '{args.exponents}'")
    a, b, c = exps
    exact = float(monomial_moment(a, b, c)) * math.pi
    return (lambda p: p[0] ** a * p[1] ** b * p[2] ** c), exact, f"x^{a} y^{b} z^{c}"


def cmd_integrate(args, emit: Emit) -> int:
    rule = resolve_rule(args.rule)
    f, exact, label = _integrand(args)
    value = integrate(rule, f)
    error = abs(value - exact)
    if _machine(args):
        _out(f"{format_real(value)} {format_real(exact)} {error:.3e}")
    else:
        _out(f"I[{label}] ≈ {format_real(value)}   exact {format_real(exact)}   error {error:.3e}")
    return 0


def cmd_rules(args, emit: Emit) -> int:
    if args.action == "list":
        for alias in bundled.bundled_aliases():
            rule = bundled.get_rule(alias)
            good = classify(rule).good
            if _machine(args):
                _out(f"bundled:{alias} {rule.name} {rule.cost} {rule.degree} {int(good)}")
            else:
                _out(f"bundled:{alias:<6} {rule.name:<30} {'good' if good else 'not good'}")
        return 0

    if args.out is None:
        raise StructureError("rules export needs --out")
    if args.all:
        directory = Path(args.out)
        for alias in bundled.bundled_aliases():
            path = ruleio.save(bundled.get_rule(alias), directory / f"{alias}.json")
            emit(f"saved {path}")
        return 0
    if args.name is None:
        raise StructureError("rules export needs --name or --all")
    path = ruleio.save(bundled.get_rule(args.name), args.out)
    emit(f"saved {path}")
    return 0


COMMANDS = {
    "classes": cmd_classes,
    "search": cmd_search,
    "lowerbound": cmd_lowerbound,
    "moments": cmd_moments,
    "star": cmd_star,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "product": cmd_product,
    "integrate": cmd_integrate,
    "rules": cmd_rules,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1, help="random seed for solver restarts (default: 1)")
    common.add_argument("--tol", type=float, default=None,
                        help="residual tolerance for solve, error tolerance for verify (default: 1e-12 / 1e-10*4pi)")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages on stderr")
    common.add_argument("--format", choices=("text", "table", "machine"), default="text",
                        help="output layout (table is the same as text)")

    parser = argparse.ArgumentParser(
        prog="u3cubature",
        description="Fully symmetric cubature rules for the unit sphere in three dimensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classes", parents=[common], help="count class types of fully symmetric points")
    p.add_argument("--n", type=int, required=True, help="largest dimension")
    p.add_argument("--start", type=int, default=None, help="first dimension (default: --n)")
    p.add_argument("--brute", action="store_true", help="count by explicit enumeration")

    p = sub.add_parser("search", parents=[common], help="enumerate feasible rule structures")
    p.add_argument("--m", type=int, required=True, help="degree parameter, rule degree is 2m+1")
    p.add_argument("--kbound", type=int, default=20, help="upper bound on K3, K5, K6 (default: 20)")
    p.add_argument("--nmax", type=int, default=None, help="largest point count (default: first minima)")
    p.add_argument("--minima", type=int, default=5, help="distinct point counts without --nmax (default: 5)")
    p.add_argument("--general3d", action="store_true", help="use the general 3D constraints")

    p = sub.add_parser("lowerbound", parents=[common], help="LP relaxation bound on the point count")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--general3d", action="store_true")

    p = sub.add_parser("moments", parents=[common], help="exact even moments over the sphere")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("star", parents=[common], help="print the moment system for a structure")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--structure", required=True, help="K1,..,K6")
    p.add_argument("--latex", action="store_true", help="emit eqnarray rows")

    p = sub.add_parser("solve", parents=[common], help="solve the moment system for a structure")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--structure", required=True, help="K1,..,K6")
    p.add_argument("--restarts", type=int, default=None, help="random restarts (default: 100)")
    p.add_argument("--max-iterations", type=int, default=None, help="function evaluations per restart")
    p.add_argument("--workers", type=int, default=None, help="solver threads (default: $U3CUBATURE_WORKERS or CPUs)")
    p.add_argument("--collect", type=int, default=1, help="distinct converged solutions to keep")
    p.add_argument("--out", default=None, help="write the best rule to this file")

    p = sub.add_parser("verify", parents=[common], help="check a rule's degree of exactness")
    p.add_argument("--rule", required=True, help="rule file, bundled:mK or a bundled rule name")
    p.add_argument("--degree", type=int, default=None, help="claimed degree (default: the rule's own)")

    p = sub.add_parser("product", parents=[common], help="build a product rule")
    p.add_argument("--m", type=int, default=None, help="points per direction; 2m^2 points, degree 2m-1")
    p.add_argument("--out", default=None)
    p.add_argument("--compare", action="store_true", help="compare bundled rules with product rules")

    p = sub.add_parser("integrate", parents=[common], help="apply a rule to a test integrand")
    p.add_argument("--rule", required=True)
    p.add_argument("--function", choices=("constant", "monomial", "exp"), required=True)
    p.add_argument("--exponents", default=None, help="a,b,c for the monomial x^a y^b z^c")

    p = sub.add_parser("rules", parents=[common], help="list or export bundled rules")
    p.add_argument("action", choices=("list", "export"))
    p.add_argument("--name", default=None, help="bundled alias or rule name")
    p.add_argument("--all", action="store_true", help="export every bundled rule")
    p.add_argument("--out", default=None, help="file (or directory with --all)")

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and run one subcommand.

    Returns:
        Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return ex.code if isinstance(ex.code, int) else 2

    def emit(msg: str) -> None:
        if not args.quiet:
            print(f"[{args.command}] {msg}", file=sys.stderr)

    try:
        return COMMANDS[args.command](args, emit)
    except CubatureError as ex:
        print(f"❌ {ex}", file=sys.stderr)
        return 1
    except RuntimeError as ex:
        print(f"❌ {ex}", file=sys.stderr)
        return 1


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
