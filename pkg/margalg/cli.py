"""Command-line front door: JSON in, JSON out.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 budget exhausted.
Diagnostics go to stderr so stdout carries only JSON.
"""

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from margalg import checks
from margalg.complexes import FaceSet, SimplicialComplex, parse_facets
from margalg.config import Config
from margalg.errors import BudgetExceeded, MargalgError
from margalg.groebner import StepBudget, buchberger, ideal_member, intersect, radical_member, saturate
from margalg.ideals import (
    IdealSpec,
    dim_via_jacobian,
    eta_parameterization,
    expected_dimension,
    i_delta_gens,
    i_delta_gens_s,
    j_delta_gens,
    k_delta_gens,
    l_gens,
    l_gens_s,
    l_hat_gens,
    q_delta_gens,
    segre_margin_gens,
    segre_margin_gens_s,
    segre_parameterization,
    sigma_parameterization,
)
from margalg.primes import minimal_prime_candidates, minimal_primes, render_component
from margalg.tables import (
    Shape,
    Table,
    decompose,
    detect_complex,
    is_completely_independent,
    is_delta_independent,
    marginalize,
    random_rank_one_table,
    sample_zero_margin_table,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

GEN_KINDS = ["Segre", "I_Delta", "L", "L_hat", "K_Delta", "J_Delta", "Q_Delta"]


class UsageError(Exception):
    """Flags that parse but do not fit together."""


def _read_json(source: str):
    if source == "-":
        return json.load(sys.stdin)
    with open(source, encoding="utf-8") as f:
        return json.load(f)


def _emit(data) -> None:
    json.dump(data, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _face(text: str) -> FaceSet:
    return FaceSet.of(int(v) for v in text.split(",") if v.strip())


def _shape(args) -> Shape:
    if not args.shape:
        raise UsageError("--shape is required")
    return Shape.parse(args.shape)


def _complex(args, n: int) -> SimplicialComplex:
    if getattr(args, "complex", None):
        complex_ = SimplicialComplex.from_dict(_read_json(args.complex))
    elif getattr(args, "facets", None) is not None:
        complex_ = parse_facets(args.facets, n)
    else:
        raise UsageError("either --facets or --complex is required")
    return complex_


def _budget(args) -> StepBudget:
    return StepBudget(args.budget)


def _ideal(source: str) -> IdealSpec:
    return IdealSpec.from_dict(_read_json(source))


def cmd_margins(args) -> int:
    table = Table.from_dict(_read_json(args.table))
    _emit(marginalize(table, _face(args.face)).to_dict())
    return EXIT_OK


def cmd_indep(args) -> int:
    table = Table.from_dict(_read_json(args.table))
    result = {"completely_independent": is_completely_independent(table)}
    if args.facets is not None or args.complex:
        result["delta_independent"] = is_delta_independent(table, _complex(args, table.shape.n))
    _emit(result)
    return EXIT_OK


def cmd_decompose(args) -> int:
    table = Table.from_dict(_read_json(args.table))
    independent, zero_part = decompose(table, strict=args.strict_statcor)
    _emit({"independent": independent.to_dict(), "zero_margin": zero_part.to_dict()})
    return EXIT_OK


def cmd_detect(args) -> int:
    table = Table.from_dict(_read_json(args.table))
    _emit(detect_complex(table, strict=args.strict_statcor).to_dict())
    return EXIT_OK


def cmd_sample(args) -> int:
    shape = _shape(args)
    if args.kind == "rank-one":
        table = random_rank_one_table(shape, args.seed)
    else:
        complex_ = _complex(args, shape.n)
        table = sample_zero_margin_table(shape, complex_, args.seed)
        if args.kind == "statthm":
            table = random_rank_one_table(shape, args.seed) + table
    _emit(table.to_dict())
    return EXIT_OK


def cmd_gens(args) -> int:
    shape = _shape(args)
    in_s = args.ring == "S_Delta"
    kind = args.kind
    extra = {}
    if kind in ("Segre", "L") and args.face is None:
        raise UsageError(f"--face is required for {kind}")
    if kind == "Segre" and not in_s:
        spec = segre_margin_gens(shape, _face(args.face))
    elif kind == "L" and not in_s:
        spec = l_gens(shape, _face(args.face))
    elif kind == "I_Delta" and not in_s:
        spec = i_delta_gens(shape, _complex(args, shape.n))
    else:
        complex_ = _complex(args, shape.n)
        if kind == "Segre":
            spec = segre_margin_gens_s(shape, complex_, _face(args.face))
        elif kind == "L":
            spec = l_gens_s(shape, complex_, _face(args.face), facets_only=args.facets_only)
        elif kind == "L_hat":
            if args.vertex is None:
                raise UsageError("--vertex is required for L_hat")
            facets = [f for f in complex_.facets if args.vertex in f]
            spec = l_hat_gens(shape, complex_, facets, args.vertex)
        elif kind == "I_Delta":
            spec = i_delta_gens_s(shape, complex_)
        elif kind == "K_Delta":
            spec, counts = k_delta_gens(shape, complex_, facets_only=args.facets_only)
            extra["counts"] = counts.to_dict()
        elif kind == "J_Delta":
            spec = j_delta_gens(shape, complex_)
        else:
            spec = q_delta_gens(shape, complex_, degree_cap=args.degree_cap, budget=_budget(args))
    data = spec.to_dict()
    data.update(extra)
    _emit(data)
    return EXIT_OK


def cmd_gb(args) -> int:
    spec = _ideal(args.ideal)
    basis = buchberger(spec.generators, order=args.order, budget=_budget(args),
                       degree_limit=args.degree_limit, ring=spec.ring)
    data = spec.context.to_dict()
    data.update(basis.to_dict())
    data["name"] = spec.name
    _emit(data)
    return EXIT_OK


def cmd_member(args) -> int:
    spec = _ideal(args.ideal)
    p = spec.ring.parse(args.poly)
    budget = _budget(args)
    if args.radical:
        result = {"radical_member": radical_member(p, spec.generators, budget=budget)}
    else:
        result = {"member": ideal_member(p, spec.generators, budget=budget)}
    result["polynomial"] = str(p)
    _emit(result)
    return EXIT_OK


def cmd_saturate(args) -> int:
    spec = _ideal(args.ideal)
    f = spec.ring.parse(args.poly)
    gens = saturate(spec.generators, f, budget=_budget(args))
    _emit(IdealSpec(f"{spec.name}:({f})^inf", spec.context, tuple(gens)).to_dict())
    return EXIT_OK


def cmd_intersect(args) -> int:
    first = _ideal(args.ideal)
    second = _ideal(args.other)
    if not first.ring.same_variables(second.ring):
        raise UsageError("both ideals must live in the same ring")
    gens = intersect(first.generators, second.generators, budget=_budget(args), ring=first.ring)
    _emit(IdealSpec(f"{first.name}&{second.name}", first.context, tuple(gens)).to_dict())
    return EXIT_OK


def cmd_min_primes(args) -> int:
    shape = _shape(args)
    complex_ = _complex(args, shape.n)
    budget = _budget(args)
    if args.minimality:
        pairs = minimal_primes(shape, complex_, budget=budget)
    else:
        descriptors = minimal_prime_candidates(shape, complex_)
        pairs = [(d, render_component(d, shape, complex_, budget) if args.render else None)
                 for d in descriptors]
    items = []
    for desc, spec in pairs:
        item = desc.to_dict()
        item["label"] = desc.label(complex_)
        if args.render and spec is not None:
            item["generators"] = [str(g) for g in spec.generators]
        items.append(item)
    _emit({"complex": complex_.to_dict(), "shape": list(shape.dims), "components": items})
    return EXIT_OK


def cmd_dim(args) -> int:
    shape = _shape(args)
    if args.param == "segre":
        param = segre_parameterization(shape)
    else:
        complex_ = _complex(args, shape.n)
        if args.param == "eta":
            param = eta_parameterization(shape, complex_, facets_only=not args.all_faces)
        else:
            param = sigma_parameterization(shape, complex_)
    rank = dim_via_jacobian(param, args.seed)
    _emit({"param": args.param, "rank": rank, "expected": expected_dimension(shape)})
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.all:
        reports = checks.run_all(args.budget, args.seed, full=args.full, workers=args.workers)
    else:
        reports = [checks.run_check(args.check, args.budget, args.seed, full=args.full)]
    for report in reports:
        _emit(report.to_dict(timing=args.timing))
    statuses = {r.status for r in reports}
    if checks.FAIL in statuses:
        return EXIT_DOMAIN
    if checks.BUDGET_EXCEEDED in statuses:
        return EXIT_BUDGET
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="margalg", description="Marginal independence ideals toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_table(p):
        p.add_argument("--table", required=True, help="table JSON file, or - for stdin")

    def with_complex(p):
        p.add_argument("--facets", help='facet list such as "1,2;1,3;2,3"')
        p.add_argument("--complex", help="complex JSON file, or - for stdin")

    def with_budget(p):
        p.add_argument("--budget", type=int, default=None, help="Groebner step budget")

    p = sub.add_parser("margins", aliases=["marg"], help="margin of a table")
    with_table(p)
    p.add_argument("--face", required=True, help='face such as "1,2"; "" for the grand total')
    p.set_defaults(func=cmd_margins)

    p = sub.add_parser("indep", help="independence tests")
    with_table(p)
    with_complex(p)
    p.set_defaults(func=cmd_indep)

    for name, func in (("decompose", cmd_decompose), ("detect", cmd_detect)):
        p = sub.add_parser(name)
        with_table(p)
        p.add_argument("--strict-statcor", action="store_true",
                       help="skip the division by t^(n-1)")
        p.set_defaults(func=func)

    p = sub.add_parser("sample", help="seeded tables")
    p.add_argument("--shape", required=True)
    with_complex(p)
    p.add_argument("--kind", choices=["rank-one", "zero-margin", "statthm"], default="statthm")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("gens", help="generators of an ideal family")
    p.add_argument("--kind", choices=GEN_KINDS, required=True)
    p.add_argument("--shape", required=True)
    with_complex(p)
    p.add_argument("--face")
    p.add_argument("--vertex", type=int)
    p.add_argument("--ring", choices=["R", "S_Delta"], default=None)
    p.add_argument("--facets-only", action="store_true")
    p.add_argument("--degree-cap", type=int)
    with_budget(p)
    p.set_defaults(func=cmd_gens)

    p = sub.add_parser("gb", help="reduced Groebner basis of an ideal")
    p.add_argument("--ideal", required=True)
    p.add_argument("--order", choices=Config.TERM_ORDERS, default=None)
    p.add_argument("--degree-limit", type=int)
    with_budget(p)
    p.set_defaults(func=cmd_gb)

    p = sub.add_parser("member", help="ideal or radical membership")
    p.add_argument("--ideal", required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--radical", action="store_true")
    with_budget(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("saturate", help="saturation by a polynomial")
    p.add_argument("--ideal", required=True)
    p.add_argument("--poly", required=True)
    with_budget(p)
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("intersect", help="intersection of two ideals")
    p.add_argument("--ideal", required=True)
    p.add_argument("--other", required=True)
    with_budget(p)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("min-primes", help="minimal prime candidates")
    p.add_argument("--shape", required=True)
    with_complex(p)
    p.add_argument("--render", action="store_true", help="include generator lists")
    p.add_argument("--minimality", action="store_true", help="flag non-minimal candidates")
    with_budget(p)
    p.set_defaults(func=cmd_min_primes)

    p = sub.add_parser("dim", help="Jacobian rank of a parameterization")
    p.add_argument("--shape", required=True)
    with_complex(p)
    p.add_argument("--param", choices=["segre", "eta", "sigma"], default="sigma")
    p.add_argument("--all-faces", action="store_true", help="eta over every face symbol")
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("verify", help="run registered checks")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--check", choices=checks.registered_checks())
    group.add_argument("--all", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--full", action="store_true", help="attempt the full intersection in stretch checks")
    p.add_argument("--timing", action="store_true", help="include elapsed seconds")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=Config.LOG_LEVEL, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if getattr(args, "ring", "unset") is None:
        args.ring = "R" if args.kind in ("Segre", "L", "I_Delta") else "S_Delta"
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (MargalgError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
