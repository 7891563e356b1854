"""Named, reproducible checks of the computational claims about I_Delta.

Each check is a function registered under an id. It receives a CheckContext
(a private StepBudget, the seed and the full-mode flag) and returns
(passed, witness). run_check wraps it into a CheckReport; exhausting the
budget yields the status "budget-exceeded" instead of an exception.
"""

import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

from margalg.complexes import FaceSet, SimplicialComplex, parse_facets
from margalg.config import Config
from margalg.errors import BudgetExceeded, UnknownCheck
from margalg.groebner import StepBudget, buchberger, intersect
from margalg.ideals import (
    dim_via_jacobian,
    eta_image,
    expected_dimension,
    grand_total_form,
    i_delta_gens,
    i_delta_gens_s,
    j_delta_binomials,
    j_delta_gens,
    k_delta_gens,
    kq_gens,
    l_gens,
    l_gens_s,
    margin_form,
    p_delta_member,
    plus_minor,
    q_delta_gens,
    s_context,
    segre_margin_gens,
    sign_normalized,
    sigma_kernel,
    sigma_parameterization,
    tau_delta_image,
    telescoped_plus_minor,
)
from margalg.primes import four_cycle_components, minimal_primes
from margalg.tables import (
    PLUS,
    Shape,
    decompose,
    detect_complex,
    random_rank_one_table,
    sample_zero_margin_table,
)

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
BUDGET_EXCEEDED = "budget-exceeded"

CUBE = Shape((2, 2, 2))
TESSERACT = Shape((2, 2, 2, 2))


def running_complex() -> SimplicialComplex:
    return parse_facets("1,2;1,3;2,3", 3)


def four_cycle_complex() -> SimplicialComplex:
    return parse_facets("1,2;1,3;2,4;3,4", 4)


@dataclass
class CheckContext:
    budget: StepBudget
    seed: int = 0
    full: bool = False


@dataclass
class CheckReport:
    check_id: str
    status: str
    elapsed: float = 0.0
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, timing: bool = False) -> dict:
        data = {"check": self.check_id, "status": self.status, "witness": self.witness}
        if timing:
            data["elapsed"] = round(self.elapsed, 3)
        return data


CheckFunction = Callable[[CheckContext], tuple[bool, dict]]

_REGISTRY: dict[str, CheckFunction] = {}
STRETCH_CHECKS = {"decomposition-4facet"}


def check(check_id: str):
    """Register a check function under check_id."""
    def register(func: CheckFunction) -> CheckFunction:
        _REGISTRY[check_id] = func
        return func
    return register


def registered_checks() -> list[str]:
    return sorted(_REGISTRY)


def run_check(check_id: str, budget: Optional[int] = None, seed: int = 0,
              full: bool = False) -> CheckReport:
    """Run one registered check with its own budget.

    Raises:
        UnknownCheck: If no check is registered under check_id.
    """
    func = _REGISTRY.get(check_id)
    if func is None:
        raise UnknownCheck(check_id)
    context = CheckContext(StepBudget(Config.VERIFY_BUDGET if budget is None else budget), seed, full)
    logger.info("Running check %s (seed %d)", check_id, seed)
    start = time.monotonic()
    try:
        passed, witness = func(context)
        status = PASS if passed else FAIL
    except BudgetExceeded as e:
        status = BUDGET_EXCEEDED
        witness = {"steps": e.steps}
        if e.partial is not None:
            witness["partial_generators"] = len(e.partial.generators)
            witness["pending_pairs"] = e.partial.pending_pairs
    elapsed = time.monotonic() - start
    if status == PASS:
        logger.info("Check %s passed in %.2fs", check_id, elapsed)
    else:
        logger.warning("Check %s: %s after %.2fs", check_id, status, elapsed)
    return CheckReport(check_id, status, elapsed, witness)


def run_all(budget: Optional[int] = None, seed: int = 0, full: bool = False,
            workers: Optional[int] = None, include_stretch: bool = True) -> list[CheckReport]:
    """Run every registered check; reports come back ordered by check id."""
    ids = [c for c in registered_checks() if include_stretch or c not in STRETCH_CHECKS]
    workers = workers or Config.VERIFY_WORKERS
    if workers <= 1:
        return [run_check(c, budget, seed, full) for c in ids]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(lambda c: run_check(c, budget, seed, full), ids))
    return sorted(reports, key=lambda r: r.check_id)


def _four_cycle_binomial_s():
    context = s_context(TESSERACT, four_cycle_complex())
    v = context.variable
    return (v((1, 1, PLUS, PLUS)) * v((PLUS, PLUS, 1, 1))
            - v((1, PLUS, 1, PLUS)) * v((PLUS, 1, PLUS, 1)))


def _four_cycle_binomial_r():
    def x(*slots):
        return margin_form(TESSERACT, slots)
    return x(1, 1, PLUS, PLUS) * x(PLUS, PLUS, 1, 1) - x(1, PLUS, 1, PLUS) * x(PLUS, 1, PLUS, 1)


@check("counts-running-example")
def counts_running_example(ctx: CheckContext) -> tuple[bool, dict]:
    _, full = k_delta_gens(CUBE, running_complex())
    _, facets_only = k_delta_gens(CUBE, running_complex(), facets_only=True)
    witness = {"faces": full.to_dict(), "facets_only": facets_only.to_dict()}
    passed = (
        (full.variables, full.raw_generators, full.minimal_generators, full.t_dimension) == (19, 30, 12, 7)
        and (facets_only.variables, facets_only.minimal_generators) == (12, 5)
    )
    return passed, witness


@check("qcolon-3facet")
def qcolon_3facet(ctx: CheckContext) -> tuple[bool, dict]:
    complex_ = running_complex()
    quadrics = [f for f in q_delta_gens(CUBE, complex_, budget=ctx.budget).generators if f.degree() == 2]
    basis = buchberger(i_delta_gens(CUBE, complex_).generators, budget=ctx.budget, degree_limit=4)
    total = grand_total_form(CUBE)
    for f in quadrics:
        if not basis.contains(total ** 2 * tau_delta_image(f, CUBE), ctx.budget):
            return False, {"generator": str(f)}
    return True, {"quadrics": len(quadrics)}


def _kq_evidence(shape: Shape, complex_: SimplicialComplex, ctx: CheckContext) -> tuple[bool, dict]:
    gens = kq_gens(shape, complex_, budget=ctx.budget)
    for g in gens:
        if not p_delta_member(g, shape):
            return False, {"complex": str(complex_), "outside_p": str(g)}
    basis = buchberger(gens, budget=ctx.budget, degree_limit=2)
    kernel_sizes = []
    for degree in (1, 2):
        kernel = sigma_kernel(shape, complex_, degree)
        kernel_sizes.append(len(kernel))
        for p in kernel:
            if not basis.contains(p, ctx.budget):
                return False, {"complex": str(complex_), "not_in_kq": str(p)}
    return True, {"complex": str(complex_), "generators": len(gens), "kernel_sizes": kernel_sizes}


@check("radsegeq-containment")
def radsegeq_containment(ctx: CheckContext) -> tuple[bool, dict]:
    return _kq_evidence(CUBE, running_complex(), ctx)


@check("conjecture-evidence")
def conjecture_evidence(ctx: CheckContext) -> tuple[bool, dict]:
    witnesses = []
    for complex_ in (running_complex(), parse_facets("1,2;2,3", 3)):
        passed, witness = _kq_evidence(CUBE, complex_, ctx)
        witnesses.append(witness)
        if not passed:
            return False, {"cases": witnesses}
    return True, {"cases": witnesses}


@check("j-equals-q-3facet")
def j_equals_q_3facet(ctx: CheckContext) -> tuple[bool, dict]:
    complex_ = running_complex()
    j_gens = j_delta_gens(CUBE, complex_).generators
    q_gens = q_delta_gens(CUBE, complex_, budget=ctx.budget).generators
    j_basis = buchberger(j_gens, budget=ctx.budget)
    q_basis = buchberger(q_gens, budget=ctx.budget)
    witness = {"j_generators": len(j_gens), "q_generators": len(q_gens),
               "basis_size": len(q_basis.generators)}
    return j_basis.generators == q_basis.generators, witness


@check("j-neq-q-4facet")
def j_neq_q_4facet(ctx: CheckContext) -> tuple[bool, dict]:
    complex_ = four_cycle_complex()
    f = _four_cycle_binomial_s()
    j_gens = j_delta_gens(TESSERACT, complex_).generators
    basis = buchberger(j_gens, budget=ctx.budget, degree_limit=2)
    remainder = basis.normal_form(f, ctx.budget)
    emitted = sign_normalized(f) in j_gens
    witness = {"binomial": str(f), "normal_form": str(remainder), "emitted": emitted}
    passed = eta_image(f, TESSERACT).is_zero() and not remainder.is_zero() and not emitted
    return passed, witness


@check("nonradical-4facet")
def nonradical_4facet(ctx: CheckContext) -> tuple[bool, dict]:
    f = _four_cycle_binomial_r()
    total = grand_total_form(TESSERACT)
    basis = buchberger(i_delta_gens(TESSERACT, four_cycle_complex()).generators,
                       budget=ctx.budget, degree_limit=4)
    once = basis.normal_form(total * f, ctx.budget)
    twice = basis.normal_form(total ** 2 * f, ctx.budget)
    witness = {"basis_size": len(basis.generators), "normal_form": str(once),
               "squared_normal_form": str(twice)}
    return not once.is_zero() and twice.is_zero(), witness


@check("decomposition-4facet")
def decomposition_4facet(ctx: CheckContext) -> tuple[bool, dict]:
    complex_ = four_cycle_complex()
    context = s_context(TESSERACT, complex_)
    k_spec, _ = k_delta_gens(TESSERACT, complex_)
    i_gens = list(i_delta_gens_s(TESSERACT, complex_).generators)
    components = four_cycle_components(TESSERACT, budget=ctx.budget)
    for name, spec in components.items():
        basis = buchberger(spec.generators, budget=ctx.budget, degree_limit=2)
        for g in i_gens:
            if not basis.contains(g, ctx.budget):
                return False, {"component": name, "missing": str(g)}

    v = context.variable
    rng = random.Random(ctx.seed)
    factors = [
        _four_cycle_binomial_s(),
        v((rng.randint(1, 2), PLUS, PLUS, PLUS)),
        v((PLUS, rng.randint(1, 2), PLUS, PLUS)),
        v((PLUS,) * 4) ** 2,
    ]
    sample = factors[0] * factors[1] * factors[2] * factors[3]
    target = list(k_spec.generators) + i_gens
    target_basis = buchberger(target, budget=ctx.budget, degree_limit=sample.degree())
    if not target_basis.contains(sample, ctx.budget):
        return False, {"product": str(sample)}
    witness = {"components": sorted(components), "product_degree": sample.degree()}

    if ctx.full:
        meet = list(components["P"].generators)
        for name in ("Q1", "Q2", "Q3"):
            meet = intersect(meet, components[name].generators, budget=ctx.budget, ring=context.ring)
        full_basis = buchberger(target, budget=ctx.budget)
        outside = [g for g in meet if not full_basis.contains(g, ctx.budget)]
        witness["intersection_generators"] = len(meet)
        if outside:
            witness["outside_i_delta"] = str(outside[0])
            return False, witness
    return True, witness


@check("statthm-roundtrip")
def statthm_roundtrip(ctx: CheckContext) -> tuple[bool, dict]:
    complex_ = running_complex()
    shapes = (CUBE, Shape((2, 2, 3)))
    cases = 100
    first = None
    for k in range(cases):
        shape = shapes[k % 2]
        rank_one = random_rank_one_table(shape, ctx.seed * 1000 + k)
        table = rank_one + sample_zero_margin_table(shape, complex_, ctx.seed * 1000 + k)
        if first is None:
            first = table
        independent, zero_part = decompose(table)
        if independent != rank_one or independent + zero_part != table:
            return False, {"case": k, "shape": list(shape.dims)}
        detected = detect_complex(table)
        if not all(detected.contains(f) for f in complex_.facets):
            return False, {"case": k, "detected": detected.to_dict()}
    return True, {"cases": cases, "recovered": cases, "first_table": first.to_dict()}


GRADE_CASES = (
    ((2, 2), "1,2"),
    ((2, 3), "1;2"),
    ((3, 3), "1,2"),
    ((2, 2, 2), "1,2;1,3;2,3"),
    ((2, 2, 2, 2), "1,2;2,3;3,4"),
)


@check("grade-dimension")
def grade_dimension(ctx: CheckContext) -> tuple[bool, dict]:
    results = []
    passed = True
    for dims, facets in GRADE_CASES:
        shape = Shape(dims)
        complex_ = parse_facets(facets, len(dims))
        rank = dim_via_jacobian(sigma_parameterization(shape, complex_), ctx.seed)
        _, counts = k_delta_gens(shape, complex_)
        expected = expected_dimension(shape)
        results.append({
            "shape": list(dims), "facets": facets, "rank": rank,
            "expected": expected, "codim": counts.t_dimension - rank,
        })
        passed = passed and rank == expected
    return passed, {"cases": results}


@check("minimal-primes-contain")
def minimal_primes_contain(ctx: CheckContext) -> tuple[bool, dict]:
    witness = {}
    flagged_by_case = {}
    for label, complex_ in (("running", running_complex()), ("two-facet", parse_facets("1,2;2,3", 3))):
        i_gens = i_delta_gens_s(CUBE, complex_).generators
        flagged = minimal_primes(CUBE, complex_, budget=ctx.budget)
        for desc, spec in flagged:
            basis = buchberger(spec.generators, budget=ctx.budget, degree_limit=2)
            for g in i_gens:
                if not basis.contains(g, ctx.budget):
                    return False, {"case": label, "descriptor": desc.to_dict(), "missing": str(g)}
        flagged_by_case[label] = [d for d, _ in flagged]
        witness[label] = [d.to_dict() for d, _ in flagged]

    running = flagged_by_case["running"]
    singletons = [d for d in running if len(d.partition) == 3]
    two_facet = flagged_by_case["two-facet"]
    passed = (
        len(running) == 5
        and len(singletons) == 1 and singletons[0].minimal is False
        and all(d.minimal for d in running if len(d.partition) != 3)
        and len(two_facet) == 2
        and two_facet[1].witnesses == (FaceSet((1,)), FaceSet((3,)))
    )
    return passed, witness


@check("jlemma-3facet")
def jlemma_3facet(ctx: CheckContext) -> tuple[bool, dict]:
    complex_ = running_complex()
    basis = buchberger(i_delta_gens(CUBE, complex_).generators, budget=ctx.budget, degree_limit=3)
    binomials = j_delta_binomials(CUBE, complex_)
    products = 0
    for b in binomials:
        image = tau_delta_image(b.polynomial, CUBE)
        for form in l_gens(CUBE, b.first_face.intersection(b.second_face)).generators:
            products += 1
            if not basis.contains(form * image, ctx.budget):
                return False, {"binomial": str(b.polynomial), "form": str(form)}
    return True, {"binomials": len(binomials), "products": products}


def _subsets(n: int) -> list[FaceSet]:
    return [FaceSet(c) for k in range(n + 1) for c in combinations(range(1, n + 1), k)]


@check("liint-instances")
def liint_instances(ctx: CheckContext) -> tuple[bool, dict]:
    subsets = _subsets(3)
    instances = [
        (j1, j2, k)
        for k in subsets if len(k) >= 2
        for j1 in subsets for j2 in subsets
        if j1 <= j2 and j1.issubset(k) and j2.issubset(k)
    ]
    rng = random.Random(ctx.seed)
    chosen = rng.sample(instances, min(12, len(instances)))
    for j1, j2, k in chosen:
        common = j1.intersection(j2)
        gens = l_gens(CUBE, common).generators + segre_margin_gens(CUBE, k).generators
        basis = buchberger(gens, budget=ctx.budget, degree_limit=2)
        for a in l_gens(CUBE, j1).generators:
            for b in l_gens(CUBE, j2).generators:
                if not basis.contains(a * b, ctx.budget):
                    return False, {"J1": j1.label(), "J2": j2.label(), "K": k.label(),
                                   "product": str(a * b)}
    return True, {"instances": len(chosen), "population": len(instances)}


@check("pplus-instances")
def pplus_instances(ctx: CheckContext) -> tuple[bool, dict]:
    edges = [FaceSet(c) for c in combinations((1, 2, 3), 2)]
    checked = 0
    for first, second in combinations(edges, 2):
        complex_ = SimplicialComplex(3, (first, second))
        k_spec, _ = k_delta_gens(CUBE, complex_)
        j_gens = j_delta_gens(CUBE, complex_).generators
        for big, other in ((first, second), (second, first)):
            for i in big.intersection(other):
                modulus = (j_gens + k_spec.generators
                           + l_gens_s(CUBE, complex_, big.without(i)).generators)
                basis = buchberger(modulus, budget=ctx.budget, degree_limit=2)
                for a in l_gens_s(CUBE, complex_, other.without(i)).generators:
                    for b in l_gens_s(CUBE, complex_, big).generators:
                        checked += 1
                        if not basis.contains(a * b, ctx.budget):
                            return False, {"complex": str(complex_), "vertex": i,
                                           "product": str(a * b)}
    return True, {"products": checked}


@check("summin-identity")
def summin_identity(ctx: CheckContext) -> tuple[bool, dict]:
    rng = random.Random(ctx.seed)
    shapes = (CUBE, Shape((2, 3)), Shape((2, 2, 3)))
    cases = 30
    for _ in range(cases):
        shape = rng.choice(shapes)
        axis = rng.randint(1, shape.n)
        u, v = [], []
        for j, a in enumerate(shape.dims, start=1):
            for slots in (u, v):
                if j == axis or rng.random() < 0.5:
                    slots.append(rng.randint(1, a))
                else:
                    slots.append(PLUS)
        if plus_minor(shape, u, v, axis) != telescoped_plus_minor(shape, u, v, axis):
            return False, {"shape": list(shape.dims), "u": u, "v": v, "axis": axis}
    return True, {"cases": cases}
