"""
Acceptance Criteria

Nine independent checks, each exhaustive or seeded so that two runs with the
same settings and seed give the same report:

    1. compiler ≡ brute-force oracle over U_3
    2. separation transfer between a space and its exponential
    3. distributivity
    4. ordinal order laws over two zeros
    5. interpretation conditions of W3 models
    6. hyperuniverse search
    7. well-orders from choice functions
    8. specification two-path agreement
    9. Kuratowski square containment

Each criterion returns its checks; run_acceptance runs them in order, and a
criterion that raises is logged and reported as a failure without stopping
the others.
"""

import logging
import random
import time
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from settop.finite_topology import PointTopology, enumerate_topologies, separation_profile, sorted_family
from settop.hf_universe.hyperuniverse import search_hyperuniverses
from settop.hf_universe.inner_model import build_w3, check_interpretation_conditions
from settop.hf_universe.objects import HFSet, cumulative_hierarchy, format_hf, subsets
from settop.hf_universe.ordinals import (
    EMPTY_ZERO,
    atoms_zero,
    enumerate_zero_ordinals,
    ordinal_isomorphism,
    ordinal_law_violations,
    ordinals_by_filter,
)
from settop.hyperspace import kuratowski_check, separation_transfer
from settop.positive_core.formulas import enumerate_formulas, random_formula
from settop.positive_core.specification import (
    ConsistencyFault,
    OracleTally,
    check_distributivity,
    oracle_equivalence,
    specification_set,
)
from settop.report import Check, Report, Verdict, check_of
from settop.wellorder import (
    approximation_chain,
    chain_embedding,
    chain_problems,
    order_from_chain,
    order_invariants,
    random_choice_function,
    wellorder_from_choice,
)

logger = logging.getLogger(__name__)

Settings = Dict[str, Dict[str, Any]]


def u3() -> HFSet:
    """The rank-3 cumulative hierarchy as one set."""
    return HFSet(frozenset(cumulative_hierarchy(3)))


def class_candidates(universe: HFSet, max_size: int) -> List[frozenset]:
    """Nonempty subsets of the universe with at most max_size elements."""
    elems = universe.sorted_elements()
    return [frozenset(c) for r in range(1, max_size + 1) for c in combinations(elems, r)]


def _tally_check(name: str, tally: OracleTally) -> Check:
    check = Check(name, detail=f"{tally.formulas} formulas, {tally.matches}/{tally.instances} exact matches")
    check.passed = tally.matches
    check.failed = tally.instances - tally.matches
    check.witnesses = list(tally.mismatches[:5])
    return check.settle()


# ============================================================================
# CRITERIA
# ============================================================================

def compiler_oracle(settings: Settings, seed: int) -> List[Check]:
    """
    Exhaustive up to formula_exhaustive_size, then formula_samples seeded
    formulas per size up to formula_size. Free variables range over U_3.
    """
    acc = settings["acceptance"]
    universe = u3()
    carriers = universe.sorted_elements()
    classes = class_candidates(universe, acc["class_size"])
    exhaustive = acc["formula_exhaustive_size"]
    checks = []

    for m in range(1, acc["formula_free"] + 1):
        free = tuple(f"x{i}" for i in range(1, m + 1))
        tally = oracle_equivalence(
            enumerate_formulas(exhaustive, free, ("B1",)), m, carriers, classes
        )
        checks.append(_tally_check(f"compiler ≡ oracle, m={m}, every formula of size ≤ {exhaustive}", tally))

    rng = random.Random(seed)
    m = acc["formula_free"]
    free = tuple(f"x{i}" for i in range(1, m + 1))
    sampled = [
        random_formula(rng, size, free, ("B1",))
        for size in range(exhaustive + 1, acc["formula_size"] + 1)
        for _ in range(acc["formula_samples"])
    ]
    tally = oracle_equivalence(sampled, m, carriers, classes)
    checks.append(
        _tally_check(f"compiler ≡ oracle, m={m}, sampled sizes {exhaustive + 1}..{acc['formula_size']}", tally)
    )
    return checks


def separation_transfer_check(settings: Settings, seed: int) -> List[Check]:
    """T0 bases only: for spaces that are not T0 the hyperspace forgets the duplicated points."""
    check = Check("separation transfer over T0 bases")
    skipped = 0
    limits = settings.get("limits")
    for n in range(1, settings["acceptance"]["transfer_points"] + 1):
        for T in enumerate_topologies(n, limits=limits):
            if not separation_profile(T).t0:
                skipped += 1
                continue
            for statement, holds in separation_transfer(T).items():
                check.record(Verdict.PASS if holds else Verdict.FAIL, f"{statement} fails on {T!r}")
    check.detail = f"{check.passed} statements checked, {skipped} non-T0 bases skipped"
    return [check.settle()]


def distributivity(settings: Settings, seed: int) -> List[Check]:
    rng = random.Random(seed)
    elems = u3().sorted_elements()
    check = Check("distributivity")
    for _ in range(settings["acceptance"]["distributivity_instances"]):
        d = list(range(rng.randint(1, 3)))
        J = {i: rng.sample(elems, rng.randint(1, 3)) for i in d}
        if check_distributivity(d, J):
            check.record(Verdict.PASS)
        else:
            shown = {i: [format_hf(j) for j in J[i]] for i in d}
            check.record(Verdict.FAIL, f"J = {shown}")
    check.detail = f"{check.passed} random instances"
    return [check.settle()]


def ordinal_structure(settings: Settings, seed: int) -> List[Check]:
    count = settings["acceptance"]["ordinal_count"]
    limits = settings.get("limits")
    zeros = [("∅", EMPTY_ZERO), ("{{#x}, {#y}}", atoms_zero())]
    checks = []
    sequences = []
    for label, z in zeros:
        seq = enumerate_zero_ordinals(z, count, limits=limits)
        sequences.append((z, seq))
        problems = ordinal_law_violations(z, seq)
        checks.append(check_of(f"ordinal laws over zero {label}", not problems,
                               f"first {count} ordinals", problems))
        filtered = ordinals_by_filter(z, 4, limits=limits)
        prefix = seq[: len(filtered)]
        checks.append(check_of(f"filtered ordinals over zero {label}", filtered == prefix,
                               f"{len(filtered)} ordinals among level ≤ 4 objects"))

    (z1, s1), (z2, s2) = sequences
    checks.append(check_of("ordinal sequences are order-isomorphic",
                           ordinal_isomorphism(z1, s1, z2, s2) is not None))

    z = atoms_zero()
    sizes = [len(alpha.members) for alpha in enumerate_zero_ordinals(z, count + 1, limits=limits)]
    checks.append(check_of("n-th ordinal over {{#x}, {#y}} has n+2 elements",
                           sizes == [n + 2 for n in range(count + 1)], f"sizes {sizes}"))
    return checks


def inner_model_audit(settings: Settings, seed: int) -> List[Check]:
    z = atoms_zero()
    limits = settings.get("limits")
    contexts = [
        ("Z=B=∅, rank 4", build_w3(EMPTY_ZERO, [], 4, limits=limits)),
        ("Z=B={{#x}, {#y}}, rank 3", build_w3(z, z.members, 3, limits=limits)),
    ]
    checks = []
    for label, ctx in contexts:
        report = check_interpretation_conditions(ctx)
        check = Check(f"W3 conditions ({label})")
        check.passed = sum(c.passed for c in report.checks)
        check.failed = report.in_bound_failures
        check.out_of_bound = report.out_of_bound
        for c in report.checks:
            check.witnesses.extend(f"{c.name}: {w}" for w in c.witnesses[: 5 - len(check.witnesses)])
        check.detail = f"|W⊕|={len(ctx.w_plus)}, {report.out_of_bound} out-of-bound instances"
        checks.append(check.settle())
    return checks


def hyperuniverse_search(settings: Settings, seed: int) -> List[Check]:
    points = settings["acceptance"]["search_points"]
    limits = settings.get("limits")
    first = search_hyperuniverses(points, limits=limits)
    second = search_hyperuniverses(points, limits=limits)
    one_point = len(first) == 1 and first[0].points == 1
    return [
        check_of("hyperuniverse search finds only the one-point space", one_point,
                 f"{len(first)} witnesses up to {points} points",
                 [str(w.as_dict()) for w in first]),
        check_of("hyperuniverse witness list is deterministic", first == second),
    ]


def wellorder_from_choice_check(settings: Settings, seed: int) -> List[Check]:
    acc = settings["acceptance"]
    rng = random.Random(seed)
    check = Check("well-orders from choice functions")
    for n in range(1, acc["choice_carrier"] + 1):
        for _ in range(acc["choice_samples"]):
            f = random_choice_function(n, rng)
            problems = chain_problems(approximation_chain(f), f)
            if not problems:
                w = wellorder_from_choice(f)
                problems = order_invariants(w)
                if order_from_chain(chain_embedding(w)) != w:
                    problems.append("chain embedding does not recover the order")
            check.record(Verdict.FAIL if problems else Verdict.PASS, f"{f.to_json()}: {problems}")
    check.detail = f"{check.passed + check.failed} sampled choice functions"
    return [check.settle()]


def specification_agreement(settings: Settings, seed: int) -> List[Check]:
    acc = settings["acceptance"]
    rng = random.Random(seed)
    universe = u3()
    elems = universe.sorted_elements()
    carriers = subsets(universe)
    classes = class_candidates(universe, acc["class_size"])
    check = Check("specification two-path agreement")
    for _ in range(acc["specification_instances"]):
        phi = random_formula(rng, rng.randint(1, acc["formula_size"] - 1), ("x1", "x2"), ("B1",))
        c = rng.choice(carriers)
        b2 = rng.choice(elems)
        B1 = rng.choice(classes)
        try:
            specification_set(phi, c, [b2], [B1])
            check.record(Verdict.PASS)
        except ConsistencyFault as e:
            check.record(Verdict.FAIL, str(e))
    check.detail = f"{check.passed + check.failed} seeded instances"
    return [check.settle()]


def kuratowski_containment(settings: Settings, seed: int) -> List[Check]:
    check = Check("Kuratowski square inside □≤2□≤2 a ∩ ◊□≤1 a")
    for n in (2, 3):
        base = PointTopology.discrete(n)
        for a in sorted_family(base.closed):
            ok = kuratowski_check(base, a, limits=settings.get("limits"))
            check.record(Verdict.PASS if ok else Verdict.FAIL, f"discrete {n} points, a={a!r}")
    check.detail = f"{check.passed + check.failed} closed sets"
    return [check.settle()]


CRITERIA: List[Tuple[str, Callable[[Settings, int], List[Check]]]] = [
    ("Compiler-oracle equivalence", compiler_oracle),
    ("Separation transfer", separation_transfer_check),
    ("Distributivity", distributivity),
    ("Ordinal structure", ordinal_structure),
    ("Inner-model audit", inner_model_audit),
    ("Hyperuniverse search", hyperuniverse_search),
    ("Well-order from choice", wellorder_from_choice_check),
    ("Specification agreement", specification_agreement),
    ("Kuratowski containment", kuratowski_containment),
]


def run_acceptance(
    settings: Settings,
    seed: int,
    only: Optional[Sequence[str]] = None,
    command: Optional[List[str]] = None,
) -> Report:
    """
    Run the criteria in order. A criterion that raises is logged and
    recorded as a failed check; the others still run.
    """
    report = Report(command=command or ["suite", "acceptance"], seed=seed)
    selected = [(name, fn) for name, fn in CRITERIA if not only or name in only]
    passed: List[str] = []
    failed: List[str] = []
    started = time.perf_counter()

    logger.info("=" * 60)
    logger.info(f"Running {len(selected)} acceptance criteria (seed {seed})")
    logger.info("=" * 60)

    for i, (name, fn) in enumerate(selected, 1):
        try:
            logger.info(f"[{i}/{len(selected)}] {name}...")
            t0 = time.perf_counter()
            checks = fn(settings, seed)
            report.checks.extend(checks)
            if all(c.ok for c in checks):
                passed.append(name)
                logger.info(f"✅ {name} passed in {time.perf_counter() - t0:.1f}s")
            else:
                failed.append(name)
                logger.error(f"❌ {name} failed")
        except Exception as e:
            logger.error(f"❌ {name} raised: {e}", exc_info=True)
            report.checks.append(check_of(name, False, f"{type(e).__name__}: {e}"))
            failed.append(name)

    report.timing = time.perf_counter() - started
    report.data["passed"] = passed
    report.data["failed"] = failed

    logger.info("=" * 60)
    logger.info(f"Acceptance complete: {len(passed)} passed, {len(failed)} failed")
    if failed:
        logger.warning(f"Failed criteria: {', '.join(failed)}")
    logger.info("=" * 60)
    return report
