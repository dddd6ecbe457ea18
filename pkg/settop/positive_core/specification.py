"""
Specification and Oracle Checks

specification_set computes {x ∈ c | φ(x, b_2, ..., b_m, B_1, ...)} twice:
by brute force, and by compiling φ, evaluating A^φ over c, {b_2}, ..., {b_m}
and taking the domain m-1 times. The two must agree.

oracle_equivalence compares compiled terms with brute-force satisfaction
over whole families of formulas and parameters.
"""

import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from settop.hf_universe.objects import HFObject, HFSet, format_hf, hf_set, ktuple, unpair
from settop.positive_core.compiler import compile_formula
from settop.positive_core.formulas import (
    Formula,
    Universe,
    class_params,
    eval_formula,
    format_formula,
    param_index,
)
from settop.positive_core.terms import eval_term

logger = logging.getLogger(__name__)


class ConsistencyFault(RuntimeError):
    """Two computation paths that must agree returned different values."""
    pass


def brute_force_relation(
    phi: Formula,
    sets: Sequence[HFObject],
    classes: Sequence[FrozenSet[HFObject]] = (),
) -> HFSet:
    """{<x_1..x_m> ∈ a_1 × ... × a_m | φ} by enumerating assignments."""
    U = Universe(sets=tuple(sets), classes=tuple(classes))
    names = [f"x{i}" for i in range(1, len(sets) + 1)]
    out = set()
    for values in cartesian(*[sorted(a.members, key=lambda e: e.sort_key) for a in sets]):
        if eval_formula(phi, dict(zip(names, values)), U):
            out.add(ktuple(*values))
    return HFSet(frozenset(out))


def compiled_relation(
    phi: Formula,
    sets: Sequence[HFObject],
    classes: Sequence[FrozenSet[HFObject]] = (),
) -> HFObject:
    return eval_term(compile_formula(phi, len(sets)).instantiate(sets, classes))


def _domain(a: HFObject) -> HFSet:
    return HFSet(frozenset(pair[0] for pair in map(unpair, a.members) if pair is not None))


def specification_set(
    phi: Formula,
    c: HFObject,
    sets: Sequence[HFObject] = (),
    classes: Sequence[FrozenSet[HFObject]] = (),
) -> HFObject:
    """{x ∈ c | φ(x, b_2, ..., b_m)} computed two ways; disagreement raises."""
    U = Universe(sets=(c,) + tuple(sets), classes=tuple(classes))
    env = {f"x{i}": b for i, b in enumerate(sets, start=2)}
    brute = HFSet(frozenset(x for x in c.members if eval_formula(phi, {**env, "x1": x}, U)))

    params = [c] + [hf_set(b) for b in sets]
    value = compiled_relation(phi, params, classes)
    for _ in range(len(sets)):
        value = _domain(value)

    if value != brute:
        raise ConsistencyFault(
            f"specification of {format_formula(phi)} over {format_hf(c)}: "
            f"compiled {format_hf(value)} but brute force {format_hf(brute)}"
        )
    return brute


# ============================================================================
# DISTRIBUTIVITY
# ============================================================================

def distributivity_sides(
    d: Iterable, J: Mapping[object, Iterable[HFObject]]
) -> Tuple[HFSet, HFSet]:
    """
    Left: ⋃_{i∈d} ⋂ J_i. Right: ⋂ over choice functions f ∈ ΠJ_i of ⋃_i f(i).
    """
    index = sorted(d, key=repr)
    families: List[List[HFObject]] = []
    for i in index:
        if i not in J:
            raise ValueError(f"index {i!r} has no family")
        family = sorted(set(J[i]), key=lambda e: e.sort_key)
        if not family:
            raise ValueError(f"family J_{i} is empty")
        families.append(family)

    left = frozenset()
    for family in families:
        meet = family[0].members
        for j in family[1:]:
            meet = meet & j.members
        left = left | meet

    right: Optional[FrozenSet[HFObject]] = None
    for choice in cartesian(*families):
        joined = frozenset()
        for j in choice:
            joined = joined | j.members
        right = joined if right is None else right & joined
    return HFSet(left), HFSet(right or frozenset())


def check_distributivity(d: Iterable, J: Mapping[object, Iterable[HFObject]]) -> bool:
    left, right = distributivity_sides(d, J)
    return left == right


# ============================================================================
# ORACLE EQUIVALENCE
# ============================================================================

@dataclass
class OracleTally:
    formulas: int = 0
    instances: int = 0
    matches: int = 0
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.instances == self.matches


def class_choices(phi: Formula, candidates: Sequence[FrozenSet[HFObject]]) -> List[Tuple[FrozenSet[HFObject], ...]]:
    """Every binding of the class parameters φ uses, drawn from candidates."""
    used = sorted(class_params(phi), key=param_index)
    if not used:
        return [()]
    width = max(param_index(p) for p in used)
    return [tuple(combo) for combo in cartesian(candidates, repeat=width)]


def oracle_equivalence(
    formulas: Iterable[Formula],
    m: int,
    carriers: Sequence[HFObject],
    class_candidates: Sequence[FrozenSet[HFObject]] = (),
    max_mismatches: int = 10,
) -> OracleTally:
    """
    For every formula, every choice of a_1..a_m from carriers and every
    class binding: compiled value equals brute-force A^φ.
    """
    tally = OracleTally()
    for phi in formulas:
        tally.formulas += 1
        template = compile_formula(phi, m)
        for sets in cartesian(carriers, repeat=m):
            for classes in class_choices(phi, class_candidates):
                tally.instances += 1
                compiled = eval_term(template.instantiate(sets, classes))
                expected = brute_force_relation(phi, sets, classes)
                if compiled == expected:
                    tally.matches += 1
                elif len(tally.mismatches) < max_mismatches:
                    tally.mismatches.append(
                        f"{format_formula(phi)} on {[format_hf(a) for a in sets]}: "
                        f"compiled {format_hf(compiled)}, expected {format_hf(expected)}"
                    )
        if tally.formulas % 5000 == 0:
            logger.info(f"Oracle progress: {tally.formulas} formulas, {tally.matches}/{tally.instances} matches")
    return tally
