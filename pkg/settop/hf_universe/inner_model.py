"""
Pristine Inner Models

Data: a zero Z, a class of atoms B ⊇ Z, a universe W ⊇ B and a map
Φ: W \\ B -> objects. Derived: W⊕ = W \\ Z, S = W \\ B⊕, T = Φ[S⊕].
An inner class is a set X with Z ⊆ X ⊆ W.

Finitization: W is cut at a rank bound, so constructions that climb one
level (singletons, unions of many sets, exponential classes) can leave it.
Such instances are counted as out-of-bound, never as failures.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional

from settop.finite_topology import UNBOUNDED, KBound
from settop.hf_universe.objects import HFObject, HFSet, format_hf, is_subset
from settop.hf_universe.ordinals import (
    Zero,
    is_pristine,
    is_wellfounded,
    relative_hierarchy,
    relative_level,
)
from settop.hf_universe.structures import MembershipStructure
from settop.report import Check, Verdict
from settop.utils.config import check_limit, limit_value

logger = logging.getLogger(__name__)

MAX_SUBFAMILY_BASE = 16


class InnerModelError(ValueError):
    """Malformed interpretation data or violated construction hypotheses."""
    pass


@dataclass(frozen=True, eq=False)
class InterpretationContext:
    z: Zero
    B: FrozenSet[HFObject]
    W: FrozenSet[HFObject]
    phi: Mapping[HFObject, HFObject]
    rank_bound: int

    @property
    def b_plus(self) -> FrozenSet[HFObject]:
        return self.B - self.z.members

    @property
    def w_plus(self) -> FrozenSet[HFObject]:
        return self.W - self.z.members

    @property
    def s(self) -> FrozenSet[HFObject]:
        return self.W - self.b_plus

    @property
    def s_plus(self) -> FrozenSet[HFObject]:
        return self.s - self.z.members

    @property
    def t(self) -> FrozenSet[HFObject]:
        return frozenset(self.phi[x] for x in self.s_plus if x in self.phi)

    def level(self, x: HFObject) -> Optional[int]:
        return relative_level(self.z, self.b_plus, x)

    def in_bound(self, x: HFObject) -> bool:
        lv = self.level(x)
        return lv is not None and lv <= self.rank_bound

    def is_inner_class(self, x: HFObject) -> bool:
        return self.z.below(x) and x.members <= self.W

    def sorted_t(self) -> List[HFObject]:
        return sorted(self.t, key=lambda e: e.sort_key)

    def structure(self) -> MembershipStructure:
        """Membership digraph of the interpreted universe."""
        return MembershipStructure.from_context(self)


def build_w3(
    z: Zero,
    B: Iterable[HFObject],
    rank_bound: int,
    unsafe: bool = False,
    limits: Optional[Mapping[str, Any]] = None,
) -> InterpretationContext:
    """
    W3⊕: the Z-well-founded Z-B-pristine objects up to `rank_bound` levels
    above Z, with Φ the identity on W \\ B.

    Discreteness of trcl(x)⊕ holds for every finite set, so W1 = W2 = W3 here.
    """
    check_limit("rank", rank_bound, limit_value("max_rank", limits), unsafe)
    B = frozenset(B)
    if not z.members <= B:
        raise InnerModelError(f"B must contain the elements of the zero {z}")
    for b in B:
        if z.below(b):
            raise InnerModelError(f"element {format_hf(b)} of B is a superset of the zero")

    b_plus = B - z.members
    candidates = relative_hierarchy(z, b_plus, rank_bound)
    w_plus = [x for x in candidates if is_wellfounded(z, x) and is_pristine(z, B, x)]
    if len(w_plus) != len(candidates):
        logger.warning(f"{len(candidates) - len(w_plus)} hierarchy objects failed the pristine filter")

    W = frozenset(w_plus) | z.members
    phi = {x: x for x in W - B}
    logger.info(f"Built W3 over zero {z} with |W⊕|={len(w_plus)} at rank bound {rank_bound}")
    return InterpretationContext(z=z, B=B, W=W, phi=phi, rank_bound=rank_bound)


# ============================================================================
# CONDITIONS
# ============================================================================

@dataclass
class ConditionReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def in_bound_failures(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def out_of_bound(self) -> int:
        return sum(c.out_of_bound for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.in_bound_failures == 0

    def by_name(self, prefix: str) -> Check:
        for c in self.checks:
            if c.name.startswith(prefix):
                return c
        raise KeyError(prefix)


def _member_outcome(ctx: InterpretationContext, result: HFObject, allowed: FrozenSet[HFObject]) -> Verdict:
    if result in allowed:
        return Verdict.PASS
    return Verdict.FAIL if ctx.in_bound(result) else Verdict.OUT_OF_BOUND


def _subfamilies(items: List[HFObject], K: KBound):
    if len(items) > MAX_SUBFAMILY_BASE:
        raise InnerModelError(f"{len(items)} classes are too many for exhaustive subfamily checks")
    for r in range(1, len(items) + 1):
        if not K.is_small(r):
            return
        yield from combinations(items, r)


def check_interpretation_conditions(ctx: InterpretationContext, K: KBound = UNBOUNDED) -> ConditionReport:
    """Evaluate conditions (1)-(8) literally over the finite universe."""
    report = ConditionReport()
    z = ctx.z
    T = ctx.t
    t_list = ctx.sorted_t()
    z_or_t = T | {z.value}
    show = format_hf

    pre = Check("precondition: Φ injective on W\\B")
    domain = ctx.W - ctx.B
    missing = [x for x in domain if x not in ctx.phi]
    seen: Dict[HFObject, HFObject] = {}
    for x in sorted(domain, key=lambda e: e.sort_key):
        if x not in ctx.phi:
            continue
        y = ctx.phi[x]
        if y in seen:
            pre.record(Verdict.FAIL, f"Φ({show(seen[y])}) = Φ({show(x)}) = {show(y)}")
        else:
            seen[y] = x
            pre.record(Verdict.PASS)
    for x in missing:
        pre.record(Verdict.FAIL, f"Φ undefined at {show(x)}")
    report.checks.append(pre.settle())

    c1 = Check("(1) nontriviality |W⊕| > 1")
    c1.record(Verdict.PASS if len(ctx.w_plus) > 1 else Verdict.FAIL, f"|W⊕| = {len(ctx.w_plus)}")
    report.checks.append(c1.settle())

    c2 = Check("(2) T are inner classes, B are not")
    for t in t_list:
        c2.record(Verdict.PASS if ctx.is_inner_class(t) else Verdict.FAIL, f"{show(t)} is not an inner class")
    for b in sorted(ctx.B, key=lambda e: e.sort_key):
        c2.record(Verdict.FAIL if ctx.is_inner_class(b) else Verdict.PASS, f"{show(b)} in B is an inner class")
    report.checks.append(c2.settle())

    c3 = Check("(3) Z ∪ {x} ∈ T")
    for x in sorted(ctx.w_plus, key=lambda e: e.sort_key):
        y = HFSet(z.members | {x})
        c3.record(_member_outcome(ctx, y, T), f"Z ∪ {{{show(x)}}} = {show(y)} not in T")
    report.checks.append(c3.settle())

    c4 = Check("(4) intersections of C ⊆ T")
    for family in _subfamilies(t_list, UNBOUNDED):
        meet = family[0].members
        for x in family[1:]:
            meet = meet & x.members
        result = HFSet(meet)
        c4.record(_member_outcome(ctx, result, z_or_t), f"⋂{[show(x) for x in family]} = {show(result)}")
    report.checks.append(c4.settle())

    c5 = Check("(5) binary unions in T")
    for x, y in combinations(t_list, 2):
        result = HFSet(x.members | y.members)
        c5.record(_member_outcome(ctx, result, T), f"{show(x)} ∪ {show(y)} = {show(result)}")
    report.checks.append(c5.settle())

    c6 = Check("(6) discreteness gives K-small x⊕")
    if K.unbounded:
        c6.detail = "K unbounded: every class is K-small"
        report.checks.append(c6.settle(vacuous=True))
    else:
        for x in t_list:
            plus = z.oplus(x)
            if all(HFSet(x.members - {y}) in z_or_t for y in plus):
                c6.record(Verdict.PASS if K.is_small(len(plus)) else Verdict.FAIL,
                          f"{show(x)} has |x⊕| = {len(plus)}")
        report.checks.append(c6.settle())

    c7 = Check("(7) unions of K-small C ⊆ T")
    if K.unbounded:
        c7.detail = "K-smallness side condition vacuous"
    for family in _subfamilies(t_list, K):
        joined = frozenset()
        for x in family:
            joined = joined | x.members
        result = HFSet(joined)
        c7.record(_member_outcome(ctx, result, T), f"⋃{[show(x) for x in family]} = {show(result)}")
    report.checks.append(c7.settle())

    c8 = Check("(8) exponential classes")
    s_plus = sorted(ctx.s_plus, key=lambda e: e.sort_key)
    for a in t_list:
        for b in t_list:
            chosen = {
                x for x in s_plus
                if x in ctx.phi
                and is_subset(ctx.phi[x], a)
                and (ctx.phi[x].members & b.members) != z.members
            }
            result = HFSet(z.members | chosen)
            c8.record(_member_outcome(ctx, result, z_or_t), f"a={show(a)}, b={show(b)} gives {show(result)}")
    report.checks.append(c8.settle())

    logger.info(
        f"Interpretation conditions: {report.in_bound_failures} in-bound failures, "
        f"{report.out_of_bound} out-of-bound instances"
    )
    return report
