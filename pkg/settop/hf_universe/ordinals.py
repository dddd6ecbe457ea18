"""
Generalized Zeros and Ordinals

A zero is a set 0 none of whose elements is a superset of 0. Relative to a
zero: A⊕ = A \\ 0, and c ∈_0 b iff b is a set with 0 ⊆ b and c ∈ b⊕.
A 0-ordinal is 0-transitive, 0-pristine, and strictly well-ordered by ∈_0 on
its ⊕-part. With 0 = ∅ these are the von Neumann naturals.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional

import networkx as nx

from settop.hf_universe.objects import EMPTY, Atom, HFError, HFObject, HFSet, is_subset, subsets
from settop.utils.config import check_limit, limit_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Zero:
    value: HFSet

    def __post_init__(self):
        if not isinstance(self.value, HFSet):
            raise HFError(f"a zero must be a set, got {self.value!r}")
        if not is_zero(self.value):
            raise HFError(f"{self.value} is not a zero: an element contains it")

    @property
    def members(self) -> FrozenSet[HFObject]:
        return self.value.members

    def below(self, b: HFObject) -> bool:
        """0 ⊆ b with b a set."""
        return not b.is_atom and self.value.members <= b.members

    def oplus(self, a: HFObject) -> FrozenSet[HFObject]:
        """a⊕ = a \\ 0."""
        return a.members - self.value.members

    def z_members(self, b: HFObject) -> FrozenSet[HFObject]:
        """{c | c ∈_0 b}."""
        return self.oplus(b) if self.below(b) else frozenset()

    def z_member(self, c: HFObject, b: HFObject) -> bool:
        return c in self.z_members(b)

    def __str__(self) -> str:
        return str(self.value)


def atoms_zero(*names: str) -> Zero:
    """The zero {{#x}, {#y}, ...}; defaults to the two atoms x and y."""
    names = names or ("x", "y")
    return Zero(HFSet(frozenset(HFSet(frozenset({Atom(name)})) for name in names)))


def is_zero(x: HFObject, structure=None) -> bool:
    """
    No element of x is a superset of x.

    With a MembershipStructure, x is a node index and the check runs on the
    digraph edges.
    """
    if structure is not None:
        return structure.is_zero_node(x)
    if x.is_atom:
        return False
    return not any(is_subset(x, e) for e in x.members)


EMPTY_ZERO = Zero(EMPTY)


# ============================================================================
# TRANSITIVITY, PRISTINENESS, WELL-FOUNDEDNESS
# ============================================================================

def is_z_transitive(z: Zero, a: HFObject) -> bool:
    """c ∈_0 a for all c ∈_0 b ∈_0 a."""
    top = z.z_members(a)
    return all(c in top for b in top for c in z.z_members(b))


def trcl(z: Zero, a: HFObject) -> HFSet:
    """Least Z-transitive superset of a."""
    if a.is_atom:
        raise HFError(f"trcl needs a set, got atom {a!r}")
    if not z.below(a):
        return a
    result = set(a.members)
    queue = [b for b in result if b not in z.members]
    while queue:
        b = queue.pop()
        for c in z.z_members(b):
            if c not in result:
                result.add(c)
                queue.append(c)
    return HFSet(frozenset(result))


def _b_plus(z: Zero, B: Iterable[HFObject]) -> FrozenSet[HFObject]:
    """B⊕, taken only when the class B contains the material of 0."""
    B = frozenset(B)
    if not z.members <= B:
        return frozenset()
    return B - z.members


def is_pristine(z: Zero, B: Iterable[HFObject], a: HFObject) -> bool:
    """
    a ∈_Z B, or a is a set with Z ⊆ a whose Z-transitive closure has every
    c ∈_Z trcl(a) either a set above Z or in B⊕.
    """
    b_plus = _b_plus(z, B)
    if a in b_plus:
        return True
    if not z.below(a):
        return False
    closure = trcl(z, a)
    return all(z.below(c) or c in b_plus for c in z.z_members(closure))


def z_membership_graph(z: Zero, a: HFObject) -> nx.DiGraph:
    """∈_Z edges c -> b among a and everything ∈_Z-below it."""
    graph = nx.DiGraph()
    graph.add_node(a)
    queue = [a]
    seen = {a}
    while queue:
        b = queue.pop()
        for c in z.z_members(b):
            graph.add_edge(c, b)
            if c not in seen:
                seen.add(c)
                queue.append(c)
    return graph


def is_wellfounded(z: Zero, a: HFObject) -> bool:
    """
    Every class b ∋_Z a has an ∈_Z-minimal member.

    On a finite graph that is the same as having no ∈_Z cycle below a.
    """
    return nx.is_directed_acyclic_graph(z_membership_graph(z, a))


# ============================================================================
# ORDINALS
# ============================================================================

def _strictly_well_ordered(z: Zero, elems: List[HFObject]) -> bool:
    for c in elems:
        if z.z_member(c, c):
            return False
    for i, c in enumerate(elems):
        for d in elems[i + 1:]:
            if z.z_member(c, d) == z.z_member(d, c):
                return False
    for c in elems:
        for d in elems:
            if z.z_member(c, d):
                for e in elems:
                    if z.z_member(d, e) and not z.z_member(c, e):
                        return False
    return True


def is_zero_ordinal(z: Zero, alpha: HFObject) -> bool:
    """0-transitive, 0-pristine, and α⊕ strictly well-ordered by ∈_0."""
    if alpha.is_atom or not z.below(alpha):
        return False
    if not is_z_transitive(z, alpha):
        return False
    extended = HFSet(alpha.members | {alpha})
    if not all(z.below(c) for c in z.z_members(extended)):
        return False
    return _strictly_well_ordered(z, sorted(z.oplus(alpha), key=lambda e: e.sort_key))


def successor(z: Zero, alpha: HFObject) -> HFSet:
    """α ∪ {α}."""
    if not is_zero_ordinal(z, alpha):
        raise HFError(f"{alpha} is not an ordinal over the zero {z}")
    return HFSet(alpha.members | {alpha})


def enumerate_zero_ordinals(
    z: Zero, limit: int, unsafe: bool = False, limits: Optional[Mapping[str, Any]] = None
) -> List[HFSet]:
    """The first `limit` 0-ordinals, 0 first, by iterated successor."""
    check_limit("ordinal limit", limit, limit_value("max_ordinal_limit", limits), unsafe)
    out: List[HFSet] = []
    alpha = z.value
    for _ in range(limit):
        out.append(alpha)
        alpha = successor(z, alpha)
    return out


def relative_hierarchy(z: Zero, b_plus: Iterable[HFObject], level: int) -> List[HFObject]:
    """
    U_0 = B⊕, U_{k+1} = B⊕ ∪ {Z ∪ S | S ⊆ U_k}: every pristine object built
    in at most `level` steps above Z.
    """
    base = frozenset(b_plus)
    current: FrozenSet[HFObject] = base
    for _ in range(level):
        layer = {HFSet(z.members | s.members) for s in subsets(HFSet(current))}
        current = base | layer
    return sorted(current, key=lambda e: e.sort_key)


def relative_level(z: Zero, b_plus: FrozenSet[HFObject], x: HFObject) -> Optional[int]:
    """Least k with x in U_k of relative_hierarchy, None if x is in no level."""
    if x in b_plus:
        return 0
    if not z.below(x):
        return None
    levels = [relative_level(z, b_plus, e) for e in z.oplus(x)]
    if any(lv is None for lv in levels):
        return None
    return 1 + max(levels, default=0)


def ordinals_by_filter(
    z: Zero, level: int, unsafe: bool = False, limits: Optional[Mapping[str, Any]] = None
) -> List[HFObject]:
    """0-ordinals among the pristine objects of bounded level, in ∈_0 order."""
    check_limit("rank", level, limit_value("max_rank", limits), unsafe)
    found = [x for x in relative_hierarchy(z, (), level) if is_zero_ordinal(z, x)]
    return sorted(found, key=lambda x: len(z.oplus(x)))


def ordinal_isomorphism(
    z1: Zero, seq1: List[HFObject], z2: Zero, seq2: List[HFObject]
) -> Optional[Dict[HFObject, HFObject]]:
    """Position-wise map between two ordinal lists if it preserves ∈_0 both ways."""
    if len(seq1) != len(seq2):
        return None
    for i, a in enumerate(seq1):
        for j, b in enumerate(seq1):
            if z1.z_member(a, b) != z2.z_member(seq2[i], seq2[j]):
                return None
    return dict(zip(seq1, seq2))


def ordinal_law_violations(z: Zero, seq: List[HFObject]) -> List[str]:
    """
    Order laws on an initial segment of 0-ordinals listed in ∈_0 order:
    α ∉ α and α = 0 ∪ {β | β ∈_0 α}; ∈_0 agrees with proper inclusion;
    each successor is the next entry; unions of nonempty subfamilies are
    ordinals and least upper bounds.
    """
    problems: List[str] = []
    for i, alpha in enumerate(seq):
        if not is_zero_ordinal(z, alpha):
            problems.append(f"{alpha} is not an ordinal")
        if alpha in alpha.members:
            problems.append(f"{alpha} ∈ {alpha}")
        below = frozenset(b for b in seq if z.z_member(b, alpha))
        if alpha.members != z.members | below:
            problems.append(f"{alpha} ≠ 0 ∪ {{β ∈_0 α}}")
        if frozenset(seq[:i]) != below:
            problems.append(f"{alpha} does not have exactly the earlier ordinals below it")
    for a in seq:
        for b in seq:
            proper = a.members < b.members
            if z.z_member(a, b) != proper:
                problems.append(f"∈_0 and ⊂ disagree on {a}, {b}")
    for alpha, nxt in zip(seq, seq[1:]):
        if successor(z, alpha) != nxt:
            problems.append(f"successor of {alpha} is not {nxt}")
    if len(seq) <= 12:
        for mask in range(1, 1 << len(seq)):
            family = [seq[i] for i in range(len(seq)) if mask >> i & 1]
            joined = HFSet(frozenset().union(*(a.members for a in family)))
            if not is_zero_ordinal(z, joined) or joined != family[-1]:
                problems.append(f"⋃ of {len(family)} ordinals is not their least upper bound")
    return problems
