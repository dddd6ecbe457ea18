"""
Exponential Spaces

Exp_K(X): the points are the nonempty closed sets of X, the closed sets are
generated by the subbase {□a ∩ ◊b | a, b closed} with
    □a = {c closed | c ⊆ a}     ◊b = {c closed | c ∩ b ≠ ∅}
Hyperpoints are indexed in lexicographic order of their closed sets, and the
hyperspace topology is an ordinary PointTopology over those indices, so
Exp(Exp(X)) is built with the same code.

Every closed set of a finite space is compact, so Exp and the compact
exponential coincide here.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from settop.finite_topology import (
    UNBOUNDED,
    KBound,
    PointSet,
    PointTopology,
    TopologyError,
    generate_topology,
    image,
    is_continuous,
    separation_profile,
    sorted_family,
    space_from_json,
    space_to_json,
)
from settop.utils.config import check_limit, limit_value

logger = logging.getLogger(__name__)


class HyperspaceError(ValueError):
    """Hyperspace construction refused or precondition violated."""
    pass


class NonClosedImageError(HyperspaceError):
    """A continuous map sent a closed set to a non-closed set."""
    pass


@dataclass(frozen=True)
class HyperPoint:
    closed: PointSet

    def __repr__(self) -> str:
        return repr(self.closed)


@dataclass(frozen=True)
class HyperSpace:
    base: PointTopology
    points: Tuple[HyperPoint, ...]
    topology: PointTopology

    @cached_property
    def index(self) -> Dict[PointSet, int]:
        return {p.closed: i for i, p in enumerate(self.points)}

    def index_of(self, a: PointSet) -> int:
        try:
            return self.index[a]
        except KeyError:
            raise HyperspaceError(f"{a!r} is not a nonempty closed set of the base")

    def as_points(self, family) -> PointSet:
        """Hyperpoint family -> point set of the hyperspace."""
        return PointSet.of(len(self.points), (self.index_of(h.closed) for h in family))


def _hyperpoints(base: PointTopology) -> Tuple[HyperPoint, ...]:
    return tuple(HyperPoint(c) for c in sorted_family(base.closed))


def box(base: PointTopology, a: PointSet) -> FrozenSet[HyperPoint]:
    """Closed subsets of a."""
    base._check(a)
    return frozenset(HyperPoint(c) for c in base.closed if c <= a)


def diamond(base: PointTopology, a: PointSet) -> FrozenSet[HyperPoint]:
    """Closed sets meeting a."""
    base._check(a)
    return frozenset(HyperPoint(c) for c in base.closed if not c.isdisjoint(a))


def exp_space(base: PointTopology, K: KBound = UNBOUNDED) -> HyperSpace:
    """Exp_K(base) generated from the □a ∩ ◊b subbase; empty members are dropped."""
    points = _hyperpoints(base)
    m = len(points)
    closed = [p.closed.bits for p in points]

    # bit masks over hyperpoint indices
    box_mask = {a: sum(1 << i for i, c in enumerate(closed) if c & ~a == 0) for a in closed}
    diamond_mask = {b: sum(1 << i for i, c in enumerate(closed) if c & b) for b in closed}

    subbase = set()
    for a in closed:
        for b in closed:
            member = box_mask[a] & diamond_mask[b]
            if member:
                subbase.add(member)

    topology = generate_topology(m, [PointSet(m, s) for s in sorted(subbase)], K)
    logger.debug(f"Exp of a {base.n}-point space: {m} hyperpoints, {len(subbase)} subbase sets")
    return HyperSpace(base=base, points=points, topology=topology)


def double_exp_space(
    base: PointTopology,
    K: KBound = UNBOUNDED,
    unsafe: bool = False,
    limits: Optional[Mapping[str, Any]] = None,
) -> Tuple[HyperSpace, HyperSpace]:
    """(Exp(X), Exp(Exp(X))), refused above the closed-set guard."""
    check_limit("closed sets", len(base.closed_bits), limit_value("max_double_exp_closed", limits), unsafe)
    first = exp_space(base, K)
    return first, exp_space(first.topology, K)


def exp_map(f: Sequence[int], X: PointTopology, Y: PointTopology, a: HyperPoint) -> HyperPoint:
    """f[a] for a continuous f: X -> Y."""
    if not is_continuous(f, X, Y):
        raise HyperspaceError(f"map {list(f)} is not continuous")
    if not X.is_closed(a.closed):
        raise HyperspaceError(f"{a!r} is not a hyperpoint of the domain")
    b = image(f, a.closed, Y)
    if not Y.is_closed(b):
        raise NonClosedImageError(f"image {b!r} of {a!r} under {list(f)} is not closed")
    return HyperPoint(b)


def induced_map(f: Sequence[int], source: HyperSpace, target: HyperSpace) -> Tuple[int, ...]:
    """Exp(f) as a table over hyperpoint indices."""
    return tuple(
        target.index_of(exp_map(f, source.base, target.base, p).closed) for p in source.points
    )


def box_diamond_identities(base: PointTopology) -> List[str]:
    """
    Check □a = □a ∩ ◊a, ◊(a ∪ b) = ◊a ∪ ◊b and □(a ∩ b) = □a ∩ □b over
    all closed a, b. Returns descriptions of failing instances.
    """
    failures = []
    closed = sorted_family(base.closed)
    for a in closed:
        if box(base, a) != box(base, a) & diamond(base, a):
            failures.append(f"□{a!r} ≠ □{a!r} ∩ ◊{a!r}")
        for b in closed:
            if diamond(base, a | b) != diamond(base, a) | diamond(base, b):
                failures.append(f"◊({a!r} ∪ {b!r}) ≠ ◊{a!r} ∪ ◊{b!r}")
            if box(base, a & b) != box(base, a) & box(base, b):
                failures.append(f"□({a!r} ∩ {b!r}) ≠ □{a!r} ∩ □{b!r}")
    return failures


# ============================================================================
# SEPARATION TRANSFER
# ============================================================================

def separation_transfer(base: PointTopology, K: KBound = UNBOUNDED) -> Dict[str, bool]:
    """
    The three transfer statements between a space and its exponential.
    They are claimed for T0 bases; callers decide what to do with others.
    """
    below = separation_profile(base)
    above = separation_profile(exp_space(base, K).topology)
    return {
        "t1 ⇒ exp t1": (not below.t1) or above.t1,
        "t3 ⇔ exp t2": below.t3 == above.t2,
        "t4 ⇔ exp t3": below.t4 == above.t3,
    }


# ============================================================================
# KURATOWSKI SQUARE
# ============================================================================

def _bounded_box(space: PointTopology, a: PointSet, size: int) -> int:
    """Bit mask (over the hyperpoints of `space`) of closed c ⊆ a with |c| <= size."""
    points = sorted_family(space.closed)
    return sum(1 << i for i, c in enumerate(points) if c <= a and len(c) <= size)


def kuratowski_check(
    base: PointTopology, a: PointSet, unsafe: bool = False, limits: Optional[Mapping[str, Any]] = None
) -> bool:
    """
    Encode every pair <x, y> = {{x}, {x, y}} with x, y in a as a point of
    Exp(Exp(base)) and check that a² lies inside
        s = □≤2 □≤2 a ∩ ◊ □≤1 a
    and is closed there.
    """
    if not separation_profile(base).t2:
        raise HyperspaceError("Kuratowski containment needs a Hausdorff base")
    base._check(a)
    if not a:
        return True
    if not base.is_closed(a):
        raise HyperspaceError(f"{a!r} is not closed")

    first, second = double_exp_space(base, UNBOUNDED, unsafe, limits)
    h1 = first.topology
    h2 = second.topology

    def single(x: int) -> int:
        return first.index_of(PointSet.of(base.n, [x]))

    square = set()
    for x in a:
        for y in a:
            pair = PointSet.of(h1.n, {single(x), first.index_of(PointSet.of(base.n, {x, y}))})
            square.add(second.index_of(pair))
    square_set = PointSet.of(h2.n, square)

    a1 = PointSet(h1.n, _bounded_box(base, a, 2))
    a0 = PointSet(h1.n, _bounded_box(base, a, 1))
    inner = PointSet(h2.n, _bounded_box(h1, a1, 2))
    meets = PointSet.of(h2.n, (i for i, p in enumerate(second.points) if not p.closed.isdisjoint(a0)))
    s = inner & meets

    inside = square_set <= s
    closed = h2.is_closed(square_set)
    logger.debug(f"Kuratowski square of {a!r}: {len(square)} pairs, inside={inside}, closed={closed}")
    return inside and closed


# ============================================================================
# JSON
# ============================================================================

def hyperspace_to_json(H: HyperSpace) -> Dict[str, Any]:
    return {
        "base": space_to_json(H.base),
        "points": [list(p.closed.indices()) for p in H.points],
        "topology": space_to_json(H.topology),
    }


def map_to_json(f: Sequence[int], X: PointTopology, Y: PointTopology) -> Dict[str, Any]:
    return {"from": X.n, "to": Y.n, "table": list(f)}


def map_from_json(data: Dict[str, Any]) -> Tuple[int, int, Tuple[int, ...]]:
    """Returns (domain size, codomain size, table)."""
    try:
        n, m = int(data["from"]), int(data["to"])
        table = tuple(int(v) for v in data["table"])
    except (KeyError, TypeError, ValueError) as e:
        raise TopologyError(f"malformed map document: {e}")
    if len(table) != n or any(not 0 <= v < m for v in table):
        raise TopologyError(f"map table {list(table)} does not fit {n} -> {m}")
    return n, m, table


def load_space(data: Dict[str, Any]) -> PointTopology:
    """A space document, or the base of a hyperspace document."""
    return space_from_json(data["base"] if "base" in data else data)
