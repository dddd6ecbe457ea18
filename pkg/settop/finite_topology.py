"""
Finite Topologies

Formulation: closed sets. A topology on X = {0..n-1} is a family of nonempty
subsets containing X, closed under nonempty intersections and binary unions.
Open sets are complements of closed-or-empty sets.
Storage: every finite topology is determined by its point closures cl({x}),
so PointTopology keeps those and derives the closed family on demand.
Limits: enumeration refuses n above max_points (5 by default); explicit closed
families refuse n > 20.

Usage:
    T = PointTopology.from_family(3, [PointSet.of(3, [0]), PointSet.of(3, [0, 1]), PointSet.full(3)])
    closure(T, PointSet.of(3, [1]))          # {0,1}
    separation_profile(T)                     # t0=True, t1=False, ...
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from settop.utils.config import check_limit, limit_value

logger = logging.getLogger(__name__)

MAX_EXPLICIT_POINTS = 20


class TopologyError(ValueError):
    """Malformed point sets, families or spaces."""
    pass


def _bits_of(indices: Iterable[int]) -> int:
    bits = 0
    for i in indices:
        bits |= 1 << i
    return bits


def _indices(bits: int) -> Tuple[int, ...]:
    out = []
    i = 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


# ============================================================================
# POINT SETS
# ============================================================================

@dataclass(frozen=True)
class PointSet:
    """Subset of the points 0..n-1, stored as a bit mask."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise TopologyError(f"negative point count {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise TopologyError(f"point set {bin(self.bits)} out of range for n={self.n}")

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "PointSet":
        indices = list(indices)
        for i in indices:
            if not 0 <= i < n:
                raise TopologyError(f"point {i} out of range 0..{n - 1}")
        return cls(n, _bits_of(indices))

    @classmethod
    def full(cls, n: int) -> "PointSet":
        return cls(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> "PointSet":
        return cls(n, 0)

    def indices(self) -> Tuple[int, ...]:
        return _indices(self.bits)

    def complement(self) -> "PointSet":
        return PointSet(self.n, ((1 << self.n) - 1) & ~self.bits)

    def issubset(self, other: "PointSet") -> bool:
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other: "PointSet") -> bool:
        return self.bits & other.bits == 0

    def _same_space(self, other: "PointSet") -> None:
        if self.n != other.n:
            raise TopologyError(f"point sets over different spaces ({self.n} vs {other.n})")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._same_space(other)
        return PointSet(self.n, self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._same_space(other)
        return PointSet(self.n, self.bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._same_space(other)
        return PointSet(self.n, self.bits & ~other.bits)

    def __le__(self, other: "PointSet") -> bool:
        return self.issubset(other)

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.n and bool(self.bits >> x & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def sort_key(self) -> Tuple[int, ...]:
        """Lexicographic key on ascending indices."""
        return self.indices()

    def __repr__(self) -> str:
        return "{" + ",".join(str(i) for i in self.indices()) + "}"


def sorted_family(family: Iterable[PointSet]) -> List[PointSet]:
    """Sort point sets lexicographically on their index lists."""
    return sorted(family, key=PointSet.sort_key)


# ============================================================================
# K BOUNDS
# ============================================================================

@dataclass(frozen=True)
class KBound:
    """
    Finite stand-in for a class of cardinals: a family is K-small iff its
    size is below k. k=None means unbounded (everything is K-small).
    """

    k: Optional[int] = None

    def __post_init__(self):
        if self.k is not None and self.k < 1:
            raise TopologyError(f"KBound needs k >= 1, got {self.k}")

    @property
    def unbounded(self) -> bool:
        return self.k is None

    def is_small(self, size: int) -> bool:
        return self.k is None or size < self.k

    @classmethod
    def parse(cls, text: str) -> "KBound":
        if text.strip().lower() in ("unbounded", "inf", "none"):
            return cls(None)
        try:
            return cls(int(text))
        except ValueError:
            raise TopologyError(f"KBound must be a positive integer or 'unbounded', got {text!r}")

    def __str__(self) -> str:
        return "unbounded" if self.k is None else str(self.k)


UNBOUNDED = KBound(None)


# ============================================================================
# TOPOLOGIES
# ============================================================================

@dataclass(frozen=True)
class SeparationProfile:
    t0: bool
    t1: bool
    t2: bool
    regular: bool
    t3: bool
    normal: bool
    t4: bool

    def as_dict(self) -> Dict[str, bool]:
        return {
            "t0": self.t0, "t1": self.t1, "t2": self.t2, "regular": self.regular,
            "t3": self.t3, "normal": self.normal, "t4": self.t4,
        }


@dataclass(frozen=True)
class PointTopology:
    """
    Finite topology keyed by point closures: closures[x] is the bit mask of
    cl({x}). Every closed set is a union of point closures.
    """

    n: int
    closures: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise TopologyError("a space needs at least one point")
        if len(self.closures) != self.n:
            raise TopologyError(f"expected {self.n} point closures, got {len(self.closures)}")
        for x, cx in enumerate(self.closures):
            if not cx >> x & 1 or cx >> self.n:
                raise TopologyError(f"closure of point {x} is malformed")
            for y in _indices(cx):
                if self.closures[y] & ~cx:
                    raise TopologyError(f"closures not transitive at {y} in cl({x})")

    @classmethod
    def from_family(cls, n: int, family: Iterable[PointSet]) -> "PointTopology":
        family = list(family)
        if not is_topology(n, family):
            raise TopologyError(f"family {sorted_family(family)} is not a topology on {n} points")
        full = (1 << n) - 1
        closures = []
        for x in range(n):
            cx = full
            for c in family:
                if c.bits >> x & 1:
                    cx &= c.bits
            closures.append(cx)
        return cls(n, tuple(closures))

    @classmethod
    def discrete(cls, n: int) -> "PointTopology":
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "PointTopology":
        return cls(n, tuple((1 << n) - 1 for _ in range(n)))

    @property
    def full(self) -> PointSet:
        return PointSet.full(self.n)

    @cached_property
    def closed_bits(self) -> FrozenSet[int]:
        if self.n > MAX_EXPLICIT_POINTS:
            raise TopologyError(
                f"refusing to list the closed family of a {self.n}-point space"
            )
        family = set()
        for c in set(self.closures):
            family |= {f | c for f in family}
            family.add(c)
        return frozenset(family)

    @property
    def closed(self) -> FrozenSet[PointSet]:
        return frozenset(PointSet(self.n, b) for b in self.closed_bits)

    @cached_property
    def minimal_opens(self) -> Tuple[int, ...]:
        opens = [0] * self.n
        for y, cy in enumerate(self.closures):
            for x in _indices(cy):
                opens[x] |= 1 << y
        return tuple(opens)

    def point_closure(self, x: int) -> PointSet:
        return PointSet(self.n, self.closures[x])

    def minimal_open(self, x: int) -> PointSet:
        """Smallest open set containing x."""
        return PointSet(self.n, self.minimal_opens[x])

    def _check(self, a: PointSet) -> None:
        if a.n != self.n:
            raise TopologyError(f"point set over {a.n} points used in a {self.n}-point space")

    def is_closed(self, a: PointSet) -> bool:
        """Member of the closed family (nonempty)."""
        self._check(a)
        return bool(a) and all(self.closures[x] & ~a.bits == 0 for x in a)

    def is_t_closed(self, a: PointSet) -> bool:
        """Empty or closed."""
        return not a or self.is_closed(a)

    def is_open(self, a: PointSet) -> bool:
        return self.is_t_closed(a.complement())

    def family_key(self) -> int:
        """Characteristic bit pattern of the closed family over the subset masks."""
        return sum(1 << (b - 1) for b in self.closed_bits)

    def __repr__(self) -> str:
        return f"PointTopology(n={self.n}, closed={sorted_family(self.closed)})"


# ============================================================================
# OPERATIONS
# ============================================================================

def _check_family(n: int, family: Iterable[PointSet]) -> List[PointSet]:
    family = list(family)
    for a in family:
        if a.n != n:
            raise TopologyError(f"point set {a!r} is over {a.n} points, expected {n}")
    return family


def is_topology(n: int, family: Iterable[PointSet]) -> bool:
    """
    Check the three closure conditions: X is closed, nonempty intersections
    stay in the family, binary unions stay in the family. Empty members fail.
    """
    family = _check_family(n, family)
    bits = {a.bits for a in family}
    if 0 in bits or (1 << n) - 1 not in bits:
        return False
    # pairwise closure gives every finite subfamily by induction
    for a, b in combinations(bits, 2):
        if a | b not in bits:
            return False
        meet = a & b
        if meet and meet not in bits:
            return False
    return True


def closure(T: PointTopology, A: PointSet) -> PointSet:
    """Least T-closed superset of A; empty for empty A."""
    T._check(A)
    bits = 0
    for x in A:
        bits |= T.closures[x]
    return PointSet(T.n, bits)


def interior(T: PointTopology, A: PointSet) -> PointSet:
    """Largest open subset of A."""
    return closure(T, A.complement()).complement()


def separation_profile(T: PointTopology) -> SeparationProfile:
    """
    Separation flags from point closures and minimal open neighbourhoods.

    In a finite space the minimal open set around a closed set A is the union
    of the minimal opens of its points, and every closed set containing x
    contains cl({x}), so each axiom reduces to a quantification over points.
    """
    n = T.n
    cl = T.closures
    op = T.minimal_opens
    pts = range(n)

    t0 = len(set(cl)) == n
    t1 = all(cl[x] == 1 << x for x in pts)
    t2 = all(op[x] & op[y] == 0 for x in pts for y in pts if x != y)
    regular = all(
        op[x] & op[a] == 0 for x in pts for a in pts if not cl[a] >> x & 1
    )
    normal = all(
        op[a] & op[b] == 0 for a in pts for b in pts if cl[a] & cl[b] == 0
    )
    return SeparationProfile(
        t0=t0, t1=t1, t2=t2,
        regular=regular, t3=regular and t1,
        normal=normal, t4=normal and t1,
    )


def brute_force_separation(T: PointTopology) -> SeparationProfile:
    """Separation flags by direct quantification over closed and open sets."""
    n = T.n
    full = (1 << n) - 1
    closed = sorted(T.closed_bits)
    opens = [full & ~c for c in closed] + [full]
    pts = range(n)

    def separated(a: int, b: int) -> bool:
        return any(
            u & a == a and v & b == b and u & v == 0 for u in opens for v in opens
        )

    t0 = all(
        any((u >> x & 1) != (u >> y & 1) for u in opens)
        for x in pts for y in pts if x < y
    )
    t1 = all(T.is_closed(PointSet(n, 1 << x)) for x in pts)
    t2 = all(separated(1 << x, 1 << y) for x in pts for y in pts if x != y)
    regular = all(separated(a, 1 << x) for a in closed for x in pts if not a >> x & 1)
    normal = all(separated(a, b) for a in closed for b in closed if a & b == 0)
    return SeparationProfile(
        t0=t0, t1=t1, t2=t2,
        regular=regular, t3=regular and t1,
        normal=normal, t4=normal and t1,
    )


def is_discrete_subset(T: PointTopology, A: PointSet) -> bool:
    """
    |A| <= 1, or every x in A has a closed b with A ⊆ b ∪ {x} and x ∉ b.
    The least candidate b is cl(A \\ {x}).
    """
    T._check(A)
    if len(A) <= 1:
        return True
    for x in A:
        rest = PointSet(T.n, A.bits & ~(1 << x))
        if x in closure(T, rest):
            return False
    return True


def is_relatively_discrete(T: PointTopology, A: PointSet) -> bool:
    """Every nonempty subset of A is closed relative to A."""
    T._check(A)
    members = A.indices()
    for r in range(1, len(members) + 1):
        for sub in combinations(members, r):
            s = PointSet.of(T.n, sub)
            if closure(T, s) & A != s:
                return False
    return True


def find_large_cocover(T: PointTopology, K: KBound) -> Optional[List[PointSet]]:
    """
    Search for a minimal cocover that is not K-small, deepening over its size.

    A minimal cocover of size s picks a distinct point outside each member,
    so s never exceeds n.
    """
    if K.unbounded:
        return None
    closed = sorted(T.closed_bits)
    full = (1 << T.n) - 1

    def minimal(members: List[int]) -> bool:
        for i in range(len(members)):
            meet = full
            for j, m in enumerate(members):
                if j != i:
                    meet &= m
            if meet == 0:
                return False
        return True

    def search(start: int, chosen: List[int], meet: int, size: int) -> Optional[List[int]]:
        if len(chosen) == size:
            return list(chosen) if meet == 0 and minimal(chosen) else None
        for i in range(start, len(closed)):
            nxt = meet & closed[i]
            if nxt == 0 and len(chosen) + 1 < size:
                continue
            chosen.append(closed[i])
            found = search(i + 1, chosen, nxt, size)
            chosen.pop()
            if found:
                return found
        return None

    for size in range(K.k, T.n + 1):
        found = search(0, [], full, size)
        if found:
            logger.debug(f"Cocover of size {size} without a K-small subcocover: {found}")
            return [PointSet(T.n, b) for b in found]
    return None


def is_k_compact(T: PointTopology, K: KBound) -> bool:
    """Every cocover has a K-small subcocover."""
    return find_large_cocover(T, K) is None


def generate_topology(n: int, subbase: Iterable[PointSet], K: KBound = UNBOUNDED) -> PointTopology:
    """
    Smallest topology containing the subbase and X.

    The closure of a point is the meet of the subbase members containing it.
    Binary unions are required of every topology, so K only matters through
    is_k_compact; any KBound yields the same family here.
    """
    subbase = _check_family(n, subbase)
    closures = [(1 << n) - 1] * n
    for s in subbase:
        if not s:
            raise TopologyError("subbase members must be nonempty")
        for x in s:
            closures[x] &= s.bits
    logger.debug(f"Generated topology on {n} points from {len(subbase)} subbase sets (K={K})")
    return PointTopology(n, tuple(closures))


def base_property(T: PointTopology, subbase: Iterable[PointSet], K: KBound = UNBOUNDED) -> bool:
    """
    Every closed set is an intersection of K-small unions of members of
    subbase ∪ {X}.
    """
    pool = sorted({s.bits for s in _check_family(T.n, subbase)} | {(1 << T.n) - 1})
    unions = set()
    for r in range(1, len(pool) + 1):
        if not K.is_small(r):
            break
        for combo in combinations(pool, r):
            u = 0
            for s in combo:
                u |= s
            unions.add(u)
    for c in T.closed_bits:
        meet = (1 << T.n) - 1
        for u in unions:
            if u & c == c:
                meet &= u
        if meet != c:
            return False
    return True


def enumerate_topologies(
    n: int, unsafe: bool = False, limits: Optional[Mapping[str, Any]] = None
) -> Iterator[PointTopology]:
    """
    Every topology on n points exactly once, streamed in lexicographic order
    of the point-closure tuple. The size guard runs before the first item.
    """
    if n < 1:
        raise TopologyError("enumeration needs n >= 1")
    check_limit("points", n, limit_value("max_points", limits), unsafe)
    return _closure_assignments(n)


def _closure_assignments(n: int) -> Iterator[PointTopology]:
    """
    Builds the point-closure tuple point by point, keeping each new closure
    consistent with the earlier ones (y ∈ cl(x) forces cl(y) ⊆ cl(x)).
    """
    chosen: List[int] = []

    def consistent(x: int, cx: int) -> bool:
        for y, cy in enumerate(chosen):
            if cx >> y & 1 and cy & ~cx:
                return False
            if cy >> x & 1 and cx & ~cy:
                return False
        return True

    def extend(x: int) -> Iterator[PointTopology]:
        if x == n:
            yield PointTopology(n, tuple(chosen))
            return
        for cx in range(1 << n):
            if cx >> x & 1 and consistent(x, cx):
                chosen.append(cx)
                yield from extend(x + 1)
                chosen.pop()

    count = 0
    for T in extend(0):
        count += 1
        yield T
    logger.debug(f"Enumerated {count} topologies on {n} points")


# ============================================================================
# MAPS AND SUBSPACES
# ============================================================================

def subspace(T: PointTopology, A: PointSet) -> Tuple[PointTopology, Tuple[int, ...]]:
    """
    Relative topology {c ∩ A} re-indexed over A.

    Returns:
        (topology over 0..|A|-1, tuple mapping new index -> old point)
    """
    T._check(A)
    points = A.indices()
    if not points:
        raise TopologyError("subspace of the empty set")
    position = {p: i for i, p in enumerate(points)}
    closures = []
    for p in points:
        rel = T.closures[p] & A.bits
        closures.append(_bits_of(position[q] for q in _indices(rel)))
    return PointTopology(len(points), tuple(closures)), points


def _check_map(f: Sequence[int], X: PointTopology, Y: PointTopology) -> None:
    if len(f) != X.n:
        raise TopologyError(f"map table has {len(f)} entries for a {X.n}-point domain")
    for v in f:
        if not 0 <= v < Y.n:
            raise TopologyError(f"map value {v} out of range 0..{Y.n - 1}")


def image(f: Sequence[int], a: PointSet, Y: PointTopology) -> PointSet:
    return PointSet(Y.n, _bits_of(f[x] for x in a))


def preimage(f: Sequence[int], b: PointSet, X: PointTopology) -> PointSet:
    return PointSet(X.n, _bits_of(x for x in range(X.n) if f[x] in b))


def is_continuous(f: Sequence[int], X: PointTopology, Y: PointTopology) -> bool:
    """Preimages of closed sets are closed or empty; checked as f[cl x] ⊆ cl f(x)."""
    _check_map(f, X, Y)
    for x in range(X.n):
        if image(f, X.point_closure(x), Y).bits & ~Y.closures[f[x]]:
            return False
    return True


def is_homeomorphism(f: Sequence[int], X: PointTopology, Y: PointTopology) -> bool:
    _check_map(f, X, Y)
    if X.n != Y.n or len(set(f)) != X.n:
        return False
    inverse = [0] * Y.n
    for x, y in enumerate(f):
        inverse[y] = x
    return is_continuous(f, X, Y) and is_continuous(inverse, Y, X)


# ============================================================================
# JSON
# ============================================================================

def space_to_json(T: PointTopology) -> Dict[str, Any]:
    return {
        "points": T.n,
        "closed": [list(c.indices()) for c in sorted_family(T.closed)],
    }


def space_from_json(data: Dict[str, Any]) -> PointTopology:
    try:
        n = int(data["points"])
        family = [PointSet.of(n, members) for members in data["closed"]]
    except (KeyError, TypeError) as e:
        raise TopologyError(f"malformed space document: {e}")
    return PointTopology.from_family(n, family)
