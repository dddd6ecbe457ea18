"""
Well-Orders from Choice Functions

A choice function on a carrier {0..n-1} picks f(b) ∈ b for every nonempty
b. Starting from the carrier and removing f(b) at each step gives the
approximation chain a ⊋ a\\{f(a)} ⊋ ... ⊋ {last}; ranking points by the
step at which they are picked is a well-order, and f restricted to the chain
is a bijection onto the carrier.

The chains are finite, so limit stages (meets of initial segments) never
occur.

Choice file format (JSON):
    {"carrier": 2, "choice": {"[0]": 0, "[0, 1]": 1, "[1]": 1}}
"""

import json
import logging
import random
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Sequence, Tuple

from settop.finite_topology import PointSet

logger = logging.getLogger(__name__)

MAX_ENUMERATED_CARRIER = 3


class ChoiceFunctionError(ValueError):
    """Choice function not total or picking outside its argument."""
    pass


class OrderError(ValueError):
    """Relation that fails the total order laws, or a malformed chain."""
    pass


# ============================================================================
# CHOICE FUNCTIONS
# ============================================================================

@dataclass(frozen=True)
class ChoiceFunction:
    """choice[b] for every nonempty bit mask b over the carrier."""

    carrier: int
    choice: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if self.carrier < 1:
            raise ChoiceFunctionError("carrier must have at least one point")
        table = dict(self.choice)
        for b in range(1, 1 << self.carrier):
            if b not in table:
                raise ChoiceFunctionError(f"no choice for {PointSet(self.carrier, b)!r}")
            if table[b] not in PointSet(self.carrier, b):
                raise ChoiceFunctionError(f"f({PointSet(self.carrier, b)!r}) = {table[b]} is outside its argument")
        if len(table) != (1 << self.carrier) - 1:
            raise ChoiceFunctionError("choice table has entries outside the carrier")
        object.__setattr__(self, "choice", tuple(sorted(table.items())))

    def __call__(self, b: PointSet) -> int:
        if b.n != self.carrier or not b:
            raise ChoiceFunctionError(f"{b!r} is not a nonempty subset of the carrier")
        return dict(self.choice)[b.bits]

    @classmethod
    def from_rule(cls, carrier: int, rule: Callable[[Tuple[int, ...]], int]) -> "ChoiceFunction":
        """E.g. ChoiceFunction.from_rule(3, min)."""
        return cls(carrier, tuple((b, rule(PointSet(carrier, b).indices())) for b in range(1, 1 << carrier)))

    def to_json(self) -> Dict[str, Any]:
        return {
            "carrier": self.carrier,
            "choice": {json.dumps(list(PointSet(self.carrier, b).indices())): x for b, x in self.choice},
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ChoiceFunction":
        try:
            n = int(data["carrier"])
            entries = [(PointSet.of(n, json.loads(k)).bits, int(v)) for k, v in data["choice"].items()]
        except (KeyError, TypeError, ValueError) as e:
            raise ChoiceFunctionError(f"malformed choice document: {e}")
        return cls(n, tuple(entries))


def random_choice_function(carrier: int, rng: random.Random) -> ChoiceFunction:
    """Seeded uniform pick in every subset, subsets visited in mask order."""
    return ChoiceFunction(
        carrier,
        tuple((b, rng.choice(PointSet(carrier, b).indices())) for b in range(1, 1 << carrier)),
    )


def all_choice_functions(carrier: int) -> Iterator[ChoiceFunction]:
    """Every choice function on a small carrier."""
    if carrier > MAX_ENUMERATED_CARRIER:
        raise ChoiceFunctionError(f"refusing to enumerate choice functions on {carrier} points; sample instead")
    masks = list(range(1, 1 << carrier))
    options = [PointSet(carrier, b).indices() for b in masks]
    for picks in cartesian(*options):
        yield ChoiceFunction(carrier, tuple(zip(masks, picks)))


# ============================================================================
# ORDERS
# ============================================================================

@dataclass(frozen=True)
class FiniteOrder:
    """Elements listed from least to greatest."""

    elements: Tuple[Hashable, ...]

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise OrderError(f"repeated elements in {self.elements}")

    def __len__(self) -> int:
        return len(self.elements)

    def position(self, x: Hashable) -> int:
        return self.elements.index(x)

    def leq(self, x: Hashable, y: Hashable) -> bool:
        return self.position(x) <= self.position(y)


def order_invariants(w: FiniteOrder) -> List[str]:
    """Reflexivity, antisymmetry, transitivity and totality of leq; returns violations."""
    problems = []
    xs = list(w.elements)
    for x in xs:
        if not w.leq(x, x):
            problems.append(f"not reflexive at {x}")
    for x in xs:
        for y in xs:
            if x != y and w.leq(x, y) and w.leq(y, x):
                problems.append(f"not antisymmetric at {x}, {y}")
            if not (w.leq(x, y) or w.leq(y, x)):
                problems.append(f"{x} and {y} are incomparable")
            for z in xs:
                if w.leq(x, y) and w.leq(y, z) and not w.leq(x, z):
                    problems.append(f"not transitive at {x}, {y}, {z}")
    return problems


@dataclass(frozen=True)
class ApproximationChain:
    carrier: int
    stages: Tuple[PointSet, ...]
    picks: Tuple[int, ...]


def approximation_chain(f: ChoiceFunction) -> ApproximationChain:
    """Iterate b -> b \\ {f(b)} from the carrier down to a singleton."""
    stages = []
    picks = []
    b = PointSet.full(f.carrier)
    while b:
        x = f(b)
        stages.append(b)
        picks.append(x)
        b = b - PointSet.of(f.carrier, [x])
    return ApproximationChain(f.carrier, tuple(stages), tuple(picks))


def chain_problems(chain: ApproximationChain, f: ChoiceFunction) -> List[str]:
    """Chain invariants and the bijection of f on the chain onto the carrier."""
    problems = []
    stages = chain.stages
    if not stages or stages[0] != PointSet.full(chain.carrier):
        problems.append("chain does not start at the carrier")
    for prev, nxt in zip(stages, stages[1:]):
        if not (nxt <= prev and nxt != prev):
            problems.append(f"{nxt!r} is not strictly below {prev!r}")
        if nxt != prev - PointSet.of(chain.carrier, [f(prev)]):
            problems.append(f"{nxt!r} is not {prev!r} minus its choice")
    if stages and len(stages[-1]) != 1:
        problems.append(f"chain ends at {stages[-1]!r}, not a singleton")
    picks = [f(b) for b in stages]
    if len(set(picks)) != len(picks):
        problems.append(f"choice is not injective on the chain: {picks}")
    if set(picks) != set(range(chain.carrier)):
        problems.append(f"choice on the chain misses points: {sorted(set(range(chain.carrier)) - set(picks))}")
    return problems


def wellorder_from_choice(f: ChoiceFunction) -> FiniteOrder:
    """x before y iff x is picked at an earlier stage of the chain."""
    chain = approximation_chain(f)
    problems = chain_problems(chain, f)
    if problems:
        raise OrderError("; ".join(problems))
    logger.debug(f"Chain of {len(chain.stages)} stages gives order {chain.picks}")
    return FiniteOrder(chain.picks)


def _canonical(v: Any) -> Tuple:
    key = getattr(v, "sort_key", None)
    return (0, key) if key is not None else (1, v)


def uniformize(R: Iterable[Tuple[Hashable, Hashable]]) -> frozenset:
    """F ⊆ R, functional, dom F = dom R; ties go to the least second component."""
    best: Dict[Hashable, Hashable] = {}
    for x, y in R:
        if x not in best or _canonical(y) < _canonical(best[x]):
            best[x] = y
    return frozenset(best.items())


# ============================================================================
# ORDER ARITHMETIC
# ============================================================================

def order_sum(a: FiniteOrder, b: FiniteOrder) -> FiniteOrder:
    """a followed by b."""
    return FiniteOrder(tuple((0, x) for x in a.elements) + tuple((1, y) for y in b.elements))


def order_product(a: FiniteOrder, b: FiniteOrder) -> FiniteOrder:
    """|b| copies of a: (x, y) < (x', y') iff y < y', or y = y' and x < x'."""
    return FiniteOrder(tuple((x, y) for y in b.elements for x in a.elements))


def order_sup(orders: Sequence[FiniteOrder]) -> FiniteOrder:
    """Least upper bound of finite order types: the longest one."""
    if not orders:
        raise OrderError("sup of no orders")
    return max(orders, key=len)


def order_type_arithmetic(op: str, orders: Sequence[FiniteOrder]) -> FiniteOrder:
    if op == "sum":
        out = orders[0]
        for w in orders[1:]:
            out = order_sum(out, w)
        return out
    if op == "product":
        out = orders[0]
        for w in orders[1:]:
            out = order_product(out, w)
        return out
    if op == "sup":
        return order_sup(orders)
    raise OrderError(f"unknown order operation {op!r}")


def ordinal(n: int) -> FiniteOrder:
    return FiniteOrder(tuple(range(n)))


# ============================================================================
# CHAIN EMBEDDING
# ============================================================================

def chain_embedding(w: FiniteOrder) -> List[PointSet]:
    """x -> (-∞, x] as point sets; elements must be the points 0..n-1."""
    n = len(w)
    if set(w.elements) != set(range(n)):
        raise OrderError("chain embedding needs an order on the points 0..n-1")
    out = []
    segment = PointSet.empty(n)
    for x in w.elements:
        segment = segment | PointSet.of(n, [x])
        out.append(segment)
    for prev, nxt in zip(out, out[1:]):
        if not (prev <= nxt and prev != nxt):
            raise OrderError(f"segments {prev!r} and {nxt!r} do not form a chain")
    return out


def order_from_chain(chain: Sequence[PointSet]) -> FiniteOrder:
    """Order the points by the first segment that contains them."""
    ordered = sorted(chain, key=len)
    elements = []
    seen = None
    for segment in ordered:
        fresh = segment if seen is None else segment - seen
        if len(fresh) != 1 or (seen is not None and not seen <= segment):
            raise OrderError(f"{segment!r} does not add exactly one point to the chain")
        elements.append(fresh.indices()[0])
        seen = segment
    return FiniteOrder(tuple(elements))
