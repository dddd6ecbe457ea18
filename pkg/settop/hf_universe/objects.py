"""
Hereditarily Finite Objects

Values: Atom(name) and HFSet(elements). Both are frozen, so extensional
equality is structural equality and canonical form is automatic.
Order: atoms before sets, atoms by name, sets by size then by their sorted
children (length-lexicographic).
Text format: atoms `#name`, sets `{e1, e2}` in canonical order, `{}` or `∅`
for the empty set, `<a, b>` for the Kuratowski pair {{a}, {a, b}}.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from settop.utils.config import check_limit, limit_value

logger = logging.getLogger(__name__)


class HFError(ValueError):
    """Malformed hereditarily finite object or description."""
    pass


class HFSyntaxError(HFError):
    """Parse error in the HF text format."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CyclicDescriptionError(HFError):
    """A description refers back to itself; HF objects are well-founded."""
    pass


class HFObject:
    """Common base of atoms and sets."""

    @property
    def is_atom(self) -> bool:
        return isinstance(self, Atom)

    @property
    def members(self) -> FrozenSet["HFObject"]:
        """Elements; atoms have none."""
        return frozenset()

    def __lt__(self, other: "HFObject") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return format_hf(self)


@dataclass(frozen=True, eq=True)
class Atom(HFObject):
    name: str

    def __post_init__(self):
        if not self.name or not all(ch.isalnum() or ch == "_" for ch in self.name):
            raise HFError(f"invalid atom name {self.name!r}")

    @cached_property
    def sort_key(self) -> Tuple:
        return (0, self.name)

    @property
    def rank(self) -> int:
        return 0

    def __repr__(self) -> str:
        return f"#{self.name}"


@dataclass(frozen=True, eq=True)
class HFSet(HFObject):
    elements: FrozenSet[HFObject] = frozenset()

    def __post_init__(self):
        if not isinstance(self.elements, frozenset):
            object.__setattr__(self, "elements", frozenset(self.elements))
        for e in self.elements:
            if not isinstance(e, HFObject):
                raise HFError(f"set element {e!r} is not an HF object")

    @property
    def members(self) -> FrozenSet[HFObject]:
        return self.elements

    @cached_property
    def sort_key(self) -> Tuple:
        return (1, len(self.elements), tuple(sorted(e.sort_key for e in self.elements)))

    @cached_property
    def rank(self) -> int:
        """Least r with the set in U_r: the empty set has rank 1."""
        return 1 + max((e.rank for e in self.elements), default=0)

    def sorted_elements(self) -> List[HFObject]:
        return sorted(self.elements, key=lambda e: e.sort_key)

    def __contains__(self, x: HFObject) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(self.sorted_elements())

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return format_hf(self)


EMPTY = HFSet(frozenset())


# ============================================================================
# CONSTRUCTORS AND SET ALGEBRA
# ============================================================================

def hf_set(*elements: HFObject) -> HFSet:
    return HFSet(frozenset(elements))


def atom(name: str) -> Atom:
    return Atom(name)


def members(x: HFObject) -> FrozenSet[HFObject]:
    return x.members


def is_subset(a: HFObject, b: HFObject) -> bool:
    """a ⊆ b for sets; atoms are not classes and take part in no inclusion."""
    if a.is_atom or b.is_atom:
        return False
    return a.members <= b.members


def union(*xs: HFObject) -> HFSet:
    out = frozenset()
    for x in xs:
        out |= x.members
    return HFSet(out)


def big_union(x: HFObject) -> HFSet:
    out = frozenset()
    for e in x.members:
        out |= e.members
    return HFSet(out)


def intersection(a: HFObject, b: HFObject) -> HFSet:
    return HFSet(a.members & b.members)


def kpair(x: HFObject, y: HFObject) -> HFSet:
    """Kuratowski pair {{x}, {x, y}}."""
    return hf_set(hf_set(x), hf_set(x, y))


def ktuple(*xs: HFObject) -> HFObject:
    """Left-nested tuple <<x1, x2>, x3>; a 1-tuple is the object itself."""
    if not xs:
        raise HFError("empty tuple")
    out = xs[0]
    for x in xs[1:]:
        out = kpair(out, x)
    return out


def unpair(p: HFObject) -> Optional[Tuple[HFObject, HFObject]]:
    """Components of a Kuratowski pair, or None if p is not pair-shaped."""
    if p.is_atom:
        return None
    parts = list(p.members)
    if any(e.is_atom for e in parts):
        return None
    if len(parts) == 1:
        only = parts[0].members
        if len(only) == 1:
            (x,) = only
            return x, x
        return None
    if len(parts) == 2:
        small, big = sorted(parts, key=lambda e: len(e.members))
        if len(small.members) != 1 or len(big.members) != 2:
            return None
        (x,) = small.members
        if x not in big.members:
            return None
        (y,) = big.members - {x}
        return x, y
    return None


def untuple(p: HFObject, arity: int) -> Optional[Tuple[HFObject, ...]]:
    """Components of a left-nested tuple of the given arity."""
    if arity == 1:
        return (p,)
    pair = unpair(p)
    if pair is None:
        return None
    head = untuple(pair[0], arity - 1)
    if head is None:
        return None
    return head + (pair[1],)


def product(a: HFObject, b: HFObject) -> HFSet:
    return HFSet(frozenset(kpair(x, y) for x in a.members for y in b.members))


def subsets(x: HFObject) -> List[HFSet]:
    """All subsets of x, in canonical order."""
    elems = sorted(x.members, key=lambda e: e.sort_key)
    out = []
    for r in range(len(elems) + 1):
        for combo in combinations(elems, r):
            out.append(HFSet(frozenset(combo)))
    return sorted(out, key=lambda s: s.sort_key)


def cumulative_hierarchy(r: int, unsafe: bool = False, limits: Optional[Mapping[str, Any]] = None) -> List[HFSet]:
    """
    U_r with U_0 = ∅ and U_{k+1} = □U_k ∪ {∅} (every subset of U_k).

    Returns:
        Elements of U_r in canonical order.
    """
    check_limit("rank", r, limit_value("max_rank", limits), unsafe)
    level: FrozenSet[HFObject] = frozenset()
    for _ in range(r):
        level = frozenset(subsets(HFSet(level)))
    return sorted(level, key=lambda e: e.sort_key)


# ============================================================================
# TEXT FORMAT
# ============================================================================

def format_hf(x: HFObject, pair_sugar: bool = False) -> str:
    """Canonical text; with pair_sugar, pair-shaped sets print as <a, b>."""
    if x.is_atom:
        return f"#{x.name}"
    if pair_sugar:
        pair = unpair(x)
        if pair is not None:
            return f"<{format_hf(pair[0], True)}, {format_hf(pair[1], True)}>"
    return "{" + ", ".join(format_hf(e, pair_sugar) for e in x.sorted_elements()) + "}"


class _HFParser:
    """Recursive descent over the HF text format."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch: str) -> None:
        if self._peek() != ch:
            found = self._peek() or "end of input"
            raise HFSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def parse(self) -> HFObject:
        obj = self._value()
        if self._peek():
            raise HFSyntaxError(f"unexpected {self._peek()!r}", self.pos)
        return obj

    def _value(self) -> HFObject:
        ch = self._peek()
        if ch == "#":
            self.pos += 1
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            if start == self.pos:
                raise HFSyntaxError("empty atom name", start)
            return Atom(self.text[start:self.pos])
        if ch == "∅":
            self.pos += 1
            return EMPTY
        if ch == "{":
            self.pos += 1
            elems = []
            if self._peek() == "}":
                self.pos += 1
                return EMPTY
            while True:
                elems.append(self._value())
                if self._peek() == ",":
                    self.pos += 1
                    continue
                self._expect("}")
                return HFSet(frozenset(elems))
        if ch == "<":
            self.pos += 1
            first = self._value()
            self._expect(",")
            second = self._value()
            self._expect(">")
            return kpair(first, second)
        raise HFSyntaxError(f"unexpected {ch or 'end of input'!r}", self.pos)


def parse_hf(text: str) -> HFObject:
    return _HFParser(text).parse()


# ============================================================================
# CANONICALIZATION
# ============================================================================

def canonicalize(raw: Any) -> HFObject:
    """
    Canonical HF object from a description.

    Accepts an HFObject, HF text, nested Python collections (strings inside
    them are HF text, e.g. "#x" or "{}"), or a graph description
    {"root": key, "nodes": {key: [child keys] | "#atom"}}. Cycles are
    rejected with CyclicDescriptionError.
    """
    if isinstance(raw, Mapping) and "nodes" in raw:
        return _canonicalize_graph(raw)
    return _canonicalize_nested(raw, set())


def _canonicalize_nested(raw: Any, active: set) -> HFObject:
    if isinstance(raw, HFObject):
        return raw
    if isinstance(raw, str):
        return parse_hf(raw)
    if isinstance(raw, (list, tuple, set, frozenset)):
        if id(raw) in active:
            raise CyclicDescriptionError("description contains itself")
        active.add(id(raw))
        try:
            return HFSet(frozenset(_canonicalize_nested(e, active) for e in raw))
        finally:
            active.discard(id(raw))
    raise HFError(f"cannot read {type(raw).__name__} as an HF object")


def _canonicalize_graph(raw: Mapping) -> HFObject:
    nodes: Mapping = raw["nodes"]
    root = raw.get("root")
    if root is None or root not in nodes:
        raise HFError(f"graph description root {root!r} is not a node")
    done: Dict[Any, HFObject] = {}
    active: set = set()

    def build(key: Any) -> HFObject:
        if key in done:
            return done[key]
        if key in active:
            raise CyclicDescriptionError(f"node {key!r} reaches itself")
        if key not in nodes:
            raise HFError(f"unknown node {key!r}")
        spec = nodes[key]
        if isinstance(spec, str):
            obj = parse_hf(spec)
        else:
            active.add(key)
            obj = HFSet(frozenset(build(k) for k in spec))
            active.discard(key)
        done[key] = obj
        return obj

    return build(root)
