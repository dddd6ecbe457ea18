"""
Combinator Terms

Closed terms over a finite algebra of set operations. Primitive
constructors: Lift, BigUnion, Pair, Product, DeltaCap, ECap, Perm312,
Perm231, ForallSelector. Derived constructors (Product2, Domain, Inverse,
Intersect, UnionOf) evaluate directly and can be lowered to primitives with
expand_derived.

Tuples are left-nested Kuratowski pairs, so a triple <x, y, z> is
<<x, y>, z>. Members of the wrong shape contribute nothing.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from settop.hf_universe.objects import (
    HFObject,
    HFSet,
    big_union,
    hf_set,
    kpair,
    product,
    unpair,
)

logger = logging.getLogger(__name__)


class Term:
    """Base of all combinator terms."""

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Lift(Term):
    value: HFObject


@dataclass(frozen=True)
class BigUnion(Term):
    arg: Term


@dataclass(frozen=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Product(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class DeltaCap(Term):
    arg: Term


@dataclass(frozen=True)
class ECap(Term):
    arg: Term


@dataclass(frozen=True)
class ForallSelector(Term):
    """{<x, y> ∈ base | ∀z ∈ y: <x, y, z> ∈ relation}"""

    relation: Term
    base: Term


@dataclass(frozen=True)
class Perm312(Term):
    """{<y, x, z> | <x, y, z> ∈ a}"""

    arg: Term


@dataclass(frozen=True)
class Perm231(Term):
    """{<z, x, y> | <x, y, z> ∈ a}"""

    arg: Term


@dataclass(frozen=True)
class Domain(Term):
    arg: Term


@dataclass(frozen=True)
class Inverse(Term):
    arg: Term


@dataclass(frozen=True)
class Product2(Term):
    """{<p, u, v> | p ∈ a, <u, v> ∈ b}"""

    left: Term
    right: Term


@dataclass(frozen=True)
class Intersect(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class UnionOf(Term):
    left: Term
    right: Term


PRIMITIVES = (Lift, BigUnion, Pair, Product, DeltaCap, ECap, ForallSelector, Perm312, Perm231)
DERIVED = (Domain, Inverse, Product2, Intersect, UnionOf)
UNARY = (BigUnion, DeltaCap, ECap, Perm312, Perm231, Domain, Inverse)


def children(t: Term) -> Tuple[Term, ...]:
    if isinstance(t, Lift):
        return ()
    if isinstance(t, UNARY):
        return (t.arg,)
    if isinstance(t, ForallSelector):
        return (t.relation, t.base)
    return (t.left, t.right)


def term_size(t: Term) -> int:
    """Node count of the term tree (shared subterms counted per occurrence)."""
    return 1 + sum(term_size(c) for c in children(t))


def is_primitive(t: Term) -> bool:
    return isinstance(t, PRIMITIVES) and all(is_primitive(c) for c in children(t))


def format_term(t: Term) -> str:
    if isinstance(t, Lift):
        return str(t.value)
    name = type(t).__name__
    return f"{name}(" + ", ".join(format_term(c) for c in children(t)) + ")"


# ============================================================================
# EVALUATION
# ============================================================================

def _triple(p: HFObject) -> Optional[Tuple[HFObject, HFObject, HFObject]]:
    outer = unpair(p)
    if outer is None:
        return None
    inner = unpair(outer[0])
    if inner is None:
        return None
    return inner[0], inner[1], outer[1]


def _pairs(a: HFObject):
    for p in a.members:
        pair = unpair(p)
        if pair is not None:
            yield p, pair


def eval_term(t: Term) -> HFObject:
    """Bottom-up evaluation; shared subterm objects are evaluated once."""
    memo: Dict[int, HFObject] = {}

    def ev(t: Term) -> HFObject:
        key = id(t)
        if key in memo:
            return memo[key]
        result = _apply(t, [ev(c) for c in children(t)])
        memo[key] = result
        return result

    return ev(t)


def _apply(t: Term, args: List[HFObject]) -> HFObject:
    if isinstance(t, Lift):
        return t.value
    if isinstance(t, BigUnion):
        return big_union(args[0])
    if isinstance(t, Pair):
        return hf_set(args[0], args[1])
    if isinstance(t, Product):
        return product(args[0], args[1])
    if isinstance(t, DeltaCap):
        return HFSet(frozenset(p for p, (x, y) in _pairs(args[0]) if x == y))
    if isinstance(t, ECap):
        return HFSet(frozenset(p for p, (x, y) in _pairs(args[0]) if x in y.members))
    if isinstance(t, Perm312):
        out = set()
        for p in args[0].members:
            tri = _triple(p)
            if tri is not None:
                x, y, z = tri
                out.add(kpair(kpair(y, x), z))
        return HFSet(frozenset(out))
    if isinstance(t, Perm231):
        out = set()
        for p in args[0].members:
            tri = _triple(p)
            if tri is not None:
                x, y, z = tri
                out.add(kpair(kpair(z, x), y))
        return HFSet(frozenset(out))
    if isinstance(t, ForallSelector):
        relation, base = args
        return HFSet(
            frozenset(
                p for p, (x, y) in _pairs(base)
                if all(kpair(p, z) in relation.members for z in y.members)
            )
        )
    if isinstance(t, Domain):
        return HFSet(frozenset(x for _, (x, _y) in _pairs(args[0])))
    if isinstance(t, Inverse):
        return HFSet(frozenset(kpair(y, x) for _, (x, y) in _pairs(args[0])))
    if isinstance(t, Product2):
        left, right = args
        return HFSet(
            frozenset(kpair(kpair(p, u), v) for p in left.members for _, (u, v) in _pairs(right))
        )
    if isinstance(t, Intersect):
        return HFSet(args[0].members & args[1].members)
    if isinstance(t, UnionOf):
        return HFSet(args[0].members | args[1].members)
    raise TypeError(f"unknown term node {type(t).__name__}")


# ============================================================================
# LOWERING
# ============================================================================

def _intersect(a: Term, b: Term) -> Term:
    """a ∩ b = ⋃⋃(Δ ∩ (a × b))"""
    return BigUnion(BigUnion(DeltaCap(Product(a, b))))


def _relation_part(a: Term) -> Term:
    """a ∩ V² = a ∩ (⋃⋃a)²"""
    field_ = BigUnion(BigUnion(a))
    return _intersect(a, Product(field_, field_))


def _singletons(s: Term) -> Term:
    """Singleton members of s: s ∩ ⋃(Δ ∩ (⋃s)²)"""
    flat = BigUnion(s)
    return _intersect(s, BigUnion(DeltaCap(Product(flat, flat))))


def _domain(a: Term) -> Term:
    """dom(a) = ⋃{singletons of ⋃(a ∩ V²)}"""
    return BigUnion(_singletons(BigUnion(_relation_part(a))))


def expand_derived(t: Term) -> Term:
    """Rewrite every derived node in terms of the primitive constructors."""
    if isinstance(t, Lift):
        return t
    parts = [expand_derived(c) for c in children(t)]
    if isinstance(t, Product2):
        # a ×₂ b = Perm231(b × a)
        return Perm231(Product(parts[1], parts[0]))
    if isinstance(t, UnionOf):
        return BigUnion(Pair(parts[0], parts[1]))
    if isinstance(t, Intersect):
        return _intersect(parts[0], parts[1])
    if isinstance(t, Domain):
        return _domain(parts[0])
    if isinstance(t, Inverse):
        # a⁻¹ = dom(Perm312(a × {a}))
        a = parts[0]
        return _domain(Perm312(Product(a, Pair(a, a))))
    if isinstance(t, UNARY):
        return type(t)(parts[0])
    return type(t)(parts[0], parts[1])
