"""
Membership Structures

A finite digraph read as a candidate universe: an edge i -> j means node i
is an element of node j. Cycles are allowed, so non-well-founded
phenomena (q ∈ q) live here and never in HFObject.

audit_axioms checks the class axioms and the topological axioms instance by
instance. When a structure carries levels and a rank bound, an instance whose
missing witness would sit above the bound is out-of-bound, not a failure.

File format (JSON):
    {"nodes": 3, "atom": [false, true, false], "edges": [[1, 0], [0, 2]],
     "labels": ["a", "b", "c"]}
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from settop.finite_topology import UNBOUNDED, KBound
from settop.hf_universe.objects import HFObject, format_hf
from settop.positive_core.formulas import Universe, enumerate_formulas, eval_formula, format_formula
from settop.report import Check, Verdict

logger = logging.getLogger(__name__)

MAX_ADDITIVITY_NODES = 12


class StructureError(ValueError):
    """Malformed membership structure."""
    pass


@dataclass(frozen=True)
class MembershipStructure:
    n: int
    atoms: Tuple[bool, ...]
    edges: FrozenSet[Tuple[int, int]]
    labels: Tuple[str, ...] = ()
    levels: Optional[Tuple[int, ...]] = None
    rank_bound: Optional[int] = None
    atom_class: Optional[int] = None

    def __post_init__(self):
        if self.n < 0:
            raise StructureError(f"negative node count {self.n}")
        if len(self.atoms) != self.n:
            raise StructureError(f"{len(self.atoms)} atom flags for {self.n} nodes")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.n)))
        elif len(self.labels) != self.n:
            raise StructureError(f"{len(self.labels)} labels for {self.n} nodes")
        if self.levels is not None and len(self.levels) != self.n:
            raise StructureError(f"{len(self.levels)} levels for {self.n} nodes")
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise StructureError(f"edge {i} -> {j} leaves the node range")
            if self.atoms[j]:
                raise StructureError(f"atom node {self.labels[j]} has element {self.labels[i]}")
        if self.atom_class is not None and not 0 <= self.atom_class < self.n:
            raise StructureError(f"atom class node {self.atom_class} out of range")

    @cached_property
    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def extensions(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(self.graph.predecessors(j)) for j in range(self.n))

    def extension(self, j: int) -> FrozenSet[int]:
        return self.extensions[j]

    @cached_property
    def set_nodes(self) -> List[int]:
        return [j for j in range(self.n) if not self.atoms[j]]

    @cached_property
    def by_extension(self) -> Dict[FrozenSet[int], int]:
        """Extension -> first set node carrying it."""
        out: Dict[FrozenSet[int], int] = {}
        for j in self.set_nodes:
            out.setdefault(self.extensions[j], j)
        return out

    def is_zero_node(self, x: int) -> bool:
        """No element of x is a superset of x, read on the digraph."""
        if self.atoms[x]:
            return False
        ext = self.extensions[x]
        return not any(not self.atoms[e] and ext <= self.extensions[e] for e in ext)

    def is_wellfounded_node(self, x: int) -> bool:
        below = nx.ancestors(self.graph, x) | {x}
        return nx.is_directed_acyclic_graph(self.graph.subgraph(below))

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_hf(cls, objects: Iterable[HFObject]) -> "MembershipStructure":
        """Real ∈ restricted to the given objects; levels are HF ranks, no bound."""
        nodes = sorted(set(objects), key=lambda e: e.sort_key)
        index = {x: i for i, x in enumerate(nodes)}
        edges = frozenset(
            (index[e], j) for j, x in enumerate(nodes) for e in x.members if e in index
        )
        return cls(
            n=len(nodes),
            atoms=tuple(x.is_atom for x in nodes),
            edges=edges,
            labels=tuple(format_hf(x) for x in nodes),
            levels=tuple(x.rank for x in nodes),
        )

    @classmethod
    def from_context(cls, ctx) -> "MembershipStructure":
        """
        The interpreted universe of an InterpretationContext: nodes W⊕,
        atoms B⊕, and x ∈ y iff x ∈ Φ(y)⊕.
        """
        nodes = sorted(ctx.w_plus, key=lambda e: e.sort_key)
        index = {x: i for i, x in enumerate(nodes)}
        b_plus = ctx.b_plus
        edges = set()
        for j, y in enumerate(nodes):
            if y in b_plus or y not in ctx.phi:
                continue
            for e in ctx.z.oplus(ctx.phi[y]):
                if e in index:
                    edges.add((index[e], j))
        levels = tuple(ctx.level(x) for x in nodes)
        return cls(
            n=len(nodes),
            atoms=tuple(x in b_plus for x in nodes),
            edges=frozenset(edges),
            labels=tuple(format_hf(x) for x in nodes),
            levels=levels,
            rank_bound=ctx.rank_bound,
        )

    # ------------------------------------------------------------------
    # JSON
    # ------------------------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "nodes": self.n,
            "atom": list(self.atoms),
            "edges": [list(e) for e in sorted(self.edges)],
            "labels": list(self.labels),
        }
        if self.levels is not None:
            data["levels"] = list(self.levels)
        if self.rank_bound is not None:
            data["rank_bound"] = self.rank_bound
        if self.atom_class is not None:
            data["atom_class"] = self.atom_class
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "MembershipStructure":
        try:
            n = int(data["nodes"])
            atoms = tuple(bool(a) for a in data.get("atom", [False] * n))
            edges = frozenset((int(i), int(j)) for i, j in data.get("edges", []))
            labels = tuple(str(s) for s in data.get("labels", []))
            levels = data.get("levels")
        except (KeyError, TypeError, ValueError) as e:
            raise StructureError(f"malformed structure document: {e}")
        return cls(
            n=n,
            atoms=atoms,
            edges=edges,
            labels=labels,
            levels=tuple(int(v) for v in levels) if levels is not None else None,
            rank_bound=data.get("rank_bound"),
            atom_class=data.get("atom_class"),
        )


# ============================================================================
# AXIOM AUDIT
# ============================================================================

@dataclass
class AxiomAudit:
    checks: List[Check] = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def by_name(self, prefix: str) -> Check:
        for c in self.checks:
            if c.name.startswith(prefix):
                return c
        raise KeyError(prefix)


class _Witnesses:
    """Looks up a set node by extension and classifies a missing one."""

    def __init__(self, M: MembershipStructure):
        self.M = M

    def level_of(self, ext: Iterable[int]) -> Optional[int]:
        if self.M.levels is None:
            return None
        return 1 + max((self.M.levels[i] for i in ext), default=0)

    def outcome(self, ext: FrozenSet[int], empty_ok: bool = False) -> Verdict:
        if empty_ok and not ext:
            return Verdict.PASS
        if ext in self.M.by_extension:
            return Verdict.PASS
        level = self.level_of(ext)
        if self.M.rank_bound is not None and level is not None and level > self.M.rank_bound:
            return Verdict.OUT_OF_BOUND
        return Verdict.FAIL

    def show(self, ext: Iterable[int]) -> str:
        return "{" + ", ".join(self.M.labels[i] for i in sorted(ext)) + "}"


def audit_axioms(M: MembershipStructure, depth: int = 3, K: KBound = UNBOUNDED) -> AxiomAudit:
    """Check every axiom over every instance the structure offers."""
    audit = AxiomAudit()
    w = _Witnesses(M)
    label = M.labels
    ext = M.extensions
    sets = M.set_nodes
    nonempty = [j for j in sets if ext[j]]

    c = Check("extensionality")
    for i, j in combinations(sets, 2):
        c.record(Verdict.FAIL if ext[i] == ext[j] else Verdict.PASS,
                 f"{label[i]} and {label[j]} have the same elements")
    audit.checks.append(c.settle())

    c = Check("atoms")
    for j in range(M.n):
        if M.atoms[j]:
            c.record(Verdict.FAIL if ext[j] else Verdict.PASS, f"atom {label[j]} has elements")
    if M.atom_class is not None:
        expected = frozenset(j for j in range(M.n) if M.atoms[j])
        c.record(Verdict.PASS if ext[M.atom_class] == expected else Verdict.FAIL,
                 f"atom class {label[M.atom_class]} is {w.show(ext[M.atom_class])}")
    audit.checks.append(c.settle())

    c = Check("nontriviality")
    c.record(Verdict.PASS if M.n >= 2 else Verdict.FAIL, f"only {M.n} node(s)")
    audit.checks.append(c.settle())

    c = Check("T1: singletons are sets")
    for j in range(M.n):
        c.record(w.outcome(frozenset({j})), f"no node {{{label[j]}}}")
    audit.checks.append(c.settle())

    c = Check("2nd topology: intersections")
    for i, j in combinations(nonempty, 2):
        meet = ext[i] & ext[j]
        c.record(w.outcome(meet, empty_ok=True), f"{label[i]} ∩ {label[j]} = {w.show(meet)}")
    audit.checks.append(c.settle())

    c = Check("3rd topology: binary unions")
    for i, j in combinations(sets, 2):
        joined = ext[i] | ext[j]
        c.record(w.outcome(joined), f"{label[i]} ∪ {label[j]} = {w.show(joined)}")
    audit.checks.append(c.settle())

    c = Check("exponential: □a ∩ ◊b")
    for a in nonempty:
        for b in nonempty:
            chosen = frozenset(
                x for x in sets if ext[x] <= ext[a] and ext[x] & ext[b]
            )
            c.record(w.outcome(chosen, empty_ok=True),
                     f"□{label[a]} ∩ ◊{label[b]} = {w.show(chosen)}")
    audit.checks.append(c.settle())

    c = Check("additivity: K-small unions")
    if K.unbounded:
        c.detail = "K unbounded: additivity reduces to binary unions"
        audit.checks.append(c.settle(vacuous=True))
    else:
        if len(sets) > MAX_ADDITIVITY_NODES:
            raise StructureError(f"{len(sets)} sets are too many for the additivity audit")
        for r in range(3, len(sets) + 1):
            if not K.is_small(r):
                break
            for family in combinations(sets, r):
                joined = frozenset().union(*(ext[j] for j in family))
                c.record(w.outcome(joined), f"⋃{[label[j] for j in family]} = {w.show(joined)}")
        audit.checks.append(c.settle())

    c = Check("V ∈ V")
    everything = frozenset(range(M.n))
    universes = [j for j in sets if ext[j] == everything]
    if not universes:
        c.record(w.outcome(everything), "no node has every node as an element")
    else:
        v = universes[0]
        c.record(Verdict.PASS if v in ext[v] else Verdict.FAIL, f"{label[v]} is not an element of itself")
    audit.checks.append(c.settle())

    audit.checks.append(_audit_specification(M, w, depth))

    logger.info(f"Axiom audit over {M.n} nodes: {audit.failures} failing instances")
    return audit


def _audit_specification(M: MembershipStructure, w: _Witnesses, depth: int) -> Check:
    """{x ∈ c | φ(x, b)} is a set (or empty) for every BPF φ up to `depth`."""
    c = Check(f"BPF specification (size ≤ {depth})")
    U = Universe(members=lambda j: M.extensions[j])
    for phi in enumerate_formulas(depth, ("x1", "x2")):
        for node in M.set_nodes:
            for b in range(M.n):
                picked = frozenset(
                    x for x in M.extensions[node] if eval_formula(phi, {"x1": x, "x2": b}, U)
                )
                c.record(
                    w.outcome(picked, empty_ok=True),
                    f"{format_formula(phi)} over {M.labels[node]} with x2={M.labels[b]}: {w.show(picked)}",
                )
    return c.settle()
