"""
Hyperuniverse Search

A hyperuniverse is a K-compact Hausdorff space (W, T) with an open set of
atoms B and a homeomorphism Φ: W \\ B -> Exp_K(W, T). Points are abstract
here, so "B contains no subsets of W" holds trivially.

The search runs over every topology on up to max_points points, every open
B and every bijection W \\ B -> Exp(W), and keeps all homeomorphisms.
"""

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Any, Dict, List, Mapping, Optional, Tuple

from settop.finite_topology import (
    UNBOUNDED,
    KBound,
    PointSet,
    enumerate_topologies,
    is_homeomorphism,
    is_k_compact,
    separation_profile,
    sorted_family,
    subspace,
)
from settop.hyperspace import exp_space
from settop.utils.config import check_limit, limit_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Witness:
    points: int
    closed: Tuple[Tuple[int, ...], ...]
    atoms: Tuple[int, ...]
    phi: Tuple[Tuple[int, Tuple[int, ...]], ...]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "points": self.points,
            "closed": [list(c) for c in self.closed],
            "atoms": list(self.atoms),
            "phi": {str(w): list(c) for w, c in self.phi},
        }


def _open_sets(T) -> List[PointSet]:
    """Every open set, the empty one first."""
    opens = {PointSet.empty(T.n), T.full} | {c.complement() for c in T.closed}
    return sorted_family(opens)


def search_hyperuniverses(
    max_points: int,
    K: KBound = UNBOUNDED,
    unsafe: bool = False,
    limits: Optional[Mapping[str, Any]] = None,
) -> List[Witness]:
    """All hyperuniverse witnesses on 1..max_points points, in enumeration order."""
    check_limit("search points", max_points, limit_value("max_search_points", limits), unsafe)
    witnesses: List[Witness] = []
    examined = 0

    for n in range(1, max_points + 1):
        for T in enumerate_topologies(n, unsafe, limits):
            if not separation_profile(T).t2 or not is_k_compact(T, K):
                continue
            H = exp_space(T, K)
            targets = len(H.points)
            for B in _open_sets(T):
                rest = B.complement()
                if len(rest) != targets:
                    continue
                examined += 1
                sub, labels = subspace(T, rest)
                for table in permutations(range(targets)):
                    if is_homeomorphism(list(table), sub, H.topology):
                        witnesses.append(
                            Witness(
                                points=n,
                                closed=tuple(c.indices() for c in sorted_family(T.closed)),
                                atoms=B.indices(),
                                phi=tuple(
                                    (labels[i], H.points[j].closed.indices())
                                    for i, j in enumerate(table)
                                ),
                            )
                        )
        logger.info(f"Hyperuniverse search at {n} points: {len(witnesses)} witnesses so far")

    logger.debug(f"Examined {examined} (space, atoms) pairs with matching cardinality")
    return witnesses
