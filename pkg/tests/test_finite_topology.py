"""
Test suite for finite topologies.

Validates:
- The three closure conditions of is_topology
- Closure and interior laws over every small topology
- Separation flags against the brute-force oracle
- Discreteness, K-compactness and subbase generation
- Enumeration counts and determinism
"""

import inspect
from itertools import combinations, product

import pytest

from settop.finite_topology import (
    UNBOUNDED,
    KBound,
    PointSet,
    PointTopology,
    TopologyError,
    base_property,
    brute_force_separation,
    closure,
    enumerate_topologies,
    generate_topology,
    interior,
    is_continuous,
    is_discrete_subset,
    is_homeomorphism,
    is_k_compact,
    is_relatively_discrete,
    is_topology,
    preimage,
    separation_profile,
    sorted_family,
    space_from_json,
    space_to_json,
    subspace,
)
from settop.utils.config import LimitExceeded


def ps(n, *points):
    return PointSet.of(n, points)


def all_subsets(n):
    return [PointSet(n, b) for b in range(1 << n)]


class TestIsTopology:
    """Test suite for the closed-set axioms."""

    def test_chain_is_topology(self):
        """Verify {{0},{0,1},{0,1,2}} is a topology."""
        assert is_topology(3, [ps(3, 0), ps(3, 0, 1), ps(3, 0, 1, 2)])

    def test_missing_union(self):
        """Verify {{0},{1}} fails because {0,1} is absent."""
        assert not is_topology(2, [ps(2, 0), ps(2, 1)])

    def test_one_point(self):
        """Verify the one-point space."""
        assert is_topology(1, [ps(1, 0)])

    def test_empty_member_rejected(self):
        """Verify an empty member makes the family invalid."""
        assert not is_topology(2, [PointSet.empty(2), ps(2, 0, 1)])

    def test_missing_intersection(self):
        """Verify a nonempty intersection must be in the family."""
        assert not is_topology(3, [ps(3, 0, 1), ps(3, 1, 2), ps(3, 0, 1, 2)])

    def test_out_of_range_rejected(self):
        """Verify point sets outside the space are malformed input."""
        with pytest.raises(TopologyError):
            ps(2, 0, 5)
        with pytest.raises(TopologyError):
            is_topology(2, [ps(3, 0, 1, 2)])


class TestClosureInterior:
    """Test suite for closure and interior."""

    def test_closure_of_point(self, chain3):
        """Verify cl({1}) = {0,1} in the chain topology."""
        assert closure(chain3, ps(3, 1)) == ps(3, 0, 1)

    def test_closure_of_empty_and_full(self, chain3):
        """Verify cl(∅) = ∅ and cl(X) = X."""
        assert closure(chain3, PointSet.empty(3)) == PointSet.empty(3)
        assert closure(chain3, chain3.full) == chain3.full

    def test_interior_is_complement_of_closure_of_complement(self, chain3):
        """Verify int({1,2}) = ∁cl({0}) = {1,2}."""
        assert interior(chain3, ps(3, 1, 2)) == ps(3, 1, 2)
        assert interior(chain3, ps(3, 0, 1)) == PointSet.empty(3)

    def test_interior_extremes(self, chain3):
        """Verify int(X) = X and int(∅) = ∅."""
        assert interior(chain3, chain3.full) == chain3.full
        assert interior(chain3, PointSet.empty(3)) == PointSet.empty(3)

    def test_closure_laws(self, small_topologies, four_point_topologies):
        """Verify closure is extensive, idempotent and monotone on every space up to 4 points."""
        for T in small_topologies + four_point_topologies:
            subsets = all_subsets(T.n)
            cl = {A: closure(T, A) for A in subsets}
            for A in subsets:
                assert A <= cl[A], f"{A!r} not inside its closure in {T!r}"
                assert closure(T, cl[A]) == cl[A], f"closure not idempotent at {A!r} in {T!r}"
                assert T.is_t_closed(cl[A]), f"cl({A!r}) is not T-closed in {T!r}"
            for A, B in combinations(subsets, 2):
                if A <= B:
                    assert cl[A] <= cl[B], f"closure not monotone at {A!r} ⊆ {B!r}"

    def test_interior_agrees_with_open_sets(self, small_topologies):
        """Verify int(A) is the largest open subset of A."""
        for T in small_topologies:
            opens = [U for U in all_subsets(T.n) if T.is_open(U)]
            for A in all_subsets(T.n):
                largest = PointSet.empty(T.n)
                for U in opens:
                    if U <= A:
                        largest = largest | U
                assert interior(T, A) == largest, f"interior mismatch at {A!r} in {T!r}"


class TestSeparation:
    """Test suite for separation profiles."""

    def test_discrete_two_points(self):
        """Verify every flag holds on the discrete 2-point space."""
        profile = separation_profile(PointTopology.discrete(2))
        assert all(profile.as_dict().values()), f"unexpected profile {profile}"

    def test_sierpinski(self):
        """Verify {{0},{0,1}} is T0 but not T1."""
        T = PointTopology.from_family(2, [ps(2, 0), ps(2, 0, 1)])
        profile = separation_profile(T)
        assert profile.t0 and not profile.t1

    def test_chain_three(self, chain3):
        """Verify the 3-point chain is T0 but not T1."""
        profile = separation_profile(chain3)
        assert profile.t0 and not profile.t1

    def test_profile_matches_oracle(self, small_topologies, four_point_topologies):
        """Verify the point-closure profile agrees with brute force up to 4 points."""
        for T in small_topologies + four_point_topologies:
            assert separation_profile(T) == brute_force_separation(T), f"profile mismatch on {T!r}"

    def test_implications(self, small_topologies, four_point_topologies):
        """Verify t2 ⇒ t1 ⇒ t0, t3 = regular ∧ t1 and t4 = normal ∧ t1."""
        for T in small_topologies + four_point_topologies:
            p = separation_profile(T)
            assert not p.t2 or p.t1, f"t2 without t1 on {T!r}"
            assert not p.t1 or p.t0, f"t1 without t0 on {T!r}"
            assert p.t3 == (p.regular and p.t1)
            assert p.t4 == (p.normal and p.t1)

    def test_t1_finite_spaces_are_discrete(self, small_topologies, four_point_topologies):
        """Verify a finite T1 space has every nonempty subset closed."""
        for T in small_topologies + four_point_topologies:
            if separation_profile(T).t1:
                assert len(T.closed) == (1 << T.n) - 1, f"T1 but not discrete: {T!r}"


class TestDiscreteness:
    """Test suite for discrete subsets."""

    def test_discrete_space(self):
        """Verify every subset of a discrete space is discrete."""
        T = PointTopology.discrete(3)
        assert all(is_discrete_subset(T, A) for A in all_subsets(3))

    def test_chain_pair_not_discrete(self, chain3):
        """Verify {0,1} is not discrete in the chain topology."""
        A = ps(3, 0, 1)
        assert not is_discrete_subset(chain3, A)
        assert not is_relatively_discrete(chain3, A)

    def test_singletons(self, chain3):
        """Verify every singleton is discrete."""
        assert all(is_discrete_subset(chain3, ps(3, x)) for x in range(3))

    def test_characterizations_agree(self, small_topologies, four_point_topologies):
        """Verify both discreteness characterizations agree up to 4 points."""
        for T in small_topologies + four_point_topologies:
            for A in all_subsets(T.n):
                assert is_discrete_subset(T, A) == is_relatively_discrete(T, A), f"{A!r} in {T!r}"


class TestCompactness:
    """Test suite for K-compactness."""

    def test_unbounded_always_compact(self, small_topologies):
        """Verify any finite space is compact for an unbounded KBound."""
        assert all(is_k_compact(T, UNBOUNDED) for T in small_topologies)

    def test_discrete_three_not_two_compact(self):
        """Verify the discrete 3-point space has a cocover with no single-member subcocover."""
        assert not is_k_compact(PointTopology.discrete(3), KBound(2))

    def test_one_point_space(self):
        """Verify the one-point space is compact for every KBound."""
        T = PointTopology.discrete(1)
        assert all(is_k_compact(T, KBound(k)) for k in (1, 2, 3))

    def test_kbound_parse(self):
        """Verify KBound text parsing."""
        assert KBound.parse("unbounded").unbounded
        assert KBound.parse("3").k == 3
        with pytest.raises(TopologyError):
            KBound.parse("0")
        with pytest.raises(TopologyError):
            KBound.parse("lots")


class TestGeneration:
    """Test suite for subbase generation."""

    def test_singletons_generate_discrete(self):
        """Verify {{0},{1}} generates the discrete topology."""
        T = generate_topology(2, [ps(2, 0), ps(2, 1)])
        assert sorted_family(T.closed) == [ps(2, 0), ps(2, 0, 1), ps(2, 1)]

    def test_overlapping_pair(self):
        """Verify {{0,1},{1,2}} generates {{1},{0,1},{1,2},{0,1,2}}."""
        T = generate_topology(3, [ps(3, 0, 1), ps(3, 1, 2)])
        assert set(T.closed) == {ps(3, 1), ps(3, 0, 1), ps(3, 1, 2), ps(3, 0, 1, 2)}

    def test_empty_subbase(self):
        """Verify the empty subbase generates the one-point space."""
        T = generate_topology(1, [])
        assert set(T.closed) == {ps(1, 0)}

    def test_empty_member_rejected(self):
        """Verify an empty subbase member is refused."""
        with pytest.raises(TopologyError):
            generate_topology(2, [PointSet.empty(2)])

    def test_generated_is_least(self):
        """Verify no proper subfamily containing the subbase is a topology (n ≤ 3)."""
        for n in (1, 2, 3):
            nonempty = [PointSet(n, b) for b in range(1, 1 << n)]
            for r in range(0, 3):
                for subbase in combinations(nonempty, r):
                    T = generate_topology(n, subbase)
                    family = set(T.closed)
                    required = set(subbase) | {PointSet.full(n)}
                    optional = sorted_family(family - required)
                    for k in range(len(optional)):
                        for kept in combinations(optional, k):
                            smaller = required | set(kept)
                            assert not is_topology(n, smaller), f"{sorted_family(smaller)} is smaller than {T!r}"

    def test_base_property(self):
        """Verify generated closed sets are meets of unions of subbase members (n ≤ 3)."""
        for n in (1, 2, 3):
            nonempty = [PointSet(n, b) for b in range(1, 1 << n)]
            for subbase in combinations(nonempty, 2):
                T = generate_topology(n, subbase)
                assert base_property(T, subbase), f"base property fails for {list(subbase)}"


class TestEnumeration:
    """Test suite for enumerate_topologies."""

    @pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29), (4, 355)])
    def test_counts(self, n, count):
        """Verify the number of topologies on n labelled points."""
        spaces = list(enumerate_topologies(n))
        assert len(spaces) == count, f"expected {count} topologies on {n} points, got {len(spaces)}"

    def test_five_points(self):
        """Verify the 6942 topologies on five points."""
        assert sum(1 for _ in enumerate_topologies(5)) == 6942

    def test_every_family_valid_and_distinct(self, four_point_topologies):
        """Verify each yielded family passes is_topology exactly once."""
        keys = set()
        for T in four_point_topologies:
            assert is_topology(T.n, T.closed), f"{T!r} is not a topology"
            keys.add(T.family_key())
        assert len(keys) == len(four_point_topologies)

    def test_deterministic_order(self):
        """Verify two enumerations agree element by element."""
        first = [T.closures for T in enumerate_topologies(3)]
        second = [T.closures for T in enumerate_topologies(3)]
        assert first == second
        assert first == sorted(first), "topologies are not streamed in point-closure order"

    def test_streams_lazily(self):
        """Verify enumeration is a generator whose first item needs no full pass."""
        spaces = enumerate_topologies(5)
        assert inspect.isgenerator(spaces)
        first = next(spaces)
        assert first.closures == (1, 2, 4, 8, 16), f"first topology is {first!r}"

    def test_lowered_limit(self):
        """Verify a max_points setting below n is refused before streaming."""
        with pytest.raises(LimitExceeded, match="points"):
            enumerate_topologies(3, limits={"max_points": 2})
        assert sum(1 for _ in enumerate_topologies(3, unsafe=True, limits={"max_points": 2})) == 29

    def test_guard(self):
        """Verify more than five points is refused without the override."""
        with pytest.raises(LimitExceeded):
            next(enumerate_topologies(6))


class TestMapsAndFiles:
    """Test suite for maps, subspaces and the space file format."""

    def test_identity_is_homeomorphism(self, chain3):
        """Verify the identity map."""
        assert is_homeomorphism([0, 1, 2], chain3, chain3)

    def test_swap_not_continuous(self):
        """Verify swapping the points of the Sierpinski space is not continuous."""
        T = PointTopology.from_family(2, [ps(2, 0), ps(2, 0, 1)])
        assert not is_continuous([1, 0], T, T)

    def test_continuity_against_preimages(self):
        """Verify is_continuous agrees with 'preimages of closed sets are closed or empty'."""
        spaces = [T for n in (1, 2) for T in enumerate_topologies(n)]
        for X in spaces:
            for Y in spaces:
                for f in product(range(Y.n), repeat=X.n):
                    by_preimage = all(
                        not preimage(f, c, X) or X.is_closed(preimage(f, c, X)) for c in Y.closed
                    )
                    assert is_continuous(f, X, Y) == by_preimage, f"{X!r} -> {Y!r} by {f}"

    def test_subspace(self, chain3):
        """Verify the subspace {1,2} of the chain is a Sierpinski space on 1 < 2."""
        sub, labels = subspace(chain3, ps(3, 1, 2))
        assert labels == (1, 2)
        assert set(sub.closed) == {ps(2, 0), ps(2, 0, 1)}

    def test_json_round_trip(self, chain3):
        """Verify the space document format."""
        doc = space_to_json(chain3)
        assert doc == {"points": 3, "closed": [[0], [0, 1], [0, 1, 2]]}
        assert space_from_json(doc) == chain3

    def test_json_rejects_non_topology(self):
        """Verify a family failing the axioms is malformed input."""
        with pytest.raises(TopologyError):
            space_from_json({"points": 2, "closed": [[0], [1]]})
