"""
Test suite for exponential spaces.

Validates:
- □ and ◊ on small bases, and their lattice identities
- Exp of discrete, Sierpinski and one-point bases
- exp_map: identities, constants, collapses and functoriality
- Separation transfer on T0 bases
- Kuratowski containment in Exp(Exp(X))
"""

from itertools import product

import pytest

from settop.finite_topology import (
    UNBOUNDED,
    PointSet,
    PointTopology,
    enumerate_topologies,
    is_continuous,
    is_discrete_subset,
    is_topology,
    separation_profile,
    sorted_family,
)
from settop.hyperspace import (
    HyperPoint,
    HyperspaceError,
    NonClosedImageError,
    box,
    box_diamond_identities,
    diamond,
    double_exp_space,
    exp_map,
    exp_space,
    hyperspace_to_json,
    induced_map,
    kuratowski_check,
    load_space,
    map_from_json,
    map_to_json,
    separation_transfer,
)
from settop.utils.config import LimitExceeded


def ps(n, *points):
    return PointSet.of(n, points)


def hp(n, *points):
    return HyperPoint(ps(n, *points))


SIERPINSKI = PointTopology.from_family(2, [PointSet.of(2, [0]), PointSet.of(2, [0, 1])])


class TestBoxDiamond:
    """Test suite for □ and ◊."""

    def test_box_of_point(self):
        """Verify □{0} = {{0}} over the discrete 2-point space."""
        assert box(PointTopology.discrete(2), ps(2, 0)) == {hp(2, 0)}

    def test_box_of_whole_space(self):
        """Verify □X lists every closed set."""
        assert box(PointTopology.discrete(2), ps(2, 0, 1)) == {hp(2, 0), hp(2, 1), hp(2, 0, 1)}

    def test_diamond_of_point(self):
        """Verify ◊{0} = {{0}, {0,1}}."""
        assert diamond(PointTopology.discrete(2), ps(2, 0)) == {hp(2, 0), hp(2, 0, 1)}

    def test_empty_argument(self):
        """Verify □∅ = ◊∅ = ∅."""
        T = PointTopology.discrete(2)
        assert box(T, PointSet.empty(2)) == frozenset()
        assert diamond(T, PointSet.empty(2)) == frozenset()

    def test_diamond_of_whole_space(self, small_topologies):
        """Verify ◊X is every hyperpoint."""
        for T in small_topologies:
            assert diamond(T, T.full) == {HyperPoint(c) for c in T.closed}

    def test_identities(self, small_topologies):
        """Verify □a = □a ∩ ◊a, ◊(a ∪ b) = ◊a ∪ ◊b and □(a ∩ b) = □a ∩ □b up to 3 points."""
        for T in small_topologies:
            failures = box_diamond_identities(T)
            assert not failures, f"{T!r}: {failures[:3]}"


class TestExpSpace:
    """Test suite for exp_space."""

    def test_discrete_two_points(self):
        """Verify Exp of the discrete 2-point space is discrete on 3 points."""
        H = exp_space(PointTopology.discrete(2))
        assert len(H.points) == 3
        assert len(H.topology.closed) == 7

    def test_one_point(self):
        """Verify Exp of a point is a point."""
        H = exp_space(PointTopology.discrete(1))
        assert H.points == (hp(1, 0),)
        assert H.topology.n == 1

    def test_sierpinski(self):
        """Verify Exp of {{0},{0,1}} closes {0̂} = □{0}."""
        H = exp_space(SIERPINSKI)
        assert [p.closed for p in H.points] == [ps(2, 0), ps(2, 0, 1)]
        assert set(H.topology.closed) == {ps(2, 0), ps(2, 0, 1)}

    def test_discrete_stays_discrete(self):
        """Verify Exp of a discrete space is discrete."""
        for n in (1, 2, 3):
            H = exp_space(PointTopology.discrete(n))
            m = len(H.points)
            assert m == (1 << n) - 1
            assert len(H.topology.closed) == (1 << m) - 1, f"Exp of discrete {n} is not discrete"

    def test_points_are_closed_sets(self, small_topologies):
        """Verify hyperpoints enumerate exactly the closed sets and the topology is valid."""
        for T in small_topologies:
            H = exp_space(T)
            assert [p.closed for p in H.points] == sorted_family(T.closed)
            assert is_topology(H.topology.n, H.topology.closed)

    def test_box_of_discrete_set_is_discrete(self, small_topologies):
        """Verify □d is a discrete subset of Exp(X) whenever d is a discrete closed set."""
        checked = 0
        for T in small_topologies:
            H = exp_space(T)
            for d in T.closed:
                if not is_discrete_subset(T, d):
                    continue
                family = H.as_points(box(T, d))
                assert is_discrete_subset(H.topology, family), f"□{d!r} in Exp of {T!r}"
                checked += 1
        assert checked > 0

    def test_json(self):
        """Verify the hyperspace document and that load_space reads its base back."""
        H = exp_space(SIERPINSKI)
        doc = hyperspace_to_json(H)
        assert doc["points"] == [[0], [0, 1]]
        assert doc["topology"] == {"points": 2, "closed": [[0], [0, 1]]}
        assert load_space(doc) == SIERPINSKI

    def test_double_exp_guard(self):
        """Verify Exp(Exp(X)) is refused above seven closed sets."""
        with pytest.raises(LimitExceeded):
            double_exp_space(PointTopology.discrete(4))
        first, second = double_exp_space(PointTopology.discrete(2))
        assert len(first.points) == 3
        assert len(second.points) == 7


class TestExpMap:
    """Test suite for exp_map and functoriality."""

    def test_identity(self, chain3):
        """Verify the identity map fixes every hyperpoint."""
        for c in chain3.closed:
            assert exp_map([0, 1, 2], chain3, chain3, HyperPoint(c)) == HyperPoint(c)

    def test_constant(self):
        """Verify a constant map sends every hyperpoint to {p}."""
        X = PointTopology.discrete(3)
        Y = PointTopology.discrete(2)
        for c in X.closed:
            assert exp_map([1, 1, 1], X, Y, HyperPoint(c)) == hp(2, 1)

    def test_collapse(self):
        """Verify the discrete 2 -> 1 collapse sends {0,1} to {0}."""
        X = PointTopology.discrete(2)
        Y = PointTopology.discrete(1)
        assert exp_map([0, 0], X, Y, hp(2, 0, 1)) == hp(1, 0)

    def test_discontinuous_rejected(self):
        """Verify a map that is not continuous is refused."""
        with pytest.raises(HyperspaceError):
            exp_map([1, 0], SIERPINSKI, SIERPINSKI, hp(2, 0))

    def test_non_closed_image(self):
        """Verify a closed set with a non-closed image is reported."""
        indiscrete = PointTopology.indiscrete(1)
        # the point of a one-point space onto the open point of the Sierpinski space
        with pytest.raises(NonClosedImageError):
            exp_map([1], indiscrete, SIERPINSKI, hp(1, 0))

    def test_functoriality(self):
        """Verify Exp(g ∘ f) = Exp(g) ∘ Exp(f) wherever both sides are defined."""
        twos = list(enumerate_topologies(2))
        domains = twos + [PointTopology.discrete(3), PointTopology.indiscrete(3)]
        checked = 0
        for X in domains:
            for Y in twos:
                for Z in twos:
                    maps_f = [f for f in product(range(Y.n), repeat=X.n) if is_continuous(f, X, Y)]
                    maps_g = [g for g in product(range(Z.n), repeat=Y.n) if is_continuous(g, Y, Z)]
                    for f in maps_f:
                        for g in maps_g:
                            gf = [g[f[x]] for x in range(X.n)]
                            for c in X.closed:
                                a = HyperPoint(c)
                                try:
                                    composed = exp_map(g, Y, Z, exp_map(f, X, Y, a))
                                    direct = exp_map(gf, X, Z, a)
                                except NonClosedImageError:
                                    continue
                                assert composed == direct, f"f={f}, g={g}, a={a!r}"
                                checked += 1
        assert checked > 0

    def test_map_document(self):
        """Verify the map file format and its validation."""
        assert map_from_json({"from": 2, "to": 1, "table": [0, 0]}) == (2, 1, (0, 0))
        with pytest.raises(ValueError):
            map_from_json({"from": 2, "to": 1, "table": [0, 3]})

    def test_induced_map(self):
        """Verify Exp of a constant map sends every hyperpoint to the one point."""
        source, target = exp_space(PointTopology.discrete(2)), exp_space(PointTopology.discrete(1))
        table = induced_map([0, 0], source, target)
        assert table == (0, 0, 0)
        assert map_to_json(table, source.topology, target.topology) == {"from": 3, "to": 1, "table": [0, 0, 0]}

    def test_induced_identity(self):
        """Verify Exp of the identity is the identity and stays continuous."""
        H = exp_space(SIERPINSKI)
        table = induced_map([0, 1], H, H)
        assert table == tuple(range(len(H.points)))
        assert is_continuous(table, H.topology, H.topology)


class TestSeparationTransfer:
    """Test suite for separation transfer to Exp."""

    def test_t0_bases(self, small_topologies):
        """Verify the three transfer statements on every T0 base up to 3 points."""
        for T in small_topologies:
            if not separation_profile(T).t0:
                continue
            results = separation_transfer(T, UNBOUNDED)
            broken = [name for name, holds in results.items() if not holds]
            assert not broken, f"{T!r}: {broken}"

    def test_indiscrete_base_is_outside_the_statement(self):
        """Verify the indiscrete pair breaks t3 ⇔ exp t2, which is why non-T0 bases are skipped."""
        results = separation_transfer(PointTopology.indiscrete(2))
        assert not results["t3 ⇔ exp t2"]


class TestKuratowski:
    """Test suite for the Kuratowski square."""

    def test_whole_discrete_pair(self):
        """Verify a² for a = X on the discrete 2-point space."""
        T = PointTopology.discrete(2)
        assert kuratowski_check(T, T.full)

    def test_singleton_and_empty(self):
        """Verify a singleton and the empty set."""
        T = PointTopology.discrete(2)
        assert kuratowski_check(T, ps(2, 1))
        assert kuratowski_check(T, PointSet.empty(2))

    def test_every_closed_set_on_three_points(self):
        """Verify containment and closedness for every closed a of the discrete 3-point space."""
        T = PointTopology.discrete(3)
        for a in sorted_family(T.closed):
            assert kuratowski_check(T, a), f"a = {a!r}"

    def test_non_hausdorff_rejected(self):
        """Verify a non-Hausdorff base is refused."""
        with pytest.raises(HyperspaceError):
            kuratowski_check(SIERPINSKI, ps(2, 0))
