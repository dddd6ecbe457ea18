"""
Test suite for positive formulas and their compilation.

Validates:
- s-expression parsing, printing and formula files
- Brute-force satisfaction
- Compiled terms against the brute-force oracle (reduced grid)
- Lowering of derived operations to primitives
- Specification two-path agreement and distributivity
"""

import random

import pytest

from settop.acceptance import class_candidates
from settop.hf_universe.objects import EMPTY, atom, hf_set, kpair, unpair
from settop.positive_core.compiler import (
    CompilationError,
    compile_formula,
    compiled_term_size,
    term_size_bound,
)
from settop.positive_core.formulas import (
    Equal,
    ExistsIn,
    FormulaError,
    FormulaSyntaxError,
    Member,
    Universe,
    arity,
    enumerate_formulas,
    eval_formula,
    format_formula,
    formula_size,
    is_bpf,
    parse_formula,
    parse_formula_file,
    random_formula,
    validate,
)
from settop.positive_core.specification import (
    brute_force_relation,
    check_distributivity,
    compiled_relation,
    distributivity_sides,
    oracle_equivalence,
    specification_set,
)
from settop.positive_core.terms import (
    BigUnion,
    DeltaCap,
    Domain,
    ECap,
    Lift,
    Product,
    eval_term,
    expand_derived,
    is_primitive,
)

ONE = hf_set(EMPTY)
TWO = hf_set(EMPTY, ONE)


class TestParsing:
    """Test suite for the formula syntax."""

    def test_exists(self):
        """Verify a bounded existential parses to ExistsIn and prints back."""
        phi = parse_formula("(some z x1 (in z x2))")
        assert phi == ExistsIn("z", "x1", Member("z", "x2"))
        assert format_formula(phi) == "(some z x1 (in z x2))"
        assert formula_size(phi) == 2
        assert arity(phi) == 2

    def test_class_parameter_is_not_bpf(self):
        """Verify allp makes a formula GPF but not BPF."""
        assert not is_bpf(parse_formula("(allp z B1 (in z x1))"))
        assert is_bpf(parse_formula("(all z x1 (in z x2))"))

    def test_negation_rejected(self):
        """Verify negation is not in the grammar."""
        with pytest.raises(FormulaSyntaxError, match="unknown head: not"):
            parse_formula("(not (in x1 x1))")

    def test_syntax_errors_carry_position(self):
        """Verify unbalanced input reports a position."""
        with pytest.raises(FormulaSyntaxError) as err:
            parse_formula("(in x1 x2")
        assert err.value.position >= 0

    def test_shadowing_rejected(self):
        """Verify a bound variable may not reuse a free variable name."""
        with pytest.raises(FormulaError):
            validate(parse_formula("(some x1 x2 (in x1 x2))"))

    def test_formula_file(self):
        """Verify blank and comment lines are skipped."""
        text = "; header\n(in x1 x2)\n\n(= x1 x1) ; trailing\n"
        assert parse_formula_file(text) == [Member("x1", "x2"), Equal("x1", "x1")]

    def test_round_trip_over_enumeration(self):
        """Verify printing then parsing returns the same AST for every formula of size ≤ 3."""
        for phi in enumerate_formulas(3, ("x1", "x2"), ("B1",)):
            assert parse_formula(format_formula(phi)) == phi, format_formula(phi)


class TestEvaluation:
    """Test suite for eval_formula."""

    def test_equality_reflexive(self):
        """Verify (= x1 x1) holds."""
        assert eval_formula(parse_formula("(= x1 x1)"), {"x1": TWO})

    def test_membership(self):
        """Verify ∅ ∈ {∅}."""
        assert eval_formula(parse_formula("(in x1 x2)"), {"x1": EMPTY, "x2": ONE})

    def test_bounded_universal(self):
        """Verify ∀z ∈ {∅, {∅}}: z ∈ {∅} fails at {∅}."""
        phi = parse_formula("(all z x1 (in z x2))")
        assert not eval_formula(phi, {"x1": TWO, "x2": ONE})

    def test_atoms_have_no_elements(self):
        """Verify quantifiers over an atom range over nothing."""
        env = {"x1": atom("w"), "x2": EMPTY}
        assert eval_formula(parse_formula("(all z x1 (in z x2))"), env)
        assert not eval_formula(parse_formula("(some z x1 (= z z))"), env)

    def test_class_parameter(self):
        """Verify allp ranges over the bound class."""
        phi = parse_formula("(allp z B1 (in z x1))")
        U = Universe(classes=(frozenset({EMPTY}),))
        assert eval_formula(phi, {"x1": ONE}, U)
        assert not eval_formula(phi, {"x1": hf_set(ONE)}, U)

    def test_unbound_variable(self):
        """Verify an unassigned free variable is an error."""
        with pytest.raises(FormulaError):
            eval_formula(parse_formula("(in x1 x2)"), {"x1": EMPTY})


class TestTerms:
    """Test suite for combinator terms."""

    def test_big_union(self):
        """Verify ⋃{{∅}} = {∅}."""
        assert eval_term(BigUnion(Lift(hf_set(ONE)))) == ONE

    def test_membership_filter(self):
        """Verify E ∩ ({∅} × {{∅}}) = {<∅, {∅}>}."""
        t = ECap(Product(Lift(ONE), Lift(hf_set(ONE))))
        assert eval_term(t) == hf_set(kpair(EMPTY, ONE))

    def test_diagonal_filter(self):
        """Verify Δ ∩ {<∅,∅>, <∅,{∅}>} = {<∅,∅>}."""
        t = DeltaCap(Lift(hf_set(kpair(EMPTY, EMPTY), kpair(EMPTY, ONE))))
        assert eval_term(t) == hf_set(kpair(EMPTY, EMPTY))

    def test_expand_derived_is_primitive_and_equal(self, u3, rng):
        """Verify lowering keeps values and leaves only primitive nodes."""
        carriers = u3.sorted_elements()
        for size in range(1, 5):
            for _ in range(15):
                phi = random_formula(rng, size)
                sets = [rng.choice(carriers), rng.choice(carriers)]
                term = compile_formula(phi, 2).instantiate(sets)
                lowered = expand_derived(term)
                assert is_primitive(lowered), format_formula(phi)
                assert eval_term(lowered) == eval_term(term), format_formula(phi)


class TestCompiler:
    """Test suite for compile_formula."""

    def test_equality_is_the_argument(self):
        """Verify x1 = x1 at arity 1 compiles to a_1 itself."""
        assert compile_formula(Equal("x1", "x1"), 1).instantiate([TWO]) == Lift(TWO)

    def test_membership_of_last_two(self):
        """Verify x1 ∈ x2 at arity 2 compiles to E ∩ (a_1 × a_2)."""
        term = compile_formula(Member("x1", "x2"), 2).instantiate([ONE, TWO])
        assert term == ECap(Product(Lift(ONE), Lift(TWO)))

    def test_self_membership_correction(self):
        """Verify x1 ∈ x1 compiles to dom(Δ ∩ E ∩ a_1²) and is empty on {∅, {∅}}."""
        term = compile_formula(Member("x1", "x1"), 1).instantiate([TWO])
        assert term == Domain(DeltaCap(ECap(Product(Lift(TWO), Lift(TWO)))))
        assert eval_term(term) == EMPTY
        # the uncorrected dom(E ∩ a_1²) picks ∅ because ∅ ∈ {∅}
        assert eval_term(Domain(ECap(Product(Lift(TWO), Lift(TWO))))) == ONE

    def test_empty_class_rejected(self):
        """Verify an empty class parameter is refused."""
        template = compile_formula(parse_formula("(allp z B1 (in z x1))"), 1)
        with pytest.raises(CompilationError):
            template.instantiate([TWO], [frozenset()])

    def test_missing_class_rejected(self):
        """Verify an unbound class parameter is refused."""
        template = compile_formula(parse_formula("(allp z B1 (in z x1))"), 1)
        with pytest.raises(CompilationError):
            template.instantiate([TWO])

    def test_arity_too_small(self):
        """Verify a free variable beyond the arity is refused."""
        with pytest.raises(CompilationError):
            compile_formula(Member("x1", "x3"), 2)

    def test_empty_factor(self, u3):
        """Verify A^φ is empty when some a_i is empty."""
        for phi in enumerate_formulas(2, ("x1", "x2")):
            assert compiled_relation(phi, [EMPTY, u3]) == EMPTY
            assert compiled_relation(phi, [u3, EMPTY]) == EMPTY

    def test_term_size_bound(self, u3):
        """Verify instantiated terms stay within the size bound."""
        candidates = class_candidates(u3, 2)
        for phi in enumerate_formulas(3, ("x1", "x2"), ("B1",)):
            classes = [candidates[-1]]
            size = compiled_term_size(phi, 2, [u3, u3], classes)
            assert size <= term_size_bound(formula_size(phi), 2, 2)


class TestOracle:
    """Test suite for compiled terms against brute-force satisfaction."""

    def test_exhaustive_two_variables(self, u3):
        """Verify every BPF of size ≤ 3 in x1, x2 over all pairs from U_3."""
        tally = oracle_equivalence(enumerate_formulas(3, ("x1", "x2")), 2, u3.sorted_elements())
        assert tally.ok, tally.mismatches
        assert tally.instances == tally.formulas * 16

    def test_exhaustive_class_parameter(self, u3):
        """Verify every GPF of size ≤ 3 in x1 with B1 over classes of size ≤ 2."""
        tally = oracle_equivalence(
            enumerate_formulas(3, ("x1",), ("B1",)), 1, u3.sorted_elements(), class_candidates(u3, 2)
        )
        assert tally.ok, tally.mismatches

    def test_sampled_larger_formulas(self, u3):
        """Verify seeded formulas of size 5 to 7."""
        rng = random.Random(7)
        formulas = [random_formula(rng, size, ("x1", "x2"), ("B1",)) for size in (5, 6, 7) for _ in range(10)]
        tally = oracle_equivalence(formulas, 2, u3.sorted_elements(), class_candidates(u3, 1))
        assert tally.ok, tally.mismatches

    def test_brute_force_relation_shape(self, u3):
        """Verify A^φ collects left-nested tuples."""
        relation = brute_force_relation(Member("x1", "x2"), [ONE, TWO])
        assert relation == hf_set(kpair(EMPTY, ONE))


class TestMonotonicity:
    """Test suite for monotonicity of positive formulas."""

    def test_larger_sets_restrict_to_smaller(self, u3):
        """Verify A^φ over a_i ⊆ U_3 is A^φ over U_3 cut down to a_1 × a_2."""
        elems = u3.sorted_elements()
        for phi in enumerate_formulas(3, ("x1", "x2")):
            full = compiled_relation(phi, [u3, u3])
            for a1 in elems:
                for a2 in elems:
                    restricted = frozenset(
                        t for t in full.members if unpair(t)[0] in a1.members and unpair(t)[1] in a2.members
                    )
                    small = compiled_relation(phi, [a1, a2])
                    assert small.members == restricted, f"{format_formula(phi)} on {a1}, {a2}"

    def test_smaller_class_selects_more(self, u3):
        """Verify shrinking B1 can only enlarge {x ∈ U_3 | φ}."""
        candidates = class_candidates(u3, 2)
        nested = [(small, large) for small in candidates for large in candidates if small <= large]
        for phi in enumerate_formulas(3, ("x1",), ("B1",)):
            for small, large in nested:
                wide = specification_set(phi, u3, [], [small])
                narrow = specification_set(phi, u3, [], [large])
                assert narrow.members <= wide.members, f"{format_formula(phi)} with B1 {sorted(map(str, large))}"


class TestSpecification:
    """Test suite for specification_set and distributivity."""

    def test_membership_instance(self):
        """Verify {x ∈ {∅, {∅}} | x ∈ {∅}} = {∅}."""
        assert specification_set(parse_formula("(in x1 x2)"), TWO, [ONE]) == ONE

    def test_trivial_formula(self, u3):
        """Verify x1 = x1 selects all of c."""
        assert specification_set(Equal("x1", "x1"), u3) == u3

    def test_class_parameter_instance(self):
        """Verify {x ∈ {∅, {∅}, {{∅}}} | ∀z ∈ {∅}: z ∈ x} = {{∅}}."""
        c = hf_set(EMPTY, ONE, hf_set(ONE))
        phi = parse_formula("(allp z B1 (in z x1))")
        assert specification_set(phi, c, [], [frozenset({EMPTY})]) == hf_set(ONE)

    def test_random_instances_agree(self, u3, rng):
        """Verify the two paths agree on seeded instances."""
        elems = u3.sorted_elements()
        candidates = class_candidates(u3, 2)
        for _ in range(100):
            phi = random_formula(rng, rng.randint(1, 5), ("x1", "x2"), ("B1",))
            specification_set(phi, rng.choice(elems), [rng.choice(elems)], [rng.choice(candidates)])

    def test_distributivity_single_family(self):
        """Verify d = {1}, J_1 = {a} gives a on both sides."""
        left, right = distributivity_sides([1], {1: [TWO]})
        assert left == right == TWO

    def test_distributivity_two_families(self):
        """Verify both sides are {∅} for J_1 = {{∅}}, J_2 = {{∅}, {∅, {∅}}}."""
        left, right = distributivity_sides([1, 2], {1: [ONE], 2: [ONE, TWO]})
        assert left == right == ONE

    def test_distributivity_random(self, u3, rng):
        """Verify the law on seeded families over U_3."""
        elems = u3.sorted_elements()
        for _ in range(200):
            d = list(range(rng.randint(1, 3)))
            J = {i: rng.sample(elems, rng.randint(1, 3)) for i in d}
            assert check_distributivity(d, J), f"d={d}, J={J}"

    def test_empty_family_rejected(self):
        """Verify an empty J_i is refused."""
        with pytest.raises(ValueError):
            check_distributivity([1], {1: []})
