"""
Test suite for the acceptance criteria.

Validates:
- The compiler oracle ranges the free variables over the elements of U_3
"""

from settop.acceptance import class_candidates, compiler_oracle, u3
from settop.positive_core.formulas import enumerate_formulas
from settop.positive_core.specification import class_choices
from settop.report import Verdict

SMALL_ORACLE = {
    "acceptance": {
        "formula_exhaustive_size": 2,
        "formula_free": 1,
        "formula_size": 2,
        "formula_samples": 0,
        "class_size": 1,
    }
}


class TestCompilerOracle:
    """Test suite for the compiler oracle criterion."""

    def test_instances_per_formula(self):
        """Verify each formula is checked once per element of U_3 and class binding."""
        checks = compiler_oracle(SMALL_ORACLE, seed=0)
        exhaustive = checks[0]
        universe = u3()
        candidates = class_candidates(universe, 1)
        expected = sum(
            len(universe.sorted_elements()) * len(class_choices(phi, candidates))
            for phi in enumerate_formulas(2, ("x1",), ("B1",))
        )
        assert len(universe.sorted_elements()) == 4, f"U_3 has {len(universe.sorted_elements())} elements"
        assert exhaustive.passed + exhaustive.failed == expected, (
            f"Expected {expected} instances, got {exhaustive.passed + exhaustive.failed}"
        )
        assert exhaustive.verdict == Verdict.PASS, f"Oracle failures: {exhaustive.witnesses}"
