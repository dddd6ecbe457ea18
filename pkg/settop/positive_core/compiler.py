"""
Formula Compiler

compile_formula turns a positive formula with free variables x1..xm into a
template. Given sets a_1..a_m and the class parameters, the template builds
a closed term whose value is

    A^φ = {<x_1, ..., x_m> ∈ a_1 × ... × a_m | φ(x_1, ..., x_m)}

The construction recurses on φ over a growing variable list:

    allp z Bp ψ      ⋂_{x ∈ Bp} dom(A^ψ with z ranging over {x})
    some z v ψ       dom(A^{ψ ∧ z ∈ v} with z ranging over ⋃a_v)
    all z v ψ        dom(Sel(A^{ψ ∧ y = v} over .., a_v, ⋃a_v ; A^{y = v} over .., a_v))
    and / or         intersection / union
    atoms            products, ×₂ and the ∈/Δ filters; a variable the atom
                     does not mention is peeled off the end of the list

Source map of corrected entries (each confirmed by the brute-force oracle):
  - x1 ∈ x1 over a single variable is dom(Δ ∩ E ∩ a_1²); dom(E ∩ a_1²)
    would return the members of a_1 that are elements of some member.
  - the ∀ case selects from the pairs <t, y> with y = x_v, not from
    a_1 × ... × a_m × a_v: an atom or empty y ≠ x_v makes ∀z∈y vacuous and
    would leak t.
  - an atom on the last variable alone, with m ≥ 2, is
    (a_1 × ... × a_{m-1}) × A^φ_{a_m}.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from settop.hf_universe.objects import HFObject
from settop.positive_core.formulas import (
    And,
    Equal,
    ExistsIn,
    ForallIn,
    ForallParam,
    Formula,
    FormulaError,
    Member,
    Or,
    class_params,
    formula_size,
    free_variables,
    param_index,
    validate,
    var_index,
)
from settop.positive_core.terms import (
    BigUnion,
    DeltaCap,
    Domain,
    ECap,
    ForallSelector,
    Intersect,
    Inverse,
    Lift,
    Pair,
    Perm231,
    Perm312,
    Product,
    Product2,
    Term,
    UnionOf,
    term_size,
)

logger = logging.getLogger(__name__)


class CompilationError(ValueError):
    """Formula outside the compilable fragment or bad template arguments."""
    pass


def _tuple_product(args: Sequence[Term]) -> Term:
    """a_1 × ... × a_k as left-nested products; k = 1 gives a_1."""
    out = args[0]
    for a in args[1:]:
        out = Product(out, a)
    return out


def _swap23(t: Term) -> Term:
    """<x, y, z> -> <x, z, y>"""
    return Perm312(Perm231(t))


@dataclass(frozen=True)
class CompiledFormula:
    formula: Formula
    m: int

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(f"x{i}" for i in range(1, self.m + 1))

    def instantiate(
        self,
        sets: Sequence[HFObject],
        classes: Sequence[frozenset] = (),
    ) -> Term:
        """Closed term for A^φ over the given set and class parameters."""
        if len(sets) != self.m:
            raise CompilationError(f"expected {self.m} set parameters, got {len(sets)}")
        for name in class_params(self.formula):
            i = param_index(name)
            if i > len(classes):
                raise CompilationError(f"class parameter {name} is not supplied")
            if not classes[i - 1]:
                raise CompilationError(f"class parameter {name} is empty")
        builder = _Builder(classes)
        return builder.build(self.formula, list(self.variables), [Lift(a) for a in sets])


class _Builder:
    def __init__(self, classes: Sequence[frozenset]):
        self.classes = classes
        self.fresh = 0

    def _fresh(self) -> str:
        self.fresh += 1
        return f"_y{self.fresh}"

    def build(self, phi: Formula, names: List[str], args: List[Term]) -> Term:
        if isinstance(phi, ForallParam):
            members = sorted(self.classes[param_index(phi.param) - 1], key=lambda e: e.sort_key)
            terms = []
            for x in members:
                single = Pair(Lift(x), Lift(x))
                terms.append(Domain(self.build(phi.body, names + [phi.var], args + [single])))
            out = terms[0]
            for t in terms[1:]:
                out = Intersect(out, t)
            return out

        if isinstance(phi, ExistsIn):
            i = names.index(phi.bound)
            body = And(phi.body, Member(phi.var, phi.bound))
            return Domain(self.build(body, names + [phi.var], args + [BigUnion(args[i])]))

        if isinstance(phi, ForallIn):
            i = names.index(phi.bound)
            y = self._fresh()
            relation = self.build(
                And(phi.body, Equal(y, phi.bound)),
                names + [y, phi.var],
                args + [args[i], BigUnion(args[i])],
            )
            base = self.build(Equal(y, phi.bound), names + [y], args + [args[i]])
            return Domain(ForallSelector(relation, base))

        if isinstance(phi, And):
            return Intersect(self.build(phi.left, names, args), self.build(phi.right, names, args))

        if isinstance(phi, Or):
            return UnionOf(self.build(phi.left, names, args), self.build(phi.right, names, args))

        return self._atomic(phi, names, args)

    def _atomic(self, phi: Formula, names: List[str], args: List[Term]) -> Term:
        last = names[-1]
        mentioned = {phi.left, phi.right}

        if last not in mentioned:
            return Product(self._atomic(phi, names[:-1], args[:-1]), args[-1])

        if phi.left == phi.right:
            if len(names) == 1:
                a = args[0]
                if isinstance(phi, Equal):
                    return a
                return Domain(DeltaCap(ECap(Product(a, a))))
            inner = self._atomic(phi, [last], [args[-1]])
            return Product(_tuple_product(args[:-1]), inner)

        other = phi.left if phi.right == last else phi.right
        if other != names[-2]:
            reduced = self._atomic(phi, names[:-2] + [last], args[:-2] + [args[-1]])
            return _swap23(Product(reduced, args[-2]))

        before, here = args[-2], args[-1]
        if isinstance(phi, Equal):
            relation = DeltaCap(Product(before, here))
        elif phi.left == other:
            relation = ECap(Product(before, here))
        else:
            relation = Inverse(ECap(Product(here, before)))
        if len(names) == 2:
            return relation
        return Product2(_tuple_product(args[:-2]), relation)


def compile_formula(phi: Formula, m: int) -> CompiledFormula:
    """Validate φ against x1..xm and return its template."""
    if not isinstance(phi, Formula):
        raise CompilationError(f"not a positive formula: {phi!r}")
    if m < 1:
        raise CompilationError("arity must be at least 1")
    try:
        validate(phi)
        for v in free_variables(phi):
            if var_index(v) > m:
                raise CompilationError(f"free variable {v} exceeds arity {m}")
    except FormulaError as e:
        raise CompilationError(str(e))
    logger.debug(f"Compiled {phi} at arity {m}")
    return CompiledFormula(phi, m)


def term_size_bound(size: int, m: int, class_size: int = 1) -> int:
    """
    Upper bound on term_size of an instantiated template.

    Variable lists never exceed m + 2·size entries, argument terms never
    exceed size + 1 nodes, and each formula node multiplies the bound by at
    most 2c + 5 for class parameters of size c.
    """
    c = max(class_size, 1)
    atomic = (m + 2 * size) * (size + 4) + 6
    return atomic * (2 * c + 5) ** size


def compiled_term_size(phi: Formula, m: int, sets: Sequence[HFObject], classes: Sequence[frozenset] = ()) -> int:
    term = compile_formula(phi, m).instantiate(sets, classes)
    size = term_size(term)
    bound = term_size_bound(formula_size(phi), m, max((len(c) for c in classes), default=1))
    if size > bound:
        raise CompilationError(f"term size {size} exceeds bound {bound} for {phi}")
    return size
