"""
Positive Formulas

Grammar (s-expressions, `;` starts a comment):
    (in a b)  (= a b)  (and φ ψ)  (or φ ψ)
    (some z a φ)  (all z a φ)     bounded by a variable a in scope
    (allp z Bp φ)                 bounded by class parameter Bp
Free variables are x1, x2, ...; class parameters B1, B2, ...; bound
variables are any other identifier, fresh and never shadowing.
A formula without `allp` is bounded-positive (BPF), otherwise generalized
(GPF). Negation and implication are not part of the language.
"""

import logging
import random
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Iterator, List, Mapping, Sequence, Set, Tuple

from settop.hf_universe.objects import HFObject

logger = logging.getLogger(__name__)

FREE_VAR = re.compile(r"^x[1-9][0-9]*$")
CLASS_PARAM = re.compile(r"^B[1-9][0-9]*$")
IDENT = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
HEADS = ("in", "=", "and", "or", "some", "all", "allp")


class FormulaError(ValueError):
    """Ill-formed formula or evaluation environment."""
    pass


class FormulaSyntaxError(FormulaError):
    """Parse error with the offending character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


# ============================================================================
# AST
# ============================================================================

class Formula:
    """Base of all formula nodes."""

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Member(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Equal(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsIn(Formula):
    var: str
    bound: str
    body: Formula


@dataclass(frozen=True)
class ForallIn(Formula):
    var: str
    bound: str
    body: Formula


@dataclass(frozen=True)
class ForallParam(Formula):
    var: str
    param: str
    body: Formula


Atomic = (Member, Equal)
Quantified = (ExistsIn, ForallIn, ForallParam)


def formula_size(phi: Formula) -> int:
    """Number of AST nodes."""
    if isinstance(phi, Atomic):
        return 1
    if isinstance(phi, (And, Or)):
        return 1 + formula_size(phi.left) + formula_size(phi.right)
    return 1 + formula_size(phi.body)


def free_variables(phi: Formula) -> FrozenSet[str]:
    if isinstance(phi, Atomic):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, (And, Or)):
        return free_variables(phi.left) | free_variables(phi.right)
    inner = free_variables(phi.body) - {phi.var}
    if isinstance(phi, ForallParam):
        return inner
    return inner | {phi.bound}


def class_params(phi: Formula) -> FrozenSet[str]:
    if isinstance(phi, Atomic):
        return frozenset()
    if isinstance(phi, (And, Or)):
        return class_params(phi.left) | class_params(phi.right)
    inner = class_params(phi.body)
    return inner | {phi.param} if isinstance(phi, ForallParam) else inner


def is_bpf(phi: Formula) -> bool:
    return not class_params(phi)


def var_index(name: str) -> int:
    """1-based index of a free variable xk."""
    if not FREE_VAR.match(name):
        raise FormulaError(f"{name} is not a free variable name")
    return int(name[1:])


def param_index(name: str) -> int:
    if not CLASS_PARAM.match(name):
        raise FormulaError(f"{name} is not a class parameter name")
    return int(name[1:])


def arity(phi: Formula) -> int:
    """Least m with every free variable among x1..xm (at least 1)."""
    return max((var_index(v) for v in free_variables(phi)), default=1)


def validate(phi: Formula, scope: Sequence[str] = ()) -> None:
    """
    Check variable discipline: bound variables are fresh identifiers that
    never shadow, atoms and bounds use variables in scope or free ones.
    """
    bound_names: Set[str] = set(scope)

    def visit(node: Formula, in_scope: Set[str]) -> None:
        if isinstance(node, Atomic):
            for v in (node.left, node.right):
                if v not in in_scope and not FREE_VAR.match(v):
                    raise FormulaError(f"variable {v} is not in scope")
            return
        if isinstance(node, (And, Or)):
            visit(node.left, in_scope)
            visit(node.right, in_scope)
            return
        if not IDENT.match(node.var) or FREE_VAR.match(node.var) or CLASS_PARAM.match(node.var):
            raise FormulaError(f"bound variable {node.var} must differ from free variables and parameters")
        if node.var in in_scope:
            raise FormulaError(f"bound variable {node.var} is already in scope")
        if isinstance(node, ForallParam):
            param_index(node.param)
        elif node.bound not in in_scope and not FREE_VAR.match(node.bound):
            raise FormulaError(f"bound {node.bound} is not in scope")
        visit(node.body, in_scope | {node.var})

    visit(phi, bound_names)


# ============================================================================
# PARSER / PRINTER
# ============================================================================

def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        else:
            start = i
            while i < len(text) and not text[i].isspace() and text[i] not in "();":
                i += 1
            tokens.append((text[start:i], start))
    return tokens


class FormulaParser:
    """Recursive descent over the token list of one formula."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def _next(self) -> Tuple[str, int]:
        if self.pos >= len(self.tokens):
            raise FormulaSyntaxError("unexpected end of input", len(self.text))
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _symbol(self, what: str) -> str:
        tok, at = self._next()
        if tok in "()":
            raise FormulaSyntaxError(f"expected {what}, found {tok!r}", at)
        if not IDENT.match(tok):
            raise FormulaSyntaxError(f"invalid {what} {tok!r}", at)
        return tok

    def _close(self) -> None:
        tok, at = self._next()
        if tok != ")":
            raise FormulaSyntaxError(f"expected ')', found {tok!r}", at)

    def parse(self) -> Formula:
        phi = self._formula()
        if self.pos != len(self.tokens):
            tok, at = self.tokens[self.pos]
            raise FormulaSyntaxError(f"trailing input {tok!r}", at)
        validate(phi)
        return phi

    def _formula(self) -> Formula:
        tok, at = self._next()
        if tok != "(":
            raise FormulaSyntaxError(f"expected '(', found {tok!r}", at)
        head, head_at = self._next()
        if head not in HEADS:
            raise FormulaSyntaxError(f"unknown head: {head}", head_at)
        if head in ("in", "="):
            left = self._symbol("variable")
            right = self._symbol("variable")
            self._close()
            return Member(left, right) if head == "in" else Equal(left, right)
        if head in ("and", "or"):
            left = self._formula()
            right = self._formula()
            self._close()
            return And(left, right) if head == "and" else Or(left, right)
        var = self._symbol("bound variable")
        bound = self._symbol("bound")
        body = self._formula()
        self._close()
        if head == "some":
            return ExistsIn(var, bound, body)
        if head == "all":
            return ForallIn(var, bound, body)
        return ForallParam(var, bound, body)


def parse_formula(text: str) -> Formula:
    return FormulaParser(text).parse()


def parse_formula_file(text: str) -> List[Formula]:
    """One formula per line; blank and comment-only lines are skipped."""
    out = []
    for line_no, line in enumerate(text.splitlines(), 1):
        if not _tokenize(line):
            continue
        try:
            out.append(parse_formula(line))
        except FormulaError as e:
            raise FormulaError(f"line {line_no}: {e}")
    return out


def format_formula(phi: Formula) -> str:
    if isinstance(phi, Member):
        return f"(in {phi.left} {phi.right})"
    if isinstance(phi, Equal):
        return f"(= {phi.left} {phi.right})"
    if isinstance(phi, And):
        return f"(and {format_formula(phi.left)} {format_formula(phi.right)})"
    if isinstance(phi, Or):
        return f"(or {format_formula(phi.left)} {format_formula(phi.right)})"
    head = {ExistsIn: "some", ForallIn: "all", ForallParam: "allp"}[type(phi)]
    bound = phi.param if isinstance(phi, ForallParam) else phi.bound
    return f"({head} {phi.var} {bound} {format_formula(phi.body)})"


# ============================================================================
# EVALUATION
# ============================================================================

def _hf_members(x: HFObject) -> FrozenSet[HFObject]:
    return x.members


@dataclass(frozen=True)
class Universe:
    """
    Set parameters a_1..a_m and class parameters B_1..B_n. `members` gives
    the elements of an object (HF membership by default; audits plug in a
    structure's digraph).
    """

    sets: Tuple[Any, ...] = ()
    classes: Tuple[FrozenSet[Any], ...] = ()
    members: Callable[[Any], FrozenSet[Any]] = field(default=_hf_members, compare=False)

    def class_param(self, name: str) -> FrozenSet[Any]:
        i = param_index(name)
        if i > len(self.classes):
            raise FormulaError(f"class parameter {name} is not bound")
        return self.classes[i - 1]


def eval_formula(phi: Formula, env: Mapping[str, Any], U: Universe = Universe()) -> bool:
    """Satisfaction by structural recursion; atoms have no elements."""

    def ev(node: Formula, env: Mapping[str, Any]) -> bool:
        if isinstance(node, Member):
            return env_value(node.left, env) in U.members(env_value(node.right, env))
        if isinstance(node, Equal):
            return env_value(node.left, env) == env_value(node.right, env)
        if isinstance(node, And):
            return ev(node.left, env) and ev(node.right, env)
        if isinstance(node, Or):
            return ev(node.left, env) or ev(node.right, env)
        if isinstance(node, ForallParam):
            rng = U.class_param(node.param)
        else:
            rng = U.members(env_value(node.bound, env))
        check = any if isinstance(node, ExistsIn) else all
        return check(ev(node.body, {**env, node.var: e}) for e in rng)

    def env_value(v: str, local: Mapping[str, Any]) -> Any:
        try:
            return local[v]
        except KeyError:
            raise FormulaError(f"variable {v} is not assigned")

    return ev(phi, env)


# ============================================================================
# ENUMERATION
# ============================================================================

def _bound_name(depth: int) -> str:
    return f"z{depth + 1}"


def enumerate_formulas(
    max_size: int,
    free: Sequence[str] = ("x1", "x2"),
    params: Sequence[str] = (),
    min_size: int = 1,
) -> Iterator[Formula]:
    """
    Every positive formula of size min_size..max_size over the given free
    variables and class parameters, bound variables named z1, z2, ... by
    nesting depth. Deterministic order: by size, then construction order.
    """
    cache: Dict[Tuple[int, Tuple[str, ...]], List[Formula]] = {}

    def build(size: int, scope: Tuple[str, ...]) -> List[Formula]:
        key = (size, scope)
        if key in cache:
            return cache[key]
        out: List[Formula] = []
        if size == 1:
            for a in scope:
                for b in scope:
                    out.append(Member(a, b))
            for a in scope:
                for b in scope:
                    out.append(Equal(a, b))
        else:
            for left_size in range(1, size - 1):
                lefts = build(left_size, scope)
                rights = build(size - 1 - left_size, scope)
                for ctor in (And, Or):
                    for l in lefts:
                        for r in rights:
                            out.append(ctor(l, r))
            var = _bound_name(len(scope) - len(free))
            inner = scope + (var,)
            bodies = build(size - 1, inner)
            for ctor in (ExistsIn, ForallIn):
                for bound in scope:
                    for body in bodies:
                        out.append(ctor(var, bound, body))
            for p in params:
                for body in bodies:
                    out.append(ForallParam(var, p, body))
        cache[key] = out
        return out

    for size in range(min_size, max_size + 1):
        yield from build(size, tuple(free))


def random_formula(
    rng: random.Random,
    size: int,
    free: Sequence[str] = ("x1", "x2"),
    params: Sequence[str] = (),
) -> Formula:
    """A formula of exactly `size` nodes drawn by seeded recursive choice."""

    def draw(size: int, scope: Tuple[str, ...]) -> Formula:
        if size == 1:
            ctor = rng.choice((Member, Equal))
            return ctor(rng.choice(scope), rng.choice(scope))
        kinds = ["quantifier"]
        if size >= 3:
            kinds.append("connective")
        if rng.choice(kinds) == "connective":
            left_size = rng.randint(1, size - 2)
            ctor = rng.choice((And, Or))
            return ctor(draw(left_size, scope), draw(size - 1 - left_size, scope))
        var = _bound_name(len(scope) - len(free))
        body = draw(size - 1, scope + (var,))
        choices = ["some", "all"] + (["allp"] if params else [])
        kind = rng.choice(choices)
        if kind == "allp":
            return ForallParam(var, rng.choice(list(params)), body)
        ctor = ExistsIn if kind == "some" else ForallIn
        return ctor(var, rng.choice(scope), body)

    if size < 1:
        raise FormulaError("formula size must be positive")
    return draw(size, tuple(free))
