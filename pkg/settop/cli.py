"""
settop command line.

    settop [--json] [--seed N] [--unsafe-limits] [--timing] [--log-level L] COMMAND

Exit codes: 0 when every check passes, 1 when a check fails (including a
disagreement between two computation paths), 2 on malformed input or a
refused size.
"""

import functools
import json
import logging
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click

from settop import acceptance
from settop.finite_topology import (
    KBound,
    PointSet,
    brute_force_separation,
    closure,
    enumerate_topologies,
    interior,
    is_continuous,
    is_discrete_subset,
    is_homeomorphism,
    is_k_compact,
    is_relatively_discrete,
    is_topology,
    separation_profile,
    sorted_family,
    space_from_json,
    space_to_json,
)
from settop.hf_universe.hyperuniverse import search_hyperuniverses
from settop.hf_universe.inner_model import build_w3, check_interpretation_conditions
from settop.hf_universe.objects import HFSet, canonicalize, format_hf, parse_hf
from settop.hf_universe.ordinals import (
    EMPTY_ZERO,
    Zero,
    atoms_zero,
    enumerate_zero_ordinals,
    is_pristine,
    is_wellfounded,
    is_zero,
    is_zero_ordinal,
    ordinal_law_violations,
    trcl,
)
from settop.hf_universe.structures import MembershipStructure, audit_axioms
from settop.hyperspace import (
    NonClosedImageError,
    box_diamond_identities,
    double_exp_space,
    exp_space,
    hyperspace_to_json,
    induced_map,
    kuratowski_check,
    load_space,
    map_from_json,
    map_to_json,
    separation_transfer,
)
from settop.positive_core.compiler import compile_formula, term_size_bound
from settop.positive_core.formulas import (
    Universe,
    arity,
    class_params,
    eval_formula,
    format_formula,
    formula_size,
    is_bpf,
    parse_formula,
    parse_formula_file,
)
from settop.positive_core.specification import ConsistencyFault, brute_force_relation
from settop.positive_core.terms import eval_term, expand_derived, format_term, term_size
from settop.report import Report, check_of
from settop.utils.config import DEFAULTS, check_limit, config_path, load_config, save_config, setup_logging
from settop.wellorder import (
    ChoiceFunction,
    approximation_chain,
    chain_embedding,
    chain_problems,
    order_invariants,
    order_type_arithmetic,
    ordinal,
    random_choice_function,
    wellorder_from_choice,
)

logger = logging.getLogger("settop.cli")


@dataclass
class RunContext:
    settings: Dict[str, Dict[str, Any]]
    seed: int
    as_json: bool
    unsafe: bool
    timing: bool
    argv: List[str]


def _emit(run: RunContext, report: Report) -> None:
    if run.as_json:
        click.echo(report.to_json(include_timing=run.timing))
    else:
        click.echo(report.to_text())
    raise click.exceptions.Exit(0 if report.ok else 1)


def reported(fn: Callable[..., Report]) -> Callable:
    """
    Run a command body that returns a Report. Malformed input becomes a
    usage error (exit 2); a consistency fault becomes a failed check (exit 1).
    """

    @functools.wraps(fn)
    @click.pass_obj
    def wrapper(run: RunContext, *args, **kwargs):
        started = time.perf_counter()
        try:
            report = fn(run, *args, **kwargs)
        except ConsistencyFault as e:
            logger.error(f"❌ {e}")
            report = Report(command=run.argv, seed=run.seed, checks=[check_of("consistency", False, str(e))])
        except (ValueError, KeyError) as e:
            raise click.UsageError(str(e))
        if report.timing is None:
            report.timing = time.perf_counter() - started
        _emit(run, report)

    return wrapper


def _report(run: RunContext, **data: Any) -> Report:
    return Report(command=run.argv, seed=run.seed, data=dict(data))


def _read_json(path: str) -> Dict[str, Any]:
    with open(path) as f:
        return json.load(f)


def _points(n: int, text: Optional[str]) -> PointSet:
    if not text:
        return PointSet.empty(n)
    return PointSet.of(n, (int(p) for p in text.split(",") if p.strip()))


def _zero(text: str) -> Zero:
    if text == "empty":
        return EMPTY_ZERO
    if text == "pair":
        return atoms_zero()
    value = parse_hf(text)
    if not isinstance(value, HFSet):
        raise click.BadParameter(f"a zero must be a set, got {text}")
    return Zero(value)


def _atoms(text: str, z: Zero) -> frozenset:
    if text == "empty":
        return frozenset()
    if text == "zero":
        return z.members
    return parse_hf(text).members


def _assignments(pairs: List[str]) -> Dict[str, Any]:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise click.BadParameter(f"expected NAME=VALUE, got {item!r}")
        name, value = item.split("=", 1)
        out[name.strip()] = parse_hf(value)
    return out


# ============================================================================
# ROOT
# ============================================================================

@click.group()
@click.option("--json", "as_json", is_flag=True, help="Write the report as JSON.")
@click.option("--seed", type=int, envvar="SETTOP_SEED", default=None, help="Seed for sampled checks.")
@click.option("--unsafe-limits", is_flag=True, help="Lift the desk-scale size guards.")
@click.option("--timing", is_flag=True, help="Include elapsed time in JSON reports.")
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR.")
@click.option("--config", "config_file", type=click.Path(dir_okay=False), default=None, help="Config file.")
@click.pass_context
def cli(ctx, as_json, seed, unsafe_limits, timing, log_level, config_file):
    """Finite-model lab for topological set theory."""
    settings = load_config(Path(config_file) if config_file else None)
    setup_logging(settings["run"]["log_dir"], log_level or settings["run"]["log_level"])
    ctx.obj = RunContext(
        settings=settings,
        seed=seed if seed is not None else int(settings["run"]["seed"]),
        as_json=as_json,
        unsafe=unsafe_limits,
        timing=timing,
        argv=[],
    )


def _argv(ctx: click.Context) -> List[str]:
    names = []
    while ctx is not None and ctx.parent is not None:
        names.append(ctx.info_name)
        ctx = ctx.parent
    return list(reversed(names))


def _with_argv(fn: Callable) -> Callable:
    """Record the command path and its parameters in the report echo."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        params = [f"--{k.replace('_', '-')}={v}" for k, v in sorted(kwargs.items()) if v not in (None, False, ())]
        ctx.find_object(RunContext).argv = _argv(ctx) + params
        return fn(*args, **kwargs)

    return wrapper


# ============================================================================
# TOPO
# ============================================================================

@cli.group()
def topo():
    """Finite topologies and exponential spaces."""


@topo.command("enum")
@click.option("--points", type=int, required=True)
@click.option("--check-separation", is_flag=True)
@_with_argv
@reported
def topo_enum(run: RunContext, points: int, check_separation: bool) -> Report:
    spaces = list(enumerate_topologies(points, run.unsafe, run.settings["limits"]))
    rows = []
    all_valid = True
    implications = []
    oracle = []
    for T in spaces:
        all_valid = all_valid and is_topology(points, T.closed)
        row: Dict[str, Any] = {"closed": space_to_json(T)["closed"]}
        if check_separation:
            p = separation_profile(T)
            row["profile"] = p.as_dict()
            if (p.t2 and not p.t1) or (p.t1 and not p.t0) or (p.t3 and not p.regular) or (p.t4 and not p.normal):
                implications.append(repr(T))
            if points <= 4 and p != brute_force_separation(T):
                oracle.append(repr(T))
        rows.append(row)

    report = _report(run, count=len(spaces), topologies=rows)
    report.checks.append(check_of("every family is a topology", all_valid, f"{len(spaces)} topologies"))
    if check_separation:
        report.checks.append(check_of("t2 ⇒ t1 ⇒ t0, t3 ⇒ regular, t4 ⇒ normal", not implications, witnesses=implications))
        report.checks.append(check_of("separation flags agree with the brute-force oracle", not oracle, witnesses=oracle))
    return report


@topo.command("check")
@click.argument("space_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", "k", default="unbounded", help="KBound: an integer or 'unbounded'.")
@click.option("--subset", default=None, help="Comma-separated points for closure/interior/discreteness.")
@_with_argv
@reported
def topo_check(run: RunContext, space_file: str, k: str, subset: Optional[str]) -> Report:
    T = space_from_json(_read_json(space_file))
    K = KBound.parse(k)
    profile = separation_profile(T)
    report = _report(run, space=space_to_json(T), profile=profile.as_dict(), k_compact=is_k_compact(T, K))
    report.checks.append(check_of("is a topology", is_topology(T.n, T.closed)))
    if subset is not None:
        A = _points(T.n, subset)
        discrete = is_discrete_subset(T, A)
        report.data["subset"] = {
            "set": list(A.indices()),
            "closure": list(closure(T, A).indices()),
            "interior": list(interior(T, A).indices()),
            "discrete": discrete,
        }
        report.checks.append(
            check_of("discreteness characterizations agree", discrete == is_relatively_discrete(T, A))
        )
    return report


@topo.command("exp")
@click.argument("space_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--k", "k", default="unbounded")
@click.option("--double", is_flag=True, help="Also build Exp(Exp(X)).")
@click.option("--kuratowski", is_flag=True, help="Check the Kuratowski square for every closed set.")
@_with_argv
@reported
def topo_exp(run: RunContext, space_file: str, k: str, double: bool, kuratowski: bool) -> Report:
    T = load_space(_read_json(space_file))
    K = KBound.parse(k)
    H = exp_space(T, K)
    report = _report(run, hyperspace=hyperspace_to_json(H))
    failures = box_diamond_identities(T)
    report.checks.append(check_of("□/◊ identities", not failures, witnesses=failures))
    if separation_profile(T).t0:
        transfer = separation_transfer(T, K)
        broken = [name for name, holds in transfer.items() if not holds]
        report.checks.append(check_of("separation transfer", not broken, witnesses=broken))
    if double:
        _, second = double_exp_space(T, K, run.unsafe, run.settings["limits"])
        report.data["double_points"] = len(second.points)
    if kuratowski:
        limits = run.settings["limits"]
        bad = [repr(a) for a in sorted_family(T.closed) if not kuratowski_check(T, a, run.unsafe, limits)]
        report.checks.append(check_of("Kuratowski containment", not bad, witnesses=bad))
    return report


@topo.command("map")
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("codomain_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("map_file", type=click.Path(exists=True, dir_okay=False))
@_with_argv
@reported
def topo_map(run: RunContext, domain_file: str, codomain_file: str, map_file: str) -> Report:
    X = load_space(_read_json(domain_file))
    Y = load_space(_read_json(codomain_file))
    n, m, f = map_from_json(_read_json(map_file))
    if (n, m) != (X.n, Y.n):
        raise ValueError(f"map {n} -> {m} does not fit spaces of {X.n} and {Y.n} points")
    continuous = is_continuous(f, X, Y)
    report = _report(run, homeomorphism=is_homeomorphism(f, X, Y))
    report.checks.append(check_of("continuous", continuous))
    if continuous:
        HX, HY = exp_space(X), exp_space(Y)
        try:
            table = induced_map(f, HX, HY)
        except NonClosedImageError as e:
            # Exp(f) is undefined, not wrong
            report.data["exp_map"] = None
            report.data["exp_map_error"] = str(e)
        else:
            report.data["exp_map"] = map_to_json(table, HX.topology, HY.topology)
            report.checks.append(check_of("Exp(f) continuous", is_continuous(table, HX.topology, HY.topology)))
    return report


# ============================================================================
# FORMULA
# ============================================================================

@cli.group()
def formula():
    """Positive formulas, their compilation and the oracle checks."""


@formula.command("parse")
@click.argument("text", required=False)
@click.option("--file", "formula_file", type=click.Path(exists=True, dir_okay=False))
@_with_argv
@reported
def formula_parse(run: RunContext, text: Optional[str], formula_file: Optional[str]) -> Report:
    if formula_file:
        formulas = parse_formula_file(Path(formula_file).read_text())
    elif text:
        formulas = [parse_formula(text)]
    else:
        raise click.UsageError("give a formula or --file")
    rows = [
        {"formula": format_formula(phi), "size": formula_size(phi), "bpf": is_bpf(phi), "arity": arity(phi)}
        for phi in formulas
    ]
    report = _report(run, formulas=rows)
    report.checks.append(
        check_of("printing round-trips", all(parse_formula(format_formula(phi)) == phi for phi in formulas))
    )
    return report


@formula.command("eval")
@click.argument("text")
@click.option("--env", "env", multiple=True, help="Assignment such as x1={{}}.")
@click.option("--class", "classes", multiple=True, help="Class parameter such as B1={{}, {{}}}.")
@_with_argv
@reported
def formula_eval(run: RunContext, text: str, env, classes) -> Report:
    phi = parse_formula(text)
    bound = _assignments(list(classes))
    U = Universe(classes=tuple(bound[f"B{i}"].members for i in range(1, len(bound) + 1)))
    value = eval_formula(phi, _assignments(list(env)), U)
    return _report(run, formula=format_formula(phi), value=value)


@formula.command("compile")
@click.argument("text")
@click.option("--set", "sets", multiple=True, help="Set parameter a_i as HF text, in order.")
@click.option("--class", "classes", multiple=True, help="Class parameter B_i as an HF set literal, in order.")
@click.option("--expand", is_flag=True, help="Lower derived operations to primitives.")
@_with_argv
@reported
def formula_compile(run: RunContext, text: str, sets, classes, expand: bool) -> Report:
    phi = parse_formula(text)
    check_limit("formula size", formula_size(phi), run.settings["limits"]["max_formula_size"], run.unsafe)
    args = [parse_hf(s) for s in sets]
    if not args:
        raise click.UsageError("give the set parameters with --set")
    bound = [parse_hf(c).members for c in classes]
    term = compile_formula(phi, len(args)).instantiate(args, bound)
    if expand:
        term = expand_derived(term)
    value = eval_term(term)
    expected = brute_force_relation(phi, args, bound)
    report = _report(
        run,
        formula=format_formula(phi),
        term=format_term(term),
        term_size=term_size(term),
        value=format_hf(value, pair_sugar=True),
    )
    report.checks.append(check_of("compiled value equals brute force", value == expected,
                                  witnesses=[] if value == expected else [format_hf(expected, pair_sugar=True)]))
    if not expand:
        limit = term_size_bound(formula_size(phi), len(args), max((len(c) for c in bound), default=1))
        report.checks.append(check_of("term size within bound", term_size(term) <= limit, f"bound {limit}"))
    return report


@formula.command("check")
@click.option("--size", type=int, default=None, help="Largest formula size (default from config).")
@click.option("--universe", type=click.Choice(["u3"]), default="u3")
@click.option("--free", type=int, default=None, help="Largest number of free variables.")
@click.option("--samples", type=int, default=None, help="Sampled formulas per size above the exhaustive size.")
@_with_argv
@reported
def formula_check(run: RunContext, size, universe, free, samples) -> Report:
    settings = {section: dict(values) for section, values in run.settings.items()}
    acc = settings["acceptance"]
    if size is not None:
        check_limit("formula size", size, run.settings["limits"]["max_formula_size"], run.unsafe)
        acc["formula_size"] = size
        acc["formula_exhaustive_size"] = min(acc["formula_exhaustive_size"], size)
    if free is not None:
        acc["formula_free"] = free
    if samples is not None:
        acc["formula_samples"] = samples
    report = _report(run, universe=universe)
    report.checks.extend(acceptance.compiler_oracle(settings, run.seed))
    return report


@formula.command("distributivity")
@click.option("--instances", type=int, default=None)
@_with_argv
@reported
def formula_distributivity(run: RunContext, instances: Optional[int]) -> Report:
    settings = {section: dict(values) for section, values in run.settings.items()}
    if instances is not None:
        settings["acceptance"]["distributivity_instances"] = instances
    report = _report(run)
    report.checks.extend(acceptance.distributivity(settings, run.seed))
    return report


# ============================================================================
# HF
# ============================================================================

@cli.group()
def hf():
    """Hereditarily finite objects, zeros and ordinals."""


@hf.command("canon")
@click.argument("text")
@click.option("--pairs", is_flag=True, help="Print pair-shaped sets as <a, b>.")
@_with_argv
@reported
def hf_canon(run: RunContext, text: str, pairs: bool) -> Report:
    # nested lists and graph documents come as JSON, anything else is HF text
    raw = json.loads(text) if text.lstrip().startswith(("[", '{"')) else text
    x = canonicalize(raw)
    return _report(run, canonical=format_hf(x, pair_sugar=pairs), rank=x.rank)


@hf.command("zero")
@click.argument("text")
@_with_argv
@reported
def hf_zero(run: RunContext, text: str) -> Report:
    x = parse_hf(text)
    return _report(run, value=format_hf(x), zero=is_zero(x))


@hf.command("ordinals")
@click.option("--zero", "zero_text", default="empty", help="'empty', 'pair' or an HF set.")
@click.option("--limit", type=int, default=6)
@_with_argv
@reported
def hf_ordinals(run: RunContext, zero_text: str, limit: int) -> Report:
    z = _zero(zero_text)
    seq = enumerate_zero_ordinals(z, limit, run.unsafe, run.settings["limits"])
    report = _report(run, zero=str(z), ordinals=[format_hf(a) for a in seq])
    problems = ordinal_law_violations(z, seq)
    report.checks.append(check_of("ordinal order laws", not problems, witnesses=problems))
    return report


@hf.command("trcl")
@click.argument("text")
@click.option("--zero", "zero_text", default="empty")
@_with_argv
@reported
def hf_trcl(run: RunContext, text: str, zero_text: str) -> Report:
    z = _zero(zero_text)
    a = parse_hf(text)
    closed = trcl(z, a)
    report = _report(run, trcl=format_hf(closed))
    report.checks.append(check_of("trcl is idempotent", trcl(z, closed) == closed))
    return report


@hf.command("pristine")
@click.argument("text")
@click.option("--zero", "zero_text", default="empty")
@click.option("--atoms", "atoms_text", default="empty", help="'empty', 'zero' or an HF set literal.")
@_with_argv
@reported
def hf_pristine(run: RunContext, text: str, zero_text: str, atoms_text: str) -> Report:
    z = _zero(zero_text)
    a = parse_hf(text)
    B = _atoms(atoms_text, z)
    return _report(
        run,
        value=format_hf(a),
        pristine=is_pristine(z, B, a),
        wellfounded=is_wellfounded(z, a),
        ordinal=is_zero_ordinal(z, a),
    )


# ============================================================================
# INNER MODELS
# ============================================================================

@cli.group()
def innermodel():
    """Pristine inner models, structure audits and hyperuniverses."""


@innermodel.command("build")
@click.option("--zero", "zero_text", default="empty")
@click.option("--atoms", "atoms_text", default="empty")
@click.option("--rank", type=int, default=3)
@click.option("--k", "k", default="unbounded")
@click.option("--audit", is_flag=True, help="Evaluate the interpretation conditions.")
@_with_argv
@reported
def innermodel_build(run: RunContext, zero_text: str, atoms_text: str, rank: int, k: str, audit: bool) -> Report:
    z = _zero(zero_text)
    ctx = build_w3(z, _atoms(atoms_text, z), rank, run.unsafe, run.settings["limits"])
    report = _report(
        run,
        w_plus=[format_hf(x) for x in sorted(ctx.w_plus, key=lambda e: e.sort_key)],
        size=len(ctx.w_plus),
    )
    if audit:
        conditions = check_interpretation_conditions(ctx, KBound.parse(k))
        report.checks.extend(conditions.checks)
        report.data["out_of_bound"] = conditions.out_of_bound
    return report


@innermodel.command("audit")
@click.argument("structure_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--zero", "zero_text", default="empty")
@click.option("--atoms", "atoms_text", default="empty")
@click.option("--rank", type=int, default=3)
@click.option("--depth", type=int, default=3, help="Largest BPF size for specification instances.")
@click.option("--k", "k", default="unbounded")
@_with_argv
@reported
def innermodel_audit(run: RunContext, structure_file, zero_text, atoms_text, rank, depth, k) -> Report:
    check_limit("formula size", depth, run.settings["limits"]["max_formula_size"], run.unsafe)
    if structure_file:
        M = MembershipStructure.from_json(_read_json(structure_file))
    else:
        z = _zero(zero_text)
        M = build_w3(z, _atoms(atoms_text, z), rank, run.unsafe, run.settings["limits"]).structure()
    audit = audit_axioms(M, depth, KBound.parse(k))
    report = _report(run, structure=M.to_json())
    report.checks.extend(audit.checks)
    return report


@innermodel.command("hyperuniverse-search")
@click.option("--max-points", type=int, default=4)
@_with_argv
@reported
def innermodel_hyperuniverse(run: RunContext, max_points: int) -> Report:
    witnesses = search_hyperuniverses(max_points, unsafe=run.unsafe, limits=run.settings["limits"])
    report = _report(run, witnesses=[w.as_dict() for w in witnesses])
    report.checks.append(
        check_of("only the one-point hyperuniverse", len(witnesses) == 1 and witnesses[0].points == 1,
                 f"{len(witnesses)} witnesses")
    )
    return report


# ============================================================================
# WELL-ORDERS
# ============================================================================

@cli.group()
def wellorder():
    """Well-orders from choice functions and finite order arithmetic."""


@wellorder.command("from-choice")
@click.argument("choice_file", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--carrier", type=int, default=3)
@click.option("--rule", type=click.Choice(["min", "max", "random"]), default="min")
@_with_argv
@reported
def wellorder_from_choice_cmd(run: RunContext, choice_file, carrier: int, rule: str) -> Report:
    check_limit("carrier", carrier, run.settings["limits"]["max_points"], run.unsafe)
    if choice_file:
        f = ChoiceFunction.from_json(_read_json(choice_file))
    elif rule == "random":
        f = random_choice_function(carrier, random.Random(run.seed))
    else:
        f = ChoiceFunction.from_rule(carrier, min if rule == "min" else max)
    chain = approximation_chain(f)
    problems = chain_problems(chain, f)
    report = _report(run, choice=f.to_json(), chain=[list(b.indices()) for b in chain.stages])
    report.checks.append(check_of("approximation chain and bijection", not problems, witnesses=problems))
    if not problems:
        w = wellorder_from_choice(f)
        report.data["order"] = list(w.elements)
        report.data["segments"] = [list(s.indices()) for s in chain_embedding(w)]
        violations = order_invariants(w)
        report.checks.append(check_of("total order laws", not violations, witnesses=violations))
    return report


@wellorder.command("arith")
@click.argument("op", type=click.Choice(["sum", "product", "sup"]))
@click.argument("lengths", type=int, nargs=-1, required=True)
@_with_argv
@reported
def wellorder_arith(run: RunContext, op: str, lengths) -> Report:
    w = order_type_arithmetic(op, [ordinal(n) for n in lengths])
    violations = order_invariants(w)
    report = _report(run, length=len(w), elements=[repr(x) for x in w.elements])
    report.checks.append(check_of("total order laws", not violations, witnesses=violations))
    return report


# ============================================================================
# SUITE AND CONFIG
# ============================================================================

@cli.group()
def suite():
    """Acceptance suite."""


@suite.command("acceptance")
@click.option("--only", multiple=True, type=click.Choice([name for name, _ in acceptance.CRITERIA]))
@_with_argv
@reported
def suite_acceptance(run: RunContext, only) -> Report:
    return acceptance.run_acceptance(run.settings, run.seed, only=list(only), command=run.argv)


@cli.group()
def config():
    """Configuration file."""


@config.command("init")
@click.option("--force", is_flag=True, help="Overwrite an existing file.")
@click.option("--path", "target", type=click.Path(dir_okay=False), default=None)
def config_init(force: bool, target: Optional[str]):
    path = Path(target) if target else config_path()
    if path.exists() and not force:
        raise click.UsageError(f"{path} exists (use --force to overwrite)")
    save_config(DEFAULTS, path)
    click.echo(f"✅ Wrote default settings to {path}")


def main() -> None:
    cli(prog_name="settop")


if __name__ == "__main__":
    main()
