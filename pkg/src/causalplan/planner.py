"""Planning, prediction, and consistency queries.

Everything here sits on top of the compiler: a query builds the
completion encoding for some horizon, asserts its own formulas on top
(initial state, goal, observations), and hands the CNF to the embedded
solver.  Planning deepens the horizon one step at a time; a cost
deadline turns the inner loop into solve, price the plan, block that
action schedule, repeat.

The module also contains the slow direct-evaluation routes used to
cross-check the SAT route: validate_plan checks a trajectory against
the completion formulas without any solver, and oracle_states /
oracle_transitions enumerate value-complete assignments outright.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

from .compiler import (CompileError, Encoder, ExactlyOne, Nogood, Support,
                       TimedAtom, TimedLit, atom_table, compile_cnf,
                       completion_for, desugar, eval_completion)
from .grounding import ExternalRegistry, GroundDomain, close_formula, ground
from .model import (FINAL, Atom, AtomF, DomainDescription, Formula,
                    GroundInstance, Kind, PlanningProblem, State, conj,
                    eval_formula, formula_atoms, freeze_state, instance_str)
from .sat import ResourceLimit, Solver, enumerate_models
from .sat import solve as sat_solve

__all__ = [
    "ActionArg", "ActionCost", "Consistent", "FluentRef", "Inconsistent",
    "NoPlanUpTo", "Plan", "PlanFound", "Predicted", "check_consistency",
    "close_problem", "decode_model", "encode_problem", "oracle_paths",
    "oracle_states", "oracle_transitions", "parse_cost_spec", "plan",
    "plan_cost", "predict", "validate_plan",
]


# --- results ------------------------------------------------------------------

@dataclass
class Plan:
    """Concurrent plan: steps[t] are the actions taken between state t and
    t+1, trajectory has one more entry than steps."""

    steps: list[list[GroundInstance]]
    trajectory: list[State]
    cost: int | None = None

    @property
    def horizon(self) -> int:
        return len(self.steps)


@dataclass
class PlanFound:
    plan: Plan
    horizon: int


@dataclass
class NoPlanUpTo:
    max_horizon: int


@dataclass
class Consistent:
    example_state: State


@dataclass
class Inconsistent:
    level: int  # 0: no state satisfies the static laws, 1: no transition exists
    message: str


@dataclass
class Predicted:
    steps: list[list[GroundInstance]]
    outcomes: list[list[State]]  # one trajectory per consistent completion


# --- action costs -------------------------------------------------------------

@dataclass(frozen=True)
class FluentRef:
    """Cost argument read from the state the action starts in: @name(args)."""

    name: str
    args: tuple[str, ...] = ()


@dataclass(frozen=True)
class ActionArg:
    """Cost argument taken from the action instance itself: $i."""

    index: int


@dataclass(frozen=True)
class ActionCost:
    """Charges external(args...) for every occurrence of the named action."""

    action: str
    external: str
    args: tuple = ()


def _split_args(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        parts.append(tail)
    return parts


def parse_cost_spec(text: str) -> ActionCost:
    """Parse 'action=external(arg, ...)' where an arg is @fluent, @fluent(a,b),
    $N (action argument index), or a literal object name."""
    m = re.fullmatch(r"\s*(\w+)\s*=\s*(\w+)\s*\((.*)\)\s*", text, re.S)
    if not m:
        raise ValueError(f"bad cost spec {text!r}; expected action=external(args)")
    action, external, argtext = m.groups()
    args: list = []
    for raw in _split_args(argtext):
        if raw.startswith("$"):
            try:
                args.append(ActionArg(int(raw[1:])))
            except ValueError:
                raise ValueError(f"bad action-argument reference {raw!r}") from None
        elif raw.startswith("@"):
            fm = re.fullmatch(r"@(\w+)(?:\(([^()]*)\))?", raw)
            if not fm:
                raise ValueError(f"bad fluent reference {raw!r}")
            fargs = tuple(a.strip() for a in fm.group(2).split(",")) if fm.group(2) else ()
            args.append(FluentRef(fm.group(1), fargs))
        elif re.fullmatch(r"\w+", raw):
            args.append(raw)
        else:
            raise ValueError(f"bad cost argument {raw!r}")
    return ActionCost(action, external, tuple(args))


def plan_cost(plan: Plan, costs, registry: ExternalRegistry) -> int | float:
    """Total cost, or inf when some charge evaluates to None (infeasible)."""
    total = 0
    for t, step in enumerate(plan.steps):
        state = plan.trajectory[t]
        for name, args in step:
            for ac in costs:
                if ac.action != name:
                    continue
                call_args = []
                for a in ac.args:
                    if isinstance(a, FluentRef):
                        key = (a.name, a.args)
                        if key not in state:
                            raise ValueError(f"cost model reads unknown fluent {instance_str(key)}")
                        call_args.append(state[key])
                    elif isinstance(a, ActionArg):
                        if a.index >= len(args):
                            raise ValueError(
                                f"cost model reads argument ${a.index} of {name}/{len(args)}")
                        call_args.append(args[a.index])
                    else:
                        call_args.append(a)
                got = registry.evaluate(ac.external, tuple(call_args))
                if got is None:
                    return math.inf
                if isinstance(got, bool) or not isinstance(got, int):
                    raise ValueError(
                        f"cost external '{ac.external}' returned {got!r}, expected an integer")
                total += got
    return total


# --- model decoding -----------------------------------------------------------

def decode_model(gd: GroundDomain, cnf, model, horizon: int) -> Plan:
    """Turn a satisfying assignment into states plus per-step action sets.
    model must be indexable by variable number (index 0 unused)."""
    trajectory: list[State] = []
    for t in range(horizon + 1):
        state: State = {}
        for c, args in gd.fluent_instances:
            if c.is_boolean:
                v = "true" if model[cnf.var_of(TimedAtom(Atom(c, args, "true"), t))] else "false"
            else:
                v = next(val for val in c.value_sort.members
                         if model[cnf.var_of(TimedAtom(Atom(c, args, val), t))])
            state[(c.name, args)] = v
        trajectory.append(state)
    steps = [
        sorted((a.constant.name, a.args) for a in gd.action_atoms
               if model[cnf.var_of(TimedAtom(a, t))])
        for t in range(horizon)
    ]
    return Plan(steps, trajectory)


def _mentions_action(f: Formula) -> bool:
    return any(a.constant.is_action for a in formula_atoms(f))


def _state_formula(domain: DomainDescription, state: State) -> Formula:
    parts = []
    for (name, args), value in sorted(state.items()):
        c = domain.constant_by_key[(name, len(args))]
        parts.append(AtomF(Atom(c, tuple(args), value)))
    return conj(parts)


# --- queries ------------------------------------------------------------------

def check_consistency(domain: DomainDescription,
                      registry: ExternalRegistry | None = None,
                      *, seed: int = 0) -> Consistent | Inconsistent:
    """Level 0: do any states exist?  Level 1: does any state have an
    outgoing transition?"""
    gd = ground(domain, registry)
    cnf0 = compile_cnf(gd, 0)
    res0 = sat_solve(cnf0, seed=seed)
    if not res0.is_sat:
        return Inconsistent(0, "the static laws admit no state")
    res1 = sat_solve(compile_cnf(gd, 1), seed=seed)
    if not res1.is_sat:
        return Inconsistent(1, "states exist but none has an outgoing transition")
    example = decode_model(gd, cnf0, res0.model, 0).trajectory[0]
    return Consistent(example)


def close_problem(domain: DomainDescription, problem: PlanningProblem,
                  registry: ExternalRegistry | None = None):
    """Close the problem formulas over externals and squeeze the horizon
    window: a formula that mentions actions at step k forces at least k+1
    steps.  Returns (init, goal, extras, lo, hi)."""
    init = close_formula(problem.init, domain, registry)
    goal = close_formula(problem.goal, domain, registry)
    extras = [(when, close_formula(f, domain, registry)) for when, f in problem.extra]
    if _mentions_action(goal):
        raise ValueError("the goal may not mention actions")
    lo, hi = problem.horizon
    if _mentions_action(init):
        lo = max(lo, 1)
    for when, f in extras:
        if when == FINAL:
            if _mentions_action(f):
                raise ValueError("a final-step constraint may not mention actions")
        else:
            lo = max(lo, when + 1 if _mentions_action(f) else when)
    return init, goal, extras, lo, hi


def encode_problem(gd: GroundDomain, init: Formula, goal: Formula, extras,
                   h: int, *, noconcurrency: bool = False) -> Encoder:
    """One fixed-horizon encoding of a closed problem, ready for cnf()."""
    enc = Encoder(gd, h, noconcurrency=noconcurrency)
    enc.assert_formula(init, 0)
    enc.assert_formula(goal, h)
    for when, f in extras:
        enc.assert_formula(f, h if when == FINAL else when)
    return enc


def plan(domain: DomainDescription, problem: PlanningProblem,
         registry: ExternalRegistry | None = None, *, costs=(), seed: int = 0,
         max_conflicts: int | None = None,
         max_seconds: float | None = None) -> PlanFound | NoPlanUpTo:
    """Iterative-deepening plan search over problem.horizon.

    With a cost deadline the search loops solve / price / block inside each
    horizon: a schedule over the deadline is excluded by a clause negating
    the full action assignment, so the next model differs in at least one
    action occurrence.  Resource limits apply per solver call and surface
    as sat.ResourceLimit.
    """
    gd = ground(domain, registry)
    init, goal, extras, lo, hi = close_problem(domain, problem, registry)
    if problem.cost_deadline is not None and not costs:
        raise ValueError("the problem sets a cost deadline but no cost model was given")
    if costs and registry is None:
        raise ValueError("a cost model needs an external registry to evaluate charges")

    for h in range(lo, hi + 1):
        cnf = encode_problem(gd, init, goal, extras, h,
                             noconcurrency=problem.noconcurrency).cnf()
        solver = Solver(cnf.var_count, cnf.clauses, seed=seed)
        while True:
            res = solver.solve(max_conflicts=max_conflicts, max_seconds=max_seconds)
            if not res.is_sat:
                break
            found = decode_model(gd, cnf, res.model, h)
            if problem.cost_deadline is not None:
                price = plan_cost(found, costs, registry)
                if price > problem.cost_deadline:
                    block = []
                    for t in range(h):
                        for a in gd.action_atoms:
                            v = cnf.var_of(TimedAtom(a, t))
                            block.append(-v if res.model[v] else v)
                    if not block or not solver.add_clause(block):
                        break
                    continue
                found.cost = price
            _trim_waits(found, lo)
            if costs and found.cost is None:
                price = plan_cost(found, costs, registry)
                found.cost = None if price == math.inf else price
            return PlanFound(found, found.horizon)
    return NoPlanUpTo(hi)


def _trim_waits(p: Plan, lo: int) -> None:
    """Drop trailing steps that do nothing and change nothing."""
    while len(p.steps) > lo and not p.steps[-1] and p.trajectory[-1] == p.trajectory[-2]:
        p.steps.pop()
        p.trajectory.pop()


def predict(domain: DomainDescription, init, actions,
            registry: ExternalRegistry | None = None, *, seed: int = 0,
            limit: int | None = None) -> Predicted:
    """All trajectories consistent with the initial condition and the given
    action schedule.  init is a formula (possibly partial) or a state dict;
    actions is one collection of ground action instances per step, empty
    for a wait step.  No outcomes means the schedule is not executable."""
    gd = ground(domain, registry)
    if isinstance(init, dict):
        init = _state_formula(domain, init)
    init = close_formula(init, domain, registry)

    declared = {(a.constant.name, a.args) for a in gd.action_atoms}
    steps: list[list[GroundInstance]] = []
    for step in actions:
        insts = [(name, tuple(args)) for name, args in step]
        for inst in insts:
            if inst not in declared:
                raise ValueError(f"unknown action instance {instance_str(inst)}")
        steps.append(sorted(insts))
    h = len(steps)

    enc = Encoder(gd, h)
    enc.assert_formula(init, 0)
    for t, step in enumerate(steps):
        want = set(step)
        fixed = [AtomF(a) if (a.constant.name, a.args) in want else
                 AtomF(Atom(a.constant, a.args, "false")) for a in gd.action_atoms]
        enc.assert_formula(conj(fixed), t)
    cnf = enc.cnf()

    fluent_vars = [cnf.var_of(TimedAtom(a, t))
                   for t in range(h + 1) for a in gd.fluent_atoms]
    outcomes: list[list[State]] = []
    for proj in enumerate_models(cnf, fluent_vars, seed=seed, limit=limit):
        truth = dict(zip(fluent_vars, proj))
        trajectory: list[State] = []
        for t in range(h + 1):
            state: State = {}
            for c, args in gd.fluent_instances:
                if c.is_boolean:
                    v = "true" if truth[cnf.var_of(TimedAtom(Atom(c, args, "true"), t))] else "false"
                else:
                    v = next(val for val in c.value_sort.members
                             if truth[cnf.var_of(TimedAtom(Atom(c, args, val), t))])
                state[(c.name, args)] = v
            trajectory.append(state)
        outcomes.append(trajectory)
    outcomes.sort(key=lambda tr: [sorted(s.items()) for s in tr])
    return Predicted(steps, outcomes)


def validate_plan(domain: DomainDescription, problem: PlanningProblem, p: Plan,
                  registry: ExternalRegistry | None = None,
                  *, costs=()) -> tuple[bool, list[str]]:
    """Check a plan by direct evaluation of the completion formulas; the SAT
    solver is never involved, so this is an independent route."""
    issues: list[str] = []
    gd = ground(domain, registry)
    h = len(p.steps)
    if len(p.trajectory) != h + 1:
        return False, [f"trajectory has {len(p.trajectory)} states for {h} steps"]

    instances = {(c.name, args): c for c, args in gd.fluent_instances}
    for t, state in enumerate(p.trajectory):
        for key, c in instances.items():
            v = state.get(key)
            legal = ("false", "true") if c.is_boolean else c.value_sort.members
            if v is None:
                issues.append(f"state {t} has no value for {instance_str(key)}")
            elif v not in legal:
                issues.append(f"state {t}: {instance_str(key)}={v} is not a legal value")
        for key in state:
            if key not in instances:
                issues.append(f"state {t} mentions unknown fluent {instance_str(key)}")
    declared = {(a.constant.name, a.args) for a in gd.action_atoms}
    step_sets: list[set[GroundInstance]] = []
    for t, step in enumerate(p.steps):
        insts = {(name, tuple(args)) for name, args in step}
        for inst in insts - declared:
            issues.append(f"step {t} uses unknown action {instance_str(inst)}")
        step_sets.append(insts)
    if issues:
        return False, issues

    truth = _window_truth(p.trajectory, step_sets)
    bad = eval_completion(
        completion_for(gd, h, noconcurrency=problem.noconcurrency), truth)
    if bad is not None:
        issues.append(f"causal semantics violated: {bad}")

    def holds(f: Formula, step: int, label: str) -> bool:
        if _mentions_action(f) and step >= h:
            issues.append(f"{label} mentions actions but lands on the final state")
            return True

        def att(atom: Atom) -> bool:
            if atom.constant.is_action:
                held = (atom.constant.name, atom.args) in step_sets[step]
                return held if atom.value == "true" else not held
            return p.trajectory[step][(atom.constant.name, atom.args)] == atom.value

        return eval_formula(f, att)

    init = close_formula(problem.init, domain, registry)
    goal = close_formula(problem.goal, domain, registry)
    if not holds(init, 0, "initial condition"):
        issues.append("initial condition fails in state 0")
    if not holds(goal, h, "goal"):
        issues.append(f"goal fails in state {h}")
    for when, f in problem.extra:
        f = close_formula(f, domain, registry)
        if when != FINAL and when > h:
            issues.append(f"constraint at step {when} exceeds the plan horizon {h}")
        elif not holds(f, h if when == FINAL else when, f"constraint at {when}"):
            issues.append(f"constraint at {when} fails")

    if problem.cost_deadline is not None:
        if not costs:
            issues.append("the problem sets a cost deadline but no cost model was given")
        else:
            price = plan_cost(p, costs, registry)
            if price > problem.cost_deadline:
                issues.append(f"plan cost {price} exceeds the deadline {problem.cost_deadline}")

    return (not issues), issues


# --- brute-force oracles --------------------------------------------------------

def _window_truth(trajectory, step_actions):
    def truth(l: TimedLit) -> bool:
        a = l.atom
        if a.constant.is_action:
            held = (a.constant.name, a.args) in step_actions[l.step]
            v = held if a.value == "true" else not held
        else:
            v = trajectory[l.step][(a.constant.name, a.args)] == a.value
        return v if l.positive else not v
    return truth


def _value_complete_states(gd: GroundDomain, limit: int):
    keys = []
    value_lists = []
    combos = 1
    for c, args in gd.fluent_instances:
        vals = ("false", "true") if c.is_boolean else tuple(c.value_sort.members)
        keys.append((c.name, args))
        value_lists.append(vals)
        combos *= len(vals)
    if combos > limit:
        raise ValueError(f"state space too large to enumerate ({combos} assignments)")
    for choice in itertools.product(*value_lists):
        yield dict(zip(keys, choice))


def oracle_states(gd: GroundDomain, *, limit: int = 1 << 18) -> list[State]:
    """Every value-complete assignment satisfying the single-step completion,
    found by brute enumeration and direct evaluation."""
    formulas = completion_for(gd, 0)
    out = []
    for state in _value_complete_states(gd, limit):
        if eval_completion(formulas, _window_truth([state], [])) is None:
            out.append(state)
    out.sort(key=lambda s: sorted(s.items()))
    return out


def _compile_window(formulas, table):
    """Index completion formulas over the window's atom table so the inner
    enumeration loop runs on plain ints."""
    index = {ta: i + 1 for i, ta in enumerate(table)}

    def lid(l: TimedLit) -> int:
        v = index[TimedAtom(l.atom, l.step)]
        return v if l.positive else -v

    compiled = []
    for f in formulas:
        if isinstance(f, Support):
            compiled.append(("S", lid(f.head),
                             tuple(tuple(sorted(lid(l) for l in b)) for b in f.bodies)))
        elif isinstance(f, Nogood):
            compiled.append(("N", tuple(sorted(lid(l) for l in f.body)), ()))
        else:
            compiled.append(("X", tuple(index[ta] for ta in f.atoms), ()))
    return index, compiled


def _eval_compiled(compiled, bits) -> bool:
    for kind, a, b in compiled:
        if kind == "S":
            hv = bits[a] if a > 0 else not bits[-a]
            fires = False
            for body in b:
                for l in body:
                    if not (bits[l] if l > 0 else not bits[-l]):
                        break
                else:
                    fires = True
                    break
            if hv != fires:
                return False
        elif kind == "N":
            for l in a:
                if not (bits[l] if l > 0 else not bits[-l]):
                    break
            else:
                return False
        else:
            if sum(bits[v] for v in a) != 1:
                return False
    return True


def oracle_transitions(gd: GroundDomain, *, noconcurrency: bool = False,
                       max_window_atoms: int = 26,
                       max_triples: int = 2_000_000):
    """All one-step transitions (state, action set, successor) by exhaustive
    enumeration against the horizon-1 completion.  Purely evaluative; shares
    nothing with the SAT route.  Guarded against combinatorial blowup."""
    n_window = 2 * len(gd.fluent_atoms) + len(gd.action_atoms)
    if n_window > max_window_atoms:
        raise ValueError(f"window has {n_window} atoms; enumeration refused")

    states0 = oracle_states(gd)
    statics = [f for f in completion_for(gd, 0) if isinstance(f, Nogood)]
    cand1 = [s for s in _value_complete_states(gd, 1 << 18)
             if eval_completion(statics, _window_truth([s], [])) is None]
    action_insts = [(a.constant.name, a.args) for a in gd.action_atoms]
    n_subsets = 2 ** len(action_insts)
    if len(states0) * len(cand1) * n_subsets > max_triples:
        raise ValueError("too many candidate transitions; enumeration refused")

    table = atom_table(gd, 1)
    index, compiled = _compile_window(completion_for(gd, 1, noconcurrency=noconcurrency), table)
    n_step0 = len(gd.fluent_atoms) + len(gd.action_atoms)

    def lits_of(c):
        if c[0] == "S":
            return [c[1]] + [l for body in c[2] for l in body]
        return list(c[1])

    # formulas confined to step 0 prune (state, actions) pairs before the
    # successor loop runs
    comp_a: list = []
    comp_b: list = []
    for c in compiled:
        (comp_a if all(abs(l) <= n_step0 for l in lits_of(c)) else comp_b).append(c)

    flu0, act0, flu1 = [], [], []
    for ta, i in index.items():
        a = ta.atom
        if a.constant.is_action:
            act0.append((i, (a.constant.name, a.args)))
        elif ta.step == 0:
            flu0.append((i, (a.constant.name, a.args), a.value))
        else:
            flu1.append((i, (a.constant.name, a.args), a.value))

    subsets = [frozenset(inst for inst, on in zip(action_insts, mask) if on)
               for mask in itertools.product((False, True), repeat=len(action_insts))]
    if noconcurrency:
        subsets = [s for s in subsets if len(s) <= 1]

    bits = [False] * (len(table) + 1)
    out = []
    for s0 in states0:
        for i, key, val in flu0:
            bits[i] = s0[key] == val
        for acts in subsets:
            for i, key in act0:
                bits[i] = key in acts
            if not _eval_compiled(comp_a, bits):
                continue
            for s1 in cand1:
                for i, key, val in flu1:
                    bits[i] = s1[key] == val
                if _eval_compiled(comp_b, bits):
                    out.append((freeze_state(s0), acts, freeze_state(s1)))
    out.sort(key=lambda tr: (sorted(tr[0]), sorted(tr[1]), sorted(tr[2])))
    return out


def oracle_paths(gd: GroundDomain, horizon: int, *, noconcurrency: bool = False):
    """Length-h trajectories (state, actions, state, actions, ..., state)
    built by chaining one-step windows.  Chaining is only sound when no
    dynamically caused fluent bypasses the static closure at intermediate
    steps, so every after-law head must be an inertial fluent."""
    for r in desugar(gd):
        if r.after is not None and r.head is not None:
            const = r.head[0].constant
            if const.is_fluent and const.kind is not Kind.INERTIAL_FLUENT:
                raise ValueError(
                    f"'{const.name}' is dynamically caused but not inertial; "
                    "window chaining would be unsound")
    if horizon == 0:
        return [(freeze_state(s),) for s in oracle_states(gd)]
    transitions = oracle_transitions(gd, noconcurrency=noconcurrency)
    by_source: dict = {}
    for s0, acts, s1 in transitions:
        by_source.setdefault(s0, []).append((acts, s1))
    paths = [(s0, acts, s1) for s0, acts, s1 in transitions]
    for _ in range(horizon - 1):
        paths = [p + (acts, s2)
                 for p in paths
                 for acts, s2 in by_source.get(p[-1], ())]
    return paths
