"""Grounding: instantiate law schemas over their sorts and close external calls.

A schema with variables v1::S1 ... vk::Sk yields one ground law per
element of S1 x ... x Sk (in declaration order, so two runs over equal
inputs produce identical law lists).  External calls are evaluated
against the registry while grounding and replaced by TRUE/FALSE; by
default the resulting formulas are simplified, and laws whose firing
condition became FALSE are dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .model import (
    FALSE, TRUE, And, Atom, AtomF, Caused, Causes, Constant, Constraint,
    DomainDescription, Exogenous, ExternalCall, FalseF, Formula, Inertial,
    Law, Nonexecutable, Not, Or, TrueF, conj, disj, neg, validate_signature,
)


class GroundingError(Exception):
    pass


class ExternalRegistry:
    """Maps (name, arity) to an evaluator returning bool or a nonnegative int
    (None is allowed as an out-of-band 'unreachable' for integer evaluators).

    Evaluators must be pure; results are memoized per grounding run, not
    here, so a registry can be shared across worlds and runs safely.
    """

    def __init__(self):
        self._fns: dict[tuple[str, int], object] = {}

    def register(self, name: str, arity: int, fn) -> None:
        self._fns[(name, arity)] = fn

    def __contains__(self, key: tuple[str, int]) -> bool:
        return key in self._fns

    def evaluate(self, name: str, args: tuple[str, ...]):
        try:
            fn = self._fns[(name, len(args))]
        except KeyError:
            raise GroundingError(f"no external registered for '{name}/{len(args)}'") from None
        return fn(*args)


@dataclass(frozen=True)
class GroundDomain:
    """A validated domain together with its fully instantiated laws."""

    domain: DomainDescription
    laws: tuple[Law, ...]

    @cached_property
    def fluent_atoms(self) -> tuple[Atom, ...]:
        return tuple(a for a in signature_atoms(self) if a.constant.is_fluent)

    @cached_property
    def action_atoms(self) -> tuple[Atom, ...]:
        return tuple(a for a in signature_atoms(self) if a.constant.is_action)

    @cached_property
    def fluent_instances(self) -> tuple[tuple[Constant, tuple[str, ...]], ...]:
        return tuple(
            (c, args)
            for c in sorted(self.domain.fluents(), key=lambda c: (c.name, len(c.arg_sorts)))
            for args in _arg_tuples(c)
        )


def _arg_tuples(const: Constant):
    return itertools.product(*(s.members for s in const.arg_sorts))


def _constant_atoms(const: Constant):
    values = ("true",) if const.is_boolean else const.value_sort.members
    for args in _arg_tuples(const):
        for v in values:
            yield Atom(const, tuple(args), v)


def signature_atoms(ground: GroundDomain) -> list[Atom]:
    """All ground atoms, fluents before actions, each group ordered
    lexicographically.  A Boolean constant contributes exactly one atom."""
    def key(a: Atom):
        return (a.constant.name, a.args, a.value)

    fluents = sorted((a for c in ground.domain.fluents() for a in _constant_atoms(c)), key=key)
    actions = sorted((a for c in ground.domain.actions() for a in _constant_atoms(c)), key=key)
    return fluents + actions


class _Closer:
    """Substitutes an environment into formulas and closes external calls."""

    def __init__(self, domain: DomainDescription, registry: ExternalRegistry | None):
        self.domain = domain
        self.registry = registry
        self.memo: dict[tuple[str, tuple[str, ...]], object] = {}

    def call(self, name: str, args: tuple[str, ...]):
        key = (name, args)
        if key not in self.memo:
            if self.registry is None:
                raise GroundingError(
                    f"domain declares external '@{name}/{len(args)}' but no registry was given")
            self.memo[key] = self.registry.evaluate(name, args)
        return self.memo[key]

    def atom(self, a: Atom, env: dict[str, str]) -> Atom:
        return Atom(a.constant,
                    tuple(env.get(t, t) for t in a.args),
                    env.get(a.value, a.value))

    def formula(self, f: Formula, env: dict[str, str], simplify: bool) -> Formula:
        if isinstance(f, (TrueF, FalseF)):
            return f
        if isinstance(f, AtomF):
            return AtomF(self.atom(f.atom, env))
        if isinstance(f, Not):
            sub = self.formula(f.sub, env, simplify)
            return neg(sub) if simplify else Not(sub)
        if isinstance(f, And):
            parts = [self.formula(p, env, simplify) for p in f.parts]
            return conj(parts) if simplify else And(tuple(parts))
        if isinstance(f, Or):
            parts = [self.formula(p, env, simplify) for p in f.parts]
            return disj(parts) if simplify else Or(tuple(parts))
        if isinstance(f, ExternalCall):
            args = tuple(env.get(t, t) for t in f.args)
            val = self.call(f.name, args)
            if not isinstance(val, bool):
                raise GroundingError(
                    f"external '@{f.name}' returned {val!r} inside a formula; "
                    "only Boolean externals may appear in formulas")
            return TRUE if val else FALSE
        raise GroundingError(f"cannot ground {f!r}")


def close_formula(f: Formula, domain: DomainDescription,
                  registry: ExternalRegistry | None = None) -> Formula:
    """Close external calls in an already-ground formula (used for problem
    formulas, which may call externals just like law bodies)."""
    return _Closer(domain, registry).formula(f, {}, simplify=True)


def ground(domain: DomainDescription, registry: ExternalRegistry | None = None,
           *, simplify: bool = True) -> GroundDomain:
    """Instantiate every schema.  With simplify=False the vacuous-law drop and
    TRUE/FALSE folding are skipped (the compiler copes; used to test that
    simplification never changes the model set)."""
    diags = validate_signature(domain)
    if diags:
        raise GroundingError("invalid domain: " + "; ".join(str(d) for d in diags))
    for decl in domain.externals:
        if registry is None or decl not in registry:
            raise GroundingError(f"no external registered for '{decl[0]}/{decl[1]}'")

    closer = _Closer(domain, registry)
    out: list[Law] = []
    for law in domain.laws:
        if isinstance(law, (Inertial, Exogenous)):
            out.append(law)
            continue
        names = [v for v, _ in law.vars]
        domains = [s.members for _, s in law.vars]
        for combo in itertools.product(*domains):
            env = dict(zip(names, combo))
            g = _ground_one(law, env, closer, simplify)
            if g is not None:
                out.append(g)
    return GroundDomain(domain=domain, laws=tuple(out))


def _ground_one(law: Law, env: dict[str, str], closer: _Closer, simplify: bool) -> Law | None:
    if isinstance(law, Caused):
        head = closer.atom(law.head, env) if law.head is not None else None
        cond = closer.formula(law.cond, env, simplify)
        after = closer.formula(law.after, env, simplify) if law.after is not None else None
        if simplify and (isinstance(cond, FalseF) or isinstance(after, FalseF)):
            return None  # can never fire
        return Caused(head, cond, after, (), law.span)
    if isinstance(law, Causes):
        cond = closer.formula(law.cond, env, simplify)
        if simplify and isinstance(cond, FalseF):
            return None
        return Causes(closer.atom(law.action, env), closer.atom(law.effect, env),
                      cond, (), law.span)
    if isinstance(law, Nonexecutable):
        cond = closer.formula(law.cond, env, simplify)
        if simplify and isinstance(cond, FalseF):
            return None
        return Nonexecutable(closer.atom(law.action, env), cond, (), law.span)
    if isinstance(law, Constraint):
        body = closer.formula(law.body, env, simplify)
        if simplify and isinstance(body, TrueF):
            return None  # vacuously satisfied
        return Constraint(body, (), law.span)
    raise GroundingError(f"cannot ground {law!r}")
