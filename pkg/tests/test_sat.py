"""CDCL engine against truth-table ground truth, plus DIMACS exchange."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from causalplan.sat import (DimacsError, ResourceLimit, Solver, emit_dimacs,
                            enumerate_models, parse_dimacs, read_dimacs_model,
                            solve)


def random_cnf(rng, max_vars=16, max_clauses=60):
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_clauses)
    clauses = []
    for _ in range(m):
        width = min(n, rng.choice((1, 2, 2, 3, 3, 3, 4)))
        vs = rng.sample(range(1, n + 1), width)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return n, clauses


def check_model_satisfies(model, clauses):
    return all(any(model[l] if l > 0 else not model[-l] for l in c) for c in clauses)


def test_trivial_cases():
    assert solve((0, [])).is_sat
    assert solve((3, [])).is_sat
    assert not solve((1, [[1], [-1]])).is_sat
    assert not solve((2, [[]])).is_sat


def test_unit_chain_propagates():
    res = solve((3, [[1], [-1, 2], [-2, 3]]))
    assert res.is_sat and res.model[1] and res.model[2] and res.model[3]


def test_agreement_on_seeded_batch():
    rng = random.Random(12345)
    for i in range(300):
        n, clauses = random_cnf(rng, max_vars=10, max_clauses=30)
        res = solve((n, clauses), seed=i)
        expect = oracles.truth_table_sat(n, clauses)
        assert res.is_sat == expect, (n, clauses)
        if res.is_sat:
            assert check_model_satisfies(res.model, clauses)


@pytest.mark.parametrize("holes", [1, 2, 3, 4])
def test_pigeonhole_unsat(holes):
    n, clauses = oracles.php_clauses(holes + 1, holes)
    assert not solve((n, clauses)).is_sat


def test_php_satisfiable_when_it_fits():
    n, clauses = oracles.php_clauses(3, 3)
    res = solve((n, clauses))
    assert res.is_sat and check_model_satisfies(res.model, clauses)


def test_seeds_change_search_not_answers():
    rng = random.Random(7)
    n, clauses = random_cnf(rng)
    answers = {solve((n, clauses), seed=s).is_sat for s in range(5)}
    assert len(answers) == 1


def test_assumptions():
    n, clauses = 3, [[1, 2], [-1, 3]]
    assert solve((n, clauses), assumptions=(1,)).is_sat
    assert solve((n, clauses), assumptions=(1, -3)).is_sat is False
    res = solve((n, clauses), assumptions=(-1,))
    assert res.is_sat and res.model[2]


def test_incremental_add_clause():
    s = Solver(3, [[1, 2, 3]])
    assert s.solve().is_sat
    assert s.add_clause([-1])
    assert s.add_clause([-2])
    res = s.solve()
    assert res.is_sat and res.model[3]
    assert s.add_clause([-3]) is False or not s.solve().is_sat


def test_conflict_limit_raises():
    n, clauses = oracles.php_clauses(6, 5)
    with pytest.raises(ResourceLimit):
        Solver(n, clauses).solve(max_conflicts=3)


def test_enumerate_models_counts():
    # 3 free vars constrained by one clause: 7 models over vars 1..3
    models = enumerate_models((3, [[1, 2, 3]]), [1, 2, 3])
    assert len(models) == 7
    assert len({tuple(m) for m in models}) == 7


def test_enumerate_models_projection():
    # projecting onto var 1 collapses var 2's freedom
    models = enumerate_models((2, [[1, 2]]), [1])
    assert sorted(tuple(m) for m in models) == [(False,), (True,)]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_agreement_property(seed):
    rng = random.Random(seed)
    n, clauses = random_cnf(rng, max_vars=8, max_clauses=20)
    assert solve((n, clauses)).is_sat == oracles.truth_table_sat(n, clauses)


# --- DIMACS ----------------------------------------------------------------------

def test_dimacs_parse_ignores_comments():
    n, clauses = parse_dimacs("c hi\np cnf 2 2\n1 -2 0\nc mid\n2 0\n")
    assert n == 2 and [list(c) for c in clauses] == [[1, -2], [2]]


def test_dimacs_parse_rejects_junk():
    with pytest.raises(DimacsError):
        parse_dimacs("p cnf 1 1\n1 5 0\n")
    with pytest.raises(DimacsError):
        parse_dimacs("1 0\n")


def test_dimacs_roundtrip_preserves_clauses():
    from causalplan import compile_cnf, parse_domain
    from causalplan.grounding import ground
    cnf = compile_cnf(ground(parse_domain(
        ":constants p :: inertialFluent; a :: action;\n:laws\n  inertial p;\n  a causes p;\n")), 1)
    text = emit_dimacs(cnf)
    n, clauses = parse_dimacs(text)
    assert n == cnf.var_count
    assert [sorted(c) for c in clauses] == [sorted(c) for c in cnf.clauses]


def test_read_dimacs_model_formats():
    from causalplan import compile_cnf, parse_domain
    from causalplan.grounding import ground
    cnf = compile_cnf(ground(parse_domain(
        ":constants p :: inertialFluent;\n:laws\n  inertial p;\n")), 0)
    res = solve(cnf)
    lits = [v if res.model[v] else -v for v in range(1, cnf.var_count + 1)]
    flat = " ".join(map(str, lits))
    for text in (f"s SATISFIABLE\nv {flat} 0\n", f"SAT\n{flat} 0\n", f"{flat}\n"):
        back = read_dimacs_model(text, cnf)
        assert back.is_sat and list(back.model) == list(res.model)


def test_read_dimacs_model_rejects_nonmodel():
    from causalplan import compile_cnf, parse_domain
    from causalplan.grounding import ground
    gd = ground(parse_domain(
        ":constants p :: simpleFluent; q :: simpleFluent;\n:laws\n  caused p if q;\n  caused q if p;\n"))
    cnf = compile_cnf(gd, 0)
    with pytest.raises(DimacsError):
        read_dimacs_model("1 -2\n", cnf)  # p without q violates the support


def test_read_dimacs_model_unsat_line():
    from causalplan import compile_cnf, parse_domain
    from causalplan.grounding import ground
    cnf = compile_cnf(ground(parse_domain(
        ":constants p :: inertialFluent;\n:laws\n  inertial p;\n")), 0)
    back = read_dimacs_model("s UNSATISFIABLE\n", cnf)
    assert not back.is_sat
