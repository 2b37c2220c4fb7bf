"""Schema instantiation and external-call closure."""

import pytest

from causalplan import parse_domain, parse_world, registry_for
from causalplan.grounding import (ExternalRegistry, GroundingError,
                                  close_formula, ground, signature_atoms)
from causalplan.model import Caused, Causes, FalseF, Nonexecutable, TrueF


ROBOT = """
:sorts location box
:objects
  L1, L2, L3 :: location;
  B1, B2 :: box;
:constants
  atObj(box) :: inertialFluent(location);
  goto(location) :: action;
:laws
  inertial atObj;
  vars b :: box y :: location;
  goto(y) causes atObj(b)=y;
"""


def test_schema_count_is_cartesian_product():
    gd = ground(parse_domain(ROBOT))
    causes = [l for l in gd.laws if isinstance(l, Causes)]
    assert len(causes) == 2 * 3  # boxes x locations
    # inertial stays one family law; the compiler expands it per value
    assert sum(str(l).startswith("inertial") for l in gd.laws) == 1


def test_grounding_is_deterministic():
    d = parse_domain(ROBOT)
    assert [str(l) for l in ground(d).laws] == [str(l) for l in ground(d).laws]


def test_signature_atoms_fluents_first_then_lex():
    gd = ground(parse_domain(ROBOT))
    names = [str(a) for a in signature_atoms(gd)]
    assert names[:3] == ["atObj(B1)=L1", "atObj(B1)=L2", "atObj(B1)=L3"]
    assert names[-1] == "goto(L3)"
    n_fluents = len(gd.fluent_atoms)
    assert all("goto" in n for n in names[n_fluents:])


def test_invalid_domain_raises_with_diagnostics():
    d = parse_domain("""
:constants p :: inertialFluent; a :: action;
:laws
  caused p if a;
""")
    with pytest.raises(GroundingError) as e:
        ground(d)
    assert "action" in str(e.value)


# --- externals --------------------------------------------------------------------

WALLED = """
:sorts location
:objects L1, L2 :: location;
:constants
  atRobo :: inertialFluent(location);
  goto(location) :: action;
:externals pathExists/2;
:laws
  inertial atRobo;
  vars y :: location;
  goto(y) causes atRobo=y;
  vars x :: location y :: location;
  nonexecutable goto(y) if atRobo=x & ~@pathExists(x, y);
"""


def test_externals_require_registry():
    with pytest.raises(GroundingError):
        ground(parse_domain(WALLED))


def test_external_closure_blocked_world():
    gd = ground(parse_domain(WALLED), registry_for(parse_world("1#2")))
    blocks = [l for l in gd.laws if isinstance(l, Nonexecutable)]
    # the wall separates L1 and L2 in both directions; self-moves stay legal,
    # so the ~pathExists guard survives as an unconditional ban
    crossing = [l for l in blocks if isinstance(l.cond, TrueF)]
    assert len(crossing) == 0  # conditions keep the atRobo=x conjunct
    assert len(blocks) == 2
    texts = sorted(str(l) for l in blocks)
    assert "atRobo=L1" in texts[1] and "goto(L2)" in texts[1]
    assert "atRobo=L2" in texts[0] and "goto(L1)" in texts[0]


def test_external_closure_open_world_drops_bans():
    gd = ground(parse_domain(WALLED), registry_for(parse_world("1.2")))
    assert [l for l in gd.laws if isinstance(l, Nonexecutable)] == []


def test_simplify_off_keeps_closed_laws():
    gd = ground(parse_domain(WALLED), registry_for(parse_world("1.2")),
                simplify=False)
    blocks = [l for l in gd.laws if isinstance(l, Nonexecutable)]
    assert len(blocks) == 4  # every (x, y) pair kept, conditions closed


def test_close_formula_memoizes_and_substitutes():
    d = parse_domain(WALLED)
    calls = []
    reg = ExternalRegistry()
    def path(a, b):
        calls.append((a, b))
        return True
    reg.register("pathExists", 2, path)
    law = d.laws[2]  # the schematic nonexecutable
    ground(d, reg)
    assert ("L1", "L2") in calls
    # memoized: each ground pair evaluated once
    assert len(calls) == len(set(calls))


def test_non_boolean_external_in_formula_rejected():
    reg = ExternalRegistry()
    reg.register("pathExists", 2, lambda a, b: 7)
    with pytest.raises(GroundingError) as e:
        ground(parse_domain(WALLED), reg)
    assert "bool" in str(e.value).lower()
