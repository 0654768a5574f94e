from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from qmlab.errors import (
    DegenerateLatticeError,
    InconclusiveError,
    InvalidRuleError,
    NonconvexSectorError,
    NonStationaryError,
    PreconditionError,
)
from qmlab.semigroup import (
    BUNDLED_SCENARIOS,
    InvariantPoint,
    arbitrate_bound,
    constant_rule,
    dphi_step,
    invariant_point,
    parse_points,
    residue_orders,
    saturate,
    saturation_bound,
    saturation_bound_coordinates,
    sector_and_lattice,
    verify_bound,
)

from . import oracles

WORKED = [(2, 1), (1, 2), (1, 1)]


def test_parse_points():
    assert parse_points("2,1; 1,2") == [(2, 1), (1, 2)]


def test_quadrant():
    inst = sector_and_lattice([(1, 0), (0, 1)])
    assert (inst.lower_ray, inst.upper_ray) == ((1, 0), (0, 1))
    assert saturation_bound(inst) == (0, 0)
    assert verify_bound(inst, (0, 0), 10).ok


def test_worked_instance():
    inst = sector_and_lattice(WORKED)
    assert (inst.lower_ray, inst.upper_ray) == ((2, 1), (1, 2))
    assert inst.new_coordinates((1, 1)) == (Fraction(1, 3), Fraction(1, 3))
    assert residue_orders(inst) == [3]
    assert saturation_bound(inst, "strict") == (2, 2)
    assert saturation_bound(inst, "printed") == (Fraction(7, 3), Fraction(8, 3))
    rep = arbitrate_bound(inst, 10)
    assert rep.chosen == "strict" and rep.ok


def test_worked_instance_is_already_saturated():
    # (1,1) completes the Hilbert basis of this cone, so even A = 0 works
    inst = sector_and_lattice(WORKED)
    reach = oracles.semigroup_reachable(WORKED, 30)
    lattice_pts = [(x, y) for x in range(0, 12) for y in range(0, 12) if inst.in_sector((x, y))]
    assert all(p in reach for p in lattice_pts)
    assert verify_bound(inst, (0, 0), 10).ok


def test_unsaturated_instance_gives_counterexample():
    inst = sector_and_lattice([(2, 0), (3, 0), (0, 1)])
    res = verify_bound(inst, (0, 0), 10)
    assert not res.ok
    assert res.counterexample == (1, 0)
    assert saturation_bound(inst) == (3, 0)
    assert verify_bound(inst, (3, 0), 10).ok


def test_unit_interior_generator():
    assert saturation_bound(sector_and_lattice([(1, 0), (0, 1), (1, 1)])) == (0, 0)


@pytest.mark.parametrize(
    "gens, error",
    [
        ([(1, 0), (2, 0)], DegenerateLatticeError),
        ([(1, 0)], DegenerateLatticeError),
        ([(1, 0), (0, 1), (-1, -1)], NonconvexSectorError),
    ],
)
def test_invalid_instances(gens, error):
    with pytest.raises(error):
        sector_and_lattice(gens)


def test_flat_sector_has_no_bound():
    inst = sector_and_lattice([(1, 0), (-1, 0), (0, 1)])
    assert inst.flat
    with pytest.raises(NonconvexSectorError):
        saturation_bound(inst)


def test_search_budget():
    inst = sector_and_lattice(WORKED)
    with pytest.raises(InconclusiveError):
        verify_bound(inst, (0, 0), 10, max_states=5)


@st.composite
def instances(draw):
    u = (draw(st.integers(1, 4)), draw(st.integers(-3, 3)))
    v = (draw(st.integers(-3, 3)), draw(st.integers(1, 4)))
    assume(u[0] * v[1] - u[1] * v[0] > 0)
    inner = []
    for _ in range(draw(st.integers(0, 2))):
        a, b = draw(st.integers(1, 3)), draw(st.integers(1, 3))
        m = draw(st.integers(1, 3))
        p = (Fraction(a * u[0] + b * v[0], m), Fraction(a * u[1] + b * v[1], m))
        if p[0].denominator == 1 and p[1].denominator == 1:
            inner.append((int(p[0]), int(p[1])))
    return [u, v] + inner


@given(instances())
@settings(max_examples=25, deadline=None)
def test_bound_verifies_on_random_instances(gens):
    inst = sector_and_lattice(gens)
    for g in gens:
        x, y = inst.new_coordinates(g)
        assert x >= 0 and y >= 0
    A = saturation_bound(inst)
    assert verify_bound(inst, A, 10).ok


@given(instances())
@settings(max_examples=25, deadline=None)
def test_bound_matches_residue_box(gens):
    inst = sector_and_lattice(gens)
    coords = [inst.new_coordinates(g) for g in inst.interior_generators()]
    orders = residue_orders(inst)
    sx, sy = oracles.residue_box_max(coords, orders, strict=True)
    _, py = oracles.residue_box_max(coords, orders, strict=False)
    assert saturation_bound_coordinates(inst, "strict") == (sx, sy)
    assert saturation_bound_coordinates(inst, "printed") == (sx, py)


@pytest.mark.parametrize(
    "k, order, kappa, xy",
    [(4, -2, 1, (2, 0)), (6, -3, 1, (3, 0)), (0, 0, 1, (0, 0)), (12, 1, 1, (6, 7))],
)
def test_invariant_point(k, order, kappa, xy):
    assert invariant_point(k, order, kappa).xy == xy


def test_invariant_point_rejects_odd_weight():
    with pytest.raises(PreconditionError):
        invariant_point(3, 0, 1)
    with pytest.raises(PreconditionError):
        invariant_point(4, -3, 1)


@pytest.mark.parametrize(
    "p, q",
    [((2, 0), (3, 0)), ((1, 3), (2, 4)), ((5, 2), (6, 2))],
)
def test_dphi_step(p, q):
    pt = InvariantPoint(Fraction(p[0]), Fraction(p[1]), Fraction(1))
    assert dphi_step(pt, constant_rule(1)).xy == q


def test_negative_jump_is_rejected():
    with pytest.raises(InvalidRuleError):
        constant_rule(-1)
    pt = InvariantPoint(Fraction(1), Fraction(3), Fraction(1))
    with pytest.raises(InvalidRuleError):
        dphi_step(pt, lambda p: -2)


def test_no_jump_scenario_is_stationary_at_once():
    state = BUNDLED_SCENARIOS["no-jump"].run()
    assert state.n0 == 0
    assert state.final.missing_lines == frozenset(range(1, 201))
    xs = {x for x, y in state.final.occupied if y == 0}
    assert xs == {0} | set(range(2, 201))


def test_no_jump_equals_pure_closure():
    state = saturate([(2, 0), (3, 0), (4, 1)], 1, constant_rule(1), window=(30, 30))
    reach = oracles.semigroup_reachable([(2, 0), (3, 0), (4, 1)], 30)
    assert state.n0 == 0
    assert state.stages[0].occupied == frozenset(reach)


def test_on_line_scenario():
    state = BUNDLED_SCENARIOS["on-line-jump"].run()
    assert state.n0 == 1
    assert state.final.missing_lines == frozenset({1, 2, 5})
    assert 0 not in state.final.missing_lines


@pytest.mark.parametrize("name", sorted(BUNDLED_SCENARIOS))
def test_missing_lines_shrink(name):
    state = BUNDLED_SCENARIOS[name].run()
    for a, b in zip(state.stages, state.stages[1:]):
        assert b.missing_lines <= a.missing_lines
        assert a.occupied <= b.occupied


def test_saturate_preconditions():
    with pytest.raises(PreconditionError):
        saturate([(3, 0)], 1, constant_rule(1))
    with pytest.raises(PreconditionError):
        saturate([(2, 0), (-1, 2)], 1, constant_rule(1))
    with pytest.raises(NonStationaryError):
        saturate([(2, 0), (3, 0), (1, 3)], 1, constant_rule(1), stage_cap=1)


def test_tsv_report():
    lines = BUNDLED_SCENARIOS["on-line-jump"].run().to_tsv().splitlines()
    assert lines[0].startswith("stage\toccupied")
    assert "n0\t1" in lines
