import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import conventional_closed_form, gth_stationary
from raidavail import ctmc
from raidavail.models import RaidParameters, build_raid5_conventional


def two_state(lam, mu):
    return ctmc.build([("up", True), ("down", False)], [("up", "down", lam), ("down", "up", mu)])


def test_two_state_generator():
    c = two_state(0.2, 3.0)
    assert np.array_equal(c.generator, np.array([[-0.2, 0.2], [3.0, -3.0]]))


def test_parallel_edges_are_summed():
    c = ctmc.build(
        [("up", True), ("down", False)],
        [("up", "down", 0.25), ("up", "down", 0.5), ("down", "up", 1.0)],
    )
    assert c.generator[0, 1] == 0.75
    assert c.generator[0, 0] == -0.75


def test_self_loops_dropped():
    c = ctmc.build([("a", True), ("b", False)], [("a", "a", 5.0), ("a", "b", 1.0), ("b", "a", 1.0)])
    assert c.generator[0, 0] == -1.0
    assert len(c.transitions) == 2


def test_unknown_state():
    with pytest.raises(ctmc.UnknownState):
        ctmc.build([("a", True)], [("a", "zz", 1.0)])


def test_negative_rate():
    with pytest.raises(ctmc.NegativeRate):
        ctmc.build([("a", True), ("b", False)], [("a", "b", -1.0), ("b", "a", 1.0)])


def test_reducible_chain_reports_states():
    states = [("a", True), ("b", False), ("c", False)]
    # b and c are both absorbing
    with pytest.raises(ctmc.ReducibleChain) as info:
        ctmc.build(states, [("a", "b", 1.0), ("a", "c", 1.0)])
    assert info.value.unreachable == ("c",)


def test_transient_states_allowed():
    states = [("a", True), ("b", True), ("t", False)]
    c = ctmc.build(states, [("a", "b", 1.0), ("b", "a", 2.0), ("t", "a", 1.0)])
    ss = ctmc.steady_state(c)
    assert ss.pi[2] == 0.0
    assert ss.pi[0] == pytest.approx(2 / 3, abs=1e-15)


def test_two_state_steady_state_exact():
    lam, mu = 1e-5, 0.1
    c = two_state(lam, mu)
    ss = ctmc.steady_state(c)
    assert ss.pi[0] == pytest.approx(mu / (lam + mu), abs=1e-12)
    assert ss.pi[1] == pytest.approx(lam / (lam + mu), abs=1e-12)
    assert ctmc.availability(c, ss) == pytest.approx(mu / (lam + mu), abs=1e-12)


def test_symmetric_cycle():
    c = ctmc.build([("a", True), ("b", True), ("c", False)], [("a", "b", 2.0), ("b", "c", 2.0), ("c", "a", 2.0)])
    assert np.allclose(ctmc.steady_state(c).pi, 1 / 3, atol=1e-15)


def test_all_available_gives_one():
    c = ctmc.build([("a", True), ("b", True)], [("a", "b", 2.0), ("b", "a", 0.3)])
    assert ctmc.availability(c, ctmc.steady_state(c)) == pytest.approx(1.0, abs=1e-15)


def test_conventional_n4_unavailability_against_two_oracles():
    p = RaidParameters.preset(lam=1e-5, hep=0.001)
    c = build_raid5_conventional(p)
    assert np.abs(c.generator.sum(axis=1)).max() <= 1e-12
    ss = ctmc.steady_state(c)
    u = ctmc.unavailability(c, ss)

    hand = conventional_closed_form(4, 1e-5, 0.1, 0.03, 1.0, 0.01, 0.001)
    gth = gth_stationary(c.generator)
    assert hand[2] + hand[3] == pytest.approx(gth[2] + gth[3], rel=1e-12)
    assert u == pytest.approx(hand[2] + hand[3], rel=1e-10)
    # frozen from the closed form above
    assert u == pytest.approx(4.525406314216808e-07, rel=1e-10)
    assert u == pytest.approx(4.5e-7, rel=0.01)
    assert ss.residual <= 1e-10


@pytest.mark.parametrize("a, expected", [(1.0, 0.0), (0.5, 262800.0), (1 - 4.5e-7, 0.23652)])
def test_downtime_minutes_per_year(a, expected):
    assert ctmc.downtime_minutes_per_year(a) == pytest.approx(expected, rel=1e-4, abs=1e-12)


@pytest.mark.parametrize("a", [-0.1, 1.5])
def test_downtime_rejects_out_of_range(a):
    with pytest.raises(ValueError):
        ctmc.downtime_minutes_per_year(a)


def test_json_roundtrip():
    c = build_raid5_conventional(RaidParameters.preset(hep=0.01))
    doc = json.loads(c.to_json())
    again = ctmc.Ctmc.from_dict(doc)
    assert again.states == c.states
    assert np.array_equal(again.generator, c.generator)


@st.composite
def random_chain(draw):
    n = draw(st.integers(2, 8))
    rates = draw(st.lists(st.floats(1e-6, 10.0), min_size=n * n, max_size=n * n))
    states = [(f"s{i}", i % 2 == 0) for i in range(n)]
    transitions = [
        (f"s{i}", f"s{j}", rates[i * n + j]) for i in range(n) for j in range(n) if i != j
    ]
    return ctmc.build(states, transitions)


@settings(max_examples=60, deadline=None)
@given(random_chain(), st.floats(1e-3, 1e3))
def test_solver_properties(chain, k):
    ss = ctmc.steady_state(chain)
    assert np.all(ss.pi >= 0)
    assert abs(ss.pi.sum() - 1) <= 1e-10
    assert np.abs(ss.pi @ chain.generator).max() <= 1e-10
    assert np.abs(ss.pi - ctmc.uniformized_power_iteration(chain)).max() <= 1e-8
    scaled = ctmc.build(chain.states, [ctmc.Transition(t.source, t.target, t.rate * k) for t in chain.transitions])
    assert np.abs(ctmc.steady_state(scaled).pi - ss.pi).max() <= 1e-10
