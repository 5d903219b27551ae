
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

import collections

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from metapac.env import (
    Action, Cell, Status, RewardConstants, parse_layout, initial_state,
    legal_actions, manhattan, action_between, ghost_action_distribution, ghost_joint_outcomes, step, transition,
    closest_ghost_distance,
    NonRectangularError, UnknownCharacterError, MissingPlayerStartError, MultiplePlayerStartsError,
    UnwalledBorderError, DisconnectedInteriorError, TerminalStateError, IllegalActionError,
    NoGhostsError,
)

from conftest import CORRIDOR, JUNCTION

def test_parse_smallest_maze():
    layout = parse_layout("%%%\n%P%\n%%%")
    assert (layout.width, layout.height) == (3, 3)
    assert layout.food_count == 0
    assert layout.player_start == Cell(1, 1)
    assert layout.ghost_starts == ()

def test_default_layout_counts(default_layout):
    assert default_layout.food_count == 65
    assert len(default_layout.ghost_starts) == 2
    assert (default_layout.width, default_layout.height) == (20, 11)

@pytest.mark.parametrize('text, error', [
    ("%%%\n%P%%\n%%%", NonRectangularError),
    ("%%%%\n%PX%\n%%%%", UnknownCharacterError),
    ("%%%\n%.%\n%%%", MissingPlayerStartError),
    ("%%%%\n%PP%\n%%%%", MultiplePlayerStartsError),
    ("%%%\n P%\n%%%", UnwalledBorderError),
    ("%%%%%\n%P%.%\n%%%%%", DisconnectedInteriorError),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        parse_layout(text)

def test_parse_ignores_trailing_spaces():
    layout = parse_layout("%%%%  \n%P.%\n%%%%   \n\n")
    assert layout.shape == (3, 4)
    assert layout.food_count == 1

def test_ghosts_indexed_row_major(default_layout):
    assert default_layout.ghost_starts == (Cell(9, 4), Cell(10, 4))
    assert default_layout.player_start == Cell(10, 9)

def test_initial_state(default_layout):
    state = initial_state(default_layout)
    assert state.food_remaining == 65
    assert state.step_count == 0
    assert state.score == 0
    assert state.status is Status.ONGOING
    assert state.player == default_layout.player_start

def test_zero_food_is_won():
    state = initial_state(parse_layout("%%%\n%P%\n%%%"))
    assert state.status is Status.WON
    with pytest.raises(TerminalStateError):
        legal_actions(state)

def test_enclosed_player_can_only_stop():
    layout = parse_layout("%%%\n%P%\n%%%")
    assert layout.player_actions(Cell(1, 1)) == (Action.STOP,)

def test_corridor_legal_actions(corridor):
    state = initial_state(corridor)
    assert legal_actions(state) == (Action.EAST, Action.WEST, Action.STOP)
    assert legal_actions(state, 0) == (Action.EAST, Action.WEST)

@pytest.mark.parametrize('a, b, d', [
    ((0, 0), (0, 0), 0),
    ((0, 0), (2, 3), 5),
    ((4, 1), (1, 5), 7),
])
def test_manhattan(a, b, d):
    assert manhattan(Cell(*a), Cell(*b)) == d

def test_action_between():
    assert action_between(Cell(3, 3), Cell(3, 2)) is Action.NORTH
    assert action_between(Cell(3, 3), Cell(2, 3)) is Action.WEST
    assert action_between(Cell(3, 3), Cell(3, 3)) is Action.STOP
    with pytest.raises(ValueError):
        action_between(Cell(3, 3), Cell(4, 4))

def test_corridor_ghost_distribution(corridor):
    dist = ghost_action_distribution(initial_state(corridor), 0)
    assert [a for a, p in dist] == [Action.EAST, Action.WEST]
    assert [p for a, p in dist] == pytest.approx([0.9, 0.1], abs=1e-12)

def test_single_move_ghost_distribution():
    state = initial_state(parse_layout("%%%%%%\n%G P.%\n%%%%%%"))
    assert ghost_action_distribution(state, 0) == [(Action.EAST, 1.0)]

def test_junction_ghost_distribution(junction):
    dist = dict(ghost_action_distribution(initial_state(junction), 0))
    assert set(dist) == {Action.NORTH, Action.EAST, Action.WEST}
    assert dist[Action.NORTH] == pytest.approx(0.4667, abs=1e-4)
    assert dist[Action.EAST] == pytest.approx(0.4667, abs=1e-4)
    assert dist[Action.WEST] == pytest.approx(0.0667, abs=1e-4)

def test_ghosts_do_not_reverse():
    state = initial_state(parse_layout("%%%%%%%\n%.G..P%\n%%%%%%%"))
    assert state.headings == ()
    assert legal_actions(state, 0) == (Action.EAST, Action.WEST)
    east = transition(state, Action.STOP, (Action.EAST,)).next_state
    assert east.headings == (Action.EAST,)
    assert legal_actions(east, 0) == (Action.EAST,)
    assert ghost_action_distribution(east, 0) == [(Action.EAST, 1.0)]
    with pytest.raises(IllegalActionError):
        transition(east, Action.STOP, (Action.WEST,))
    # a dead end is the one place a ghost turns back
    west = transition(state, Action.STOP, (Action.WEST,)).next_state
    assert legal_actions(west, 0) == (Action.EAST,)

def test_step_eats_food():
    state = initial_state(parse_layout("%%%%%%%%%%\n%G    P..%\n%%%%%%%%%%"))
    outcome = step(state, Action.EAST, np.random.default_rng(0))
    assert outcome.reward == 9
    nxt = outcome.next_state
    assert nxt.food_remaining == 1
    assert nxt.status is Status.ONGOING
    assert nxt.score == 9
    assert not nxt.food[1, 7]

def test_step_eats_last_food():
    state = initial_state(parse_layout("%%%%%%\n%G P.%\n%%%%%%"))
    outcome = step(state, Action.EAST, np.random.default_rng(0))
    assert outcome.reward == 509
    assert outcome.next_state.status is Status.WON
    # ghosts stay put once the game is won
    assert outcome.next_state.ghosts == (Cell(1, 1),)

def test_step_into_ghost(deadly):
    outcome = step(initial_state(deadly), Action.EAST, np.random.default_rng(0))
    assert outcome.reward == -501
    assert outcome.next_state.status is Status.LOST
    assert outcome.next_state.food_remaining == 2

def test_ghost_moving_onto_player():
    state = initial_state(parse_layout("%%%%%%%\n%.P G.%\n%%%%%%%"))
    lost = transition(state, Action.EAST, (Action.WEST,))
    assert lost.next_state.status is Status.LOST
    assert lost.reward == -501
    safe = transition(state, Action.EAST, (Action.EAST,))
    assert safe.next_state.status is Status.ONGOING
    assert safe.reward == -1

def test_step_rejects_bad_moves(deadly):
    state = initial_state(deadly)
    with pytest.raises(IllegalActionError):
        step(state, Action.NORTH, np.random.default_rng(0))
    lost = step(state, Action.EAST, np.random.default_rng(0)).next_state
    with pytest.raises(TerminalStateError):
        step(lost, Action.WEST, np.random.default_rng(0))

def test_closest_ghost_distance(default_layout):
    assert closest_ghost_distance(initial_state(default_layout)) == 5
    with pytest.raises(NoGhostsError):
        closest_ghost_distance(initial_state(parse_layout("%%%%\n%P.%\n%%%%")))

def test_reward_constants_signs():
    with pytest.raises(ValueError):
        RewardConstants(step_penalty=1)
    with pytest.raises(ValueError):
        RewardConstants(death_penalty=0)

def _play(layout, actions, seed):
    rng = np.random.default_rng(seed)
    state = initial_state(layout)
    trajectory = [state]
    for choice in actions:
        if not state.ongoing:
            break
        legal = legal_actions(state)
        state = step(state, legal[choice % len(legal)], rng).next_state
        trajectory.append(state)
    return trajectory

@settings(max_examples=40, deadline=None)
@given(actions=st.lists(st.integers(min_value=0, max_value=4), max_size=200), seed=st.integers(0, 2**32 - 1))
def test_trajectory_properties(default_layout, actions, seed):
    trajectory = _play(default_layout, actions, seed)

    again = _play(default_layout, actions, seed)
    assert [s.snapshot() for s in trajectory] == [s.snapshot() for s in again]

    remaining = [s.food_remaining for s in trajectory]
    assert remaining == sorted(remaining, reverse=True)
    for s in trajectory:
        assert s.food_remaining == int(s.food.sum())
        if s.status is not Status.LOST:
            assert not s.food[s.player.y, s.player.x]

    last = trajectory[-1]
    rewards = last.rewards
    expected = (
        rewards.food_reward * (default_layout.food_count - last.food_remaining)
        + rewards.step_penalty * last.step_count
        + rewards.win_bonus * (last.status is Status.WON)
        + rewards.death_penalty * (last.status is Status.LOST)
    )
    assert last.score == expected
    assert all(s.status is Status.ONGOING for s in trajectory[:-1])

def test_ghost_distribution_sampling(junction):
    state = initial_state(junction)
    rng = np.random.default_rng(12345)
    n = 100000
    counts = collections.Counter()
    moves = {Cell(2, 1): Action.NORTH, Cell(3, 2): Action.EAST, Cell(1, 2): Action.WEST}
    for i in range(n):
        nxt = step(state, Action.STOP, rng).next_state
        counts[moves[nxt.ghosts[0]]] += 1
    dist = ghost_action_distribution(state, 0)
    observed = [counts[a] for a, p in dist]
    expected = [p * n for a, p in dist]
    for (a, p), c in zip(dist, observed):
        assert abs(c / n - p) < 0.01
    assert stats.chisquare(observed, expected).pvalue > 0.001

def _reachable(layout, limit=1500):
    start = initial_state(layout)
    seen = {start.snapshot()}
    frontier = [start]
    states = []
    while frontier and len(states) < limit:
        state = frontier.pop()
        states.append(state)
        for action in legal_actions(state):
            for ghost_actions, p in ghost_joint_outcomes(state, action):
                nxt = transition(state, action, ghost_actions).next_state
                if nxt.ongoing and nxt.snapshot()[:3] not in seen:
                    seen.add(nxt.snapshot()[:3])
                    frontier.append(nxt)
    return states

@pytest.mark.parametrize('text', [CORRIDOR, JUNCTION, "%%%%%%\n%G..%%\n%.%P.%\n%...G%\n%%%%%%"])
def test_distributions_normalized(text):
    for state in _reachable(parse_layout(text)):
        for ghost in range(len(state.ghosts)):
            assert sum(p for a, p in ghost_action_distribution(state, ghost)) == pytest.approx(1.0, abs=1e-12)
        for action in legal_actions(state):
            assert sum(p for g, p in ghost_joint_outcomes(state, action)) == pytest.approx(1.0, abs=1e-12)

def test_joint_outcomes_match_step(corridor):
    state = initial_state(corridor)
    outcomes = dict(ghost_joint_outcomes(state, Action.WEST))
    # player now at x=3, ghost at x=2: east closes in
    assert outcomes[(Action.EAST,)] == pytest.approx(0.9)
    assert outcomes[(Action.WEST,)] == pytest.approx(0.1)
    # eating the only food ends the game before the ghost moves
    assert ghost_joint_outcomes(state, Action.EAST) == [(None, 1.0)]
