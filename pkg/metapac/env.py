
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""Seeded grid game world.

A layout is parsed once from an ASCII maze and shared read-only by
every state derived from it.  States are immutable; step() consumes a
state and returns a new one together with the reward of the move.

Per move the effects happen in this order:

   1. the player moves (entering a ghost's cell is a death)
   2. food on the new cell is eaten
   3. eating the last food wins the game; ghosts do not move then
   4. otherwise each ghost, in index order, moves once
   5. a ghost landing on the player is a death
   6. the step penalty is charged and the score accumulated

Ghosts move greedily (minimizing Manhattan distance to the player)
with probability GHOST_GREEDY_PROB and uniformly over their legal
moves otherwise, the two policies being mixed rather than exclusive.
A ghost may not reverse its last move unless that is its only way
out of a cell.

"""

import os
import enum
import math
import itertools
import collections
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

GHOST_GREEDY_PROB = 0.8
GHOST_RANDOM_PROB = 0.2

WALL_CHAR = '%'
FOOD_CHAR = '.'
EMPTY_CHAR = ' '
PLAYER_CHAR = 'P'
GHOST_CHAR = 'G'

# the "who" value naming the player in legal_actions()
PLAYER = 'player'

DEFAULT_LAYOUT_PATH = os.path.join(os.path.dirname(__file__), 'layouts', 'default.lay')

class LayoutError (ValueError):
    pass

class NonRectangularError (LayoutError):
    pass

class UnknownCharacterError (LayoutError):
    pass

class MissingPlayerStartError (LayoutError):
    pass

class MultiplePlayerStartsError (LayoutError):
    pass

class UnwalledBorderError (LayoutError):
    pass

class DisconnectedInteriorError (LayoutError):
    pass

class TerminalStateError (RuntimeError):
    pass

class IllegalActionError (ValueError):
    pass

class NoGhostsError (ValueError):
    pass

Cell = collections.namedtuple('Cell', ['x', 'y'])

class Action (enum.Enum):
    NORTH = 'North'
    SOUTH = 'South'
    EAST = 'East'
    WEST = 'West'
    STOP = 'Stop'

# fixed action order, also the tie-break order everywhere
ACTIONS = (Action.NORTH, Action.SOUTH, Action.EAST, Action.WEST, Action.STOP)

_REVERSE = {
    Action.NORTH: Action.SOUTH,
    Action.SOUTH: Action.NORTH,
    Action.EAST: Action.WEST,
    Action.WEST: Action.EAST,
    Action.STOP: Action.STOP,
}

# rows grow southward
_DELTAS = {
    Action.NORTH: (0, -1),
    Action.SOUTH: (0, 1),
    Action.EAST: (1, 0),
    Action.WEST: (-1, 0),
    Action.STOP: (0, 0),
}

class Status (enum.Enum):
    ONGOING = 'ongoing'
    WON = 'won'
    LOST = 'lost'

def moved(cell, action):
    dx, dy = _DELTAS[action]
    return Cell(cell.x + dx, cell.y + dy)

def action_between(a, b):
    """Return the Action taking cell a to the adjacent (or same) cell b."""
    for action in ACTIONS:
        if moved(a, action) == b:
            return action
    raise ValueError('(%d,%d) is not one move from (%d,%d)' % (b.x, b.y, a.x, a.y))

def manhattan(a, b):
    return abs(a.x - b.x) + abs(a.y - b.y)

@dataclass(frozen=True)
class RewardConstants (object):
    """Score units for the four scoring events of the game."""
    food_reward: int = 10
    step_penalty: int = -1
    win_bonus: int = 500
    death_penalty: int = -500

    def __post_init__(self):
        if not self.food_reward > 0:
            raise ValueError('food_reward must be positive, got %r' % (self.food_reward,))
        if not self.step_penalty < 0:
            raise ValueError('step_penalty must be negative, got %r' % (self.step_penalty,))
        if not self.win_bonus > 0:
            raise ValueError('win_bonus must be positive, got %r' % (self.win_bonus,))
        if not self.death_penalty < 0:
            raise ValueError('death_penalty must be negative, got %r' % (self.death_penalty,))

@dataclass(frozen=True, eq=False)
class Layout (object):
    """Static maze description.

       Fields:

         width, height: grid size in cells
         walls: bool array of shape (height, width)
         food: bool array of shape (height, width), the initial food
         player_start: Cell
         ghost_starts: tuple of Cell in ghost index order

       Arrays are made read-only on construction.  The non-Stop moves
       available from each open cell are precomputed since every
       state of every game consults them.
    """
    width: int
    height: int
    walls: np.ndarray
    food: np.ndarray
    player_start: Cell
    ghost_starts: tuple
    food_count: int = field(init=False)
    _moves: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.walls.setflags(write=False)
        self.food.setflags(write=False)
        object.__setattr__(self, 'food_count', int(self.food.sum()))
        moves = {}
        for cell in self.open_cells():
            moves[cell] = tuple(
                a for a in ACTIONS[0:4]
                if not self.is_wall(moved(cell, a))
            )
        object.__setattr__(self, '_moves', moves)

    @property
    def shape(self):
        return (self.height, self.width)

    def is_wall(self, cell):
        if not (0 <= cell.x < self.width and 0 <= cell.y < self.height):
            return True
        return bool(self.walls[cell.y, cell.x])

    def open_cells(self):
        """Yield every non-wall Cell in row-major order."""
        for y, x in zip(*np.nonzero(~self.walls)):
            yield Cell(int(x), int(y))

    def moves_from(self, cell):
        """Return the non-Stop actions leading to an open cell."""
        return self._moves[cell]

    def player_actions(self, cell):
        return self._moves[cell] + (Action.STOP,)

    def ghost_actions(self, cell, heading=Action.STOP):
        moves = self._moves[cell]
        if heading is not Action.STOP and len(moves) > 1:
            moves = tuple(a for a in moves if a is not _REVERSE[heading])
        return moves or (Action.STOP,)

def parse_layout(text):
    """Parse an ASCII maze into a Layout.

       Characters: '%' wall, '.' food, ' ' empty, 'P' player start,
       'G' ghost start.  Trailing spaces on a row are not significant
       and surrounding blank lines are ignored.  Ghosts are indexed in
       row-major order of their 'G' characters.

       Raises a LayoutError subclass when the maze is not a
       rectangle, uses unknown characters, has no or several player
       starts, has an open border cell, or its open cells do not form
       one connected region.
    """
    lines = [line.rstrip(' \r') for line in text.split('\n')]
    while lines and not lines[-1]:
        lines.pop()
    while lines and not lines[0]:
        lines.pop(0)
    if not lines:
        raise NonRectangularError('layout is empty')

    width = len(lines[0])
    for y, line in enumerate(lines):
        if len(line) != width:
            raise NonRectangularError('row %d has %d cells, expected %d' % (y, len(line), width))
    height = len(lines)

    walls = np.zeros((height, width), dtype=bool)
    food = np.zeros((height, width), dtype=bool)
    players = []
    ghosts = []
    for y, line in enumerate(lines):
        for x, c in enumerate(line):
            if c == WALL_CHAR:
                walls[y, x] = True
            elif c == FOOD_CHAR:
                food[y, x] = True
            elif c == PLAYER_CHAR:
                players.append(Cell(x, y))
            elif c == GHOST_CHAR:
                ghosts.append(Cell(x, y))
            elif c != EMPTY_CHAR:
                raise UnknownCharacterError('unknown character %r at (%d,%d)' % (c, x, y))

    if not players:
        raise MissingPlayerStartError('layout has no player start %r' % PLAYER_CHAR)
    if len(players) > 1:
        raise MultiplePlayerStartsError('layout has %d player starts at %s' % (len(players), players))

    border = np.ones(walls.shape, dtype=bool)
    border[1:-1, 1:-1] = False
    if not walls[border].all():
        ys, xs = np.nonzero(border & ~walls)
        raise UnwalledBorderError('border cell (%d,%d) is not a wall' % (xs[0], ys[0]))

    labels, nb_labels = ndimage.label(~walls)
    if nb_labels > 1:
        raise DisconnectedInteriorError('open cells form %d separate regions' % nb_labels)

    return Layout(
        width=width,
        height=height,
        walls=walls,
        food=food,
        player_start=players[0],
        ghost_starts=tuple(ghosts),
    )

def load_layout(path=None):
    """Load a Layout from a maze file, defaulting to the shipped maze."""
    with open(path or DEFAULT_LAYOUT_PATH, 'r', encoding='utf-8') as f:
        return parse_layout(f.read())

@dataclass(frozen=True, eq=False)
class GameState (object):
    """Dynamic snapshot of one game.

       The layout and reward constants ride along by reference so a
       state is self-sufficient for legal_actions() and step().
       headings holds the last move of each ghost and stays empty
       until the ghosts first move.
    """
    layout: Layout
    rewards: RewardConstants
    player: Cell
    ghosts: tuple
    food: np.ndarray
    food_remaining: int
    step_count: int
    score: int
    status: Status
    headings: tuple = ()

    @property
    def ongoing(self):
        return self.status is Status.ONGOING

    def heading(self, ghost):
        return self.headings[ghost] if ghost < len(self.headings) else Action.STOP

    def snapshot(self):
        """Return a hashable value identifying the dynamic state exactly."""
        return (
            self.player,
            self.ghosts,
            self.food.tobytes(),
            self.food_remaining,
            self.step_count,
            self.score,
            self.status,
            tuple(self.heading(i) for i in range(len(self.ghosts))),
        )

StepOutcome = collections.namedtuple('StepOutcome', ['next_state', 'reward'])

def initial_state(layout, rewards=None):
    return GameState(
        layout=layout,
        rewards=rewards if rewards is not None else RewardConstants(),
        player=layout.player_start,
        ghosts=tuple(layout.ghost_starts),
        food=layout.food,
        food_remaining=layout.food_count,
        step_count=0,
        score=0,
        status=Status.WON if layout.food_count == 0 else Status.ONGOING,
    )

def require_ongoing(state):
    if state.status is not Status.ONGOING:
        raise TerminalStateError('game is already %s' % state.status.value)

def legal_actions(state, who=PLAYER):
    """Return the legal actions of the player or of ghost index who.

       The result is a non-empty tuple in the fixed ACTIONS order.
       Stop is always legal for the player and legal for a ghost only
       when it cannot move anywhere else.  A ghost's reverse of its
       last move is legal only at a dead end.
    """
    require_ongoing(state)
    if who == PLAYER:
        return state.layout.player_actions(state.player)
    return state.layout.ghost_actions(state.ghosts[who], state.heading(who))

def _ghost_distribution(layout, ghost, heading, player):
    legal = layout.ghost_actions(ghost, heading)
    dists = [manhattan(moved(ghost, a), player) for a in legal]
    best = min(dists)
    n_best = dists.count(best)
    uniform = GHOST_RANDOM_PROB / len(legal)
    greedy = GHOST_GREEDY_PROB / n_best
    return [
        (a, uniform + greedy if d == best else uniform)
        for a, d in zip(legal, dists)
    ]

def ghost_action_distribution(state, ghost):
    """Return [(Action, probability), ...] for the next move of a ghost.

       The distribution is computed against the player's current cell.
       Within step() it is applied after the player has moved.
    """
    require_ongoing(state)
    return _ghost_distribution(state.layout, state.ghosts[ghost], state.heading(ghost), state.player)

def _sample(distribution, rng):
    u = rng.random()
    acc = 0.0
    for action, p in distribution:
        acc += p
        if u < acc:
            return action
    return distribution[-1][0]

def _check_player_action(state, action):
    require_ongoing(state)
    if action not in state.layout.player_actions(state.player):
        raise IllegalActionError('%s is not legal at (%d,%d)' % (action.value, state.player.x, state.player.y))
    return moved(state.player, action)

def _player_move_ends_game(state, player):
    if player in state.ghosts:
        return True
    eaten = 1 if state.food[player.y, player.x] else 0
    return state.food_remaining - eaten == 0

def transition(state, action, ghost_actions=None):
    """Apply one move with given ghost moves, returning StepOutcome.

       Arguments:
         state: an ongoing GameState
         action: the player's Action
         ghost_actions: one Action per ghost, or None when the player's
           own move ends the game (ghosts do not move then)

       This is the deterministic part of step(); step() samples the
       ghost moves and ghost_joint_outcomes() enumerates them.
    """
    player = _check_player_action(state, action)
    layout = state.layout
    rewards = state.rewards
    food = state.food
    food_remaining = state.food_remaining
    ghosts = state.ghosts
    headings = state.headings
    status = Status.ONGOING
    reward = 0

    if player in ghosts:
        # a swap of cells is caught here too, the player moves first
        status = Status.LOST
    else:
        if food[player.y, player.x]:
            food = food.copy()
            food[player.y, player.x] = False
            food.setflags(write=False)
            food_remaining -= 1
            reward += rewards.food_reward
        if food_remaining == 0:
            status = Status.WON
            reward += rewards.win_bonus
        else:
            if ghost_actions is None or len(ghost_actions) != len(ghosts):
                raise ValueError('expected %d ghost actions, got %r' % (len(ghosts), ghost_actions))
            new_ghosts = list(ghosts)
            new_headings = [state.heading(i) for i in range(len(ghosts))]
            for i, (ghost, ghost_action) in enumerate(zip(ghosts, ghost_actions)):
                if ghost_action not in layout.ghost_actions(ghost, new_headings[i]):
                    raise IllegalActionError('%s is not legal for ghost %d' % (ghost_action.value, i))
                new_ghosts[i] = moved(ghost, ghost_action)
                new_headings[i] = ghost_action
                if new_ghosts[i] == player:
                    status = Status.LOST
                    break
            ghosts = tuple(new_ghosts)
            headings = tuple(new_headings)

    if status is Status.LOST:
        reward += rewards.death_penalty
    reward += rewards.step_penalty

    return StepOutcome(
        GameState(
            layout=layout,
            rewards=rewards,
            player=player,
            ghosts=ghosts,
            food=food,
            food_remaining=food_remaining,
            step_count=state.step_count + 1,
            score=state.score + reward,
            status=status,
            headings=headings,
        ),
        reward
    )

def step(state, action, rng):
    """Advance the game by one player move, sampling ghost moves from rng.

       Raises TerminalStateError after Won or Lost and
       IllegalActionError for a move into a wall.
    """
    player = _check_player_action(state, action)
    if _player_move_ends_game(state, player):
        return transition(state, action, None)
    ghost_actions = tuple(
        _sample(_ghost_distribution(state.layout, ghost, state.heading(i), player), rng)
        for i, ghost in enumerate(state.ghosts)
    )
    return transition(state, action, ghost_actions)

def ghost_joint_outcomes(state, action):
    """Enumerate the ghost responses to a player move.

       Returns a list of (ghost_actions, probability) pairs whose
       probabilities sum to 1; ghost_actions is None when the player's
       move ends the game by itself.
    """
    player = _check_player_action(state, action)
    if _player_move_ends_game(state, player):
        return [(None, 1.0)]
    per_ghost = [
        _ghost_distribution(state.layout, ghost, state.heading(i), player)
        for i, ghost in enumerate(state.ghosts)
    ]
    return [
        (tuple(a for a, p in combo), math.prod(p for a, p in combo))
        for combo in itertools.product(*per_ghost)
    ]

def closest_ghost_distance(state):
    if not state.ghosts:
        raise NoGhostsError('state has no ghosts')
    return min(manhattan(state.player, ghost) for ghost in state.ghosts)
