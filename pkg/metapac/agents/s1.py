
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""System 1: tabular Q-learning over an abstracted state key."""

import io
import csv
import math
import time
import logging
import collections
from dataclasses import dataclass

import numpy as np

from ..env import (
    ACTIONS, Action, initial_state, legal_actions, moved, step, manhattan,
    require_ongoing, Status,
)
from ..util import csv_text, write_text, read_text
from . import Decision

logger = logging.getLogger(__name__)

FOOD_LEVELS = ('high', 'mid', 'low')

FeatureKey = collections.namedtuple(
    'FeatureKey',
    [
        'ghost_dx',      # sign of closest ghost x - player x
        'ghost_dy',      # sign of closest ghost y - player y
        'ghost_dist',    # distance bucket 0, 1, 2 or 3 (meaning 3+)
        'food_dir',      # first move toward the nearest food, Stop if none reachable
        'wall_n', 'wall_s', 'wall_e', 'wall_w',
        'food_level',    # one of FOOD_LEVELS
    ]
)

QTABLE_COLUMNS = FeatureKey._fields + ('action', 'value', 'visits')

class QTableFormatError (ValueError):
    pass

@dataclass(frozen=True)
class LearnParams (object):
    """Q-learning hyper-parameters.

       Exploration decays linearly from epsilon_start in the first
       episode to epsilon_end in the last one.  An episode still
       ongoing after max_episode_steps moves is abandoned without a
       terminal update.
    """
    learning_rate: float = 0.1
    discount: float = 0.5
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    training_episodes: int = 50
    max_episode_steps: int = 5000

    def __post_init__(self):
        if not 0 < self.learning_rate <= 1:
            raise ValueError('learning_rate must lie in (0,1], got %r' % (self.learning_rate,))
        if not 0 <= self.discount <= 1:
            raise ValueError('discount must lie in [0,1], got %r' % (self.discount,))
        for name in ('epsilon_start', 'epsilon_end'):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError('%s must lie in [0,1], got %r' % (name, getattr(self, name)))
        if self.training_episodes < 0:
            raise ValueError('training_episodes must be non-negative, got %r' % (self.training_episodes,))
        if self.max_episode_steps < 1:
            raise ValueError('max_episode_steps must be positive, got %r' % (self.max_episode_steps,))

    def epsilon(self, episode):
        if self.training_episodes <= 1:
            return self.epsilon_start
        frac = episode / (self.training_episodes - 1)
        return self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac

class QTable (object):
    """Map from (FeatureKey, Action) to a value estimate and a visit count.

       Missing entries read as zero.  Training mutates a table in
       place; a finished table is only ever read.
    """
    def __init__(self, values=None, visits=None):
        self.values = dict(values or {})
        self.visits = dict(visits or {})

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return isinstance(other, QTable) and self.values == other.values and self.visits == other.visits

    def q(self, key, action):
        return self.values.get((key, action), 0.0)

    def greedy(self, key, actions):
        """Return the first action in the given order with the highest value."""
        best = None
        best_value = None
        for action in actions:
            value = self.q(key, action)
            if best is None or value > best_value:
                best, best_value = action, value
        return best

def _sign(v):
    return (v > 0) - (v < 0)

def nearest_food_direction(state):
    """Return the first move along a shortest maze path to the nearest food.

       Breadth-first search expands neighbours in the fixed action
       order, so ties between equally near food resolve the same way
       every time.
    """
    layout = state.layout
    food = state.food
    start = state.player
    seen = {start}
    frontier = collections.deque()
    for action in layout.moves_from(start):
        cell = moved(start, action)
        seen.add(cell)
        frontier.append((cell, action))
    while frontier:
        cell, first = frontier.popleft()
        if food[cell.y, cell.x]:
            return first
        for action in layout.moves_from(cell):
            nxt = moved(cell, action)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, first))
    return Action.STOP

def extract_key(state):
    require_ongoing(state)
    player = state.player
    layout = state.layout

    if state.ghosts:
        ghost = min(state.ghosts, key=lambda g: manhattan(player, g))
        ghost_dx = _sign(ghost.x - player.x)
        ghost_dy = _sign(ghost.y - player.y)
        ghost_dist = min(manhattan(player, ghost), 3)
    else:
        ghost_dx, ghost_dy, ghost_dist = 0, 0, 3

    fraction = state.food_remaining / layout.food_count
    if fraction > 2.0 / 3:
        food_level = 'high'
    elif fraction > 1.0 / 3:
        food_level = 'mid'
    else:
        food_level = 'low'

    walls = [int(layout.is_wall(moved(player, a))) for a in ACTIONS[0:4]]

    return FeatureKey(
        ghost_dx, ghost_dy, ghost_dist,
        nearest_food_direction(state),
        *walls,
        food_level
    )

def q_update(table, key, action, reward, next_key, next_legal, params):
    """Apply one Q-learning backup in place and return the table.

       next_key is None (or next_legal empty) when the move ended the
       game, so the future value counts as zero.
    """
    if next_key is None or not next_legal:
        future = 0.0
    else:
        future = max(table.q(next_key, a) for a in next_legal)
    alpha = params.learning_rate
    entry = (key, action)
    table.values[entry] = (1 - alpha) * table.q(key, action) + alpha * (reward + params.discount * future)
    table.visits[entry] = table.visits.get(entry, 0) + 1
    return table

def train(layout, params, seed, rewards=None):
    """Train a QTable with epsilon-greedy episodes on layout.

       One random stream seeded from seed drives both exploration and
       ghost moves, so the result is a deterministic function of the
       arguments.
    """
    rng = np.random.default_rng(seed)
    table = QTable()
    wins = 0
    for episode in range(params.training_episodes):
        epsilon = params.epsilon(episode)
        state = initial_state(layout, rewards)
        while state.ongoing and state.step_count < params.max_episode_steps:
            key = extract_key(state)
            legal = legal_actions(state)
            if rng.random() < epsilon:
                action = legal[int(rng.integers(len(legal)))]
            else:
                action = table.greedy(key, legal)
            outcome = step(state, action, rng)
            nxt = outcome.next_state
            if nxt.ongoing:
                q_update(table, key, action, outcome.reward, extract_key(nxt), legal_actions(nxt), params)
            else:
                q_update(table, key, action, outcome.reward, None, (), params)
            state = nxt
        wins += state.status is Status.WON
        logger.debug('training episode %d: epsilon %.3f, %s after %d steps, score %s',
                     episode, epsilon, state.status.value, state.step_count, state.score)
    logger.info('trained %d episodes (%d won), %d table entries', params.training_episodes, wins, len(table))
    return table

def s1_decide(table, state):
    """Pick the highest-valued legal action for the state's feature key.

       Ties go to the earliest action in the fixed order (North, South,
       East, West, Stop).  Costs one compute unit per legal action read.
    """
    start = time.perf_counter()
    legal = legal_actions(state)
    action = table.greedy(extract_key(state), legal)
    return Decision(action, len(legal), time.perf_counter() - start)

def format_qtable(table):
    """Render a QTable as CSV text with a QTABLE_COLUMNS header.

       Rows are sorted so equal tables render byte-identically; values
       use repr() so they parse back exactly.
    """
    rows = []
    for (key, action), value in table.values.items():
        rows.append(
            [str(v) for v in key[0:3]]
            + [key.food_dir.value]
            + [str(v) for v in key[4:8]]
            + [key.food_level, action.value, repr(float(value)), str(table.visits.get((key, action), 0))]
        )
    rows.sort()
    return csv_text(QTABLE_COLUMNS, rows)

def parse_qtable(text):
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != QTABLE_COLUMNS:
        raise QTableFormatError('expected header %s, got %s' % (','.join(QTABLE_COLUMNS), header))
    table = QTable()
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(QTABLE_COLUMNS):
            raise QTableFormatError('line %d has %d fields, expected %d' % (lineno, len(row), len(QTABLE_COLUMNS)))
        try:
            if row[8] not in FOOD_LEVELS:
                raise ValueError('unknown food level %r' % row[8])
            key = FeatureKey(
                int(row[0]), int(row[1]), int(row[2]),
                Action(row[3]),
                int(row[4]), int(row[5]), int(row[6]), int(row[7]),
                row[8]
            )
            entry = (key, Action(row[9]))
            value = float(row[10])
            visits = int(row[11])
            if not math.isfinite(value) or visits < 0:
                raise ValueError("bad value %r or visit count %r" % (row[10], row[11]))
            table.values[entry] = value
            table.visits[entry] = visits
        except ValueError as e:
            raise QTableFormatError('line %d: %s' % (lineno, e))
    return table

def dump_qtable_to_csv(table, outfilename):
    write_text(outfilename, format_qtable(table))

def load_qtable_from_csv(infilename):
    return parse_qtable(read_text(infilename))
