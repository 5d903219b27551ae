
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""System 2: depth-bounded Monte-Carlo tree search.

The tree alternates decision nodes (the player picks an action) and
chance nodes (the ghosts answer it).  A chance node keeps one child per
ghost outcome actually sampled, so repeated visits average over the
ghost distribution instead of trusting a single draw.  Leaves are the
states reached after config.depth player moves, or earlier terminal
states, and are valued by evaluate_leaf(); there are no random
rollouts.

expectimax_decide() enumerates the same tree exactly and serves as the
reference answer the sampled search converges to.

"""

import math
import time
import logging
from dataclasses import dataclass

from ..env import (
    ACTIONS, Status, legal_actions, step, transition, ghost_joint_outcomes,
    closest_ghost_distance, require_ongoing,
)
from . import Decision

logger = logging.getLogger(__name__)

# stands in for minus infinity; strictly below any reachable ongoing value
LOST_VALUE = -1.0e6

class NoChildrenError (RuntimeError):
    pass

@dataclass(frozen=True)
class MctsConfig (object):
    """Search budget and leaf evaluation weights.

       Fields:

         depth: player plies searched below the root
         simulations: descents per decision
         exploration_c: UCB1 exploration constant
         w_score, w_food, w_ghost: leaf evaluation weights
         ghost_cap: ghost distance beyond which the player feels safe
    """
    depth: int = 2
    simulations: int = 64
    exploration_c: float = 1.4
    w_score: float = 1.0
    w_food: float = 4.0
    w_ghost: float = 1.5
    ghost_cap: int = 5

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError('depth must be at least 1, got %r' % (self.depth,))
        if self.simulations < 1:
            raise ValueError('simulations must be at least 1, got %r' % (self.simulations,))
        if not self.exploration_c >= 0:
            raise ValueError('exploration_c must be non-negative, got %r' % (self.exploration_c,))
        for name in ('w_score', 'w_food', 'w_ghost'):
            if not getattr(self, name) >= 0:
                raise ValueError('%s must be non-negative, got %r' % (name, getattr(self, name)))
        if self.ghost_cap < 0:
            raise ValueError('ghost_cap must be non-negative, got %r' % (self.ghost_cap,))

def evaluate_leaf(state, config):
    """Heuristic value of a search leaf.

       Lost states get LOST_VALUE.  Won states are worth their weighted
       score plus the win bonus.  Ongoing states trade score against
       remaining food and reward distance from the closest ghost up to
       config.ghost_cap (a ghost-free maze counts as the cap).
    """
    if state.status is Status.LOST:
        return LOST_VALUE
    if state.status is Status.WON:
        return config.w_score * state.score + state.rewards.win_bonus
    if state.ghosts:
        d = min(closest_ghost_distance(state), config.ghost_cap)
    else:
        d = config.ghost_cap
    return config.w_score * state.score - config.w_food * state.food_remaining + config.w_ghost * d

class ChanceNode (object):
    """Statistics of one player action, with children keyed by ghost outcome."""
    __slots__ = ('visit_count', 'total_value', 'outcomes')

    def __init__(self, visit_count=0, total_value=0.0):
        self.visit_count = visit_count
        self.total_value = total_value
        self.outcomes = {}

    @property
    def mean_value(self):
        return self.total_value / self.visit_count if self.visit_count else 0.0

class SearchNode (object):
    __slots__ = ('state', 'visit_count', 'total_value', 'children', 'depth_remaining')

    def __init__(self, state, depth_remaining):
        self.state = state
        self.visit_count = 0
        self.total_value = 0.0
        self.children = {}
        self.depth_remaining = depth_remaining

    @property
    def mean_value(self):
        return self.total_value / self.visit_count if self.visit_count else 0.0

    @property
    def expandable(self):
        return self.depth_remaining > 0 and self.state.status is Status.ONGOING

    def expand(self):
        for action in legal_actions(self.state):
            self.children[action] = ChanceNode()

def ucb1_select(node, c):
    """Pick the child action to descend into.

       Unvisited children come first, in the fixed action order.
       Otherwise the child maximizing mean + c*sqrt(ln(N)/n) wins, means
       being in leaf value units.  Ties keep the earlier action.
    """
    if not node.children:
        raise NoChildrenError('node at depth_remaining %d has no children' % node.depth_remaining)

    for action, child in node.children.items():
        if child.visit_count == 0:
            return action

    log_n = math.log(max(node.visit_count, 1))

    best = None
    best_score = None
    for action, child in node.children.items():
        score = child.mean_value + c * math.sqrt(log_n / child.visit_count)
        if best is None or score > best_score:
            best, best_score = action, score
    return best

def _simulate(root, config, rng):
    """Run one descent and backup; return the number of env steps taken."""
    node = root
    path = [root]
    steps = 0
    while node.expandable:
        if not node.children:
            node.expand()
        action = ucb1_select(node, config.exploration_c)
        chance = node.children[action]
        nxt = step(node.state, action, rng).next_state
        steps += 1
        key = (nxt.ghosts, nxt.status)
        child = chance.outcomes.get(key)
        if child is None:
            child = SearchNode(nxt, node.depth_remaining - 1)
            chance.outcomes[key] = child
        path.append(chance)
        path.append(child)
        node = child

    value = evaluate_leaf(node.state, config)
    for visited in path:
        visited.visit_count += 1
        visited.total_value += value
    return steps

def search(state, config, rng):
    """Build a search tree rooted at state.

       Returns (root, steps) where steps counts the simulated env
       steps spent building it.
    """
    require_ongoing(state)
    root = SearchNode(state, config.depth)
    steps = 0
    for i in range(config.simulations):
        steps += _simulate(root, config, rng)
    return root, steps

def best_root_action(root):
    """Most visited root action, then higher mean, then fixed action order."""
    best = None
    best_key = None
    for action in ACTIONS:
        child = root.children.get(action)
        if child is None:
            continue
        key = (child.visit_count, child.mean_value)
        if best is None or key > best_key:
            best, best_key = action, key
    return best

def s2_decide(state, config, rng):
    start = time.perf_counter()
    root, steps = search(state, config, rng)
    action = best_root_action(root)
    logger.debug(
        'mcts at (%d,%d): %s after %d simulations, %d steps; visits %s',
        state.player.x, state.player.y, action.value, config.simulations, steps,
        {a.value: c.visit_count for a, c in root.children.items()}
    )
    return Decision(action, steps, time.perf_counter() - start)

def _expectimax_value(state, depth, config):
    if depth == 0 or state.status is not Status.ONGOING:
        return evaluate_leaf(state, config)
    return max(
        _expected_value(state, action, depth, config)
        for action in legal_actions(state)
    )

def _expected_value(state, action, depth, config):
    total = 0.0
    for ghost_actions, p in ghost_joint_outcomes(state, action):
        nxt = transition(state, action, ghost_actions).next_state
        total += p * _expectimax_value(nxt, depth - 1, config)
    return total

def expectimax_values(state, config):
    """Return {Action: exact expected value} for each legal root action."""
    require_ongoing(state)
    return {
        action: _expected_value(state, action, config.depth, config)
        for action in legal_actions(state)
    }

def expectimax_decide(state, config):
    """Exact depth-limited expectimax over enumerated ghost outcomes.

       Returns (action, value); ties keep the earlier action in the
       fixed order.
    """
    values = expectimax_values(state, config)
    best = None
    for action in ACTIONS:
        if action in values and (best is None or values[action] > values[best]):
            best = action
    return best, values[best]
