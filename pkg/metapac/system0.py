
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""System 0: per-move routing between System 1 and System 2.

A switching policy looks at the state before each move and names the
system that will decide it.  It never proposes an action itself and
never simulates the game; its cost is a handful of distance and
fraction computations, reported by overhead().

Policy specifications are short strings:

   always-s1
   always-s2
   random:p=0.1             System 1 with probability p
   prox-s1:r=1              System 1 when a ghost is closer than r
   prox-s2:r=2              System 2 when a ghost is closer than r
   food:F=0.9,r=2           escape with System 2 when a ghost is closer
                            than r, else System 2 while more than F of
                            the food is left
   food-inv:F=0.9,r=2       same escape, food clause with systems swapped
   locdiff:r=2,map=PATH     when a ghost is closer than r, the system
                            that dies less often at the player's cell

Distances are Manhattan distances to the closest ghost, compared
strictly; a ghost-free maze has every ghost infinitely far away.

"""

import enum
import math
from dataclasses import dataclass

from .env import require_ongoing, closest_ghost_distance
from .util import numstr

class ZeroInitialFoodError (ValueError):
    pass

class PolicySpecError (ValueError):
    pass

class SystemChoice (enum.Enum):
    S1 = 1
    S2 = 2

def ghost_distance(state):
    return closest_ghost_distance(state) if state.ghosts else math.inf

def food_fraction(state, layout):
    if layout.food_count == 0:
        raise ZeroInitialFoodError('layout has no food to take a fraction of')
    return state.food_remaining / layout.food_count

def _check_radius(r):
    if not r >= 1:
        raise ValueError('radius r must be at least 1, got %r' % (r,))

def _check_threshold(F):
    if not 0 < F < 1:
        raise ValueError('food threshold F must lie in (0,1), got %r' % (F,))

@dataclass(frozen=True)
class AlwaysS1 (object):
    def choose(self, state, layout, rng):
        return SystemChoice.S1

    def overhead(self, state):
        return 0

    @property
    def spec(self):
        return 'always-s1'

@dataclass(frozen=True)
class AlwaysS2 (object):
    def choose(self, state, layout, rng):
        return SystemChoice.S2

    def overhead(self, state):
        return 0

    @property
    def spec(self):
        return 'always-s2'

@dataclass(frozen=True)
class Random (object):
    p: float

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError('probability p must lie in [0,1], got %r' % (self.p,))

    def choose(self, state, layout, rng):
        return SystemChoice.S1 if rng.random() < self.p else SystemChoice.S2

    def overhead(self, state):
        return 1

    @property
    def spec(self):
        return 'random:p=%s' % numstr(self.p)

class _DistancePolicy (object):

    def overhead(self, state):
        return 1

    def near(self, state):
        return ghost_distance(state) < self.r

@dataclass(frozen=True)
class ProximityEscapeS1 (_DistancePolicy):
    r: int

    def __post_init__(self):
        _check_radius(self.r)

    def choose(self, state, layout, rng):
        return SystemChoice.S1 if self.near(state) else SystemChoice.S2

    @property
    def spec(self):
        return 'prox-s1:r=%s' % numstr(self.r)

@dataclass(frozen=True)
class ProximityEscapeS2 (_DistancePolicy):
    r: int

    def __post_init__(self):
        _check_radius(self.r)

    def choose(self, state, layout, rng):
        return SystemChoice.S2 if self.near(state) else SystemChoice.S1

    @property
    def spec(self):
        return 'prox-s2:r=%s' % numstr(self.r)

@dataclass(frozen=True)
class FoodThreshold (_DistancePolicy):
    F: float
    r: int = 2

    def __post_init__(self):
        _check_threshold(self.F)
        _check_radius(self.r)

    def choose(self, state, layout, rng):
        if self.near(state):
            return SystemChoice.S2
        return SystemChoice.S2 if food_fraction(state, layout) > self.F else SystemChoice.S1

    @property
    def spec(self):
        return 'food:F=%s,r=%s' % (numstr(self.F), numstr(self.r))

@dataclass(frozen=True)
class FoodThresholdInverted (_DistancePolicy):
    F: float
    r: int = 2

    def __post_init__(self):
        _check_threshold(self.F)
        _check_radius(self.r)

    def choose(self, state, layout, rng):
        if self.near(state):
            return SystemChoice.S2
        return SystemChoice.S1 if food_fraction(state, layout) > self.F else SystemChoice.S2

    @property
    def spec(self):
        return 'food-inv:F=%s,r=%s' % (numstr(self.F), numstr(self.r))

@dataclass(frozen=True, eq=False)
class LocationDifficulty (_DistancePolicy):
    r: int
    prefs: object
    map_path: str = None

    def __post_init__(self):
        _check_radius(self.r)

    def choose(self, state, layout, rng):
        if self.near(state):
            return self.prefs.system_at(state.player)
        return SystemChoice.S1

    @property
    def spec(self):
        return 'locdiff:r=%s,map=%s' % (numstr(self.r), self.map_path or '')

def choose_system(policy, state, layout, rng):
    """Return the SystemChoice for the next move of an ongoing game."""
    require_ongoing(state)
    return policy.choose(state, layout, rng)

def _split_spec(text):
    name, sep, rest = text.strip().partition(':')
    params = {}
    if sep:
        for item in rest.split(','):
            key, eq, value = item.partition('=')
            key = key.strip()
            if not eq or not key:
                raise PolicySpecError('malformed parameter %r in policy %r' % (item, text))
            if key in params:
                raise PolicySpecError('parameter %r repeated in policy %r' % (key, text))
            params[key] = value.strip()
    return name.strip(), params

def _number(params, key, conv, text, default=None):
    if key not in params:
        if default is None:
            raise PolicySpecError('policy %r needs parameter %s' % (text, key))
        return default
    try:
        value = conv(params.pop(key))
    except ValueError:
        raise PolicySpecError('policy %r: %s is not a valid %s' % (text, key, conv.__name__))
    return value

def parse_policy(text, layout=None, food_radius=2):
    """Parse a policy specification string into a policy value.

       Arguments:
         text: the specification, see the module documentation
         layout: Layout the preference map of a locdiff policy is read against
         food_radius: escape radius of food/food-inv policies lacking r=

       Raises PolicySpecError for unknown names, missing or extra
       parameters and unreadable numbers.  Out-of-range numbers raise
       PolicySpecError too.
    """
    name, params = _split_spec(text)
    prefs = None
    map_path = None
    if name == 'locdiff':
        if 'map' not in params:
            raise PolicySpecError('policy %r needs parameter map' % (text,))
        if layout is None:
            raise PolicySpecError('policy %r needs a layout to read its map against' % (text,))
        map_path = params.pop('map')
        from .stats import load_preference_from_csv
        prefs = load_preference_from_csv(map_path, layout)

    try:
        if name == 'always-s1':
            policy = AlwaysS1()
        elif name == 'always-s2':
            policy = AlwaysS2()
        elif name == 'random':
            policy = Random(_number(params, 'p', float, text))
        elif name == 'prox-s1':
            policy = ProximityEscapeS1(_number(params, 'r', int, text))
        elif name == 'prox-s2':
            policy = ProximityEscapeS2(_number(params, 'r', int, text))
        elif name == 'food':
            policy = FoodThreshold(_number(params, 'F', float, text), _number(params, 'r', int, text, food_radius))
        elif name == 'food-inv':
            policy = FoodThresholdInverted(_number(params, 'F', float, text), _number(params, 'r', int, text, food_radius))
        elif name == 'locdiff':
            policy = LocationDifficulty(_number(params, 'r', int, text), prefs, map_path)
        else:
            raise PolicySpecError('unknown policy %r' % (name,))
    except PolicySpecError:
        raise
    except ValueError as e:
        raise PolicySpecError('policy %r: %s' % (text, e))
    if params:
        raise PolicySpecError('policy %r has unknown parameters %s' % (text, ', '.join(sorted(params))))
    return policy
