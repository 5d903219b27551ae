
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""Run configuration.

A configuration file is flat text with one "key = value" per line.
'#' starts a comment and blank lines are ignored.  Values are taken in
this order, later sources winning:

   1. built-in defaults
   2. environment (METAPAC_WORKERS for the worker count)
   3. the configuration file
   4. command-line flags

Every command writes the resulting configuration back out in
canonical form (sorted keys) so a run can be repeated from its output
directory alone.

"""

import os
import logging
from dataclasses import dataclass, fields, asdict

from .env import RewardConstants, DEFAULT_LAYOUT_PATH
from .agents.s1 import LearnParams
from .agents.s2 import MctsConfig
from .util import numstr, read_text, write_text

logger = logging.getLogger(__name__)

CONFIG_FILENAME = 'config.txt'

class ConfigError (ValueError):
    pass

@dataclass(frozen=True)
class RunConfig (object):
    layout: str = DEFAULT_LAYOUT_PATH
    qtable: str = ''             # empty means <out>/qtable.csv
    out: str = 'out'
    policy: str = 'prox-s2:r=2'
    games: int = 300
    seed: int = 0
    workers: int = 1
    stats_games: int = 1000
    food_radius: int = 2

    food_reward: int = 10
    step_penalty: int = -1
    win_bonus: int = 500
    death_penalty: int = -500

    learning_rate: float = 0.1
    discount: float = 0.5
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    training_episodes: int = 50
    train_seed: int = 0

    mcts_depth: int = 2
    mcts_simulations: int = 64
    mcts_exploration: float = 1.4
    eval_w_score: float = 1.0
    eval_w_food: float = 4.0
    eval_w_ghost: float = 1.5
    eval_ghost_cap: int = 5

    def __post_init__(self):
        for name in ('games', 'workers', 'stats_games'):
            if getattr(self, name) < 1:
                raise ConfigError('%s must be at least 1, got %r' % (name, getattr(self, name)))
        if self.food_radius < 1:
            raise ConfigError('food_radius must be at least 1, got %r' % (self.food_radius,))
        for name in ('seed', 'train_seed'):
            if getattr(self, name) < 0:
                raise ConfigError('%s must be non-negative, got %r' % (name, getattr(self, name)))
        try:
            self.rewards()
            self.learn_params()
            self.mcts_config()
        except ValueError as e:
            raise ConfigError(str(e))

    @property
    def qtable_path(self):
        return self.qtable or os.path.join(self.out, 'qtable.csv')

    def rewards(self):
        return RewardConstants(self.food_reward, self.step_penalty, self.win_bonus, self.death_penalty)

    def learn_params(self):
        return LearnParams(
            learning_rate=self.learning_rate,
            discount=self.discount,
            epsilon_start=self.epsilon_start,
            epsilon_end=self.epsilon_end,
            training_episodes=self.training_episodes,
        )

    def mcts_config(self):
        return MctsConfig(
            depth=self.mcts_depth,
            simulations=self.mcts_simulations,
            exploration_c=self.mcts_exploration,
            w_score=self.eval_w_score,
            w_food=self.eval_w_food,
            w_ghost=self.eval_w_ghost,
            ghost_cap=self.eval_ghost_cap,
        )

CONFIG_KEYS = tuple(f.name for f in fields(RunConfig))
_TYPES = {f.name: f.type for f in fields(RunConfig)}

def _convert(key, value, where):
    conv = _TYPES[key]
    try:
        return conv(value)
    except ValueError:
        raise ConfigError('%s: %s must be %s, got %r' % (where, key, conv.__name__, value))

def parse_config_text(text, where='config'):
    """Return {key: typed value} for the settings in config file text."""
    settings = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition('=')
        key = key.strip()
        loc = '%s line %d' % (where, lineno)
        if not eq:
            raise ConfigError('%s: expected key = value, got %r' % (loc, line))
        if key not in _TYPES:
            raise ConfigError('%s: unknown key %r' % (loc, key))
        if key in settings:
            raise ConfigError('%s: key %r set twice' % (loc, key))
        settings[key] = _convert(key, value.strip(), loc)
    return settings

def environment_settings(environ=None):
    environ = os.environ if environ is None else environ
    settings = {}
    if environ.get('METAPAC_WORKERS'):
        settings['workers'] = _convert('workers', environ['METAPAC_WORKERS'], 'METAPAC_WORKERS')
    return settings

def load_config(path=None, overrides=None, environ=None):
    """Build a RunConfig from defaults, environment, file and overrides.

       overrides maps keys to already-typed values; None values are
       skipped so unset command-line flags fall through.
    """
    settings = environment_settings(environ)
    if path:
        try:
            text = read_text(path)
        except OSError as e:
            raise ConfigError('cannot read config file %s: %s' % (path, e.strerror))
        settings.update(parse_config_text(text, path))
    for key, value in (overrides or {}).items():
        if key not in _TYPES:
            raise ConfigError('unknown key %r' % (key,))
        if value is not None:
            settings[key] = value
    config = RunConfig(**settings)
    logger.debug('configuration: %s', asdict(config))
    return config

def _render(value):
    if isinstance(value, float):
        return numstr(value)
    return str(value)

def format_config(config):
    return ''.join(
        '%s = %s\n' % (key, _render(value))
        for key, value in sorted(asdict(config).items())
    )

def write_config(config, outdir):
    """Echo the canonical configuration into outdir, returning its path."""
    path = os.path.join(outdir, CONFIG_FILENAME)
    write_text(path, format_config(config))
    return path
