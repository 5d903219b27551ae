
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""Seeded episodes, benchmark campaigns, sweeps and their CSV exports.

Episode i of a campaign with base seed B plays with seed
derive_seed(B, i), a counter-based derivation that does not depend on
any other episode.  Within an episode the seed is split into three
independent streams, one each for System 0, System 2 and the ghosts,
so changing which system decides a move never shifts the ghosts'
random draws.

Compute is accounted in units: the chosen system's units for each
move plus the switching policy's overhead for that move.  Wall time
is measured too but is machine dependent.

"""

import os
import time
import logging
import collections
import multiprocessing
from dataclasses import dataclass, field, replace

import numpy as np

from .env import initial_state, step, action_between, Status
from .agents.s1 import s1_decide
from .agents.s2 import MctsConfig, s2_decide
from .system0 import (
    SystemChoice, AlwaysS1, AlwaysS2, Random, ProximityEscapeS1, ProximityEscapeS2,
    FoodThreshold, LocationDifficulty, choose_system,
)
from .util import numstr, fixed4, csv_text

logger = logging.getLogger(__name__)

# an episode still ongoing after this many moves is an error, not a result
MAX_EPISODE_STEPS = int(os.getenv('METAPAC_MAX_EPISODE_STEPS', '20000'))

SWEEP_FAMILIES = ('random-p', 'prox-s1-r', 'prox-s2-r', 'food-F')

SUMMARY_COLUMNS = ('system', 'win_rate', 'avg_time', 'avg_score', 'avg_compute', 's1_fraction')
SWEEP_COLUMNS = ('param', 'win_rate', 'avg_time', 'avg_score', 'avg_compute')
EPISODE_COLUMNS = (
    'game', 'seed', 'won', 'score', 'steps', 'time', 'compute',
    's1_moves', 's2_moves', 'death_x', 'death_y',
)

# kind -> (column header, EpisodeResult field, formatter)
SORTED_KINDS = {
    'sorted-scores': ('score', 'final_score', str),
    'sorted-times': ('time', 'wall_time', fixed4),
    'sorted-compute': ('compute', 'compute_units', str),
}

EXPORT_KINDS = ('summary', 'episodes', 'sweep') + tuple(SORTED_KINDS)

class EmptyResultsError (ValueError):
    pass

class EpisodeLimitError (RuntimeError):
    pass

@dataclass(frozen=True, eq=False)
class AgentSpec (object):
    """A switching policy together with what its two systems need.

       qtable may be None only for AlwaysS2; mcts is ignored by AlwaysS1.
    """
    policy: object
    qtable: object = None
    mcts: MctsConfig = field(default_factory=MctsConfig)
    label: str = None

    def __post_init__(self):
        if self.qtable is None and not isinstance(self.policy, AlwaysS2):
            raise ValueError('policy %s needs a System 1 table' % self.policy.spec)

    @property
    def name(self):
        return self.label or self.policy.spec

# executed is read back from the player's displacement, not copied from the decision
MoveRecord = collections.namedtuple(
    'MoveRecord',
    ['system', 'proposed', 'executed', 'compute_units', 'overhead']
)

@dataclass(frozen=True)
class EpisodeResult (object):
    seed: int
    won: bool
    final_score: int
    steps: int
    wall_time: float
    compute_units: int
    s1_moves: int
    s2_moves: int
    death_cell: object = None
    trace: tuple = None

@dataclass(frozen=True)
class BenchmarkSummary (object):
    n_games: int
    win_rate: float
    mean_score: float
    mean_wall_time: float
    mean_compute_units: float
    s1_usage_fraction: float

    @classmethod
    def from_results(cls, results):
        n = len(results)
        if n == 0:
            raise EmptyResultsError('cannot summarize zero episodes')
        steps = sum(r.steps for r in results)
        return cls(
            n_games=n,
            win_rate=sum(1 for r in results if r.won) / n,
            mean_score=sum(r.final_score for r in results) / n,
            mean_wall_time=sum(r.wall_time for r in results) / n,
            mean_compute_units=sum(r.compute_units for r in results) / n,
            s1_usage_fraction=sum(r.s1_moves for r in results) / steps if steps else 0.0,
        )

def derive_seed(base_seed, index):
    """Seed of episode index in a campaign seeded with base_seed."""
    ss = np.random.SeedSequence(base_seed, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])

def episode_streams(seed):
    """Return the (system 0, system 2, ghosts) random streams of an episode."""
    return tuple(np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3))

def run_episode(spec, layout, seed, rewards=None, trace=False, max_steps=None):
    """Play one game to its end and account for it.

       Arguments:
         spec: AgentSpec
         layout: Layout to play on
         seed: episode seed, see episode_streams()
         rewards: RewardConstants or None for the defaults
         trace: attach one MoveRecord per move to the result
         max_steps: move limit, MAX_EPISODE_STEPS by default

       Raises EpisodeLimitError when the game outlasts max_steps.
    """
    max_steps = MAX_EPISODE_STEPS if max_steps is None else max_steps
    rng0, rng2, rng_env = episode_streams(seed)
    policy = spec.policy
    state = initial_state(layout, rewards)
    compute = 0
    counts = {SystemChoice.S1: 0, SystemChoice.S2: 0}
    records = [] if trace else None

    start = time.perf_counter()
    while state.status is Status.ONGOING:
        if state.step_count >= max_steps:
            raise EpisodeLimitError('episode with seed %d still ongoing after %d moves' % (seed, max_steps))
        system = choose_system(policy, state, layout, rng0)
        overhead = policy.overhead(state)
        if system is SystemChoice.S1:
            decision = s1_decide(spec.qtable, state)
        else:
            decision = s2_decide(state, spec.mcts, rng2)
        counts[system] += 1
        compute += decision.compute_units + overhead
        before = state.player
        state = step(state, decision.action, rng_env).next_state
        if trace:
            executed = action_between(before, state.player)
            records.append(MoveRecord(system, decision.action, executed, decision.compute_units, overhead))
    wall_time = time.perf_counter() - start

    result = EpisodeResult(
        seed=seed,
        won=state.status is Status.WON,
        final_score=state.score,
        steps=state.step_count,
        wall_time=wall_time,
        compute_units=compute,
        s1_moves=counts[SystemChoice.S1],
        s2_moves=counts[SystemChoice.S2],
        death_cell=state.player if state.status is Status.LOST else None,
        trace=tuple(records) if trace else None,
    )
    logger.debug(
        '%s seed %d: %s, score %d, %d steps, %d units',
        spec.name, seed, 'won' if result.won else 'lost', result.final_score, result.steps, result.compute_units
    )
    return result

# per-process campaign inputs, installed by _init_worker
_campaign = None

def _init_worker(spec, layout, rewards):
    global _campaign
    _campaign = (spec, layout, rewards)

def _run_seed(seed):
    spec, layout, rewards = _campaign
    return run_episode(spec, layout, seed, rewards)

def run_benchmark(spec, layout, n_games, base_seed, workers=1, rewards=None):
    """Run n_games seeded episodes and summarize them.

       Results come back in episode order whatever the number of
       worker processes, so the summary depends only on the inputs
       (wall times aside).

       Returns (BenchmarkSummary, list of EpisodeResult).
    """
    if n_games < 1:
        raise ValueError('n_games must be at least 1, got %r' % (n_games,))
    if workers < 1:
        raise ValueError('workers must be at least 1, got %r' % (workers,))

    seeds = [derive_seed(base_seed, i) for i in range(n_games)]
    report_every = max(1, n_games // 10)
    results = []

    def collect(result):
        results.append(result)
        if len(results) % report_every == 0 or len(results) == n_games:
            logger.info('%s: %d/%d games done', spec.name, len(results), n_games)

    if workers == 1:
        for seed in seeds:
            collect(run_episode(spec, layout, seed, rewards))
    else:
        with multiprocessing.Pool(processes=workers, initializer=_init_worker, initargs=(spec, layout, rewards)) as pool:
            for result in pool.imap(_run_seed, seeds, chunksize=max(1, n_games // (4 * workers))):
                collect(result)

    summary = BenchmarkSummary.from_results(results)
    logger.info(
        '%s: win rate %.4f, mean score %.4f, mean compute %.4f over %d games',
        spec.name, summary.win_rate, summary.mean_score, summary.mean_compute_units, n_games
    )
    return summary, results

def _radius(value):
    value = float(value)
    if not value.is_integer():
        raise ValueError('radius r must be a whole number of cells, got %s' % numstr(value))
    return int(value)

def sweep_policy(family, value, food_radius=2):
    """Policy of a sweep family at one parameter value."""
    if family == 'random-p':
        return Random(float(value))
    if family == 'prox-s1-r':
        return ProximityEscapeS1(_radius(value))
    if family == 'prox-s2-r':
        return ProximityEscapeS2(_radius(value))
    if family == 'food-F':
        return FoodThreshold(float(value), food_radius)
    raise ValueError('unknown sweep family %r, expected one of %s' % (family, ', '.join(SWEEP_FAMILIES)))

def sweep(family, values, spec, layout, n_games, base_seed, workers=1, rewards=None, food_radius=2):
    """Benchmark one policy family over parameter values.

       Every value replays the same episode seeds, so rows compare
       like with like.  spec supplies the System 1 table and search
       config; its policy is replaced per value.

       Returns [(value, BenchmarkSummary), ...] in input order.
    """
    values = list(values)
    if not values:
        raise ValueError('sweep needs at least one parameter value')
    policies = [sweep_policy(family, v, food_radius) for v in values]
    rows = []
    for value, policy in zip(values, policies):
        member = replace(spec, policy=policy, label=None)
        summary, results = run_benchmark(member, layout, n_games, base_seed, workers, rewards)
        rows.append((value, summary))
    return rows

def comparison_policies(prefs=None, food_radius=2):
    """The six agents of the summary table; locdiff only when prefs is given."""
    policies = [
        ('System 1', AlwaysS1()),
        ('System 2', AlwaysS2()),
        ('Random p=0.1', Random(0.1)),
        ('Proximity r=2', ProximityEscapeS2(2)),
        ('Food F=0.9', FoodThreshold(0.9, food_radius)),
    ]
    if prefs is not None:
        policies.append(('Location r=2', LocationDifficulty(2, prefs)))
    return policies

def compare(spec, layout, n_games, base_seed, workers=1, rewards=None, prefs=None, food_radius=2):
    """Benchmark the summary-table agents on shared seeds.

       Returns [(label, BenchmarkSummary), ...].
    """
    if prefs is None:
        logger.warning('no preference map given, skipping the location difficulty agent')
    rows = []
    for label, policy in comparison_policies(prefs, food_radius):
        member = replace(spec, policy=policy, label=label)
        summary, results = run_benchmark(member, layout, n_games, base_seed, workers, rewards)
        rows.append((label, summary))
    return rows

def format_summary(rows):
    """Render [(system, BenchmarkSummary), ...] as summary CSV."""
    return csv_text(
        SUMMARY_COLUMNS,
        [
            (system, fixed4(s.win_rate), fixed4(s.mean_wall_time), fixed4(s.mean_score),
             fixed4(s.mean_compute_units), fixed4(s.s1_usage_fraction))
            for system, s in rows
        ]
    )

def format_sorted(results, kind):
    column, attr, fmt = SORTED_KINDS[kind]
    values = sorted(getattr(r, attr) for r in results)
    return csv_text(('rank', column), [(rank, fmt(v)) for rank, v in enumerate(values, start=1)])

def format_episodes(results):
    return csv_text(
        EPISODE_COLUMNS,
        [
            (i, r.seed, int(r.won), r.final_score, r.steps, fixed4(r.wall_time), r.compute_units,
             r.s1_moves, r.s2_moves,
             '' if r.death_cell is None else r.death_cell.x,
             '' if r.death_cell is None else r.death_cell.y)
            for i, r in enumerate(results)
        ]
    )

def format_sweep(rows):
    return csv_text(
        SWEEP_COLUMNS,
        [
            (numstr(value), fixed4(s.win_rate), fixed4(s.mean_wall_time), fixed4(s.mean_score),
             fixed4(s.mean_compute_units))
            for value, s in rows
        ]
    )

def export_results(results, kind, system='agent'):
    """Render campaign results as CSV text.

       Arguments:
         results: list of EpisodeResult, or [(value, BenchmarkSummary), ...]
           for kind 'sweep'
         kind: one of EXPORT_KINDS
         system: label of the summary row

       Floats carry four decimals.  Raises EmptyResultsError when
       there is nothing to export.
    """
    if not results:
        raise EmptyResultsError('no results to export as %s' % kind)
    if kind == 'summary':
        return format_summary([(system, BenchmarkSummary.from_results(results))])
    if kind == 'episodes':
        return format_episodes(results)
    if kind == 'sweep':
        return format_sweep(results)
    if kind in SORTED_KINDS:
        return format_sorted(results, kind)
    raise ValueError('unknown export kind %r, expected one of %s' % (kind, ', '.join(EXPORT_KINDS)))
