
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""Command-line driver.

   metapac train    train System 1 and write its table
   metapac stats    death maps of both single-system agents and the
                    preference map built from them
   metapac bench    benchmark one switching policy
   metapac sweep    benchmark a policy family over parameter values
   metapac table    benchmark the six summary-table agents
   metapac plot     draw an exported curve or sweep CSV as SVG

Exit status is 0 on success, 2 for configuration or input file
problems and 1 for any other failure.

"""

import os
import sys
import logging
import argparse

from deriva.core import BaseCLI, init_logging, format_exception

from . import __version__
from .env import load_layout, LayoutError
from .agents.s1 import train, dump_qtable_to_csv, load_qtable_from_csv, QTableFormatError
from .system0 import AlwaysS1, AlwaysS2, SystemChoice, parse_policy, PolicySpecError
from .stats import (
    deathmap_from_results, build_preference, dump_deathmap_to_csv, dump_preference_to_csv,
    load_preference_from_csv, ParseError, DimensionMismatchError,
)
from .harness import (
    AgentSpec, run_benchmark, sweep, compare, export_results, format_summary, format_sweep,
    sweep_policy, SWEEP_FAMILIES,
)
from .plot import plot_csv, PLOT_KINDS, SchemaMismatchError
from .config import load_config, write_config, ConfigError
from .util import write_text

logger = logging.getLogger(__name__)

# errors caused by what the user asked for rather than by the program
INPUT_ERRORS = (
    ConfigError, PolicySpecError, LayoutError, QTableFormatError, ParseError,
    DimensionMismatchError, SchemaMismatchError, OSError,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

# base seed of the death map campaigns relative to the configured seed
STATS_SEED_OFFSET = 1

class MetapacCLI (BaseCLI):
    """Argument parsing on top of the deriva CLI scaffold.

       The catalog connection options of the scaffold do not apply and
       are removed; --quiet and --debug are kept for logging.
    """
    def __init__(self, description, epilog, version):
        BaseCLI.__init__(self, description, epilog, version)
        self.remove_options(['--host', '--config-file', '--credential-file', '--token', '--oauth2-token'])

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--config', metavar='PATH', help='run configuration file')
        common.add_argument('--layout', metavar='PATH', help='maze file')
        common.add_argument('--policy', metavar='SPEC', help='switching policy, e.g. prox-s2:r=2')
        common.add_argument('--games', metavar='N', type=int, help='games per benchmark')
        common.add_argument('--seed', metavar='N', type=int, help='base seed of the campaign')
        common.add_argument('--workers', metavar='N', type=int, help='worker processes')
        common.add_argument('--out', metavar='DIR', help='output directory')

        sub = self.parser.add_subparsers(dest='command', metavar='COMMAND')
        sub.required = True

        p = sub.add_parser('train', parents=[common], help='train System 1')
        p.set_defaults(func=cmd_train)

        p = sub.add_parser('stats', parents=[common], help='collect death maps and build the preference map (--games sets stats_games)')
        p.set_defaults(func=cmd_stats)

        p = sub.add_parser('bench', parents=[common], help='benchmark one switching policy')
        p.set_defaults(func=cmd_bench)

        p = sub.add_parser('sweep', parents=[common], help='benchmark a policy family over parameter values')
        p.add_argument('family', choices=SWEEP_FAMILIES)
        p.add_argument('values', nargs='+', metavar='VALUE')
        p.set_defaults(func=cmd_sweep)

        p = sub.add_parser('table', parents=[common], help='benchmark the summary-table agents')
        p.add_argument('--map', metavar='PATH', help='preference map for the location difficulty agent')
        p.set_defaults(func=cmd_table)

        p = sub.add_parser('plot', help='draw a curve or sweep CSV as SVG')
        p.add_argument('csv', metavar='CSV')
        p.add_argument('--kind', choices=PLOT_KINDS, default='line')
        p.add_argument('--baseline', metavar='SUMMARY', help='summary CSV with System 1/System 2 rows')
        p.add_argument('--output', metavar='SVG', help='defaults to CSV with a .svg suffix')
        p.set_defaults(func=cmd_plot)

def _config(args, games_key='games'):
    overrides = {
        key: getattr(args, key, None)
        for key in ('layout', 'policy', 'seed', 'workers', 'out')
    }
    overrides[games_key] = getattr(args, 'games', None)
    return load_config(args.config, overrides)

def _prepare(config):
    os.makedirs(config.out, exist_ok=True)
    write_config(config, config.out)
    return load_layout(config.layout)

def _agent(config, layout, policy, label=None):
    qtable = None if isinstance(policy, AlwaysS2) else load_qtable_from_csv(config.qtable_path)
    return AgentSpec(policy, qtable, config.mcts_config(), label)

def _out(config, filename):
    return os.path.join(config.out, filename)

def cmd_train(args):
    config = _config(args)
    layout = _prepare(config)
    params = config.learn_params()
    table = train(layout, params, config.train_seed, config.rewards())
    dump_qtable_to_csv(table, config.qtable_path)
    print('trained %d episodes, %d table entries -> %s' % (params.training_episodes, len(table), config.qtable_path))

def cmd_stats(args):
    config = _config(args, games_key='stats_games')
    # observation games must not be the games a preference map is later scored on
    seed = config.seed + STATS_SEED_OFFSET
    layout = _prepare(config)
    deaths = {}
    for system, policy in ((SystemChoice.S1, AlwaysS1()), (SystemChoice.S2, AlwaysS2())):
        summary, results = run_benchmark(
            _agent(config, layout, policy), layout, config.stats_games, seed, config.workers, config.rewards()
        )
        deaths[system] = deathmap_from_results(results, layout, system)
        dump_deathmap_to_csv(deaths[system], _out(config, 'deathmap_s%d.csv' % system.value))
        print('System %d: %d deaths in %d games' % (system.value, deaths[system].total, config.stats_games))
    prefs = build_preference(deaths[SystemChoice.S1], deaths[SystemChoice.S2])
    dump_preference_to_csv(prefs, _out(config, 'preference.csv'))

def cmd_bench(args):
    config = _config(args)
    layout = _prepare(config)
    policy = parse_policy(config.policy, layout, config.food_radius)
    spec = _agent(config, layout, policy)
    summary, results = run_benchmark(spec, layout, config.games, config.seed, config.workers, config.rewards())
    for kind, filename in (
            ('summary', 'summary.csv'),
            ('sorted-scores', 'scores_sorted.csv'),
            ('sorted-times', 'times_sorted.csv'),
            ('sorted-compute', 'compute_sorted.csv'),
            ('episodes', 'episodes.csv'),
    ):
        write_text(_out(config, filename), export_results(results, kind, spec.name))
    print('%s: win rate %.4f, mean score %.4f, mean compute %.4f' % (
        spec.name, summary.win_rate, summary.mean_score, summary.mean_compute_units
    ))

def cmd_sweep(args):
    config = _config(args)
    layout = _prepare(config)
    try:
        values = [float(v) for v in args.values]
    except ValueError as e:
        raise ConfigError('sweep values must be numbers: %s' % e)
    for value in values:
        try:
            sweep_policy(args.family, value, config.food_radius)
        except ValueError as e:
            raise ConfigError("%s %s: %s" % (args.family, value, e))
    # the family's policy replaces this one; System 1 is always needed
    spec = _agent(config, layout, AlwaysS1())
    rows = sweep(
        args.family, values, spec, layout, config.games, config.seed, config.workers,
        config.rewards(), config.food_radius
    )
    write_text(_out(config, 'sweep_%s.csv' % args.family), format_sweep(rows))
    print('%s: %d rows' % (args.family, len(rows)))

def cmd_table(args):
    config = _config(args)
    layout = _prepare(config)
    prefs = load_preference_from_csv(args.map, layout) if args.map else None
    spec = _agent(config, layout, AlwaysS1())
    rows = compare(spec, layout, config.games, config.seed, config.workers, config.rewards(), prefs, config.food_radius)
    write_text(_out(config, 'summary.csv'), format_summary(rows))
    for label, summary in rows:
        print('%-16s win rate %.4f, mean compute %.4f' % (label, summary.win_rate, summary.mean_compute_units))

def cmd_plot(args):
    output = args.output or os.path.splitext(args.csv)[0] + '.svg'
    plot_csv(args.csv, output, args.kind, args.baseline)

def main(argv=None):
    cli = MetapacCLI(
        'metapac',
        'Switching between a fast and a slow decision system in a pursuit game.',
        __version__
    )
    args = cli.parser.parse_args(argv)
    if getattr(args, 'quiet', False):
        level = logging.ERROR
    elif getattr(args, 'debug', False):
        level = logging.DEBUG
    else:
        level = logging.INFO
    init_logging(level=level)

    try:
        args.func(args)
        return EXIT_OK
    except INPUT_ERRORS as e:
        logger.error(format_exception(e))
        return EXIT_INPUT
    except Exception as e:
        logger.error(format_exception(e))
        return EXIT_FAILURE

if __name__ == '__main__':
    sys.exit(main())
