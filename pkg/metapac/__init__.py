
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""Fast and slow decision systems interleaved by a System 0 meta-controller.

The package simulates a seeded pursuit/foraging grid game and plays it
with three cooperating components:

   System 1: greedy lookup in a tabular Q-learning table (cheap, weak)

   System 2: depth-bounded Monte-Carlo tree search with stochastic
   ghost chance nodes (expensive, strong)

   System 0: a switching rule which, before every move, routes the
   decision to System 1 or System 2 without proposing an action itself

The harness runs seeded benchmark campaigns of these agents and
exports summary tables, sorted per-game curves and parameter sweeps.

"""

__version__ = "20261018.1"
