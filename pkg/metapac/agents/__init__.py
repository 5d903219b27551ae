
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""The two decision systems.

   s1: System 1, greedy lookup in a tabular Q-learning table over an
   abstracted feature key.  Costs one table read per legal action and
   never simulates the game.

   s2: System 2, Monte-Carlo tree search bounded to a few player plies
   with sampled ghost chance nodes and a heuristic leaf evaluation.
   Costs one simulated game step per tree edge traversed.

Both return a Decision carrying the chosen action and the compute it
took, counted in machine-independent compute units and in seconds.

"""

from dataclasses import dataclass

@dataclass(frozen=True)
class Decision (object):
    action: object
    compute_units: int
    wall_time: float

    def __post_init__(self):
        if self.compute_units < 1:
            raise ValueError('a decision costs at least one compute unit, got %r' % (self.compute_units,))
