
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

"""Where single-system agents die, and which system to trust where.

A DeathMap counts, per maze cell, the games a single-system agent lost
with the player standing on that cell.  Two such maps, one per system,
yield a PreferenceMap naming for every open cell the system that died
there less often; equal counts prefer System 2.

File formats (CSV, '\\n' line endings):

   deathmap,<system 1|2>,<width>,<height>,<games>
   x,y,count             one line per cell with a nonzero count

   preference,<width>,<height>
   x,y,<system 1|2>      one line per open cell

Cells are listed in row-major order.

"""

import io
import csv
import logging
from dataclasses import dataclass

import numpy as np

from .system0 import SystemChoice
from .util import csv_text, write_text, read_text

logger = logging.getLogger(__name__)

# largest relative difference in games observed that build_preference accepts
MAX_GAMES_IMBALANCE = 0.10

class WallCellError (ValueError):
    pass

class DimensionMismatchError (ValueError):
    pass

class UnbalancedSamplesError (ValueError):
    pass

class ParseError (ValueError):
    pass

@dataclass(eq=False)
class DeathMap (object):
    """Per-cell death counts of one single-system agent.

       Fields:

         counts: int64 array of shape (height, width)
         walls: bool array of the same shape, shared with the layout
         system: SystemChoice of the agent observed
         games_observed: number of games the counts were taken from
    """
    counts: np.ndarray
    walls: np.ndarray
    system: SystemChoice
    games_observed: int = 0

    @classmethod
    def empty(cls, layout, system, games_observed=0):
        return cls(np.zeros(layout.shape, dtype=np.int64), layout.walls, system, games_observed)

    @property
    def shape(self):
        return self.counts.shape

    @property
    def total(self):
        return int(self.counts.sum())

    def __eq__(self, other):
        return (
            isinstance(other, DeathMap)
            and self.system is other.system
            and self.games_observed == other.games_observed
            and self.shape == other.shape
            and bool((self.counts == other.counts).all())
            and bool((self.walls == other.walls).all())
        )

    def count(self, cell):
        return int(self.counts[cell.y, cell.x])

def record_death(deaths, cell):
    """Count one death at cell in place and return the map."""
    h, w = deaths.shape
    if not (0 <= cell.x < w and 0 <= cell.y < h) or deaths.walls[cell.y, cell.x]:
        raise WallCellError('cannot record a death at wall cell (%d,%d)' % (cell.x, cell.y))
    deaths.counts[cell.y, cell.x] += 1
    return deaths

def merge_deathmaps(a, b):
    """Cell-wise sum of two maps of the same system and maze."""
    if a.shape != b.shape or not (a.walls == b.walls).all():
        raise DimensionMismatchError('cannot merge death maps of shapes %s and %s' % (a.shape, b.shape))
    if a.system is not b.system:
        raise ValueError('cannot merge death maps of %s and %s' % (a.system.name, b.system.name))
    return DeathMap(a.counts + b.counts, a.walls, a.system, a.games_observed + b.games_observed)

def deathmap_from_results(results, layout, system):
    """Build a DeathMap from EpisodeResults of a single-system campaign."""
    deaths = DeathMap.empty(layout, system, len(results))
    for result in results:
        if result.death_cell is not None:
            record_death(deaths, result.death_cell)
    return deaths

@dataclass(eq=False)
class PreferenceMap (object):
    """Per-cell SystemChoice, stored as 1 or 2 on open cells and 0 on walls."""
    choices: np.ndarray
    walls: np.ndarray

    @property
    def shape(self):
        return self.choices.shape

    def __eq__(self, other):
        return (
            isinstance(other, PreferenceMap)
            and self.shape == other.shape
            and bool((self.choices == other.choices).all())
        )

    def system_at(self, cell):
        value = int(self.choices[cell.y, cell.x])
        if value == 0:
            raise WallCellError('no preference at wall cell (%d,%d)' % (cell.x, cell.y))
        return SystemChoice(value)

def build_preference(deaths_s1, deaths_s2):
    if deaths_s1.shape != deaths_s2.shape or not (deaths_s1.walls == deaths_s2.walls).all():
        raise DimensionMismatchError(
            'death maps have shapes %s and %s' % (deaths_s1.shape, deaths_s2.shape)
        )
    g1, g2 = deaths_s1.games_observed, deaths_s2.games_observed
    if abs(g1 - g2) > MAX_GAMES_IMBALANCE * max(g1, g2):
        raise UnbalancedSamplesError('death maps observed %d and %d games' % (g1, g2))

    choices = np.where(
        deaths_s1.counts < deaths_s2.counts,
        SystemChoice.S1.value,
        SystemChoice.S2.value
    ).astype(np.int8)
    choices[deaths_s1.walls] = 0
    prefs = PreferenceMap(choices, deaths_s1.walls)
    logger.info(
        'preference map: System 1 on %d cells, System 2 on %d cells',
        int((choices == SystemChoice.S1.value).sum()),
        int((choices == SystemChoice.S2.value).sum())
    )
    return prefs

def format_deathmap(deaths):
    h, w = deaths.shape
    ys, xs = np.nonzero(deaths.counts)
    return csv_text(
        ('deathmap', deaths.system.value, w, h, deaths.games_observed),
        [(int(x), int(y), int(deaths.counts[y, x])) for y, x in zip(ys, xs)]
    )

def _rows(text, header_tag, header_len):
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows or rows[0][0] != header_tag or len(rows[0]) != header_len:
        raise ParseError('expected a %s header with %d fields' % (header_tag, header_len))
    header = [_int(1, v) for v in rows[0][1:]]
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise ParseError('line %d has %d fields, expected 3' % (lineno, len(row)))
        body.append((lineno,) + tuple(_int(lineno, v) for v in row))
    return header, body

def _int(lineno, value):
    try:
        return int(value)
    except ValueError:
        raise ParseError('line %d: not an integer: %r' % (lineno, value))

def _check_dimensions(w, h, layout):
    if (h, w) != layout.shape:
        raise DimensionMismatchError('file is %dx%d, layout is %dx%d' % (w, h, layout.width, layout.height))

def _check_cell(lineno, x, y, layout, seen):
    if not (0 <= x < layout.width and 0 <= y < layout.height) or layout.walls[y, x]:
        raise ParseError('line %d: (%d,%d) is not an open cell' % (lineno, x, y))
    if (x, y) in seen:
        raise ParseError('line %d: (%d,%d) listed twice' % (lineno, x, y))
    seen.add((x, y))

def parse_deathmap(text, layout):
    """Parse death map text, checking it against layout.

       Raises DimensionMismatchError when the map and layout sizes
       differ and ParseError for any other malformation, including a
       count on a wall cell.
    """
    (system, w, h, games), body = _rows(text, 'deathmap', 5)
    _check_dimensions(w, h, layout)
    try:
        system = SystemChoice(system)
    except ValueError:
        raise ParseError('unknown system %r' % system)
    if games < 0:
        raise ParseError('negative games count %d' % games)
    deaths = DeathMap.empty(layout, system, games)
    seen = set()
    for lineno, x, y, count in body:
        _check_cell(lineno, x, y, layout, seen)
        if count < 1:
            raise ParseError('line %d: count must be positive, got %d' % (lineno, count))
        deaths.counts[y, x] = count
    if deaths.total > games:
        raise ParseError('%d deaths recorded over only %d games' % (deaths.total, games))
    return deaths

def format_preference(prefs):
    h, w = prefs.shape
    ys, xs = np.nonzero(~prefs.walls)
    return csv_text(
        ('preference', w, h),
        [(int(x), int(y), int(prefs.choices[y, x])) for y, x in zip(ys, xs)]
    )

def parse_preference(text, layout):
    (w, h), body = _rows(text, 'preference', 3)
    _check_dimensions(w, h, layout)
    choices = np.zeros(layout.shape, dtype=np.int8)
    seen = set()
    for lineno, x, y, value in body:
        _check_cell(lineno, x, y, layout, seen)
        if value not in (SystemChoice.S1.value, SystemChoice.S2.value):
            raise ParseError('line %d: system must be 1 or 2, got %d' % (lineno, value))
        choices[y, x] = value
    missing = int((~layout.walls).sum()) - len(seen)
    if missing:
        raise ParseError('%d open cells have no preference' % missing)
    return PreferenceMap(choices, layout.walls)

def dump_deathmap_to_csv(deaths, outfilename):
    write_text(outfilename, format_deathmap(deaths))

def load_deathmap_from_csv(infilename, layout):
    return parse_deathmap(read_text(infilename), layout)

def dump_preference_to_csv(prefs, outfilename):
    write_text(outfilename, format_preference(prefs))

def load_preference_from_csv(infilename, layout):
    return parse_preference(read_text(infilename), layout)
