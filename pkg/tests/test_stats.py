
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

import pytest
from hypothesis import given, settings, strategies as st

from metapac.env import Cell, parse_layout
from metapac.system0 import SystemChoice
from metapac.stats import (
    DeathMap, WallCellError, DimensionMismatchError, UnbalancedSamplesError, ParseError,
    record_death, merge_deathmaps, build_preference, deathmap_from_results,
    format_deathmap, parse_deathmap, format_preference, parse_preference,
    dump_deathmap_to_csv, load_deathmap_from_csv, dump_preference_to_csv, load_preference_from_csv,
)

GRID = """\
%%%%%%
%P...%
%.%%.%
%...G%
%%%%%%
"""

@pytest.fixture
def grid():
    return parse_layout(GRID)

def _deaths(layout, system, cells, games=10):
    deaths = DeathMap.empty(layout, system, games)
    for cell in cells:
        record_death(deaths, cell)
    return deaths

def test_record_death(grid):
    deaths = DeathMap.empty(grid, SystemChoice.S1, 3)
    assert record_death(deaths, Cell(3, 1)) is deaths
    assert deaths.count(Cell(3, 1)) == 1
    record_death(deaths, Cell(3, 1))
    assert deaths.count(Cell(3, 1)) == 2
    assert deaths.total == 2
    with pytest.raises(WallCellError):
        record_death(deaths, Cell(2, 2))
    with pytest.raises(WallCellError):
        record_death(deaths, Cell(9, 9))

def test_build_preference(grid):
    s1 = _deaths(grid, SystemChoice.S1, [Cell(1, 1)] * 5 + [Cell(4, 2)] * 0)
    s2 = _deaths(grid, SystemChoice.S2, [Cell(1, 1)] + [Cell(4, 2)] * 3)
    prefs = build_preference(s1, s2)
    assert prefs.system_at(Cell(1, 1)) is SystemChoice.S2
    assert prefs.system_at(Cell(4, 2)) is SystemChoice.S1
    assert prefs.system_at(Cell(2, 3)) is SystemChoice.S2
    with pytest.raises(WallCellError):
        prefs.system_at(Cell(0, 0))

cells = st.sampled_from([Cell(x, y) for x, y in [(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (4, 2), (1, 3), (2, 3), (3, 3), (4, 3)]])

@given(a=st.lists(cells, max_size=8), b=st.lists(cells, max_size=8))
def test_preference_follows_strictly_smaller_count(a, b):
    grid = parse_layout(GRID)
    s1 = _deaths(grid, SystemChoice.S1, a, 20)
    s2 = _deaths(grid, SystemChoice.S2, b, 20)
    prefs = build_preference(s1, s2)
    for cell in grid.open_cells():
        n1, n2 = s1.count(cell), s2.count(cell)
        expected = SystemChoice.S1 if n1 < n2 else SystemChoice.S2
        assert prefs.system_at(cell) is expected

def test_preference_checks(grid):
    other = parse_layout("%%%%\n%P.%\n%%%%")
    with pytest.raises(DimensionMismatchError):
        build_preference(DeathMap.empty(grid, SystemChoice.S1, 10), DeathMap.empty(other, SystemChoice.S2, 10))
    with pytest.raises(UnbalancedSamplesError):
        build_preference(DeathMap.empty(grid, SystemChoice.S1, 100), DeathMap.empty(grid, SystemChoice.S2, 80))
    # within ten percent
    build_preference(DeathMap.empty(grid, SystemChoice.S1, 100), DeathMap.empty(grid, SystemChoice.S2, 91))

@settings(max_examples=30)
@given(a=st.lists(cells, max_size=6), b=st.lists(cells, max_size=6), c=st.lists(cells, max_size=6))
def test_merge_is_associative_and_commutative(a, b, c):
    grid = parse_layout(GRID)
    ma, mb, mc = (_deaths(grid, SystemChoice.S2, x, 6) for x in (a, b, c))
    assert merge_deathmaps(merge_deathmaps(ma, mb), mc) == merge_deathmaps(ma, merge_deathmaps(mb, mc))
    assert merge_deathmaps(ma, mb) == merge_deathmaps(mb, ma)
    merged = merge_deathmaps(ma, mb)
    assert merged.total == len(a) + len(b)
    assert merged.games_observed == 12

def test_merge_rejects_mixed_systems(grid):
    with pytest.raises(ValueError):
        merge_deathmaps(DeathMap.empty(grid, SystemChoice.S1), DeathMap.empty(grid, SystemChoice.S2))

class _Result (object):
    def __init__(self, death_cell):
        self.death_cell = death_cell

def test_deaths_equal_lost_games(grid):
    results = [_Result(Cell(1, 1)), _Result(None), _Result(Cell(4, 3)), _Result(Cell(1, 1))]
    deaths = deathmap_from_results(results, grid, SystemChoice.S1)
    assert deaths.games_observed == 4
    assert deaths.total == 3
    assert deaths.count(Cell(1, 1)) == 2

def test_deathmap_format(grid):
    deaths = _deaths(grid, SystemChoice.S2, [Cell(3, 1), Cell(1, 3), Cell(3, 1)], 7)
    assert format_deathmap(deaths) == 'deathmap,2,6,5,7\n3,1,2\n1,3,1\n'
    assert format_deathmap(DeathMap.empty(grid, SystemChoice.S1, 0)) == 'deathmap,1,6,5,0\n'
    assert parse_deathmap(format_deathmap(deaths), grid) == deaths

def test_deathmap_files(grid, tmp_path):
    deaths = _deaths(grid, SystemChoice.S1, [Cell(2, 3), Cell(4, 1)], 5)
    path = str(tmp_path / 'deaths_s1.csv')
    dump_deathmap_to_csv(deaths, path)
    assert load_deathmap_from_csv(path, grid) == deaths

@pytest.mark.parametrize('text, error', [
    ('', ParseError),
    ('preference,6,5\n', ParseError),
    ('deathmap,1,6,5,10\n2,2,1\n', ParseError),
    ('deathmap,1,6,5,10\n1,1,x\n', ParseError),
    ('deathmap,3,6,5,10\n', ParseError),
    ('deathmap,1,6,5,1\n1,1,2\n', ParseError),
    ('deathmap,1,6,5,10\n1,1,1\n1,1,1\n', ParseError),
    ('deathmap,1,6,5,10\n1,1\n', ParseError),
    ('deathmap,1,7,5,10\n', DimensionMismatchError),
])
def test_deathmap_parse_errors(grid, text, error):
    with pytest.raises(error):
        parse_deathmap(text, grid)

def test_preference_round_trip(grid, tmp_path):
    prefs = build_preference(
        _deaths(grid, SystemChoice.S1, [Cell(4, 2)]),
        _deaths(grid, SystemChoice.S2, [Cell(4, 2), Cell(4, 2), Cell(1, 1)]),
    )
    text = format_preference(prefs)
    lines = text.splitlines()
    assert lines[0] == 'preference,6,5'
    assert len(lines) == 1 + 10
    assert '4,2,1' in lines
    assert '1,1,1' in lines
    assert '2,1,2' in lines
    assert parse_preference(text, grid) == prefs
    path = str(tmp_path / 'preference.csv')
    dump_preference_to_csv(prefs, path)
    assert load_preference_from_csv(path, grid) == prefs

@pytest.mark.parametrize('text, error', [
    ('preference,6,5\n1,1,2\n', ParseError),
    ('preference,6,5\n0,0,2\n', ParseError),
    ('preference,4,3\n', DimensionMismatchError),
])
def test_preference_parse_errors(grid, text, error):
    with pytest.raises(error):
        parse_preference(text, grid)

def test_preference_bad_system(grid):
    good = format_preference(build_preference(DeathMap.empty(grid, SystemChoice.S1), DeathMap.empty(grid, SystemChoice.S2)))
    with pytest.raises(ParseError):
        parse_preference(good.replace('1,1,2', '1,1,3'), grid)
