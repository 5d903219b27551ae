
#
# Copyright 2026 metapac contributors
# Distributed under the (new) BSD License. See LICENSE.txt for more info.
#

import pytest

from metapac.env import parse_layout, load_layout, initial_state

# ghost two cells west of the player in a one-row corridor
CORRIDOR = """\
%%%%%%%
% G P.%
%%%%%%%
"""

# ghost below a T junction, player up and to the right
JUNCTION = """\
%%%%%
%. P%
% G %
%%%%%
"""

# one row, food only at the far east end, no ghosts
FOOD_CORRIDOR = """\
%%%%%%%%
%P    .%
%%%%%%%%
"""

# one row, food at both ends, the east one nearer
TWO_FOOD_CORRIDOR = """\
%%%%%%%
%.  P.%
%%%%%%%
"""

# ghost right next to the player, food on both sides
DEADLY = """\
%%%%%%
%.PG.%
%%%%%%
"""

def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run campaign-scale tests')

def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: campaign-scale test, only run with --runslow')

def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)

@pytest.fixture(scope='session')
def default_layout():
    return load_layout()

@pytest.fixture
def corridor():
    return parse_layout(CORRIDOR)

@pytest.fixture
def junction():
    return parse_layout(JUNCTION)

@pytest.fixture
def food_corridor():
    return parse_layout(FOOD_CORRIDOR)

@pytest.fixture
def two_food_corridor():
    return parse_layout(TWO_FOOD_CORRIDOR)

@pytest.fixture
def deadly():
    return parse_layout(DEADLY)

@pytest.fixture
def state_of():
    """Build the initial state of layout text."""
    def build(text, rewards=None):
        return initial_state(parse_layout(text), rewards)
    return build
