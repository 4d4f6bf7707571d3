"""
Fixtures compartidas de los tests
"""

import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).parent.parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.core.constants import (  # noqa: E402
    BS_CAPACITY, BS_STATIC_POWER, BS_PER_USER_POWER, COALITION_COST_RATE,
    ENERGY_PRICE_LO, UserMix
)
from src.core.settings import mix_preset  # noqa: E402
from src.entities.base_station import BaseStation  # noqa: E402
from src.entities.operator import NetworkOperator  # noqa: E402
from src.entities.user import UserDemand  # noqa: E402
from src.systems.coalition import StepContext  # noqa: E402


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='ejecutar también las réplicas largas')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='necesita --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def premium_mix():
    return mix_preset(UserMix.HOMOGENEOUS)


@pytest.fixture
def mixed_classes():
    return mix_preset(UserMix.HETEROGENEOUS)


def make_station(
    bs_id: int,
    price: float = ENERGY_PRICE_LO,
    capacity: float = BS_CAPACITY
) -> BaseStation:
    return BaseStation(bs_id, capacity, BS_STATIC_POWER, BS_PER_USER_POWER, price)


def make_operator(
    no_id: int,
    price: float = ENERGY_PRICE_LO,
    cost_rate: float = COALITION_COST_RATE,
    capacity: float = BS_CAPACITY,
    mix=None
) -> NetworkOperator:
    mix = mix if mix is not None else mix_preset(UserMix.HOMOGENEOUS)
    return NetworkOperator(no_id, make_station(no_id, price, capacity), tuple(mix), cost_rate)


def make_context(operators, counts, user_class=None) -> StepContext:
    """Contexto con counts[i] usuarios de user_class (Premium por defecto) para cada NO"""
    user_class = user_class or mix_preset(UserMix.HOMOGENEOUS)[0]
    ops = {no.id: no for no in operators}
    users = {i: tuple(UserDemand(i, user_class) for _ in range(counts.get(i, 0))) for i in ops}
    return StepContext(ops, users)


@pytest.fixture
def operator_factory():
    return make_operator


@pytest.fixture
def context_factory():
    return make_context
