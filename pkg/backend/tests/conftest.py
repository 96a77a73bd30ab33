import pytest

from app.schemas.schemas import SolveConfig
from certify.solver import solve_in_box
from ecl.closure import from_system
from interval.arith import IntervalContext
from samples import E_SYSTEM, OMEGA_SYSTEM, TWO_ROOTS_SYSTEM, box_of
from syntax.parser import parse_system


@pytest.fixture
def ctx():
    return IntervalContext(64)


@pytest.fixture(scope="session")
def cfg():
    return SolveConfig()


@pytest.fixture(scope="session")
def e_number(cfg):
    return from_system(parse_system(E_SYSTEM), box_of((0, 4)), 1, cfg)


@pytest.fixture(scope="session")
def omega_number(cfg):
    return from_system(parse_system(OMEGA_SYSTEM), box_of((0, 1)), 1, cfg)


@pytest.fixture(scope="session")
def two_roots_report(cfg):
    return solve_in_box(parse_system(TWO_ROOTS_SYSTEM), box_of((-3, 3)), cfg)
