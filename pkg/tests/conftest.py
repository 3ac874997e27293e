import pytest

from backend.lambda_calculus import _reduction_cache
from config import raise_recursion_limit
from models.atoms import AtomTable
from utils.parser import make_parser

raise_recursion_limit()


@pytest.fixture
def table():
    return AtomTable()


@pytest.fixture
def parse(table):
    """Parse lambda terms with the standard prelude into a fresh atom table"""
    parser = make_parser(None, table, prelude=True)
    return parser.parse


@pytest.fixture(autouse=True)
def clear_reduction_cache():
    yield
    _reduction_cache.clear()
