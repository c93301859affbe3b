import pytest

from retropq import order_stat_tree


@pytest.fixture
def tree_debug_checks():
    """Make every rebalance assert the weight invariant it restores."""
    order_stat_tree.DEBUG_CHECKS = True
    try:
        yield
    finally:
        order_stat_tree.DEBUG_CHECKS = False
