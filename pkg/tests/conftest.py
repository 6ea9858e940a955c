import pytest

from miworlds import SolverOptions, solve_ground_state


@pytest.fixture(scope="session")
def solved():
    """Session-wide memoized ground-state solves."""
    cache = {}

    def get(n, precision_digits=None):
        key = (n, precision_digits)
        if key not in cache:
            opts = (SolverOptions(precision_digits=precision_digits)
                    if precision_digits else SolverOptions())
            cache[key] = solve_ground_state(n, opts)
        return cache[key]

    return get
