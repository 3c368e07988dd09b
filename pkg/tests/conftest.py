import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from layerpeel.geom import PointSet

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_set(rng: np.random.Generator, n: int, d: int, lattice: int | None = None) -> PointSet:
    """Random distinct points in the unit ball; ``lattice`` draws them from the
    grid of step 1/lattice instead, so collinear and coplanar coincidences are common."""
    if lattice:
        axis = np.arange(-lattice, lattice + 1) / lattice
        grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
        grid = grid[np.einsum("ij,ij->i", grid, grid) <= 1.0]
        if n > len(grid):
            raise ValueError(f"only {len(grid)} lattice points available, asked for {n}")
        return PointSet(grid[rng.choice(len(grid), size=n, replace=False)])
    g = rng.standard_normal((n, d))
    g *= (rng.random(n) ** (1.0 / d) / np.linalg.norm(g, axis=1))[:, None]
    return PointSet(g)


@st.composite
def point_sets(draw, dims=(2, 3), min_n=1, max_n=25, lattice=(None, 4, 8)):
    d = draw(st.sampled_from(dims))
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    lat = draw(st.sampled_from(lattice))
    rng = np.random.default_rng(seed)
    if lat is not None:
        # the coarsest lattice (step 1/4, d = 2) has 49 points in the disk
        n = min(n, 49)
    return random_set(rng, n, d, lat)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[num])
