import numpy as np
import pytest

from treeprune.cloud import PointCloud


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def grid_cloud(cell_centers, voxel_size=0.25):
    """Cloud with one point at the center of each listed cell index."""
    centers = np.asarray(cell_centers, dtype=np.float64)
    return PointCloud((centers + 0.5) * voxel_size)


def column_cloud(n, voxel_size=0.25, x=0, y=0):
    """Vertical column of n occupied cells at (x, y), one point per cell."""
    return grid_cloud([(x, y, z) for z in range(n)], voxel_size)
