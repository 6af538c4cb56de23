import os

import hypothesis
import pytest

from strohhacker.schemas import DiskGrid

hypothesis.settings.register_profile("ci", deadline=None, max_examples=200)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=25)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture(scope="session")
def grid() -> DiskGrid:
    return DiskGrid.default()


@pytest.fixture(scope="session")
def coarse_grid() -> DiskGrid:
    return DiskGrid.default(levels=6, angular_count=256)
