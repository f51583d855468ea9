import os
import tempfile

# loggers open their files under COVERING_LOG_DIR when covering_lab is first imported
os.environ.setdefault("COVERING_LOG_DIR", tempfile.mkdtemp(prefix="covering-lab-logs-"))

import pytest  # noqa: E402

from covering_lab.sampler.schemas import RngStream  # noqa: E402
from covering_lab.utils.config import reset_overrides  # noqa: E402

MASTER_SEED = 20240601


@pytest.fixture(autouse=True)
def fresh_overrides():
    reset_overrides()
    yield
    reset_overrides()


@pytest.fixture
def rng():
    return RngStream(MASTER_SEED)
