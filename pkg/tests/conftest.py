import os
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"


def dataset_path(name, env_var):
    """Locate an external benchmark file, or None if absent."""
    override = os.environ.get(env_var)
    if override:
        path = Path(override)
        return path if path.exists() else None
    path = DATA_DIR / name
    return path if path.exists() else None


@pytest.fixture(scope="session")
def mushrooms_file():
    path = dataset_path("mushrooms", "PUFOREST_MUSHROOMS")
    if path is None:
        pytest.skip(
            "mushrooms dataset not available: place the LIBSVM 'mushrooms' "
            "file under data/ or set PUFOREST_MUSHROOMS (this sandbox has "
            "no dataset network access)"
        )
    return str(path)


@pytest.fixture(scope="session")
def mnist_file():
    path = dataset_path("mnist.scale", "PUFOREST_MNIST")
    if path is None:
        pytest.skip(
            "MNIST dataset not available: place the LIBSVM 'mnist.scale' "
            "file under data/ or set PUFOREST_MNIST"
        )
    return str(path)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running optional checks")
