import os
import pathlib

import pytest

DATA = pathlib.Path(os.environ.get("MINTYPE_TEST_DATA", pathlib.Path(__file__).parents[1] / "data"))


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def cli():
    path = os.environ.get("MINTYPE_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("command-line tool not built")
    return path
