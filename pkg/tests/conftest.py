from importlib import resources

import pytest

from cyclink.diagram import parse_pd


def load_pd(name):
    text = resources.files("cyclink.data").joinpath(f"{name}.pd").read_text()
    return parse_pd(text)


@pytest.fixture
def corpus():
    return load_pd
