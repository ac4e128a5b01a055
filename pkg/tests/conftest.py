import pytest

from msokit.caps import Caps, set_caps


@pytest.fixture(autouse=True)
def default_caps():
    previous = set_caps(Caps())
    yield
    set_caps(previous)
