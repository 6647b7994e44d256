import pytest

from radial_phasefield import ModelParams, Profile


@pytest.fixture(scope="session")
def prof():
    return Profile()


@pytest.fixture
def params():
    return ModelParams()
