import pytest

from mvnabs import models, parse_mapping, parse_model

_MODELS = ("ex1", "ex2", "ex3", "pl2", "apl2", "pl4")
_MAPPINGS = {"phi_g2": "ex1", "phi_cro": "pl2", "phi_pl4": "pl4"}


def _model(name):
    return parse_model(models.read(f"{name}.mvn"))


@pytest.fixture(scope="session")
def bundled():
    """All bundled models parsed once, keyed by name."""
    return {name: _model(name) for name in _MODELS}


@pytest.fixture(scope="session")
def ex1(bundled):
    return bundled["ex1"]


@pytest.fixture(scope="session")
def ex2(bundled):
    return bundled["ex2"]


@pytest.fixture(scope="session")
def ex3(bundled):
    return bundled["ex3"]


@pytest.fixture(scope="session")
def pl2(bundled):
    return bundled["pl2"]


@pytest.fixture(scope="session")
def apl2(bundled):
    return bundled["apl2"]


@pytest.fixture(scope="session")
def pl4(bundled):
    return bundled["pl4"]


@pytest.fixture(scope="session")
def phi_g2(ex1):
    return parse_mapping(models.read("phi_g2.map"), ex1)


@pytest.fixture(scope="session")
def phi_cro(pl2):
    return parse_mapping(models.read("phi_cro.map"), pl2)


@pytest.fixture(scope="session")
def phi_pl4(pl4):
    return parse_mapping(models.read("phi_pl4.map"), pl4)


@pytest.fixture()
def asset_path(tmp_path):
    """Copy a bundled asset into tmp and return its path, for CLI runs."""

    def copy(name):
        target = tmp_path / name
        target.write_text(models.read(name))
        return str(target)

    return copy
