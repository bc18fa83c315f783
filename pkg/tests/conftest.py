import pathlib

import pytest

from obfloer.diagram import build_diagram, parse_region_list

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "diagrams"


def load_region_list(name):
    return parse_region_list((FIXTURES / (name + ".json")).read_text())


def load_diagram(name):
    return build_diagram(load_region_list(name))


@pytest.fixture(scope="session")
def r22():
    return load_diagram("r22")


@pytest.fixture(scope="session")
def r6():
    return load_diagram("r6")


@pytest.fixture(scope="session")
def s3_tight():
    return load_diagram("s3_tight")


@pytest.fixture(scope="session")
def s3_overtwisted():
    return load_diagram("s3_overtwisted")


@pytest.fixture(scope="session")
def l21():
    return load_diagram("l21")


@pytest.fixture(scope="session")
def sphere4():
    return load_diagram("sphere4")


@pytest.fixture(scope="session")
def octa2():
    return load_diagram("octa2")


@pytest.fixture(scope="session")
def l31():
    return load_diagram("l31")


@pytest.fixture(scope="session")
def s3_wiggle():
    return load_diagram("s3_wiggle")


@pytest.fixture(scope="session")
def s3_twopoint():
    return load_diagram("s3_twopoint")


@pytest.fixture(scope="session")
def s1s2():
    return load_diagram("s1s2")
