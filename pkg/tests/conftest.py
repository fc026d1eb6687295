import json

import pytest

from radonmono import FieldSpec, load_fundamental_data, radon_transform
from radonmono.cli import fixture_path


@pytest.fixture(scope="session")
def rational():
    return FieldSpec.rational()


@pytest.fixture(scope="session")
def q_zeta6():
    return FieldSpec.cyclotomic(6)


@pytest.fixture(scope="session")
def four_lines_fd():
    return load_fundamental_data(fixture_path("four_lines"))


@pytest.fixture(scope="session")
def four_lines_result(four_lines_fd):
    return radon_transform(four_lines_fd, verify=True)


@pytest.fixture(scope="session")
def four_lines_doc():
    with open(fixture_path("four_lines")) as handle:
        return json.load(handle)


@pytest.fixture(scope="session")
def zariski_c_result():
    return radon_transform(load_fundamental_data(fixture_path("zariski_c")), verify=True)


@pytest.fixture(scope="session")
def zariski_cprime_result():
    return radon_transform(load_fundamental_data(fixture_path("zariski_cprime")))
