import pytest

from noma_secrecy import Mode, validate
from noma_secrecy.cli import table1_config


@pytest.fixture
def table1():
    """Validated Table-I config with the external eavesdropper, 30 dB."""
    return validate(table1_config())


@pytest.fixture
def table1_no_eve():
    return validate(table1_config(mode=Mode.NO_EVE))
