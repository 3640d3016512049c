import pytest

from constel.params import default_params


@pytest.fixture(scope="session")
def default_fns():
    """Compliance-checked default parameter family (built once per run)."""
    return default_params()
