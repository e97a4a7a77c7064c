import pytest


@pytest.fixture(scope="session")
def shared_cache_dir(tmp_path_factory):
    """One closure cache for the whole run, so each group closes once."""
    return str(tmp_path_factory.mktemp("closure-cache"))
