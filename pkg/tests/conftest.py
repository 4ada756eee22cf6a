import pytest

from fencemonoid import enumeration as en

_cache = {}


@pytest.fixture(scope="session")
def table():
    """Session-cached access to built tables: table(n, which)."""

    def get(n, which="IF"):
        key = (n, which)
        if key not in _cache:
            _cache[key] = en.build(n, which)
        return _cache[key]

    return get
