import os
import pytest
from gcmiss import reset_settings


def pytest_collection_modifyitems(config, items):
    if os.environ.get('GCM_RUN_SLOW', '') == '1':
        return
    skip_slow = pytest.mark.skip(reason='set GCM_RUN_SLOW=1 to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings():
    reset_settings()
    yield
    reset_settings()
