from __future__ import annotations

import pytest

from sandhitutor.runtime import default_rule_base


@pytest.fixture(scope="session")
def rb():
    return default_rule_base()
