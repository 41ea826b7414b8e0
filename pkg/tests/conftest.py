import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=80, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=["no_delay", "unit_delay", "real_damping"])
def form(request):
    from zdeform.config import builtin

    return builtin(request.param)
