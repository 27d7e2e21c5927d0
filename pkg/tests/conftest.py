import hypothesis
import numpy as np
import pytest

np.seterr(all="raise", under="ignore")

hypothesis.settings.register_profile("default", deadline=None, max_examples=50)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("default")


@pytest.fixture
def unit_channel():
    from flexmimo.core import ChannelParams

    return ChannelParams(beta0=1.0, alpha=2.0, noise_power=1.0, tx_power=1.0, small_scale=False)
