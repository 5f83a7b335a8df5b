import numpy as np
import pytest

from alpslab import MixtureTarget, ModeSpec


@pytest.fixture
def gauss_mode():
    # standard normal: exp(-x^2/2)
    return ModeSpec(lam=0.5, r=2.0, weight=0.5)


@pytest.fixture
def laplace_mode():
    return ModeSpec(lam=1.0, r=1.0, weight=0.5)


@pytest.fixture
def two_mode_target():
    """The r=1 / r=2 mixture used throughout the verification experiments."""
    return MixtureTarget(
        modes=(ModeSpec(lam=1.0, r=1.0, weight=0.5),
               ModeSpec(lam=1.0, r=2.0, weight=0.5)),
        dimension=16,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20210)
