import numpy as np
import pytest

from steinbet.models import (
    GaussianBernoulliRbm,
    GaussianModel,
    IntractableModel,
    structured_rbm,
)


@pytest.fixture(scope="session")
def model_zoo():
    """One representative of each family, small enough for property sweeps."""
    rng = np.random.default_rng(1234)
    rbm = GaussianBernoulliRbm(
        weights=0.4 * rng.standard_normal((4, 3)),
        visible_bias=rng.standard_normal(4) * 0.3,
        hidden_bias=rng.standard_normal(3) * 0.3,
    )
    return {
        "gaussian1d": GaussianModel(mean=[0.0]),
        "gaussian3d": GaussianModel(mean=[0.5, -1.0, 2.0]),
        "intractable": IntractableModel(theta=[1.0, -0.5]),
        "rbm": rbm,
        "rbm_structured": structured_rbm(d=6, d_h=2, per_hidden=3),
    }
