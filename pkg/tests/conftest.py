import pytest

from naqlab import shooting


@pytest.fixture(scope="session")
def params_m01():
    return shooting.CouplingParams(lambda_tilde=1.0, m=0.1)


@pytest.fixture(scope="session")
def shot_m01_default(params_m01):
    """Default-tolerance shooting run (the documented CLI configuration)."""
    return shooting.find_regular_eta0(params_m01)


@pytest.fixture(scope="session")
def shot_m01_tight(params_m01):
    """Tightly converged run; its trajectory has an uncontaminated tail."""
    return shooting.find_regular_eta0(params_m01, tol=1e-12)
