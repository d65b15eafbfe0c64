import pytest

from dicesim import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the jitted kernels once so timed budgets measure steady state
    kernels.warmup()
