import pytest

from embalign import kernels


@pytest.fixture(params=kernels.available())
def backend(request):
    """Run the test under every built kernel backend."""
    prev = kernels.active()
    kernels.use(request.param)
    yield request.param
    kernels.use(prev)
