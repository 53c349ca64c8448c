import pytest

from hyperladder.cases import make_case

# one valid (alpha, beta) per sigma form
SAMPLE_CASES = {
    "one": (-2.0, 0.0),
    "s": (-1.0, 1.0),
    "one_minus_s2": (-3.0, 0.5),
    "s2_minus_one": (-2.0, 3.0),
    "s2": (-7.0, 1.0),
    "s2_plus_one": (-6.0, 1.0),
}


@pytest.fixture(params=sorted(SAMPLE_CASES))
def sample_case(request):
    return make_case(request.param, *SAMPLE_CASES[request.param])


@pytest.fixture
def hermite():
    return make_case("one", -2.0, 0.0)


@pytest.fixture
def laguerre():
    return make_case("s", -1.0, 1.0)


@pytest.fixture
def jacobi():
    return make_case("one_minus_s2", -3.0, 0.0)
