import pytest
from hypothesis import strategies as st

from ini_lab.numerology import MultiplexPair


@pytest.fixture
def pair():
    return MultiplexPair()


@pytest.fixture(params=[1, 2, 4, 8], ids=lambda q: f"Q{q}")
def pair_q(request):
    return MultiplexPair(q=request.param)


PROBE = dict(n_fft=64, q=4, eta_nsn=0.25, eta_wsn=0.75, cp_ratio=1 / 8)


@st.composite
def valid_pairs(draw, min_q=1, max_q=8):
    """Random valid pairs: N in 32..256, Q a power of two, eta and CP on the WSN grid."""
    log_n = draw(st.integers(5, 8))
    log_q = draw(st.integers(min_q.bit_length() - 1, max_q.bit_length() - 1))
    n, q = 2**log_n, 2**log_q
    m = n // q
    if m < 4:
        q, m = n // 4, 4
    j = draw(st.integers(1, m - 1))
    c = draw(st.integers(1, max(1, m // 4)))
    return MultiplexPair(n_fft=n, q=q, eta_nsn=j / m, eta_wsn=1 - j / m, cp_ratio=c / m,
                         cp_mode=draw(st.sampled_from(["individual", "common"])))
