import itertools

import numpy as np
import pytest
from scipy.special import logsumexp

from tcofdm import RngStream, Trellis, make_interleaver
from tcofdm.fec import make_interleaver_pair

ACCEPTANCE_LINES = []


def shift_register_rsc(bits):
    """Bitwise (7,5) RSC register model, independent of the trellis tables."""
    r1 = r2 = 0
    out = []
    for u in bits:
        a = int(u) ^ r1 ^ r2
        out.append(a ^ r2)
        r1, r2 = a, r1
    return np.array(out, dtype=np.int8)


def brute_force_posterior(ls, lp, la):
    """Exact bitwise MAP LLRs by enumerating every message of the block."""
    n = len(ls)
    msgs = np.array(list(itertools.product((0, 1), repeat=n)))
    par = np.array([shift_register_rsc(m) for m in msgs])
    score = msgs @ (np.asarray(ls) + np.asarray(la)) + par @ np.asarray(lp)
    out = np.empty(n)
    for i in range(n):
        out[i] = logsumexp(score[msgs[:, i] == 1]) - logsumexp(score[msgs[:, i] == 0])
    return out


@pytest.fixture
def trellis():
    return Trellis()


@pytest.fixture
def rng():
    return RngStream(1234)


@pytest.fixture
def interleavers():
    return make_interleaver_pair(64, RngStream(7))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
