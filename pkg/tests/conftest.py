import pytest

from dworkslopes.cyclotomic import CyclotomicInt
from dworkslopes.finite_rings import embed, frobenius_lift, make_extension, teichmuller_lift


def naive_exp_sum(config, m):
    """S*_m by walking F_{q^m} one element at a time with the scalar classes.

    Shares no code with the vectorized enumerator beyond field construction.
    """
    p, M = config.p, config.M
    big = make_extension(p, config.h * m)
    mod = p**M
    a_hat = teichmuller_lift(embed(config.a, big), M)
    counts = [0] * mod
    for x in big.elements():
        if x.is_zero():
            continue
        y = teichmuller_lift(x, M)
        val = y ** config.d + a_hat * y ** (config.d - 1)
        # the trace is the sum of the Galois conjugates; it lies in Z_p, so
        # only constant terms contribute
        tr = 0
        z = val
        for _ in range(big.degree):
            tr += z.coeffs[0]
            z = frobenius_lift(z)
        counts[tr % mod] += 1
    return CyclotomicInt(p, M, counts)


@pytest.fixture(scope="session")
def tmp_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("sumcache")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
