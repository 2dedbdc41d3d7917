from fractions import Fraction

import pytest
from hypothesis import strategies as st

from mirror_count.series import TruncSeries

ACCEPTANCE_RESULTS: list[str] = []


def small_fractions(max_num=20, max_den=6):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


@st.composite
def series(draw, truncation=None, min_t=0, max_t=16, const=None, linear=None):
    t = draw(st.integers(min_t, max_t)) if truncation is None else truncation
    coeffs = draw(st.lists(small_fractions(), min_size=t + 1, max_size=t + 1))
    if const is not None:
        coeffs[0] = Fraction(const)
    if linear is not None and t >= 1:
        coeffs[1] = draw(linear)
    return TruncSeries(tuple(coeffs))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture
def quintic():
    from mirror_count.picard_fuchs import quintic_operator

    return quintic_operator()
