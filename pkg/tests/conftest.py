import numpy as np
import pytest
from hypothesis import strategies as st

from fdswipt.model import Channel, SystemParams

ACCEPTANCE_LINES: list[str] = []


def canonical_t1():
    ch = Channel.from_power_gains(1.0, 1.0, 0.3, 0.3)
    sp = SystemParams(sigma_a1_sq=1.0, sigma_a2_sq=1.0, sigma_p1_sq=0.1, sigma_p2_sq=0.1,
                      alpha=1.0, p_max=10.0, q_bar_21=0.5, q_bar_12=0.5)
    return ch, sp


@pytest.fixture
def t1():
    return canonical_t1()


def rayleigh_channel(rng, kappa=0.3, eps_fraction=0.0):
    z = rng.standard_normal(8) * np.sqrt(0.5)
    h = z[0::2] + 1j * z[1::2]
    h_ab, h_cd = h[2] * np.sqrt(kappa), h[3] * np.sqrt(kappa)
    return Channel(complex(h[0]), complex(h[1]), complex(h_ab), complex(h_cd),
                   np.sqrt(eps_fraction) * abs(h_ab), np.sqrt(eps_fraction) * abs(h_cd))


gains = st.floats(0.01, 5.0)
si_gains = st.floats(0.0, 2.0)


@st.composite
def channels(draw, with_eps=True):
    g_ab, g_cd = draw(si_gains), draw(si_gains)
    e1 = draw(st.floats(0.0, 1.0)) * np.sqrt(g_ab) if with_eps else 0.0
    e2 = draw(st.floats(0.0, 1.0)) * np.sqrt(g_cd) if with_eps else 0.0
    return Channel.from_power_gains(draw(gains), draw(gains), g_ab, g_cd, e1, e2)


@st.composite
def params(draw):
    return SystemParams(sigma_p1_sq=draw(st.floats(0.01, 1.0)),
                        sigma_p2_sq=draw(st.floats(0.01, 1.0)),
                        alpha=draw(st.floats(0.3, 1.0)),
                        p_max=draw(st.floats(0.5, 100.0)),
                        q_bar_21=draw(st.floats(0.0, 1.0)),
                        q_bar_12=draw(st.floats(0.0, 1.0)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
