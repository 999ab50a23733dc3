import numpy as np
import pytest

from tanglekit import bell_phi_plus, ghz_state, w_state


@pytest.fixture(scope="session")
def ghz():
    return ghz_state(3)


@pytest.fixture(scope="session")
def w():
    return w_state()


@pytest.fixture(scope="session")
def bell():
    return bell_phi_plus()


def ckw_tangle(chi):
    """Independent three-tangle oracle: four times the modulus of the cubic
    hyperdeterminant of the amplitude tensor."""
    a = chi.amplitudes.reshape(2, 2, 2)
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
          + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return 4 * abs(d1 - 2 * d2 + 4 * d3)


def concurrence_oracle(phi):
    """Closed form 2 |a0 a3 - a1 a2| for two-qubit pure states."""
    a = phi.amplitudes
    return 2 * abs(a[0] * a[3] - a[1] * a[2])


@pytest.fixture(scope="session")
def tangle_oracle():
    return ckw_tangle


@pytest.fixture(scope="session")
def conc_oracle():
    return concurrence_oracle
