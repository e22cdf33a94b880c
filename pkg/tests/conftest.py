import numpy as np
import pytest
from scipy.linalg import expm

from bosonic_coherence.gaussian import GaussianState, symplectic_form


@pytest.fixture
def rng():
    return np.random.default_rng(20201015)


def random_symplectic(rng, n_modes, scale=0.4):
    """exp(Omega H) with H symmetric is symplectic."""
    h = rng.normal(scale=scale, size=(2 * n_modes, 2 * n_modes))
    return expm(symplectic_form(n_modes) @ (h + h.T) / 2)


def random_state(rng, n_modes, nbar_max=3.0, d_max=2.0, squeeze=True):
    """Random physical state: thermal spectrum dressed by a symplectic map."""
    nu = 2 * rng.uniform(0, nbar_max, n_modes) + 1
    sigma = np.diag(np.repeat(nu, 2))
    if squeeze:
        S = random_symplectic(rng, n_modes)
        sigma = S @ sigma @ S.T
    d = rng.uniform(-d_max, d_max, 2 * n_modes)
    return GaussianState(d, sigma), np.sort(nu)


_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): acceptance criterion, reported in the summary")


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None and (report.when == "call" or report.failed):
        _acceptance.append((marker.args[0], "PASS" if report.passed else "FAIL"))
    return report


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _acceptance:
        terminalreporter.write_line(f"{outcome} {label}")
