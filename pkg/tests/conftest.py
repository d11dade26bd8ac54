from fractions import Fraction

import numpy as np
import pytest

from susyloops import Grid, SeedSpec, SpectrumDescriptor, SusyChain

REF_SEEDS = (SeedSpec(-1.0, 0.0), SeedSpec(-1.2, 2.0))
REF_EXACT = (Fraction(-1), Fraction(-6, 5))

# lines collected by the acceptance suite, printed in the terminal summary
ACCEPTANCE_LINES = []


def random_chain(rng, k, grid=None):
    """Chain inside the nu windows with eps gaps of at least 0.15, |eps| <= 3."""
    while True:
        eps = np.sort(rng.uniform(-3.0, 0.45, size=k))[::-1]
        if k == 1 or np.min(-np.diff(eps)) > 0.15:
            break
    seeds = []
    for i, e in enumerate(eps, 1):
        if i % 2:
            nu = rng.uniform(-0.9, 0.9)
        else:
            nu = rng.choice([-1, 1]) * rng.uniform(1.1, 3.0)
        seeds.append(SeedSpec(float(e), float(nu)))
    return SusyChain(tuple(seeds), grid or Grid())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ref_chain():
    return SusyChain(REF_SEEDS)


@pytest.fixture(scope="session")
def ref_spectrum():
    return SpectrumDescriptor((-1.0, -1.2))


@pytest.fixture(scope="session")
def ref_exact_spectrum():
    return SpectrumDescriptor(REF_EXACT)
