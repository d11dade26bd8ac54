import json
import math

import numpy as np
import pytest

from susyloops.numverify import (
    DiscretizedHamiltonian,
    discretize,
    loop_residual,
    low_eigenvalues,
    spectrum_report,
    sturm_count,
)
from susyloops.seed import SeedSpec
from susyloops.susychain import Grid, PotentialTable, SusyChain, potential_wronskian


def _oscillator(grid=Grid(), shift=0.0):
    x = grid.x
    return PotentialTable(grid, 0.5 * x * x + shift, 0)


def test_structure():
    H = discretize(_oscillator())
    h = Grid().h
    assert H.size == Grid().n_points - 2
    assert np.all(H.off_diagonal == -0.5 / h**2)


def test_hand_matrix():
    H = DiscretizedHamiltonian(Grid(0, 1, 4), np.array([2.0, 3.0]), np.array([1.0]))
    roots = sorted([2.5 - math.sqrt(1.25), 2.5 + math.sqrt(1.25)])
    np.testing.assert_allclose(low_eigenvalues(H, 2), roots, atol=1e-10)
    assert sturm_count(H, [0.0, 2.0, 4.0]).tolist() == [0, 1, 2]


def test_oscillator_levels():
    eigs = low_eigenvalues(discretize(_oscillator()), 5)
    np.testing.assert_allclose(eigs, [0.5, 1.5, 2.5, 3.5, 4.5], atol=1e-3)


def test_shifted_oscillator():
    eigs = low_eigenvalues(discretize(_oscillator(shift=-1.0)), 3)
    np.testing.assert_allclose(eigs, [-0.5, 0.5, 1.5], atol=1e-3)


def test_count_limits():
    H = discretize(_oscillator(Grid(-5, 5, 101)))
    with pytest.raises(ValueError):
        low_eigenvalues(H, 33)
    with pytest.raises(ValueError):
        low_eigenvalues(H, 0)


def test_non_finite_potential():
    pot = _oscillator(Grid(-1, 1, 11))
    pot.v[5] = np.inf
    with pytest.raises(ValueError):
        discretize(pot)


def test_ref_report(ref_chain):
    rep = spectrum_report(ref_chain)
    np.testing.assert_allclose(rep.analytic, [-1.2, -1.0, 0.5, 1.5, 2.5, 3.5])
    assert rep.ok and rep.max_abs_err <= 1e-3 and rep.spurious == []
    data = json.loads(json.dumps(rep.to_json()))
    assert {"analytic", "numeric", "max_abs_err"} <= set(data)


def test_loop_residual():
    assert loop_residual([0.5, 1.5, 2.5], 2 * math.pi, -math.pi) < 1e-14
    eigs = low_eigenvalues(discretize(_oscillator()), 5)
    assert loop_residual(eigs, 2 * math.pi, -math.pi) <= 1e-2


def test_ref_loop_residual(ref_chain):
    eigs = low_eigenvalues(discretize(potential_wronskian(ref_chain)), 6)
    assert loop_residual(eigs, 20 * math.pi, -10 * math.pi) <= 2e-1
    assert loop_residual([-1.2, -1.0, 0.5, 1.5, 2.5, 3.5], 20 * math.pi, -10 * math.pi) < 1e-12


@pytest.mark.parametrize("seeds", [(), ((-1.0, 0.0), (-1.2, 2.0))], ids=["k0", "ref"])
def test_grid_refinement(seeds):
    coarse = Grid(-12, 12, 1201)
    analytic = np.array(sorted(s[0] for s in seeds) + [n + 0.5 for n in range(4)])
    errs = []
    for grid in (coarse, coarse.refined()):
        chain = SusyChain(seeds, grid)
        eigs = low_eigenvalues(discretize(potential_wronskian(chain)), analytic.size)
        errs.append(np.abs(np.array(eigs) - analytic))
    assert np.all(errs[0] / errs[1] >= 3.5)


def test_random_chains_match_oracle():
    rng = np.random.default_rng(8)
    for _ in range(3):
        e1 = rng.uniform(-2.5, 0.3)
        e2 = e1 - rng.uniform(0.2, 1.0)
        chain = SusyChain((SeedSpec(e1, rng.uniform(-0.9, 0.9)), SeedSpec(e2, rng.uniform(1.1, 3.0))))
        assert spectrum_report(chain).ok
