import json
import math
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susyloops.basis import SpectrumDescriptor, StateVector, random_state
from susyloops.errors import NonCyclicError, RationalMismatchError
from susyloops.loops import (
    LoopReport,
    coherent_phase_prefactor,
    detect_loops,
    evolve,
    geometric_phase_closed,
    geometric_phase_coherent,
    geometric_phase_state,
    wrap_phase,
)
from susyloops.specfun import hyper_0fq
from susyloops.states import coherent_denominators

# mpmath, 40 digits, exact eps = (-1, -6/5)
REF_BETA = {
    0.5: 0.09020808017753262839084,
    1.0: 0.3488372559170667437488,
    2.0: 1.234071352121620012431,
    4.0: 3.442507757176077478699,
}


def test_wrap_phase():
    assert wrap_phase(-math.pi) == math.pi
    assert wrap_phase(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_phase(-10 * math.pi) == 0.0
    assert math.copysign(1, wrap_phase(-2 * math.pi)) == 1


def test_partial_only_for_floats(ref_spectrum):
    rep = detect_loops(ref_spectrum)
    assert rep.kind == "partial" and rep.tau == 2 * math.pi and rep.phi == -math.pi
    assert rep.phi_mod == math.pi


def test_single_rational():
    rep = detect_loops(SpectrumDescriptor((-0.5,)), [Fraction(-1, 2)])
    assert (rep.kind, rep.M, rep.rationals) == ("global", 1, [(1, 1)])
    assert rep.tau == 2 * math.pi and rep.phi == -math.pi


def test_ref_global(ref_spectrum):
    rep = detect_loops(ref_spectrum, [(-1, 1), (-6, 5)])
    assert rep.rationals == [(3, 2), (17, 10)]
    assert rep.M == 10 and rep.tau_over_pi == 20 and rep.phi_over_pi == -10
    assert rep.phase_factor == 1
    assert rep.phi_mod == 0.0
    data = json.loads(json.dumps(rep.to_json()))
    assert data["M"] == 10 and data["rationals"] == [[3, 2], [17, 10]]


def test_exact_descriptor_implies_global(ref_exact_spectrum):
    assert detect_loops(ref_exact_spectrum).M == 10


def test_oscillator_loop():
    rep = detect_loops(SpectrumDescriptor(()))
    assert rep.kind == "global" and rep.M == 1


def test_mismatch(ref_spectrum):
    with pytest.raises(RationalMismatchError):
        detect_loops(ref_spectrum, [Fraction(-1), Fraction(-5, 4)])
    with pytest.raises(RationalMismatchError):
        detect_loops(ref_spectrum, [Fraction(-1)])


def test_evolve_identity_and_unitarity(ref_spectrum):
    rng = np.random.default_rng(11)
    st_ = random_state(2, 20, rng)
    assert evolve(ref_spectrum, st_, 0.0).distance(st_) == 0.0
    for t in (0.3, 7.0, 123.4):
        assert evolve(ref_spectrum, st_, t).norm() == pytest.approx(st_.norm(), abs=1e-14)


def test_partial_loop_flips_sign(ref_spectrum):
    st_ = random_state(2, 20, np.random.default_rng(5), isolated=False)
    back = evolve(ref_spectrum, st_, 2 * math.pi)
    assert back.max_coefficient_error(st_.scaled(-1)) <= 1e-12


def test_global_loop_returns_states(ref_spectrum):
    rep = detect_loops(ref_spectrum, [(-1, 1), (-6, 5)])
    rng = np.random.default_rng(0)
    for _ in range(50):
        st_ = random_state(2, 32, rng)
        back = evolve(ref_spectrum, st_, rep.tau)
        assert back.max_coefficient_error(st_.scaled(rep.phase_factor)) <= 1e-12


def test_phase_of_ladder_levels(ref_spectrum):
    loop = detect_loops(ref_spectrum)
    assert geometric_phase_state(ref_spectrum, StateVector.ladder_level(2, 0, 3), loop).beta == 0.0
    res = geometric_phase_state(ref_spectrum, StateVector.ladder_level(2, 3, 5), loop)
    assert res.beta == pytest.approx(6 * math.pi)
    assert abs(res.beta_mod) < 1e-12


def test_phase_isolated_level_global(ref_spectrum):
    loop = detect_loops(ref_spectrum, [(-1, 1), (-6, 5)])
    res = geometric_phase_state(ref_spectrum, StateVector.isolated_level(2, 0, 1), loop)
    assert res.beta == pytest.approx(-30 * math.pi, rel=1e-14)
    assert abs(res.beta_mod) < 1e-12


def test_noncyclic(ref_spectrum):
    with pytest.raises(NonCyclicError):
        geometric_phase_state(ref_spectrum, StateVector.isolated_level(2, 1, 2), detect_loops(ref_spectrum))
    with pytest.raises(NonCyclicError):
        geometric_phase_state(ref_spectrum, StateVector.ladder_level(2, 0, 1), LoopReport("none", 0.0, 0.0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_global_phase_consistency(seed):
    spec = SpectrumDescriptor((Fraction(-1), Fraction(-6, 5)))
    st_ = random_state(2, 24, np.random.default_rng(seed))
    res = geometric_phase_state(spec, st_, detect_loops(spec))
    assert abs(res.beta - res.beta_check) <= 1e-12 * max(1, abs(res.beta))


def test_prefactor_exact(ref_exact_spectrum):
    assert coherent_phase_prefactor(ref_exact_spectrum) == Fraction(160, 1377)
    # parameter lists are multisets; compare sorted
    assert sorted(coherent_denominators(ref_exact_spectrum)) == [Fraction(3, 2), Fraction(17, 10), Fraction(5, 2), Fraction(27, 10)]
    assert sorted(coherent_denominators(ref_exact_spectrum, 1)) == [
        Fraction(5, 2), Fraction(27, 10), Fraction(7, 2), Fraction(37, 10)]


@pytest.mark.parametrize("r", sorted(REF_BETA))
def test_ref_phase_oracle(ref_exact_spectrum, r):
    res = geometric_phase_coherent(ref_exact_spectrum, r)
    assert res.beta == pytest.approx(REF_BETA[r], rel=1e-12)
    assert res.beta_check == pytest.approx(REF_BETA[r], rel=1e-10)


def test_small_r_limit(ref_exact_spectrum):
    r = 1e-4
    assert geometric_phase_closed(ref_exact_spectrum, r) / r**2 == pytest.approx(160 * math.pi / 1377, rel=1e-7)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0, 4.0])
def test_standard_and_reduced(r):
    assert geometric_phase_closed(SpectrumDescriptor(()), r) == pytest.approx(2 * math.pi * r * r, rel=1e-12)
    want = math.pi * r * r * hyper_0fq([2, 3], r * r).value / hyper_0fq([1, 2], r * r).value
    assert geometric_phase_closed(SpectrumDescriptor((Fraction(-1, 2),)), r) == pytest.approx(want, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 5.0))
def test_two_paths_random_r(r):
    res = geometric_phase_coherent(SpectrumDescriptor((-1.0, -1.2)), r)
    assert abs(res.beta - res.beta_check) <= 1e-9 * max(abs(res.beta), sys.float_info.min)


@pytest.mark.parametrize("r,want", [(1.0, 2.389993747653975088660982), (3.0, 9.080086681172280810633377)])
def test_reduced_phase_oracle(r, want):
    # mpmath, 40 digits
    res = geometric_phase_coherent(SpectrumDescriptor((Fraction(-1, 2),)), r)
    assert res.beta == pytest.approx(want, rel=1e-13)
    assert res.beta_check == pytest.approx(want, rel=1e-10)
