from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from susyloops.algebra import build_polynomials, ladder_action
from susyloops.basis import SpectrumDescriptor, StateVector


def _expand(roots):
    coeffs = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] -= r * c
            nxt[i + 1] += c
        coeffs = nxt
    return coeffs


def test_oscillator_limit():
    polys = build_polynomials(SpectrumDescriptor(()))
    assert list(polys.q) == [Fraction(-1, 2), Fraction(1)]
    assert list(polys.p) == [Fraction(1)]


def test_single_seed_polynomial():
    polys = build_polynomials(SpectrumDescriptor((Fraction(-1, 2),)))
    half = Fraction(1, 2)
    assert list(polys.q) == _expand([half, half, -half])
    assert polys.degree_q == 3 and polys.degree_p == 2


def test_ref_roots(ref_exact_spectrum):
    polys = build_polynomials(ref_exact_spectrum)
    assert sorted(polys.roots) == sorted(Fraction(v) for v in ("1/2", "0", "-1", "-1/5", "-6/5"))
    assert list(polys.q) == _expand(polys.roots)
    for r in polys.roots:
        assert polys.q_value(r) == 0


def test_p_is_shift_difference(ref_exact_spectrum):
    polys = build_polynomials(ref_exact_spectrum)
    for e in (Fraction(-3, 7), Fraction(0), Fraction(11, 4), Fraction(40)):
        assert polys.p_value(e) == polys.q_value(e + 1) - polys.q_value(e)


def test_polynomials_json(ref_exact_spectrum):
    data = build_polynomials(ref_exact_spectrum).to_json()
    assert data["q"][0] == [0, 1]
    assert len(data["q"]) == 6 and len(data["p"]) == 5


def test_down_annihilates_base(ref_spectrum):
    out = ladder_action(ref_spectrum, "down", StateVector.ladder_level(2, 0, 4))
    assert out.norm() == 0.0


@pytest.mark.parametrize("direction", ["up", "down"])
def test_isolated_levels_are_one_step_ladders(ref_spectrum, direction):
    for j in range(2):
        out = ladder_action(ref_spectrum, direction, StateVector.isolated_level(2, j, 3))
        assert out.norm() == 0.0


def test_support_shift(ref_spectrum):
    st_ = StateVector.ladder_level(2, 5, 10)
    up = ladder_action(ref_spectrum, "up", st_)
    down = ladder_action(ref_spectrum, "down", st_)
    assert np.nonzero(up.c)[0].tolist() == [6]
    assert np.nonzero(down.c)[0].tolist() == [4]
    assert not np.any(up.b) and not np.any(down.b)


def test_bad_direction(ref_spectrum):
    with pytest.raises(ValueError):
        ladder_action(ref_spectrum, "sideways", StateVector.ladder_level(2, 1, 3))


def commutator_ratios(spectrum, n_top=50):
    polys = build_polynomials(spectrum)
    out = []
    for n in range(n_top + 1):
        st_ = StateVector.ladder_level(spectrum.k, n, n_top + 2)
        a = ladder_action(spectrum, "up", ladder_action(spectrum, "down", st_, polys), polys)
        b = ladder_action(spectrum, "down", ladder_action(spectrum, "up", st_, polys), polys)
        comm = b.c[n] - a.c[n]
        out.append((comm, float(polys.p_value(n + 0.5))))
    return out


def test_commutator_is_p(ref_spectrum):
    for got, want in commutator_ratios(ref_spectrum):
        assert abs(got - want) <= 1e-12 * abs(want)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-4.0, 0.45), min_size=1, max_size=3, unique=True))
def test_commutator_random_spectra(eps):
    eps = sorted(eps, reverse=True)
    if any(a - b < 1e-3 for a, b in zip(eps, eps[1:])):
        return
    spec = SpectrumDescriptor(tuple(eps))
    for got, want in commutator_ratios(spec, 20):
        assert abs(got - want) <= 1e-12 * max(abs(want), 1e-300)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-4.0, 0.45), min_size=0, max_size=3, unique=True))
def test_q_nonnegative_on_spectrum(eps):
    spec = SpectrumDescriptor(tuple(sorted(eps, reverse=True)))
    polys = build_polynomials(spec)
    for n in range(40):
        assert polys.q_value(n + 0.5) >= 0
