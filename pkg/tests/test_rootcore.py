import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retrostate.errors import DegenerateLeadingCoefficient, MismatchedDegree
from retrostate.rootcore import (
    CharPolynomial,
    RootSet,
    TargetState,
    char_polynomial,
    expand_roots,
    find_roots,
    monomials_from_roots,
    residual_tolerance,
)

from conftest import G1, random_coeffs


@pytest.mark.parametrize(
    "c, p",
    [
        ([1, 1], [1 / np.sqrt(2), 1 / np.sqrt(2)]),
        ([1, 1, 1], [1 / np.sqrt(3), 1 / np.sqrt(3), 1 / np.sqrt(6)]),
        ([0, 1], [0, 1]),
    ],
)
def test_char_polynomial(c, p):
    np.testing.assert_allclose(char_polynomial(TargetState(c)).coeffs, p, atol=1e-15)


def test_target_is_normalized():
    t = TargetState([3, 4j])
    assert abs(np.linalg.norm(t.coeffs) - 1) < 1e-12
    assert t.N == 1


@pytest.mark.parametrize("c", [[1, 0], [1, 1, 0], [1]])
def test_zero_leading_coefficient_rejected(c):
    with pytest.raises(DegenerateLeadingCoefficient):
        TargetState(c)


def test_find_roots_rejects_tiny_leading_coefficient():
    with pytest.raises(DegenerateLeadingCoefficient):
        find_roots(CharPolynomial([1.0, 1.0, 1e-15]))


def test_roots_two_term_state():
    r = find_roots(char_polynomial(TargetState([1, 1])))
    assert r.N == 1
    assert abs(r.g[0] + 1) < 1e-12


def test_roots_three_term_state():
    r = find_roots(char_polynomial(TargetState([1, 1, 1])))
    # g1 = -1/sqrt2 - i sqrt(sqrt2 - 1/2), g2 = conj(g1)
    assert abs(r.g[0] - G1) < 1e-9
    assert abs(r.g[1] - np.conj(G1)) < 1e-9


def test_roots_match_quadratic_formula(rng):
    # independent route for N = 2
    for _ in range(50):
        t = TargetState(random_coeffs(rng, 2))
        p0, p1, p2 = char_polynomial(t).coeffs
        disc = np.sqrt(p1**2 - 4 * p2 * p0 + 0j)
        expected = sorted([(-p1 + disc) / (2 * p2), (-p1 - disc) / (2 * p2)], key=lambda z: (z.real, z.imag))
        got = find_roots(char_polynomial(t)).g
        # ordering may differ only when real parts tie
        assert min(abs(got[0] - expected[0]) + abs(got[1] - expected[1]),
                   abs(got[0] - expected[1]) + abs(got[1] - expected[0])) < 1e-10


def test_root_of_single_photon_state():
    r = find_roots(char_polynomial(TargetState([0, 1])))
    assert r.g[0] == 0


def test_expand_roots_normalizations():
    t = TargetState([1, 1])
    k, c = expand_roots(find_roots(char_polynomial(t)), t)
    assert abs(abs(k) ** 2 - 0.5) < 1e-12
    t = TargetState([1, 1, 1])
    k, c = expand_roots(RootSet([G1, np.conj(G1)]), t)
    assert abs(abs(k) ** 2 - 1 / 6) < 1e-12
    np.testing.assert_allclose(c, t.coeffs, atol=1e-12)
    t = TargetState([0, 1])
    k, c = expand_roots(RootSet([0]), t)
    assert abs(k - 1) < 1e-15
    np.testing.assert_allclose(c, [0, 1])


def test_expand_roots_degree_mismatch():
    with pytest.raises(MismatchedDegree):
        expand_roots(RootSet([1, 2]), TargetState([1, 1]))


def test_monomials():
    np.testing.assert_allclose(monomials_from_roots([1, 2]), [2, -3, 1])


def test_residual_on_reference_states():
    for c in ([1, 1], [1, 1, 1], [0, 1], [1, 0.5, 0.25, 1]):
        poly = char_polynomial(TargetState(c))
        r = find_roots(poly)
        assert np.all(np.abs(poly(r.g)) <= 1e-9 * np.max(np.abs(poly.coeffs)))


def test_root_ordering_is_lexicographic(rng):
    for _ in range(20):
        r = find_roots(char_polynomial(TargetState(random_coeffs(rng, 5))))
        keys = [(round(g.real, 10), g.imag) for g in r.g]
        assert keys == sorted(keys)


def test_repeated_root_is_flagged():
    # (x + 1)^2 -> coefficients p = (1, 2, 1) -> c_n = p_n sqrt(n!)
    c = np.array([1, 2, np.sqrt(2)])
    poly = char_polynomial(TargetState(c))
    r = find_roots(poly)
    assert r.N == 2
    np.testing.assert_allclose(r.g, [-1, -1], atol=1e-6)
    assert np.all(np.abs(poly(r.g)) <= residual_tolerance(poly, r))


@settings(max_examples=200, deadline=None)
@given(
    N=st.integers(1, 8),
    seed=st.integers(0, 2**32 - 1),
    real=st.booleans(),
)
def test_round_trip(N, seed, real):
    t = TargetState(random_coeffs(np.random.default_rng(seed), N, real))
    poly = char_polynomial(t)
    r = find_roots(poly)
    assert r.N == N
    assert np.all(np.abs(poly(r.g)) <= residual_tolerance(poly, r))
    k, c = expand_roots(r, t)
    assert np.max(np.abs(c - t.coeffs)) <= 1e-8
    np.testing.assert_allclose(monomials_from_roots(r.g) * k, poly.coeffs, atol=1e-9 * max(1, abs(k)) * np.max(np.abs(monomials_from_roots(r.g))))
    if real:
        # closed under conjugation
        conj = np.sort_complex(np.conj(r.g))
        assert np.max(np.abs(np.sort_complex(r.g) - conj)) <= 1e-9 * max(1, np.max(np.abs(r.g)))
