import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from triq.characterize import (
    Exponent,
    Verdict,
    count_negatives,
    decide,
    decide_F,
    decide_G,
    decide_H,
)


@pytest.mark.parametrize("mu,k", [((0.5, 0.5), 0), ((2, -1), 1), ((-1, -1, -1), 3)])
def test_count_negatives(mu, k):
    assert count_negatives(mu) == k


def test_exponent_regimes_and_guards():
    assert Exponent(2).regime == "GT1"
    assert Exponent(1).regime == "LE1"
    assert Exponent(0.3).regime == "LE1"
    for bad in (0, -1, 2e6, 1 + 1e-10):
        with pytest.raises(ValueError):
            Exponent(bad)


# ---------------------------------------------------------------- F


def test_F_second_type_triangle_inequality_is_tight_member():
    # |x + y|^2 <= 2(|x|^2 + |y|^2) is mu = (1/2, 1/2)
    v = decide_F(2, (0.5, 0.5))
    assert v.member and v.boundary
    assert v.margin == 0.0
    assert v.clause == "Thm2.4(i)"


def test_F_collinear_violation():
    v = decide_F(2, (0.6, 0.6))
    # x1 = x2 = 0.6 x with |x| = 1: lhs 1.2^2 = 1.44 > rhs 2 * 0.36 / 0.6 = 1.2
    assert 1.2**2 > 2 * 0.36 / 0.6
    assert not v.member
    assert v.margin == pytest.approx(-0.2, abs=1e-15)


def test_F_small_p_box():
    v = decide_F(0.5, (1, 1, 1))
    assert v.member and v.clause == "Thm2.5(i)"
    assert not decide_F(0.5, (1, 1.01, 1)).member


def test_F_negative_entry():
    v = decide_F(2, (2, -1))
    assert not v.member and v.clause == "Thm2.4(ii)" and v.k_negative == 1
    assert decide_F(0.5, (0.5, -1)).clause == "Thm2.5(ii)"


def test_p_equal_one_uses_small_p_branch():
    assert decide_F(1, (1, 1)).clause == "Thm2.5(i)"
    assert decide_G(1, (2, -1)).clause == "Thm2.7(ii)"
    assert decide_H(1, (1, 1)).clause == "Cor2.8(ii)"


# ---------------------------------------------------------------- G


def test_G_boundary_psd_quadratic():
    # reverse side t^2 - s^2/2 + u^2 over t >= s - u is zero at s = 2t = 2u
    v = decide_G(2, (2, -1))
    assert v.member and v.boundary and v.margin == 0.0
    assert v.clause == "Thm2.6(ii)"


def test_G_examples():
    v = decide_G(2, (1.5, -1))
    assert not v.member and v.margin == pytest.approx(-0.5, abs=1e-15)
    v = decide_G(2, (-1, -1))
    assert v.member and v.margin == math.inf and v.clause == "Thm2.6(iii)"
    v = decide_G(2, (1, 1))
    assert not v.member and v.clause == "Thm2.6(i)"
    v = decide_G(0.5, (3, -2))
    assert v.member and v.clause == "Thm2.7(ii)"
    assert v.margin == pytest.approx(1.0)


def test_G_small_p_needs_mu_j_at_least_one():
    assert not decide_G(0.5, (0.9, -0.5)).member
    assert decide_G(0.5, (1.0, -0.5)).member


def test_G_single_coefficient():
    # n = 1: |x|^p >= |x|^p / mu  iff  mu >= 1 or mu < 0
    assert decide_G(2, (1.5,)).member
    assert not decide_G(2, (0.5,)).member
    assert decide_G(2, (-0.5,)).member


def test_G_handles_overflowing_powers():
    v = decide_G(1 + 2e-9, (3, -2))
    assert v.member and v.margin == math.inf
    v = decide_G(1 + 2e-9, (2, -3))
    assert not v.member


# ---------------------------------------------------------------- H


def test_H_examples():
    assert decide_H(2, (0.5, 0.5)).member
    assert decide_H(2, (-0.5, -0.5)).member
    v = decide_H(0.5, (1, -1))
    assert not v.member and v.clause == "Cor2.8(ii)"
    assert decide_H(0.5, (-1, -0.3)).member
    assert not decide_H(0.5, (-1.1, -0.3)).member
    assert not decide_H(3, (0.5, 0.5)).member


# ---------------------------------------------------------------- errors, JSON


@pytest.mark.parametrize("fn", [decide_F, decide_G, decide_H])
def test_zero_coefficient_is_an_error(fn):
    with pytest.raises(ValueError, match="nonzero"):
        fn(2, (1, 0, 1))


@pytest.mark.parametrize("fn", [decide_F, decide_G, decide_H])
def test_bad_p_is_an_error(fn):
    with pytest.raises(ValueError):
        fn(0, (1, 1))
    with pytest.raises(ValueError):
        fn(2, ())


def test_decide_dispatch():
    assert decide("G", 2, (2, -1)).set_id == "G"
    with pytest.raises(ValueError):
        decide("Q", 2, (1,))


def test_verdict_json_schema():
    d = json.loads(decide_F(2, (0.5, 0.5)).to_json())
    assert d == {"set": "F", "p": 2.0, "mu": [0.5, 0.5], "n": 2, "k_negative": 0,
                 "member": True, "boundary": True, "clause": "Thm2.4(i)", "margin": 0.0}
    assert json.loads(decide_G(2, (-1, -1)).to_json())["margin"] == "+inf"


@pytest.mark.parametrize("args", [
    ("F", 2, (0.5, 0.5)), ("F", 2, (0.6, 0.6)), ("F", 0.5, (1, 1, 1)), ("F", 2, (2, -1)),
    ("G", 2, (2, -1)), ("G", 2, (1.5, -1)), ("G", 2, (-1, -1)), ("G", 2, (1, 1)),
    ("G", 0.5, (3, -2)), ("H", 2, (0.5, 0.5)), ("H", 0.5, (1, -1)), ("F", 3.3, (0.1, 0.2, 0.3)),
])
def test_verdict_json_roundtrip(args):
    v = decide(*args)
    assert Verdict.from_json(v.to_json()) == v


def test_describe_mentions_clause():
    text = decide_F(2, (0.5, 0.5)).describe()
    assert text.startswith("member of F(2) by Thm 2.4(i)")
    assert "NOT a member" in decide_G(2, (1, 1)).describe()


# ---------------------------------------------------------------- properties

ps = st.one_of(st.floats(0.05, 1.0), st.floats(1.05, 8.0))
mags = st.floats(0.02, 5.0)


@st.composite
def mu_tuples(draw):
    n = draw(st.integers(1, 6))
    m = draw(st.lists(mags, min_size=n, max_size=n))
    signs = draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=n, max_size=n))
    return tuple(a * b for a, b in zip(m, signs))


@settings(max_examples=400)
@given(ps, mu_tuples())
def test_decomposition_consistency(p, mu):
    n = len(mu)
    if decide_F(p, mu).member:
        assert count_negatives(mu) == 0
    if decide_G(p, mu).member:
        assert count_negatives(mu) in (n - 1, n)


@settings(max_examples=400)
@given(ps, mu_tuples())
def test_H_is_F_and_minus_G_union(p, mu):
    neg = tuple(-m for m in mu)
    verdicts = [decide_F(p, mu), decide_G(p, neg), decide_F(p, neg), decide_G(p, mu), decide_H(p, mu)]
    assume(all(abs(v.margin) > 1e-9 for v in verdicts))
    F, Gm, Fm, G, H = (v.member for v in verdicts)
    assert H == ((F and Gm) or (Fm and G))


@settings(max_examples=300)
@given(st.floats(1.05, 8.0), mu_tuples(), st.integers(0, 5), st.floats(0.01, 0.99))
def test_F_membership_survives_shrinking(p, mu, i, factor):
    mu = tuple(abs(m) for m in mu)
    i %= len(mu)
    if decide_F(p, mu).member:
        smaller = list(mu)
        smaller[i] *= factor
        assert decide_F(p, smaller).member


def _two_vector_F_by_grid(p, mu, nu, m=200_001):
    """min over s in [0, 1] of s^p/mu + (1-s)^p/nu >= 1  (aligned vectors are worst)."""
    s = np.linspace(0, 1, m)
    return float((s**p / mu + (1 - s) ** p / nu).min())


def test_two_variable_case_matches_grid_oracle():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 300:
        p = float(rng.uniform(1.0, 5.0))
        if p - 1 < 1e-3:
            continue
        mu, nu = np.exp(rng.uniform(-3, 1, 2))
        v = decide_F(p, (mu, nu))
        if abs(v.margin) < 1e-3:
            continue
        assert v.member == (_two_vector_F_by_grid(p, mu, nu) >= 1 - 1e-9)
        checked += 1
