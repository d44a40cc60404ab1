import numpy as np
import pytest

from triq.envelope import (
    envelope_csv,
    envelope_point,
    envelope_residual,
    h_p,
    in_Dp,
    sample_envelope,
    simplex_grid,
)


def _min_over_simplex(p, a, resolution):
    """Brute-force min of sum a_i s_i^p on a closed barycentric grid (n = 2 or 3)."""
    a = np.asarray(a, float)
    k = np.arange(resolution + 1) / resolution
    if a.size == 2:
        s = np.stack([k, 1 - k], axis=1)
    else:
        i, j = np.meshgrid(k, k, indexing="ij")
        keep = i + j <= 1 + 1e-15
        s = np.stack([i[keep], j[keep], np.clip(1 - i[keep] - j[keep], 0, None)], axis=1)
    return float((s**p @ a).min())


def _envelope_height_oracle(p, a_head, resolution):
    """Bisection on a_n until the hyperplane family's minimum touches 1."""
    lo, hi = 1e-6, 1e6
    for _ in range(100):
        mid = np.sqrt(lo * hi)
        if _min_over_simplex(p, [*a_head, mid], resolution) >= 1:
            hi = mid
        else:
            lo = mid
    return hi


def test_h_p_examples():
    assert h_p(2, [2]) == pytest.approx(2.0, rel=1e-15)
    assert h_p(2, [3, 3]) == pytest.approx(3.0, rel=1e-15)
    # 2 s^2 + 2 (1 - s)^2 has min 1 at s = 1/2: (2, 2) is on the envelope
    assert _min_over_simplex(2, [2, 2], 1000) == pytest.approx(1.0, abs=1e-12)
    assert _min_over_simplex(2, [3, 3, 3], 300) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("p,head", [(2, [1]), (2, [1.5, 1.5]), (3, [0.5]), (1.0, [2]), (0.5, [2])])
def test_h_p_domain_errors(p, head):
    with pytest.raises(ValueError):
        h_p(p, head)


@pytest.mark.parametrize("p,head,res", [
    (2, [1.5], 200_000), (3, [5.0], 200_000), (1.5, [2.3], 200_000),
    (2, [4.0, 3.0], 1500), (2.5, [6.0, 9.0], 1500),
])
def test_h_p_matches_brute_force_envelope(p, head, res):
    assert h_p(p, head) == pytest.approx(_envelope_height_oracle(p, head, res), rel=2e-5)


def test_envelope_point_examples():
    np.testing.assert_allclose(envelope_point(2, [0.5, 0.5]), [2, 2], rtol=1e-15)
    np.testing.assert_allclose(envelope_point(3, [0.5, 0.5]), [4, 4], rtol=1e-15)
    assert h_p(3, [4]) == pytest.approx(4.0, rel=1e-14)
    np.testing.assert_allclose(envelope_point(2, [1 / 3, 2 / 3]), [3, 1.5], rtol=1e-15)


@pytest.mark.parametrize("s", [[0.0, 1.0], [0.3, 0.3], [-0.1, 1.1], [1.0]])
def test_envelope_point_rejects_non_interior(s):
    with pytest.raises(ValueError):
        envelope_point(2, s)


def test_envelope_residual_examples():
    F, g = envelope_residual(2, [2, 2], [0.5, 0.5])
    assert F == pytest.approx(0, abs=1e-15) and np.allclose(g, 0, atol=1e-15)
    F, g = envelope_residual(2, [3, 1.5], [1 / 3, 2 / 3])
    assert F == pytest.approx(0, abs=1e-15) and np.allclose(g, 0, atol=1e-14)
    F, g = envelope_residual(2, [2, 2], [0.4, 0.6])
    # direct: 2 * 0.16 + 2 * 0.36 - 1 and 2*2*0.4 - 2*2*0.6
    assert F == pytest.approx(0.04, abs=1e-14)
    np.testing.assert_allclose(g, [-0.8], atol=1e-14)


def test_envelope_residual_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(2, 5))
        p = float(rng.uniform(1.2, 4))
        s = rng.dirichlet(np.full(n, 3.0))
        a = rng.uniform(0.5, 3, n)
        _, g = envelope_residual(p, a, s)
        h = 1e-6
        for i in range(n - 1):
            up, dn = s.copy(), s.copy()
            up[i] += h
            up[-1] -= h
            dn[i] -= h
            dn[-1] += h
            fd = (envelope_residual(p, a, up)[0] - envelope_residual(p, a, dn)[0]) / (2 * h)
            assert g[i] == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_residual_vanishes_only_on_the_envelope():
    rng = np.random.default_rng(6)
    for _ in range(200):
        n = int(rng.integers(2, 5))
        p = float(rng.choice([1.5, 2.0, 3.0]))
        s = rng.dirichlet(np.ones(n))
        a = envelope_point(p, s)
        F, g = envelope_residual(p, a, s)
        assert abs(F) <= 1e-9 and np.all(np.abs(g) <= 1e-9 * max(1.0, a.max()))
        F2, g2 = envelope_residual(p, a * 1.01, s)
        assert abs(F2) > 1e-4


def test_in_Dp_examples():
    grid = simplex_grid(2, 200)
    assert in_Dp(0.5, [1, 1], grid).inside
    r = in_Dp(2, [2, 2], grid)
    assert r.inside and r.value == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(r.sample, [0.5, 0.5])
    r = in_Dp(2, [1.5, 1.5], [[0.5, 0.5], [1.0, 0.0]])
    assert not r.inside and r.value == pytest.approx(0.75)
    np.testing.assert_allclose(r.sample, [0.5, 0.5])


def test_in_Dp_validation():
    with pytest.raises(ValueError):
        in_Dp(2, [1, 1], np.empty((0, 2)))
    with pytest.raises(ValueError):
        in_Dp(2, [1, 1], [[0.2, 0.2]])
    with pytest.raises(ValueError):
        in_Dp(2, [1, 1, 1], [[0.5, 0.5]])


def test_simplex_grid_shape_and_offset():
    for n, res in [(2, 10), (3, 7), (4, 5), (5, 3)]:
        g = simplex_grid(n, res)
        from math import comb
        assert g.shape == (comb(res + n - 1, n - 1), n)
        np.testing.assert_allclose(g.sum(axis=1), 1.0, atol=1e-14)
        assert g.min() > 0
        assert len(np.unique(g.round(12), axis=0)) == len(g)


def test_sample_envelope_rows():
    rows = sample_envelope(2, 2, 2)
    assert len(rows) == 1
    np.testing.assert_allclose(rows[0][0], [2.0])
    assert rows[0][1] == pytest.approx(2.0)
    # positive compositions of 3: s1 in {1/3, 2/3}, a1 = 1/s1, h = 1/(1 - s1)
    rows = sample_envelope(2, 2, 3)
    np.testing.assert_allclose([r[0][0] for r in rows], [3.0, 1.5])
    np.testing.assert_allclose([r[1] for r in rows], [1.5, 3.0])
    # positive compositions of 4 into 3 parts: C(3, 2) = 3
    assert len(sample_envelope(2, 3, 4)) == 3
    assert len(sample_envelope(3, 4, 9)) == 56


def test_envelope_csv_is_stable():
    text = envelope_csv(sample_envelope(2, 3, 4))
    assert text == "a1,a2,h_p\n4,4,2\n4,2,4\n2,4,4\n"
    assert envelope_csv(sample_envelope(2.5, 3, 7)) == envelope_csv(sample_envelope(2.5, 3, 7))
    line = envelope_csv(sample_envelope(3, 2, 7)).splitlines()[1]
    assert all(len(v.replace(".", "").lstrip("0")) <= 12 for v in line.split(","))


def test_h_p_is_strictly_convex():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        p = float(rng.choice([1.5, 2.0, 3.0]))
        n = int(rng.integers(2, 5))
        a = envelope_point(p, rng.dirichlet(np.ones(n)))[:-1]
        b = envelope_point(p, rng.dirichlet(np.ones(n)))[:-1]
        if np.allclose(a, b, rtol=1e-6):
            continue
        assert h_p(p, (a + b) / 2) < (h_p(p, a) + h_p(p, b)) / 2
