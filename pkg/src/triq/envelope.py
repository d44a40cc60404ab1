"""Envelope of the hyperplane family  a_1 s_1^p + ... + a_n s_n^p = 1.

As s ranges over the probability simplex the family envelopes the surface
``a_n = h_p(a_1, ..., a_{n-1})``; the region above it is the set of ``a`` with
``sum a_i s_i^p >= 1`` for every simplex point s.  For 0 < p <= 1 the same
region is the box ``a_i >= 1``.
"""

from __future__ import annotations

import io
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .characterize import Exponent

__all__ = [
    "h_p",
    "envelope_point",
    "envelope_residual",
    "in_Dp",
    "DpCheck",
    "simplex_grid",
    "sample_envelope",
    "envelope_csv",
]

DOMAIN_MARGIN = 1e-12
SIMPLEX_ATOL = 1e-12


def _gt1(p) -> Exponent:
    e = p if isinstance(p, Exponent) else Exponent(p)
    if e.p <= 1:
        raise ValueError(f"the envelope surface needs p > 1 (got {e.p})")
    return e


def h_p(p, a_head) -> float:
    """Closed-form envelope height ``(1 - sum a_i^(1/(1-p)))^(1-p)``."""
    e = _gt1(p)
    a = np.atleast_1d(np.asarray(a_head, dtype=float))
    if a.ndim != 1 or np.any(~np.isfinite(a)) or np.any(a <= 0):
        raise ValueError("h_p needs finite positive arguments")
    # 1/(1-p) written as -1/(p-1) to reuse the guarded denominator
    total = float(np.sum(a ** -e.conjugate_power))
    if total >= 1.0 - DOMAIN_MARGIN:
        raise ValueError(f"outside the h_p domain: sum a_i^(1/(1-p)) = {total!r} >= 1")
    return (1.0 - total) ** (1.0 - e.p)


def _interior_simplex(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or s.size < 2:
        raise ValueError("simplex point needs at least two coordinates")
    if np.any(~np.isfinite(s)) or np.any(s <= 0):
        raise ValueError("simplex point must be strictly interior (all s_i > 0)")
    if abs(s.sum() - 1.0) > SIMPLEX_ATOL * s.size:
        raise ValueError(f"simplex coordinates must sum to 1 (got {s.sum()!r})")
    return s


def envelope_point(p, s) -> np.ndarray:
    """Point where the hyperplane indexed by ``s`` touches the envelope."""
    e = _gt1(p)
    s = _interior_simplex(s)
    return s ** (1.0 - e.p)


def envelope_residual(p, a, s) -> tuple[float, np.ndarray]:
    """Family function F(a; s) and its partials in s_1..s_{n-1}.

    The last simplex coordinate is eliminated as ``1 - (s_1 + ... + s_{n-1})``.
    Both outputs vanish exactly on the envelope.
    """
    e = _gt1(p)
    s = _interior_simplex(s)
    a = np.asarray(a, dtype=float)
    if a.shape != s.shape:
        raise ValueError("a and s must have the same length")
    pw = e.p
    head = s[:-1]
    tail = 1.0 - head.sum()
    value = float(np.dot(a[:-1], head ** pw) + a[-1] * tail ** pw - 1.0)
    grad = pw * a[:-1] * head ** (pw - 1) - pw * a[-1] * tail ** (pw - 1)
    return value, grad


class DpCheck(NamedTuple):
    inside: bool
    value: float
    sample: np.ndarray


def in_Dp(p, a, omega, tol: float = 1e-12) -> DpCheck:
    """Is ``sum a_i s_i^p >= 1`` on every row s of ``omega``?

    Rows must be nonnegative with coordinate sum at least 1.  Reports the
    worst row and its value.
    """
    pw = float(p.p if isinstance(p, Exponent) else Exponent(p).p)
    a = np.asarray(a, dtype=float)
    omega = np.atleast_2d(np.asarray(omega, dtype=float))
    if omega.size == 0:
        raise ValueError("omega is empty")
    if omega.shape[1] != a.size:
        raise ValueError("omega rows and a must have the same length")
    if np.any(a < 0):
        raise ValueError("a must be nonnegative")
    if np.any(omega < 0) or np.any(omega.sum(axis=1) < 1.0 - SIMPLEX_ATOL * a.size):
        raise ValueError("omega rows must be nonnegative with sum >= 1")
    values = (omega ** pw) @ a
    i = int(np.argmin(values))
    return DpCheck(bool(values[i] >= 1.0 - tol), float(values[i]), omega[i].copy())


def _compositions(total: int, parts: int, minimum: int = 0) -> np.ndarray:
    """All integer vectors of length ``parts`` with entries >= ``minimum``
    summing to ``total``, in lexicographic order."""
    free = total - parts * minimum
    if free < 0:
        return np.empty((0, parts), dtype=int)
    # stars and bars: bar positions -> part sizes
    rows = []
    for bars in combinations(range(free + parts - 1), parts - 1):
        edges = (-1,) + bars + (free + parts - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(parts)])
    return np.array(rows, dtype=int).reshape(-1, parts) + minimum


def simplex_grid(n: int, resolution: int) -> np.ndarray:
    """Uniform barycentric grid on the simplex, nudged off the boundary.

    Each composition k of ``resolution`` maps to ``(k + 1/2) / (resolution + n/2)``
    so every coordinate is at least about ``1 / (2 * resolution)``.
    """
    if n < 1 or resolution < 0:
        raise ValueError("need n >= 1 and resolution >= 0")
    if n == 1:
        return np.ones((1, 1))
    if n == 2:
        k = np.arange(resolution + 1)
        k = np.stack([k, resolution - k], axis=1)
    elif n == 3:
        i, j = np.triu_indices(resolution + 1)
        # i + (j - i) + (resolution - j)
        k = np.stack([i, j - i, resolution - j], axis=1)
    else:
        k = _compositions(resolution, n)
    return (k + 0.5) / (resolution + 0.5 * n)


def sample_envelope(p, n: int, grid: int) -> list[tuple[np.ndarray, float]]:
    """Rows ``(a_head, h_p(a_head))`` over the interior grid ``s = k / grid``.

    ``k`` runs over positive compositions of ``grid`` into n parts in
    lexicographic order, so the output is deterministic.
    """
    e = _gt1(p)
    if n < 2 or grid < 2:
        raise ValueError("need n >= 2 and grid >= 2")
    rows = []
    for k in _compositions(grid, n, minimum=1):
        a = envelope_point(e, k / grid)
        rows.append((a[:-1], h_p(e, a[:-1])))
    return rows


def envelope_csv(rows, n: int | None = None) -> str:
    """Render envelope rows as CSV: header ``a1,...,a{n-1},h_p``, 12 significant digits."""
    if n is None:
        if not rows:
            raise ValueError("cannot infer n from an empty row list")
        n = len(rows[0][0]) + 1
    buf = io.StringIO()
    buf.write(",".join([f"a{i + 1}" for i in range(n - 1)] + ["h_p"]) + "\n")
    for head, h in rows:
        buf.write(",".join(format(float(v), ".12g") for v in [*head, h]) + "\n")
    return buf.getvalue()
