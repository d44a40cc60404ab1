"""Finite-dimensional l^q spaces used as concrete normed spaces.

Vectors are plain float arrays. A space is described by its exponent ``q``
(``math.inf`` for the max norm) and its dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpaceDescriptor",
    "NormTuple",
    "norm",
    "norms",
    "feasible_t_range",
    "realize_tuple",
]

BISECT_TOL = 1e-10
BISECT_MAXITER = 200


@dataclass(frozen=True)
class SpaceDescriptor:
    q: float = 2.0
    dim: int = 2

    def __post_init__(self):
        q = float(self.q)
        if math.isnan(q) or q < 1:
            raise ValueError(f"l^q is a norm only for q >= 1 (got q={self.q})")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dimension must be a positive integer (got {self.dim})")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "dim", int(self.dim))

    @classmethod
    def parse(cls, text: str) -> "SpaceDescriptor":
        """Parse ``lq:<q>:<dim>``, e.g. ``lq:2:3`` or ``lq:inf:2``."""
        parts = text.strip().split(":")
        if len(parts) != 3 or parts[0] != "lq":
            raise ValueError(f"space must look like lq:<q>:<dim>, got {text!r}")
        q = math.inf if parts[1].lower() == "inf" else float(parts[1])
        try:
            dim = int(parts[2])
        except ValueError:
            raise ValueError(f"bad dimension in {text!r}") from None
        return cls(q, dim)

    def __str__(self) -> str:
        q = "inf" if math.isinf(self.q) else format(self.q, "g")
        return f"lq:{q}:{self.dim}"


@dataclass(frozen=True)
class NormTuple:
    """Norms ``s[i] = |x_i|`` of n vectors together with ``t = |x_1 + ... + x_n|``."""

    s: tuple
    t: float

    def __post_init__(self):
        s = tuple(float(v) for v in self.s)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", float(self.t))
        if not s:
            raise ValueError("norm tuple needs at least one entry")
        if any(not math.isfinite(v) or v < 0 for v in s) or not math.isfinite(self.t) or self.t < 0:
            raise ValueError("norms must be finite and nonnegative")

    def scaled(self, c: float) -> "NormTuple":
        return NormTuple(tuple(c * v for v in self.s), c * self.t)

    def is_feasible(self, rtol: float = 1e-12) -> bool:
        if not any(self.s):
            return self.t == 0
        lo, hi = feasible_t_range(self.s)
        slack = rtol * max(1.0, hi)
        return lo - slack <= self.t <= hi + slack


def norm(space: SpaceDescriptor, v) -> float:
    v = np.asarray(v, dtype=float)
    if v.shape != (space.dim,):
        raise ValueError(f"vector of shape {v.shape} does not live in {space}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite coordinates")
    return float(norms(space.q, v))


def norms(q: float, arr, axis: int = -1):
    """Vectorised l^q norm along ``axis``; no validation."""
    a = np.abs(np.asarray(arr, dtype=float))
    if math.isinf(q):
        return a.max(axis=axis)
    if q == 1:
        return a.sum(axis=axis)
    # rescale by the max coordinate against over/underflow of |v_i|^q
    m = a.max(axis=axis, keepdims=True)
    r = a / np.where(m > 0, m, 1.0)
    powered = r * r if q == 2 else r ** q
    return np.squeeze(m, axis=axis) * powered.sum(axis=axis) ** (1.0 / q)


def feasible_t_range(s) -> tuple[float, float]:
    """Interval of attainable ``|x_1 + ... + x_n|`` given ``|x_i| = s[i]``.

    Valid in any normed space of dimension at least 2.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("need a non-empty list of norms")
    if np.any(s < 0) or not np.all(np.isfinite(s)):
        raise ValueError("norms must be finite and nonnegative")
    total = float(s.sum())
    if total == 0:
        raise ValueError("all norms are zero")
    return max(0.0, 2.0 * float(s.max()) - total), total


def _rotate(u, theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([c * u[0] - s * u[1], s * u[0] + c * u[1]])


def _attach(q, y, length, target):
    """Vector w in the plane with |w| = length and |y + w| = target.

    ``|y + w|`` sweeps from ``|y| + length`` to ``||y| - length|`` while w is
    rotated from +y to -y, so a root is bracketed on [0, pi].
    """
    if length == 0:
        return np.zeros(2)
    ny = float(norms(q, y))
    if ny == 0:
        d = np.array([1.0, 0.0])
    else:
        d = y / ny

    def w_at(theta):
        u = _rotate(d, theta)
        return length * u / norms(q, u)

    def f(theta):
        return float(norms(q, y + w_at(theta))) - target

    lo, hi = 0.0, math.pi
    # endpoints are exact (collinear); a target just outside them is roundoff
    if f(lo) <= BISECT_TOL:
        return length * d
    if f(hi) >= -BISECT_TOL:
        return -length * d
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= BISECT_TOL:
            return w_at(mid)
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return w_at(0.5 * (lo + hi))


def realize_tuple(space: SpaceDescriptor, nt: NormTuple) -> list[np.ndarray]:
    """Build vectors x_1..x_n in ``space`` whose norms and sum-norm match ``nt``.

    Vectors are built one at a time in the first coordinate plane: x_1 lies
    on the first axis, and each further x_k is rotated until the running sum
    reaches an intermediate norm that keeps the remaining targets reachable.
    """
    if space.dim < 2:
        raise ValueError("realizing a norm tuple needs dimension >= 2")
    if not nt.is_feasible():
        raise ValueError(f"norm tuple {nt} violates the triangle inequality")
    q = space.q
    s = list(nt.s)
    n = len(s)

    # targets[k] = norm of the partial sum x_1 + ... + x_{k+1}
    targets = [0.0] * n
    targets[-1] = nt.t
    for k in range(n - 1, 0, -1):
        head = s[:k]
        if any(head):
            lo, hi = feasible_t_range(head)
        else:
            lo = hi = 0.0
        a = max(lo, abs(targets[k] - s[k]))
        b = min(hi, targets[k] + s[k])
        if a > b:
            # roundoff at an extreme point; both bounds agree to ~eps
            a = b = min(max(a, lo), hi)
        targets[k - 1] = 0.5 * (a + b)
    targets[0] = s[0]

    plane = []
    y = np.zeros(2)
    for k in range(n):
        w = _attach(q, y, s[k], targets[k])
        plane.append(w)
        y = y + w
    out = []
    for w in plane:
        v = np.zeros(space.dim)
        v[:2] = w
        out.append(v)
    return out
