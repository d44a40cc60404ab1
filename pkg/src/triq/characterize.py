"""Closed-form membership tests for the coefficient sets F(p), G(p), H(p).

For real p > 0 and nonzero mu_1..mu_n,

* F(p) holds the tuples with ``|x_1+...+x_n|^p <= sum |x_i|^p / mu_i`` for
  every choice of vectors in every normed space,
* G(p) the tuples for which the reverse inequality always holds,
* H(p) the tuples with ``|x_1+...+x_n|^p <= |sum |x_i|^p / mu_i|``.

Each decision returns a :class:`Verdict` carrying the governing clause and a
signed margin (positive = strictly inside).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Exponent",
    "Verdict",
    "as_mu",
    "count_negatives",
    "decide",
    "decide_F",
    "decide_G",
    "decide_H",
]

DEFAULT_TOL = 1e-12
P_MAX = 1e6
P_GT1_GUARD = 1e-9


@dataclass(frozen=True)
class Exponent:
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (0 < p <= P_MAX):
            raise ValueError(f"p must lie in (0, {P_MAX:g}] (got {self.p})")
        if p > 1 and p - 1 < P_GT1_GUARD:
            raise ValueError(f"p too close to 1 from above (p - 1 = {p - 1:.3g})")
        object.__setattr__(self, "p", p)

    @property
    def regime(self) -> str:
        return "GT1" if self.p > 1 else "LE1"

    @property
    def conjugate_power(self) -> float:
        """The exponent 1/(p-1) appearing in the p > 1 conditions."""
        return 1.0 / (self.p - 1.0)


def _exponent(p) -> Exponent:
    return p if isinstance(p, Exponent) else Exponent(p)


def as_mu(mu) -> np.ndarray:
    """Validate a coefficient tuple; raises ``ValueError`` on zero entries."""
    arr = np.atleast_1d(np.asarray(mu, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("mu must be a non-empty list of reals")
    if not np.all(np.isfinite(arr)):
        raise ValueError("mu entries must be finite")
    if np.any(arr == 0):
        raise ValueError("mu entries must be nonzero")
    return arr


def count_negatives(mu) -> int:
    return int(np.count_nonzero(as_mu(mu) < 0))


@dataclass(frozen=True)
class Verdict:
    set_id: str
    p: float
    mu: tuple
    member: bool
    clause: str
    margin: float
    k_negative: int
    boundary: bool

    @property
    def n(self) -> int:
        return len(self.mu)

    def to_dict(self) -> dict:
        return {
            "set": self.set_id,
            "p": self.p,
            "mu": list(self.mu),
            "n": self.n,
            "k_negative": self.k_negative,
            "member": self.member,
            "boundary": self.boundary,
            "clause": self.clause,
            "margin": "+inf" if self.margin == math.inf else self.margin,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        margin = math.inf if d["margin"] == "+inf" else float(d["margin"])
        return cls(
            set_id=d["set"],
            p=float(d["p"]),
            mu=tuple(float(m) for m in d["mu"]),
            member=bool(d["member"]),
            clause=d["clause"],
            margin=margin,
            k_negative=int(d["k_negative"]),
            boundary=bool(d["boundary"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Verdict":
        return cls.from_dict(json.loads(text))

    def describe(self) -> str:
        """One-line human summary naming the governing clause."""
        head = "member" if self.member else "NOT a member"
        clause = self.clause.replace("Thm", "Thm ").replace("Cor", "Cor ")
        p = f"{self.p:.12g}"
        return f"{head} of {self.set_id}({p}) by {clause}: {_explain(self)}"


def _explain(v: Verdict) -> str:
    mu = np.asarray(v.mu)
    p = v.p
    m = v.margin
    tail = " (boundary)" if v.boundary else ""
    if v.set_id == "F":
        if v.k_negative:
            return f"{v.k_negative} negative coefficient(s), a lone x_i violates the inequality"
        if p > 1:
            total = 1 - m
            rel = "<=" if v.member else ">"
            return f"sum mu^(1/(p-1)) = {total:.6g} {rel} 1{tail}"
        rel = "<=" if v.member else ">"
        return f"max mu = {mu.max():.6g} {rel} 1{tail}"
    if v.set_id == "G":
        n, k = v.n, v.k_negative
        if k == n:
            return "all coefficients negative, the right-hand side is never positive"
        if k <= n - 2:
            return f"{n - k} positive coefficients, a cancelling pair violates the reverse inequality"
        j = int(np.argmax(mu))
        if p > 1:
            if not math.isfinite(m):
                return f"both sides overflow; mu_j^(1/(p-1)) is the {'larger' if m > 0 else 'smaller'}"
            lhs = mu[j] ** (1.0 / (p - 1))
            rel = ">=" if v.member else "<"
            return f"mu_j^(1/(p-1)) = {lhs:.6g} {rel} 1 + sum |mu_i|^(1/(p-1)) = {lhs - m:.6g}{tail}"
        rel = ">=" if v.member else "<"
        return f"mu_j = {mu[j]:.6g} {rel} max(1, |mu_i|) = {mu[j] - m:.6g}{tail}"
    # H
    if np.any(mu > 0) and np.any(mu < 0):
        return "mixed signs"
    if p > 1:
        rel = "<=" if v.member else ">"
        return f"sum |mu|^(1/(p-1)) = {1 - m:.6g} {rel} 1{tail}"
    rel = "<=" if v.member else ">"
    return f"max |mu| = {np.abs(mu).max():.6g} {rel} 1{tail}"


def _verdict(set_id, e, mu, member, clause, margin, scale, tol):
    thresh = tol * max(1.0, scale)
    boundary = bool(math.isfinite(margin) and abs(margin) <= thresh)
    return Verdict(
        set_id=set_id,
        p=e.p,
        mu=tuple(float(m) for m in mu),
        member=bool(member),
        clause=clause,
        margin=float(margin),
        k_negative=int(np.count_nonzero(mu < 0)),
        boundary=boundary,
    )


def _check_tol(tol):
    if not tol >= 0:
        raise ValueError("tol must be nonnegative")


def decide_F(p, mu, tol: float = DEFAULT_TOL) -> Verdict:
    e, mu = _exponent(p), as_mu(mu)
    _check_tol(tol)
    thm = "Thm2.4" if e.p > 1 else "Thm2.5"
    if np.any(mu < 0):
        return _verdict("F", e, mu, False, thm + "(ii)", float(mu.min()), 0.0, tol)
    if e.p > 1:
        with np.errstate(over="ignore"):
            total = float(np.sum(mu ** e.conjugate_power))
        margin = 1.0 - total
        scale = total
    else:
        margin = 1.0 - float(mu.max())
        scale = float(mu.max())
    member = margin >= -tol * max(1.0, scale)
    return _verdict("F", e, mu, member, thm + "(i)", margin, scale, tol)


def decide_G(p, mu, tol: float = DEFAULT_TOL) -> Verdict:
    e, mu = _exponent(p), as_mu(mu)
    _check_tol(tol)
    thm = "Thm2.6" if e.p > 1 else "Thm2.7"
    n = mu.size
    k = int(np.count_nonzero(mu < 0))
    if k == n:
        return _verdict("G", e, mu, True, thm + "(iii)", math.inf, 0.0, tol)
    if k <= n - 2:
        second = float(np.sort(mu)[-2])
        return _verdict("G", e, mu, False, thm + "(i)", -second, 0.0, tol)
    j = int(np.argmax(mu))
    others = np.abs(np.delete(mu, j))
    if e.p > 1:
        c = e.conjugate_power
        with np.errstate(over="ignore"):
            lhs = float(mu[j] ** c)
            rhs = 1.0 + float(np.sum(others ** c))
        if math.isinf(lhs) or math.isinf(rhs):
            return _verdict_scaled_G(e, mu, j, others, thm, tol)
    else:
        lhs = float(mu[j])
        rhs = max(1.0, float(others.max())) if others.size else 1.0
    margin = lhs - rhs
    scale = max(lhs, rhs)
    member = margin >= -tol * max(1.0, scale)
    return _verdict("G", e, mu, member, thm + "(ii)", margin, scale, tol)


def _verdict_scaled_G(e, mu, j, others, thm, tol):
    # both sides overflow: compare after dividing by the largest term
    c = e.conjugate_power
    logs = c * np.log(np.append(others, 1.0))
    top = max(c * math.log(mu[j]), float(logs.max()))
    diff = math.exp(c * math.log(mu[j]) - top) - float(np.sum(np.exp(logs - top)))
    margin = math.copysign(math.inf, diff) if diff else 0.0
    return _verdict("G", e, mu, diff >= -tol, thm + "(ii)", margin, 0.0, tol)


def decide_H(p, mu, tol: float = DEFAULT_TOL) -> Verdict:
    """H(p) is F(p) together with its mirror image -F(p)."""
    e, mu = _exponent(p), as_mu(mu)
    _check_tol(tol)
    clause = "Cor2.8(i)" if e.p > 1 else "Cor2.8(ii)"
    if np.any(mu > 0) and np.any(mu < 0):
        margin = -min(float(mu.max()), float(-mu.min()))
        return _verdict("H", e, mu, False, clause, margin, 0.0, tol)
    a = np.abs(mu)
    if e.p > 1:
        with np.errstate(over="ignore"):
            scale = float(np.sum(a ** e.conjugate_power))
    else:
        scale = float(a.max())
    margin = 1.0 - scale
    member = margin >= -tol * max(1.0, scale)
    return _verdict("H", e, mu, member, clause, margin, scale, tol)


def decide(set_id: str, p, mu, tol: float = DEFAULT_TOL) -> Verdict:
    try:
        fn = {"F": decide_F, "G": decide_G, "H": decide_H}[set_id.upper()]
    except KeyError:
        raise ValueError(f"unknown set {set_id!r}; expected F, G or H") from None
    return fn(p, mu, tol)
