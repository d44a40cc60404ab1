"""Numerical falsification and verification of the generalized triangle inequality.

Two directions are checked for given ``p`` and ``mu``:

* ``F``: ``|x_1+...+x_n|^p <= sum |x_i|^p / mu_i``
* ``G``: ``|x_1+...+x_n|^p >= sum |x_i|^p / mu_i``

Both sides depend on the vectors only through the norm tuple
``(|x_1|, ..., |x_n|; |x_1+...+x_n|)``, so the searches run over feasible
norm tuples and only the final counterexample is realised as vectors.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .characterize import Exponent, as_mu, decide_F, decide_G
from .spaces import NormTuple, SpaceDescriptor, norms, realize_tuple

__all__ = [
    "Witness",
    "SearchConfig",
    "Falsification",
    "MonteCarlo",
    "CrosscheckReport",
    "gap_F",
    "gap_G",
    "collinear_probe",
    "basis_probe",
    "cancellation_probe",
    "lagrange_probe",
    "falsify",
    "falsify_F",
    "falsify_G",
    "random_verify",
    "euler_lagrange_residual",
    "crosscheck",
]

VIOLATION_RTOL = 1e-12
MEMBER_GAP_ATOL = 1e-9
BOUNDARY_BAND = 1e-3

# substream ids; fixed so serial and parallel runs draw the same numbers
_STREAM_SEARCH = 1
_STREAM_VERIFY = 2
_STREAM_CROSSCHECK = 3
_MC_BLOCK = 8192


def _rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *path])))


def _p(p) -> float:
    return (p if isinstance(p, Exponent) else Exponent(p)).p


def gap_F(p, mu, nt: NormTuple) -> float:
    """``sum s_i^p / mu_i - t^p``; negative means the inequality fails."""
    pw, mu = _p(p), as_mu(mu)
    s = np.asarray(nt.s)
    if s.size != mu.size:
        raise ValueError("norm tuple and mu differ in length")
    return float(np.sum(s ** pw / mu) - nt.t ** pw)


def gap_G(p, mu, nt: NormTuple) -> float:
    """``t^p - sum s_i^p / mu_i``; negative means the reverse inequality fails."""
    return -gap_F(p, mu, nt)


def _gaps(pw, mu, s, t, direction):
    """Vectorised gaps and their scales for rows of ``s`` and entries of ``t``."""
    rhs = (s ** pw / mu).sum(axis=-1)
    lhs = t ** pw
    gap = rhs - lhs if direction == "F" else lhs - rhs
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    return gap, scale


# ---------------------------------------------------------------- probes


def collinear_probe(p, mu) -> NormTuple:
    """Aligned vectors with ``|x_i|`` proportional to ``mu_i^(1/(p-1))`` (p > 1, mu > 0).

    This is where Hölder's inequality is tight, so it minimises the F-gap
    over the simplex.
    """
    e = p if isinstance(p, Exponent) else Exponent(p)
    mu = as_mu(mu)
    if e.p <= 1 or np.any(mu <= 0):
        raise ValueError("collinear probe needs p > 1 and positive mu")
    w = mu ** e.conjugate_power
    if not np.all(np.isfinite(w)) or w.sum() == 0:
        # rescale in log space for extreme exponents
        lw = e.conjugate_power * np.log(mu)
        w = np.exp(lw - lw.max())
    s = w / w.sum()
    return NormTuple(tuple(s), float(s.sum()))


def basis_probe(n: int, i: int) -> NormTuple:
    """Only x_i is nonzero."""
    s = [0.0] * n
    s[i] = 1.0
    return NormTuple(tuple(s), 1.0)


def cancellation_probe(n: int, i: int, j: int) -> NormTuple:
    """``x_i = -x_j`` with unit norm, all other vectors zero."""
    if i == j:
        raise ValueError("cancellation needs two distinct indices")
    s = [0.0] * n
    s[i] = s[j] = 1.0
    return NormTuple(tuple(s), 0.0)


def lagrange_probe(p, mu) -> NormTuple:
    """Minimiser of the reverse-direction right side for one positive mu_j (p > 1).

    With ``|x_j| = 1`` the others point against x_j with norms
    ``|mu_i|^(1/(p-1)) / (1 + B)``, ``B = sum_{i != j} |mu_i|^(1/(p-1))``; the
    sum then has norm ``1 / (1 + B)``.
    """
    e = p if isinstance(p, Exponent) else Exponent(p)
    mu = as_mu(mu)
    if e.p <= 1:
        raise ValueError("Lagrange probe needs p > 1")
    pos = np.flatnonzero(mu > 0)
    if pos.size != 1:
        raise ValueError("Lagrange probe needs exactly one positive coefficient")
    j = int(pos[0])
    c = np.abs(mu) ** e.conjugate_power
    c[j] = 0.0
    B = float(c.sum())
    s = c / (1.0 + B)
    s[j] = 1.0
    return NormTuple(tuple(s), 1.0 / (1.0 + B))


# ---------------------------------------------------------------- results


@dataclass(frozen=True)
class SearchConfig:
    budget: int = 10_000
    seed: int = 0
    space: SpaceDescriptor = field(default_factory=SpaceDescriptor)
    refine: bool = True

    def __post_init__(self):
        if int(self.budget) != self.budget or self.budget < 1:
            raise ValueError("budget must be a positive integer")
        if isinstance(self.space, str):
            object.__setattr__(self, "space", SpaceDescriptor.parse(self.space))


def _floats(xs):
    return tuple(float(x) + 0.0 for x in xs)  # + 0.0 drops negative zeros


@dataclass(frozen=True)
class Witness:
    """Concrete vectors together with both sides of the inequality they test."""

    set_id: str
    p: float
    mu: tuple
    space: SpaceDescriptor
    probe: str
    vectors: tuple
    norms: tuple
    sum_norm: float
    lhs: float
    rhs: float
    gap: float

    @classmethod
    def from_vectors(cls, set_id, p, mu, space, vectors, probe) -> "Witness":
        vs = np.array([np.asarray(v, dtype=float) for v in vectors])
        lhs, rhs, gap, ns, t = _evaluate(set_id, float(p), np.asarray(mu, float), space, vs)
        return cls(
            set_id=set_id,
            p=float(p),
            mu=_floats(mu),
            space=space,
            probe=probe,
            vectors=tuple(_floats(v) for v in vs),
            norms=_floats(ns),
            sum_norm=t,
            lhs=lhs,
            rhs=rhs,
            gap=gap,
        )

    @property
    def violates(self) -> bool:
        return self.gap < -VIOLATION_RTOL * max(1.0, abs(self.lhs), abs(self.rhs))

    def recompute(self) -> tuple[float, float, float]:
        """(lhs, rhs, gap) evaluated afresh from the stored vectors."""
        lhs, rhs, gap, _, _ = _evaluate(
            self.set_id, self.p, np.asarray(self.mu), self.space, np.array(self.vectors)
        )
        return lhs, rhs, gap

    def to_dict(self) -> dict:
        return {
            "set": self.set_id,
            "p": self.p,
            "mu": list(self.mu),
            "space": str(self.space),
            "probe": self.probe,
            "vectors": [list(v) for v in self.vectors],
            "norms": list(self.norms),
            "sum_norm": self.sum_norm,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(
            set_id=d["set"],
            p=float(d["p"]),
            mu=_floats(d["mu"]),
            space=SpaceDescriptor.parse(d["space"]),
            probe=d["probe"],
            vectors=tuple(_floats(v) for v in d["vectors"]),
            norms=_floats(d["norms"]),
            sum_norm=float(d["sum_norm"]),
            lhs=float(d["lhs"]),
            rhs=float(d["rhs"]),
            gap=float(d["gap"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Witness":
        return cls.from_dict(json.loads(text))


def _evaluate(set_id, p, mu, space, vs):
    ns = norms(space.q, vs)
    t = float(norms(space.q, vs.sum(axis=0)))
    lhs = t ** p
    rhs = float(np.sum(ns ** p / mu))
    gap = rhs - lhs if set_id == "F" else lhs - rhs
    return lhs, rhs, gap, ns, t


@dataclass
class Falsification:
    """Outcome of a counterexample search.

    ``witness`` is None when nothing violated the inequality; ``min_gap`` is
    the smallest gap seen, at ``min_probe`` / ``min_tuple``.
    """

    witness: Witness | None
    min_gap: float
    min_probe: str
    min_tuple: NormTuple | None
    evaluations: int

    @property
    def found(self) -> bool:
        return self.witness is not None


class _Tracker:
    """Keeps the best (most negative) gap across probes in evaluation order."""

    def __init__(self, pw, mu, direction):
        self.pw, self.mu, self.direction = pw, mu, direction
        self.best = math.inf
        self.best_probe = ""
        self.best_tuple = None
        self.violation = None
        self.evaluations = 0

    def offer(self, probe, s, t):
        s = np.atleast_2d(np.asarray(s, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        gap, scale = _gaps(self.pw, self.mu, s, t, self.direction)
        self.evaluations += len(t)
        i = int(np.argmin(gap))
        if gap[i] < self.best:
            self.best = float(gap[i])
            self.best_probe = probe
            self.best_tuple = NormTuple(tuple(s[i]), float(t[i]))
        if self.violation is None:
            hits = np.flatnonzero(gap < -VIOLATION_RTOL * scale)
            if hits.size:
                k = int(hits[np.argmin(gap[hits])])
                self.violation = (probe, NormTuple(tuple(s[k]), float(t[k])))
        return self.violation is not None

    def result(self, set_id, p, cfg):
        witness = None
        if self.violation is not None:
            probe, nt = self.violation
            vs = realize_tuple(cfg.space, nt)
            w = Witness.from_vectors(set_id, p, self.mu, cfg.space, vs, probe)
            if w.violates:
                witness = w
        return Falsification(witness, self.best, self.best_probe, self.best_tuple, self.evaluations)


def _random_simplex(rng, m, n):
    return rng.dirichlet(np.ones(n), size=m)


def _local_grid(center, half_width, per_axis):
    """Regular grid of ``per_axis`` points per free axis in a box around
    ``center``, restricted to the simplex."""
    n = center.size
    offs = np.linspace(-half_width, half_width, per_axis)
    mesh = np.stack(np.meshgrid(*([offs] * (n - 1)), indexing="ij"), axis=-1).reshape(-1, n - 1)
    head = center[:-1] + mesh
    tail = 1.0 - head.sum(axis=1, keepdims=True)
    pts = np.hstack([head, tail])
    return pts[np.all(pts >= 0, axis=1)]


def _simplex_search(tracker, rng, n, budget, refine, t_of):
    """Random points, then a barycentric grid, then two 10x zooms around the best cell."""
    from .envelope import simplex_grid

    if n == 1 or budget <= 0:
        return
    n_random = budget // 2
    if n_random and tracker.offer("random", s := _random_simplex(rng, n_random, n), t_of(s)):
        return
    res = 1
    while math.comb(res + n, n - 1) <= max(1, budget // 4):
        res += 1
    pts = simplex_grid(n, res)
    if tracker.offer("grid", pts, t_of(pts)) or not refine:
        return
    left = max(0, budget - n_random - len(pts))
    per_axis = int(min(21, max(3, (left // 2) ** (1.0 / (n - 1)))))
    half = 1.0 / (res + 0.5 * n)
    for _ in range(2):
        gap, _ = _gaps(tracker.pw, tracker.mu, pts, t_of(pts), tracker.direction)
        center = pts[int(np.argmin(gap))]
        pts = _local_grid(center, half, per_axis)
        if not len(pts) or tracker.offer("grid", pts, t_of(pts)):
            return
        half /= 10.0


def falsify_F(p, mu, cfg: SearchConfig | None = None) -> Falsification:
    """Look for vectors with ``|sum x_i|^p > sum |x_i|^p / mu_i``."""
    cfg = cfg or SearchConfig()
    e = p if isinstance(p, Exponent) else Exponent(p)
    mu = as_mu(mu)
    n = mu.size
    tr = _Tracker(e.p, mu, "F")

    neg = np.flatnonzero(mu < 0)
    if neg.size:
        nt = basis_probe(n, int(neg[0]))
        tr.offer("basis", nt.s, nt.t)
        return tr.result("F", e.p, cfg)
    if e.p > 1:
        nt = collinear_probe(e, mu)
        if tr.offer("collinear", nt.s, nt.t):
            return tr.result("F", e.p, cfg)
    for i in range(n):
        nt = basis_probe(n, i)
        if tr.offer("basis", nt.s, nt.t):
            return tr.result("F", e.p, cfg)
    rng = _rng(cfg.seed, _STREAM_SEARCH)
    _simplex_search(tr, rng, n, cfg.budget - tr.evaluations, cfg.refine,
                    lambda s: s.sum(axis=1))
    return tr.result("F", e.p, cfg)


def _t_lower(s):
    return np.maximum(0.0, 2.0 * s.max(axis=1) - s.sum(axis=1))


def falsify_G(p, mu, cfg: SearchConfig | None = None) -> Falsification:
    """Look for vectors with ``|sum x_i|^p < sum |x_i|^p / mu_i``."""
    cfg = cfg or SearchConfig()
    e = p if isinstance(p, Exponent) else Exponent(p)
    mu = as_mu(mu)
    n = mu.size
    tr = _Tracker(e.p, mu, "G")

    pos = np.flatnonzero(mu > 0)
    if pos.size >= 2:
        nt = cancellation_probe(n, int(pos[0]), int(pos[1]))
        tr.offer("cancellation", nt.s, nt.t)
        return tr.result("G", e.p, cfg)
    if pos.size == 1:
        j = int(pos[0])
        if e.p > 1:
            nt = lagrange_probe(e, mu)
            if tr.offer("lagrange", nt.s, nt.t):
                return tr.result("G", e.p, cfg)
        else:
            nt = basis_probe(n, j)
            if tr.offer("basis", nt.s, nt.t):
                return tr.result("G", e.p, cfg)
            for i in range(n):
                if i == j:
                    continue
                nt = cancellation_probe(n, j, i)
                if tr.offer("cancellation", nt.s, nt.t):
                    return tr.result("G", e.p, cfg)
    for i in range(n):
        nt = basis_probe(n, i)
        if tr.offer("basis", nt.s, nt.t):
            return tr.result("G", e.p, cfg)
    rng = _rng(cfg.seed, _STREAM_SEARCH)
    _simplex_search(tr, rng, n, cfg.budget - tr.evaluations, cfg.refine, _t_lower)
    return tr.result("G", e.p, cfg)


def falsify(set_id: str, p, mu, cfg: SearchConfig | None = None) -> Falsification:
    if set_id == "F":
        return falsify_F(p, mu, cfg)
    if set_id == "G":
        return falsify_G(p, mu, cfg)
    raise ValueError(f"can only falsify F or G, not {set_id!r}")


# ---------------------------------------------------------------- Monte Carlo


class MonteCarlo(NamedTuple):
    min_gap: float
    samples: int
    worst: np.ndarray | None


def _sample_vectors(rng, m, n, dim):
    """Uniform coordinates, mixed with aligned and cancelling configurations."""
    x = rng.uniform(-1.0, 1.0, size=(m, n, dim))
    mode = np.arange(m) % 3
    d = rng.uniform(-1.0, 1.0, size=(m, 1, dim))
    c = rng.uniform(0.0, 1.0, size=(m, n, 1))
    aligned = c * d
    signs = rng.choice([-1.0, 1.0], size=(m, n, 1))
    # collinear with random orientations, so partial sums cancel
    cancel = signs * c * d
    # exact opposite pair on top of the signed mix
    i = rng.integers(0, n, size=m)
    j = (i + rng.integers(1, max(n, 2), size=m)) % n
    rows = np.arange(m)
    if n >= 2:
        cancel[rows, j] = -cancel[rows, i]
    x[mode == 1] = aligned[mode == 1]
    x[mode == 2] = cancel[mode == 2]
    return x


def random_verify(p, mu, direction: str, cfg: SearchConfig | None = None) -> MonteCarlo:
    """Minimum gap over ``cfg.budget`` random vector tuples in ``cfg.space``.

    Samples come in fixed-size blocks, each from its own substream, so the
    result does not depend on how blocks are scheduled.  A nonnegative result
    is evidence, not proof.
    """
    cfg = cfg or SearchConfig()
    if direction not in ("F", "G"):
        raise ValueError("direction must be 'F' or 'G'")
    pw, mu = _p(p), as_mu(mu)
    n, dim, q = mu.size, cfg.space.dim, cfg.space.q
    best, worst = math.inf, None
    for block, start in enumerate(range(0, cfg.budget, _MC_BLOCK)):
        m = min(_MC_BLOCK, cfg.budget - start)
        x = _sample_vectors(_rng(cfg.seed, _STREAM_VERIFY, block), m, n, dim)
        gap, _ = _gaps(pw, mu, norms(q, x), norms(q, x.sum(axis=1)), direction)
        i = int(np.argmin(gap))
        if gap[i] < best:
            best, worst = float(gap[i]), x[i].copy()
    return MonteCarlo(best, cfg.budget, worst)


# ---------------------------------------------------------------- Hilbert identity


def euler_lagrange_residual(x, y, a, b, mu, nu, space: SpaceDescriptor | None = None) -> float:
    """Difference of the two sides of the weighted parallelogram identity

    ``|x|^2/mu + |y|^2/nu - |ax + by|^2/lam = |nu b x - mu a y|^2/(lam mu nu)``,
    ``lam = mu a^2 + nu b^2``.  Zero in inner-product spaces.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be vectors of equal length")
    space = space or SpaceDescriptor(2.0, x.size)
    if mu == 0 or nu == 0:
        raise ValueError("mu and nu must be nonzero")
    lam = mu * a * a + nu * b * b
    if lam == 0:
        raise ValueError("lambda = mu a^2 + nu b^2 vanishes")

    def sq(v):
        return float(norms(space.q, v)) ** 2

    lhs = sq(x) / mu + sq(y) / nu - sq(a * x + b * y) / lam
    rhs = sq(nu * b * x - mu * a * y) / (lam * mu * nu)
    return lhs - rhs


# ---------------------------------------------------------------- crosscheck


@dataclass
class CrosscheckReport:
    trials: int = 0
    agreements: int = 0
    disagreements: int = 0
    members: int = 0
    non_members: int = 0
    probe_hits: Counter = field(default_factory=Counter)
    failures: list = field(default_factory=list)
    min_member_gap: float = math.inf

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "members": self.members,
            "non_members": self.non_members,
            "probe_hits": dict(sorted(self.probe_hits.items())),
            "min_member_gap": None if math.isinf(self.min_member_gap) else self.min_member_gap,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [
            f"trials        {self.trials}",
            f"agreements    {self.agreements}",
            f"disagreements {self.disagreements}",
            f"members       {self.members}",
            f"non-members   {self.non_members}",
        ]
        if not math.isinf(self.min_member_gap):
            lines.append(f"min gap over members {self.min_member_gap:.3e}")
        for probe, count in sorted(self.probe_hits.items()):
            lines.append(f"  witness via {probe:<13s}{count}")
        for f in self.failures:
            lines.append(f"  DISAGREE {json.dumps(f, sort_keys=True)}")
        return "\n".join(lines) + "\n"


def _draw_mu(rng, set_id, p, n):
    """Random coefficients biased towards the decision boundary."""
    if set_id == "F":
        if rng.random() < 0.15:
            mu = rng.uniform(0.2, 1.5, n)
            mu[rng.integers(n)] *= -1
            return mu
        if p > 1:
            w = rng.dirichlet(np.full(n, 2.0))
            total = math.exp(rng.uniform(math.log(0.5), math.log(2.0)))
            return (total * w) ** (p - 1)
        return np.exp(rng.uniform(math.log(0.3), math.log(1.5), n))
    u = rng.random()
    if u < 0.15 or n == 1:
        return -rng.uniform(0.2, 2.0, n)
    if u < 0.3 and n >= 2:
        k = int(rng.integers(0, n - 1))
        mu = rng.uniform(0.2, 2.0, n)
        mu[rng.permutation(n)[:k]] *= -1
        return mu
    j = int(rng.integers(n))
    mu = np.empty(n)
    r = math.exp(rng.uniform(math.log(0.6), math.log(1.6)))
    if p > 1:
        B = rng.uniform(0.2, 3.0)
        w = rng.dirichlet(np.full(n - 1, 2.0))
        mu[np.arange(n) != j] = -((B * w) ** (p - 1))
        mu[j] = ((1.0 + B) * r) ** (p - 1)
    else:
        others = np.exp(rng.uniform(math.log(0.3), math.log(3.0), n - 1))
        mu[np.arange(n) != j] = -others
        mu[j] = max(1.0, float(others.max())) * r
    return mu


def crosscheck(trials: int, seed: int = 0, p_range=(1.1, 4.0), n_range=(2, 5),
               cfg: SearchConfig | None = None, delta: float = BOUNDARY_BAND,
               sets=("F", "G")) -> CrosscheckReport:
    """Compare closed-form verdicts with the falsifier on random (p, mu).

    A member must survive both the probes and ``random_verify``; a
    non-member must yield a witness.  Cases with ``|margin| <= delta`` are
    redrawn.
    """
    cfg = cfg or SearchConfig(budget=2_000, seed=seed)
    lo_p, hi_p = map(float, p_range)
    lo_n, hi_n = map(int, n_range)
    if not (0 < lo_p <= hi_p) or not (1 <= lo_n <= hi_n):
        raise ValueError("invalid p or n range")
    report = CrosscheckReport()
    deciders = {"F": decide_F, "G": decide_G}
    for trial in range(trials):
        rng = _rng(seed, _STREAM_CROSSCHECK, trial)
        set_id = sets[int(rng.integers(len(sets)))]
        while True:
            p = float(rng.uniform(lo_p, hi_p))
            if p > 1 and p - 1 < 1e-6:
                continue
            n = int(rng.integers(lo_n, hi_n + 1))
            mu = _draw_mu(rng, set_id, p, n)
            verdict = deciders[set_id](p, mu)
            if abs(verdict.margin) > delta:
                break
        tcfg = SearchConfig(cfg.budget, seed=int(rng.integers(2**63)), space=cfg.space,
                            refine=cfg.refine)
        outcome = falsify(set_id, p, mu, tcfg)
        report.trials += 1
        ok = True
        detail = {"trial": trial, "set": set_id, "p": p, "mu": [float(m) for m in mu],
                  "member": verdict.member, "margin": verdict.margin}
        if verdict.member:
            report.members += 1
            mc = random_verify(p, mu, set_id, tcfg)
            report.min_member_gap = min(report.min_member_gap, mc.min_gap)
            if outcome.found or mc.min_gap < -MEMBER_GAP_ATOL:
                ok = False
                detail["witness_found"] = outcome.found
                detail["mc_min_gap"] = mc.min_gap
        else:
            report.non_members += 1
            if outcome.found:
                report.probe_hits[outcome.witness.probe] += 1
            else:
                ok = False
                detail["min_gap"] = outcome.min_gap
        if ok:
            report.agreements += 1
        else:
            report.disagreements += 1
            report.failures.append(detail)
    return report
