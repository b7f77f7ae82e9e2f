"""Exact classical (diagonal) state identification.

For two distributions ``p`` and ``q`` over ``n`` outcomes the optimal
bounded-error predictor answers on outcomes in order of decreasing posterior
confidence ``max(p_i, q_i) / (p_i + q_i)``, stopping (possibly part-way
through one outcome) when the conditional error would exceed ``eps``.
Arithmetic in the greedy pass is exact (:class:`fractions.Fraction`).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .sdp import ProblemBuilder, SolverOptions, solve


@dataclass(frozen=True, eq=False)
class ClassicalPair:
    p: np.ndarray
    q: np.ndarray
    eps: float

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).ravel()
        q = np.asarray(self.q, dtype=float).ravel()
        if p.shape != q.shape or p.size == 0:
            raise ValueError("p and q must be non-empty vectors of equal length")
        for v in (p, q):
            if np.any(v < 0) or abs(v.sum() - 1.0) > 1e-12:
                raise ValueError("p and q must be probability vectors")
        if not 0.0 <= self.eps < 0.5:
            raise ValueError(f"eps must lie in [0, 1/2), got {self.eps}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "eps", float(self.eps))


@dataclass
class ClassicalMeasurement:
    """Per outcome: the guessed hypothesis and the probability of answering."""

    guess: np.ndarray     # 0 or 1 per outcome
    fraction: np.ndarray  # t_i in [0, 1]


def _masses(c: ClassicalPair, m: ClassicalMeasurement) -> tuple[float, float]:
    wrong = np.where(m.guess == 0, c.q, c.p)
    return 0.5 * float(np.sum(m.fraction * wrong)), 0.5 * float(np.sum(m.fraction * (c.p + c.q)))


def conditional_error_classical(c: ClassicalPair, m: ClassicalMeasurement) -> float:
    w, g = _masses(c, m)
    return 0.0 if g == 0 else w / g


def answer_probability(c: ClassicalPair, m: ClassicalMeasurement) -> float:
    return _masses(c, m)[1]


def optimal_classical(c: ClassicalPair) -> tuple[float, ClassicalMeasurement]:
    n = c.p.size
    P = [Fraction(x) for x in c.p]
    Q = [Fraction(x) for x in c.q]
    eps = Fraction(c.eps)
    guess = np.where(c.p > c.q, 0, 1)
    t = [Fraction(0)] * n

    live = [i for i in range(n) if P[i] + Q[i] > 0]
    # stable sort on the error rate min/(p+q), i.e. decreasing confidence
    live.sort(key=lambda i: min(P[i], Q[i]) / (P[i] + Q[i]))
    wrong = total = Fraction(0)
    for i in live:
        w_i, g_i = min(P[i], Q[i]), P[i] + Q[i]
        if eps == 0:
            if w_i == 0:
                t[i] = Fraction(1)
                total += g_i
            continue
        if wrong + w_i <= eps * (total + g_i):
            t[i] = Fraction(1)
            wrong += w_i
            total += g_i
            continue
        # largest t with wrong + t w_i <= eps (total + t g_i); w_i > eps g_i here
        frac = (eps * total - wrong) / (w_i - eps * g_i)
        t[i] = max(Fraction(0), min(Fraction(1), frac))
        wrong += t[i] * w_i
        total += t[i] * g_i
        break

    # inputs sum to 1 only up to rounding, so keep the value inside [0, 1]
    a = min(1.0, float(total / 2))
    return a, ClassicalMeasurement(guess, np.array([float(x) for x in t]))


LP_OPTIONS = SolverOptions(gap_tol=1e-12, feas_tol=1e-12)


def lp_oracle(c: ClassicalPair, opts: SolverOptions | None = None) -> float:
    """The diagonal restriction of the identification program, solved as an LP.

    Variables ``e0_i, e1_i, s_i >= 0`` (scalar blocks) with
    ``e0_i + e1_i + s_i = 1`` and the linear conditional-error row.
    """
    b = ProblemBuilder("maximize")
    n = c.p.size
    avg = 0.5 * (c.p + c.q)
    e0 = [b.add_block(1) for _ in range(n)]
    e1 = [b.add_block(1) for _ in range(n)]
    s = [b.add_block(1) for _ in range(n)]
    for i in range(n):
        b.set_objective(e0[i], [[avg[i]]])
        b.set_objective(e1[i], [[avg[i]]])
        b.add_constraint({e0[i]: [[1.0]], e1[i]: [[1.0]], s[i]: [[1.0]]}, "==", 1.0)
    row = {}
    for i in range(n):
        row[e0[i]] = [[0.5 * c.q[i] - c.eps * avg[i]]]
        row[e1[i]] = [[0.5 * c.p[i] - c.eps * avg[i]]]
    b.add_constraint(row, "<=", 0.0)
    sol = solve(b.build(), opts or LP_OPTIONS).require_optimal()
    return sol.primal_value


def _box_lp2(v: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Vectorised ``max v.u`` subject to ``c.u <= 0``, ``u in [0,1]^2``.

    ``v`` and ``c`` have shape ``(..., 2)``.  The optimum sits at a vertex of
    the box cut by one half-plane, so every candidate vertex is evaluated.
    """
    c0, c1 = c[..., 0], c[..., 1]
    cands = [np.stack([np.full_like(c0, a), np.full_like(c0, b)], -1)
             for a in (0.0, 1.0) for b in (0.0, 1.0)]
    with np.errstate(divide="ignore", invalid="ignore"):
        for a in (0.0, 1.0):
            cands.append(np.stack([np.full_like(c0, a), np.clip(-a * c0 / c1, 0, 1)], -1))
            cands.append(np.stack([np.clip(-a * c1 / c0, 0, 1), np.full_like(c0, a)], -1))
    best = np.zeros(c0.shape)
    for u in cands:
        u = np.nan_to_num(u)
        ok = np.sum(u * c, -1) <= 1e-15
        best = np.where(ok, np.maximum(best, np.sum(u * v, -1)), best)
    return best


def product_value(p0: Sequence[float], p1: Sequence[float], q0: Sequence[float],
                  q1: Sequence[float], eps: float, grid: int = 401) -> float:
    """Best answer probability of a product strategy on two classical registers.

    Register one answers outcome ``i`` with probability ``t_i`` (guessing the
    majority label), register two answers ``j`` with probability ``u_j``; a
    joint answer is issued when both answer.  Majority guesses are optimal for
    either register whatever the other does: flipping a minority guess keeps
    the answer mass and can only lower the error mass.  For fixed ``t`` the
    ``u`` problem is a two-variable LP solved exactly; ``t`` is searched on a
    grid and then on a finer grid around the best point.
    """
    p0, p1, q0, q1 = (np.asarray(v, dtype=float) for v in (p0, p1, q0, q1))
    if p0.size != 2 or q0.size != 2:
        raise ValueError("product search is implemented for two outcomes per register")
    # joint masses over (i, j): total and correct-guess
    tot = 0.25 * np.outer(p0 + p1, q0 + q1)
    right = 0.25 * np.outer(np.maximum(p0, p1), np.maximum(q0, q1))
    cost_ij = (tot - right) - eps * tot

    def best_on(t0s, t1s):
        T0, T1 = np.meshgrid(t0s, t1s, indexing="ij")
        t = np.stack([T0, T1], -1)
        v = t @ tot
        c = t @ cost_ij
        vals = _box_lp2(v, c)
        k = np.unravel_index(int(np.argmax(vals)), vals.shape)
        return float(vals[k]), T0[k], T1[k]

    ts = np.linspace(0.0, 1.0, grid)
    val, a, b = best_on(ts, ts)
    h = 1.0 / (grid - 1)
    fine = np.linspace(-h, h, 81)
    val2, _, _ = best_on(np.clip(a + fine, 0, 1), np.clip(b + fine, 0, 1))
    return max(val, val2)
