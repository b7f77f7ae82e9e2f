"""Small dense semidefinite-programming solver with complex Hermitian blocks.

Problems are stated over a list of Hermitian PSD blocks ``X_1..X_B`` with an
objective ``sum_b <F_b, X_b>`` and scalar constraints
``sum_b <A_kb, X_b> (<=, ==, >=) c_k`` where ``<A, X> = Re Tr[A X]``.
Blocks of dimension one are nonnegative scalars.

The solver is an infeasible-start primal-dual path-following method using
the HKM search direction with Mehrotra predictor-corrector steps.  Every
inequality receives a nonnegative slack, so the core works on the
equality form

    minimize <C, X>  s.t.  A(X) = b,  X >= 0,

whose dual is ``maximize b.y  s.t.  Z = C - A^T(y) >= 0``.  Problem data are
row-scaled to unit max-norm before the iteration and unscaled on output.

Dual multipliers are reported in the user's sense: for a maximization the
certificate is ``sum_k lam_k A_k - F >= 0`` (blockwise) with bound
``sum_k lam_k c_k``; for a minimization ``F - sum_k lam_k A_k >= 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.linalg

from .config import DEFAULT

RELATIONS = ("<=", "==", ">=")


class SdpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    MAX_ITER = "MaxIter"
    NUMERICAL_FAILURE = "NumericalFailure"


class SdpError(RuntimeError):
    """A solve ended without an optimal status."""

    def __init__(self, status: SdpStatus, message: str = ""):
        super().__init__(f"SDP solve failed with status {status.value}" + (f": {message}" if message else ""))
        self.status = status


@dataclass(frozen=True)
class SolverOptions:
    gap_tol: float = DEFAULT.sdp_gap
    feas_tol: float = DEFAULT.sdp_feas
    max_iter: int = DEFAULT.sdp_max_iter
    step_fraction: float = 0.98
    max_condition: float = 1e15


@dataclass(frozen=True, eq=False)
class Constraint:
    coeffs: Mapping[int, np.ndarray]
    relation: str
    rhs: float


@dataclass(frozen=True, eq=False)
class SdpProblem:
    blocks: tuple[int, ...]
    objective: tuple[np.ndarray, ...]
    constraints: tuple[Constraint, ...]
    sense: str = "maximize"

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("an SDP needs at least one block")
        if self.sense not in ("maximize", "minimize"):
            raise ValueError(f"unknown sense {self.sense!r}")
        if len(self.objective) != len(self.blocks):
            raise ValueError("one objective matrix per block is required")
        for n, f in zip(self.blocks, self.objective):
            _check_block_matrix(f, n)
        for con in self.constraints:
            if con.relation not in RELATIONS:
                raise ValueError(f"unknown relation {con.relation!r}")
            for b, a in con.coeffs.items():
                if not 0 <= b < len(self.blocks):
                    raise ValueError(f"constraint references missing block {b}")
                _check_block_matrix(a, self.blocks[b])


def _check_block_matrix(a: np.ndarray, n: int) -> None:
    if a.shape != (n, n):
        raise ValueError(f"block matrix has shape {a.shape}, expected {(n, n)}")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(a), initial=0.0)):
        raise ValueError("block matrices must be Hermitian")


@dataclass(eq=False)
class SdpSolution:
    """Result of :func:`solve`.

    ``gap`` is the relative duality gap
    ``|primal - dual| / (1 + |primal| + |dual|)``; ``max_residual`` is the
    larger of the primal constraint violation and the dual slack's negative
    eigenvalue mass, both in the problem's original scale.
    """

    status: SdpStatus
    primal_blocks: list[np.ndarray]
    dual_multipliers: np.ndarray
    primal_value: float
    dual_value: float
    gap: float
    max_residual: float
    iterations: int
    dual_slacks: list[np.ndarray] = field(repr=False)

    @property
    def optimal(self) -> bool:
        return self.status is SdpStatus.OPTIMAL

    def require_optimal(self) -> "SdpSolution":
        if not self.optimal:
            raise SdpError(self.status, f"gap={self.gap:.2e}, residual={self.max_residual:.2e}")
        return self


# ---------------------------------------------------------------------------
# model building
# ---------------------------------------------------------------------------

def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal basis of d x d Hermitian matrices under ``Re Tr[A B]``."""
    basis = np.zeros((d * d, d, d), dtype=complex)
    k = 0
    r = 1.0 / math.sqrt(2.0)
    for i in range(d):
        basis[k, i, i] = 1.0
        k += 1
    for i in range(d):
        for j in range(i + 1, d):
            basis[k, i, j] = basis[k, j, i] = r
            k += 1
            basis[k, i, j] = 1j * r
            basis[k, j, i] = -1j * r
            k += 1
    return basis


def hermitian_from_coords(coords: np.ndarray, d: int) -> np.ndarray:
    return np.einsum("k,kij->ij", np.asarray(coords, dtype=float), hermitian_basis(d))


class ProblemBuilder:
    """Incremental construction of an :class:`SdpProblem`."""

    def __init__(self, sense: str = "maximize"):
        self.sense = sense
        self._blocks: list[int] = []
        self._objective: list[np.ndarray] = []
        self._constraints: list[Constraint] = []

    def add_block(self, dim: int) -> int:
        self._blocks.append(int(dim))
        self._objective.append(np.zeros((dim, dim), dtype=complex))
        return len(self._blocks) - 1

    def set_objective(self, block: int, matrix) -> None:
        self._objective[block] = np.asarray(matrix, dtype=complex).reshape(self._blocks[block], self._blocks[block])

    def add_constraint(self, coeffs: Mapping[int, object], relation: str, rhs: float) -> int:
        mats = {b: np.asarray(a, dtype=complex).reshape(self._blocks[b], self._blocks[b]) for b, a in coeffs.items()}
        self._constraints.append(Constraint(mats, relation, float(rhs)))
        return len(self._constraints) - 1

    def add_matrix_equality(self, blocks: Mapping[int, object], rhs) -> range:
        """Impose ``sum_b T_b(X_b) == rhs`` as one scalar row per Hermitian basis element.

        Each term map ``T_b`` is either a real scalar ``w`` (``w X_b``) or a
        ``d x k`` matrix ``V`` (``V X_b V^dagger``).  Returns the constraint
        indices; :func:`hermitian_from_coords` applied to the matching
        multipliers rebuilds the matrix-valued multiplier.
        """
        rhs = np.asarray(rhs, dtype=complex)
        d = rhs.shape[0]
        start = len(self._constraints)
        for bk in hermitian_basis(d):
            val = float(np.real(np.trace(bk @ rhs)))
            coeffs = {}
            for b, w in blocks.items():
                if np.ndim(w) == 0:
                    coeffs[b] = float(w) * bk
                else:
                    v = np.asarray(w, dtype=complex)
                    c = v.conj().T @ bk @ v
                    coeffs[b] = 0.5 * (c + c.conj().T)
            self.add_constraint(coeffs, "==", val)
        return range(start, len(self._constraints))

    def build(self) -> SdpProblem:
        return SdpProblem(tuple(self._blocks), tuple(self._objective), tuple(self._constraints), self.sense)


# ---------------------------------------------------------------------------
# feasibility checks
# ---------------------------------------------------------------------------

def _inner(a: np.ndarray, x: np.ndarray) -> float:
    return float(np.real(np.vdot(a.conj().T, x))) if a.size else 0.0


def _hermitian_min_eig(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (a + a.conj().T))[0])


@dataclass
class PrimalReport:
    max_violation: float
    min_block_eigenvalues: list[float]
    objective: float

    def feasible(self, tol: float) -> bool:
        return self.max_violation <= tol and min(self.min_block_eigenvalues) >= -tol


@dataclass
class DualReport:
    min_slack_eigenvalues: list[float]
    sign_violations: list[int]
    bound: float

    def feasible(self, tol: float = 0.0) -> bool:
        return not self.sign_violations and min(self.min_slack_eigenvalues) >= -tol


def check_primal_feasibility(p: SdpProblem, candidate: Sequence) -> PrimalReport:
    blocks = [np.asarray(x, dtype=complex).reshape(n, n) if np.size(x) == n * n else None
              for x, n in zip(candidate, p.blocks)]
    if len(candidate) != len(p.blocks) or any(x is None for x in blocks):
        raise ValueError("candidate does not match the problem's block dimensions")
    worst = 0.0
    for con in p.constraints:
        lhs = sum(_inner(a, blocks[b]) for b, a in con.coeffs.items())
        if con.relation == "==":
            v = abs(lhs - con.rhs)
        elif con.relation == "<=":
            v = max(0.0, lhs - con.rhs)
        else:
            v = max(0.0, con.rhs - lhs)
        worst = max(worst, v)
    eigs = [_hermitian_min_eig(x) for x in blocks]
    obj = sum(_inner(f, x) for f, x in zip(p.objective, blocks))
    return PrimalReport(worst, eigs, obj)


def dual_slack(p: SdpProblem, multipliers: Sequence[float]) -> list[np.ndarray]:
    lam = np.asarray(multipliers, dtype=float)
    if lam.shape != (len(p.constraints),):
        raise ValueError("one multiplier per constraint is required")
    acc = [np.zeros((n, n), dtype=complex) for n in p.blocks]
    for l, con in zip(lam, p.constraints):
        for b, a in con.coeffs.items():
            acc[b] += l * a
    sgn = 1.0 if p.sense == "maximize" else -1.0
    return [sgn * (s - f) for s, f in zip(acc, p.objective)]


def check_dual_feasibility(p: SdpProblem, multipliers: Sequence[float]) -> DualReport:
    """Evaluate a dual point; sign violations are reported, never raised."""
    lam = np.asarray(multipliers, dtype=float)
    slacks = dual_slack(p, lam)
    sgn = 1.0 if p.sense == "maximize" else -1.0
    bad = []
    for k, (l, con) in enumerate(zip(lam, p.constraints)):
        if con.relation == "<=" and sgn * l < 0:
            bad.append(k)
        elif con.relation == ">=" and sgn * l > 0:
            bad.append(k)
    bound = float(sum(l * c.rhs for l, c in zip(lam, p.constraints)))
    return DualReport([_hermitian_min_eig(s) for s in slacks], bad, bound)


# ---------------------------------------------------------------------------
# standard form
# ---------------------------------------------------------------------------

@dataclass
class _Std:
    sdp_index: list[int]        # original block index of each matrix block
    lp_index: list[int]         # original block index of each scalar (-1 for slacks)
    C: list[np.ndarray]
    A: list[np.ndarray]         # (m, n, n) per matrix block
    c_lp: np.ndarray
    A_lp: np.ndarray            # (m, n_lp)
    b: np.ndarray
    flip: float                 # +1 minimize, -1 maximize


def _standard_form(p: SdpProblem) -> _Std:
    m = len(p.constraints)
    flip = -1.0 if p.sense == "maximize" else 1.0
    sdp_index = [i for i, n in enumerate(p.blocks) if n > 1]
    lp_index = [i for i, n in enumerate(p.blocks) if n == 1]
    n_slack = sum(1 for c in p.constraints if c.relation != "==")
    pos = {b: k for k, b in enumerate(sdp_index)}
    lpos = {b: k for k, b in enumerate(lp_index)}
    A = [np.zeros((m, p.blocks[b], p.blocks[b]), dtype=complex) for b in sdp_index]
    A_lp = np.zeros((m, len(lp_index) + n_slack))
    b = np.zeros(m)
    s = len(lp_index)
    for k, con in enumerate(p.constraints):
        b[k] = con.rhs
        for blk, a in con.coeffs.items():
            if blk in pos:
                A[pos[blk]][k] = a
            else:
                A_lp[k, lpos[blk]] = a[0, 0].real
        if con.relation == "<=":
            A_lp[k, s] = 1.0
            s += 1
        elif con.relation == ">=":
            A_lp[k, s] = -1.0
            s += 1
    C = [flip * p.objective[blk] for blk in sdp_index]
    c_lp = np.zeros(A_lp.shape[1])
    for blk, k in lpos.items():
        c_lp[k] = flip * p.objective[blk][0, 0].real
    return _Std(sdp_index, lp_index + [-1] * n_slack, C, A, c_lp, A_lp, b, flip)


# ---------------------------------------------------------------------------
# interior point iteration
# ---------------------------------------------------------------------------

class _Breakdown(Exception):
    pass


def _chol(a: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise _Breakdown("Cholesky factorization failed") from exc


def _max_step(L: np.ndarray, d: np.ndarray) -> float:
    w = scipy.linalg.solve_triangular(L, d, lower=True)
    w = scipy.linalg.solve_triangular(L, w.conj().T, lower=True)
    lmin = np.linalg.eigvalsh(0.5 * (w + w.conj().T))[0]
    return math.inf if lmin >= 0 else -1.0 / lmin


def _max_step_lp(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    return float(np.min(-x[neg] / dx[neg])) if np.any(neg) else math.inf


class _Ipm:
    def __init__(self, std: _Std, opts: SolverOptions):
        self.s = std
        self.opts = opts
        m = std.b.size
        self.m = m
        # row and objective scaling
        norms = np.zeros(m)
        for a in std.A:
            norms = np.maximum(norms, np.max(np.abs(a.reshape(m, -1)), axis=1, initial=0.0))
        if std.A_lp.size:
            norms = np.maximum(norms, np.max(np.abs(std.A_lp), axis=1))
        norms[norms == 0] = 1.0
        self.row = norms
        cmax = max([np.max(np.abs(c), initial=0.0) for c in std.C] + [np.max(np.abs(std.c_lp), initial=0.0)])
        self.cscale = cmax if cmax > 0 else 1.0
        self.A = [a / norms[:, None, None] for a in std.A]
        self.AflatC = [a.reshape(m, -1).conj() for a in self.A]
        self.A_lp = std.A_lp / norms[:, None]
        self.b = std.b / norms
        self.C = [c / self.cscale for c in std.C]
        self.c_lp = std.c_lp / self.cscale
        self.dims = [c.shape[0] for c in self.C]
        self.N = sum(self.dims) + self.c_lp.size

    # linear maps ---------------------------------------------------------
    def op(self, Xs, x):
        out = self.A_lp @ x if x.size else np.zeros(self.m)
        for af, X in zip(self.AflatC, Xs):
            out = out + np.real(af @ X.ravel())
        return out

    def adj(self, y):
        return [np.einsum("k,kij->ij", y, a) for a in self.A], self.A_lp.T @ y

    # -------------------------------------------------------------------
    def initial_point(self):
        Xs, Zs = [], []
        bmax = np.max(1.0 + np.abs(self.b)) if self.m else 1.0
        for a, c, n in zip(self.A, self.C, self.dims):
            anorm = np.linalg.norm(a.reshape(self.m, -1), axis=1) if self.m else np.zeros(1)
            xi = max(10.0, math.sqrt(n), n * float(np.max(bmax / (1.0 + anorm))))
            eta = max(10.0, math.sqrt(n), float(np.max(anorm, initial=0.0)), float(np.linalg.norm(c)))
            Xs.append(xi * np.eye(n, dtype=complex))
            Zs.append(eta * np.eye(n, dtype=complex))
        nl = self.c_lp.size
        if nl:
            anorm = np.linalg.norm(self.A_lp, axis=0)
            xi = np.maximum(10.0, float(np.max(bmax)) / (1.0 + anorm))
            eta = np.maximum(10.0, np.maximum(anorm, np.abs(self.c_lp)))
            x, z = xi.astype(float), eta.astype(float)
        else:
            x, z = np.zeros(0), np.zeros(0)
        return Xs, x, np.zeros(self.m), Zs, z

    def residuals(self, Xs, x, y, Zs, z):
        rp = self.b - self.op(Xs, x)
        aty, aty_lp = self.adj(y)
        Rd = [c - a - Z for c, a, Z in zip(self.C, aty, Zs)]
        rd = self.c_lp - aty_lp - z
        return rp, Rd, rd

    def objectives(self, Xs, x, y):
        pobj = sum(_inner(c, X) for c, X in zip(self.C, Xs)) + float(self.c_lp @ x)
        return pobj, float(self.b @ y)

    def unscaled_measures(self, Xs, x, y, Zs, z, rp, Rd, rd):
        pobj, dobj = self.objectives(Xs, x, y)
        pobj *= self.cscale
        dobj *= self.cscale
        pres = float(np.max(np.abs(rp * self.row), initial=0.0))
        dres = max([float(np.max(np.abs(r), initial=0.0)) for r in Rd] + [float(np.max(np.abs(rd), initial=0.0))])
        dres *= self.cscale
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        return pobj, dobj, pres, dres, relgap

    def run(self):
        o = self.opts
        Xs, x, y, Zs, z = self.initial_point()
        status = SdpStatus.MAX_ITER
        it = 0
        stalls = 0
        for it in range(o.max_iter + 1):
            rp, Rd, rd = self.residuals(Xs, x, y, Zs, z)
            pobj, dobj, pres, dres, relgap = self.unscaled_measures(Xs, x, y, Zs, z, rp, Rd, rd)
            if pres <= o.feas_tol and dres <= o.feas_tol and relgap <= o.gap_tol:
                status = SdpStatus.OPTIMAL
                break
            cert = self.infeasibility(Xs, x, y)
            if cert is not None:
                status = cert
                break
            if it == o.max_iter:
                break
            try:
                Xs, x, y, Zs, z, amin = self.step(Xs, x, y, Zs, z, rp, Rd, rd)
            except _Breakdown:
                status = SdpStatus.NUMERICAL_FAILURE
                break
            stalls = stalls + 1 if amin < 1e-9 else 0
            if stalls >= 5:
                status = SdpStatus.NUMERICAL_FAILURE
                break
        return status, Xs, x, y, it

    def step(self, Xs, x, y, Zs, z, rp, Rd, rd):
        o = self.opts
        Ls, Zinv = [], []
        for Z in Zs:
            L = _chol(Z)
            Li = scipy.linalg.solve_triangular(L, np.eye(L.shape[0]), lower=True)
            Zi = Li.conj().T @ Li
            Zinv.append(0.5 * (Zi + Zi.conj().T))
        LX = [_chol(X) for X in Xs]
        LZ = [np.linalg.cholesky(Z) for Z in Zs]
        if np.any(x <= 0) or np.any(z <= 0):
            raise _Breakdown("scalar iterate left the orthant")
        for X, Z in zip(Xs, Zs):
            if np.linalg.cond(X) > o.max_condition and np.linalg.cond(Z) > o.max_condition:
                raise _Breakdown("iterates are too ill-conditioned")

        M = np.zeros((self.m, self.m))
        for a, X, Zi in zip(self.A, Xs, Zinv):
            G = X @ a @ Zi
            M += np.real(a.reshape(self.m, -1) @ G.transpose(0, 2, 1).reshape(self.m, -1).T)
        if x.size:
            M += (self.A_lp * (x / z)) @ self.A_lp.T
        M = 0.5 * (M + M.T)
        try:
            fac = scipy.linalg.cho_factor(M, lower=True, check_finite=True)
            solve_m = lambda r: scipy.linalg.cho_solve(fac, r)  # noqa: E731
        except (np.linalg.LinAlgError, ValueError):
            pinv = np.linalg.pinv(M, rcond=1e-14)
            solve_m = lambda r: pinv @ r  # noqa: E731

        XRdZi = [X @ R @ Zi for X, R, Zi in zip(Xs, Rd, Zinv)]

        def direction(K, k_lp):
            rhs = rp - self.op([Kb - W for Kb, W in zip(K, XRdZi)], k_lp - x * rd / z if x.size else k_lp)
            dy = solve_m(rhs)
            aty, aty_lp = self.adj(dy)
            dZ = [R - a for R, a in zip(Rd, aty)]
            dz = rd - aty_lp
            dX = []
            for Kb, X, D, Zi in zip(K, Xs, dZ, Zinv):
                t = Kb - X @ D @ Zi
                dX.append(0.5 * (t + t.conj().T))
            dx = k_lp - x * dz / z
            return dX, dx, dy, dZ, dz

        def steps(dX, dx, dZ, dz):
            ap = min([_max_step(L, d) for L, d in zip(LX, dX)] + [_max_step_lp(x, dx)])
            ad = min([_max_step(L, d) for L, d in zip(LZ, dZ)] + [_max_step_lp(z, dz)])
            return ap, ad

        mu = (sum(_inner(X, Z) for X, Z in zip(Xs, Zs)) + float(x @ z)) / self.N

        # predictor
        dX, dx, dy, dZ, dz = direction([-X for X in Xs], -x)
        ap, ad = steps(dX, dx, dZ, dz)
        ap, ad = min(1.0, ap), min(1.0, ad)
        mu_aff = (sum(_inner(X + ap * a, Z + ad * b) for X, a, Z, b in zip(Xs, dX, Zs, dZ))
                  + float((x + ap * dx) @ (z + ad * dz))) / self.N
        sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3

        # corrector
        K = []
        for X, Zi, a, b in zip(Xs, Zinv, dX, dZ):
            K.append(sigma * mu * Zi - X - a @ b @ Zi)
        k_lp = sigma * mu / z - x - dx * dz / z if x.size else x
        dX, dx, dy, dZ, dz = direction(K, k_lp)
        ap, ad = steps(dX, dx, dZ, dz)
        tau = o.step_fraction
        ap, ad = min(1.0, tau * ap), min(1.0, tau * ad)

        Xs = [X + ap * d for X, d in zip(Xs, dX)]
        Zs = [Z + ad * d for Z, d in zip(Zs, dZ)]
        Xs = [0.5 * (X + X.conj().T) for X in Xs]
        Zs = [0.5 * (Z + Z.conj().T) for Z in Zs]
        return Xs, x + ap * dx, y + ad * dy, Zs, z + ad * dz, min(ap, ad)

    def infeasibility(self, Xs, x, y):
        """Return Infeasible/Unbounded when a normalized certificate is accurate to 1e-8."""
        by = float(self.b @ y)
        ynorm = float(np.max(np.abs(y), initial=0.0))
        if by > 0 and ynorm > 1e6:
            yh = y / by
            aty, aty_lp = self.adj(yh)
            viol = max([max(0.0, float(np.linalg.eigvalsh(a)[-1])) for a in aty]
                       + [float(np.max(aty_lp, initial=0.0))])
            if viol < 1e-8:
                return SdpStatus.INFEASIBLE
        cx = sum(_inner(c, X) for c, X in zip(self.C, Xs)) + float(self.c_lp @ x)
        xnorm = max([float(np.max(np.abs(X), initial=0.0)) for X in Xs] + [float(np.max(x, initial=0.0))])
        if cx < 0 and xnorm > 1e6:
            Xh = [X / -cx for X in Xs]
            res = float(np.max(np.abs(self.op(Xh, x / -cx)), initial=0.0))
            if res < 1e-8:
                return SdpStatus.UNBOUNDED
        return None


def solve(p: SdpProblem, opts: SolverOptions | None = None) -> SdpSolution:
    """Solve ``p``; the returned solution carries a status instead of raising."""
    opts = opts or SolverOptions()
    std = _standard_form(p)
    ipm = _Ipm(std, opts)
    status, Xs, x, y_scaled, iters = ipm.run()

    # unscale: y = cscale * y' / row
    y = ipm.cscale * y_scaled / ipm.row
    lam = -y if p.sense == "maximize" else y
    blocks: list[np.ndarray] = [None] * len(p.blocks)  # type: ignore[list-item]
    for X, b in zip(Xs, std.sdp_index):
        blocks[b] = 0.5 * (X + X.conj().T)
    for k, b in enumerate(std.lp_index):
        if b >= 0:
            blocks[b] = np.array([[x[k]]], dtype=complex)

    primal_value = float(sum(_inner(f, X) for f, X in zip(p.objective, blocks)))
    dual_value = float(sum(l * c.rhs for l, c in zip(lam, p.constraints)))
    slacks = dual_slack(p, lam)
    pres = check_primal_feasibility(p, blocks).max_violation
    dneg = 0.0
    for s in slacks:
        dneg = max(dneg, -_hermitian_min_eig(s))
    # slack variables of inequality rows are part of the dual slack as well
    sgn = 1.0 if p.sense == "maximize" else -1.0
    for l, con in zip(lam, p.constraints):
        if con.relation == "<=":
            dneg = max(dneg, -sgn * l)
        elif con.relation == ">=":
            dneg = max(dneg, sgn * l)
    gap = abs(primal_value - dual_value) / (1.0 + abs(primal_value) + abs(dual_value))
    if status is SdpStatus.INFEASIBLE or status is SdpStatus.UNBOUNDED:
        primal_value = -math.inf if (status is SdpStatus.INFEASIBLE) == (p.sense == "maximize") else math.inf
    return SdpSolution(status, blocks, lam, primal_value, dual_value, gap,
                       max(pres, dneg), iters, slacks)


def solve_many(problems: Iterable[SdpProblem], opts: SolverOptions | None = None) -> list[SdpSolution]:
    return [solve(p, opts) for p in problems]
