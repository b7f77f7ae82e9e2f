"""Bounded-error state identification values and their dual certificates.

``D_eps(rho_0, ..., rho_{S-1})`` is the largest probability of producing a
guess with a measurement whose guesses are wrong with conditional probability
at most ``eps``.  It is the optimum of

    maximize    sum_k Tr[E_k rho_avg]
    subject to  E_k >= 0,  sum_k E_k <= I,
                sum_k Tr[E_k W_k] <= 0,

where ``W_k = (1/S) sum_{s wrong for k} rho_s - eps * rho_avg``.  Its dual
is ``minimize Tr[X]`` over ``X >= 0, z >= 0`` with
``X >= rho_avg - z W_k`` for every outcome ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import linmat
from .linmat import InvalidStateError, as_density, pos_part, tensor, trace_norm
from .sdp import ProblemBuilder, SdpError, SolverOptions, hermitian_from_coords, solve

PAIR_LABELS = ("0", "1")
QUAD_LABELS = ("00", "01", "10", "11")

# the engine runs tighter than the solver defaults so reported values carry
# primal/dual agreement well inside 1e-6
IDENT_OPTIONS = SolverOptions(gap_tol=1e-9, feas_tol=1e-10)

ZERO_MASS = 1e-7


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps < 0.5:
        raise ValueError(f"eps must lie in [0, 1/2), got {eps}")
    return eps


@dataclass(frozen=True, eq=False)
class IdentPair:
    alpha0: np.ndarray
    alpha1: np.ndarray
    eps: float

    def __post_init__(self):
        a0, a1 = as_density(self.alpha0), as_density(self.alpha1)
        if a0.shape != a1.shape:
            raise linmat.DimensionError("alpha0 and alpha1 must have equal dimension")
        object.__setattr__(self, "alpha0", a0)
        object.__setattr__(self, "alpha1", a1)
        object.__setattr__(self, "eps", _check_eps(self.eps))

    @property
    def states(self) -> list[np.ndarray]:
        return [self.alpha0, self.alpha1]


@dataclass(frozen=True, eq=False)
class IdentQuad:
    alpha0: np.ndarray
    alpha1: np.ndarray
    beta0: np.ndarray
    beta1: np.ndarray
    eps: float

    def __post_init__(self):
        mats = [as_density(m) for m in (self.alpha0, self.alpha1, self.beta0, self.beta1)]
        if mats[0].shape != mats[1].shape or mats[2].shape != mats[3].shape:
            raise linmat.DimensionError("alpha (and beta) states must have equal dimensions")
        for name, m in zip(("alpha0", "alpha1", "beta0", "beta1"), mats):
            object.__setattr__(self, name, m)
        object.__setattr__(self, "eps", _check_eps(self.eps))

    @property
    def states(self) -> list[np.ndarray]:
        """Product states ordered 00, 01, 10, 11 (first bit from alpha)."""
        return [tensor(a, b) for a in (self.alpha0, self.alpha1) for b in (self.beta0, self.beta1)]

    def with_eps(self, eps: float) -> "IdentQuad":
        return IdentQuad(self.alpha0, self.alpha1, self.beta0, self.beta1, eps)


@dataclass(eq=False)
class PredictorMeasurement:
    """Guess elements of a measurement; the abstain element is ``I - sum``."""

    elements: dict[str, np.ndarray]

    @property
    def total(self) -> np.ndarray:
        return sum(self.elements.values())

    @property
    def abstain(self) -> np.ndarray:
        t = self.total
        return np.eye(t.shape[0]) - t

    def validity(self) -> tuple[float, float]:
        """(min element eigenvalue, max eigenvalue of the sum)."""
        lo = min(linmat.min_eig(e) for e in self.elements.values())
        hi = -linmat.min_eig(-self.total)
        return lo, hi

    def is_valid(self, tol: float = 1e-9) -> bool:
        lo, hi = self.validity()
        return lo >= -tol and hi <= 1.0 + tol


@dataclass(eq=False)
class DualCertificateSingle:
    X_b: np.ndarray
    z_b: float

    @property
    def value(self) -> float:
        return float(np.trace(self.X_b).real)


@dataclass(eq=False)
class DualCertificateQuad:
    X: np.ndarray
    z: float
    # dual_lift diagnostics
    Y: list[np.ndarray] = field(default_factory=list, repr=False)
    slack_min_eigs: list[float] = field(default_factory=list)
    trace_bound: float | None = None

    @property
    def value(self) -> float:
        return float(np.trace(self.X).real)


@dataclass
class DirectProductReport:
    a_lower: float
    b: float
    p: float
    bound: float
    satisfied: bool
    margin: float
    extras: dict = field(default_factory=dict)


class SingleResult(NamedTuple):
    value: float
    measurement: PredictorMeasurement
    certificate: DualCertificateSingle


class QuadResult(NamedTuple):
    value: float
    measurement: PredictorMeasurement
    certificate: DualCertificateQuad


class ParityResult(NamedTuple):
    value: float
    measurement: PredictorMeasurement


# ---------------------------------------------------------------------------
# conditional error and the generic program
# ---------------------------------------------------------------------------

def _default_correct(n_states: int, labels: Sequence[str]) -> list[str]:
    if n_states == 2 and len(labels) == 2:
        return ["0", "1"]
    if n_states == 4 and len(labels) == 4:
        return list(QUAD_LABELS)
    if n_states == 4 and len(labels) == 2:
        return ["0", "1", "1", "0"]  # parity of (x, y)
    raise ValueError(f"no default labelling for {n_states} states and {len(labels)} outcomes")


def guess_masses(m: PredictorMeasurement, states: Sequence[np.ndarray],
                 correct: Sequence[str] | None = None) -> tuple[float, float]:
    """Return (wrong-guess mass, guess mass) under a uniform prior."""
    correct = list(correct) if correct is not None else _default_correct(len(states), list(m.elements))
    w = g = 0.0
    for rho, right in zip(states, correct):
        if rho.shape != next(iter(m.elements.values())).shape:
            raise linmat.DimensionError("measurement and state dimensions differ")
        for label, e in m.elements.items():
            pr = float(np.real(np.vdot(e.conj().T, rho))) / len(states)
            g += pr
            if label != right:
                w += pr
    return w, g


def conditional_error(m: PredictorMeasurement, states: Sequence[np.ndarray],
                      correct: Sequence[str] | None = None) -> float:
    """``Pr[wrong guess | guess]``; zero when the measurement never guesses."""
    w, g = guess_masses(m, states, correct)
    return 0.0 if g <= 0.0 else w / g


def error_operators(states: Sequence[np.ndarray], labels: Sequence[str],
                    correct: Sequence[str], eps: float) -> tuple[np.ndarray, list[np.ndarray]]:
    """Average state and the per-outcome error operators ``W_k``."""
    s = len(states)
    avg = sum(states) / s
    ws = []
    for k in labels:
        wrong = sum((rho for rho, c in zip(states, correct) if c != k), np.zeros_like(avg))
        ws.append(wrong / s - eps * avg)
    return avg, ws


def certificate_slacks(states, labels, correct, eps, X, z) -> list[float]:
    """Minimum eigenvalues of ``X``, and of ``X - (avg - z W_k)`` for each outcome."""
    avg, ws = error_operators(states, labels, correct, eps)
    out = [linmat.min_eig(X)]
    out += [linmat.min_eig(X - (avg - z * w)) for w in ws]
    return out


def _repair_certificate(states, labels, correct, eps, X, z):
    X = 0.5 * (X + X.conj().T)
    z = max(0.0, float(z))
    worst = min(certificate_slacks(states, labels, correct, eps, X, z))
    if worst < 0:
        X = X - worst * np.eye(X.shape[0])
    return X, z


def _repair_measurement(elements: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    elements = {k: pos_part(e) for k, e in elements.items()}
    top = float(np.linalg.eigvalsh(sum(elements.values()))[-1])
    if top > 1.0:
        elements = {k: e / top for k, e in elements.items()}
    return elements


def _kernel(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    return v[:, w <= tol]


def solve_identification(states: Sequence[np.ndarray], labels: Sequence[str],
                         correct: Sequence[str], eps: float,
                         opts: SolverOptions | None = None):
    """Solve the generic identification program.

    Returns ``(value, measurement, X, z, dual_value)`` where ``(X, z)`` is an
    exactly feasible dual point.
    """
    opts = opts or IDENT_OPTIONS
    states = [np.asarray(s, dtype=complex) for s in states]
    d = states[0].shape[0]
    avg, ws = error_operators(states, labels, correct, eps)
    ident = np.eye(d)

    b = ProblemBuilder("maximize")
    if eps == 0.0:
        # zero error forces each E_k onto the common kernel of the states it
        # would misidentify; the error row is then identically zero
        supports = []
        for k in labels:
            wrong = sum((rho for rho, c in zip(states, correct) if c != k), np.zeros((d, d)))
            supports.append(_kernel(wrong))
        blocks = []
        for v in supports:
            if v.shape[1] == 0:
                blocks.append(None)
                continue
            blk = b.add_block(v.shape[1])
            c = v.conj().T @ avg @ v
            b.set_objective(blk, 0.5 * (c + c.conj().T))
            blocks.append(blk)
        slack = b.add_block(d)
        terms = {blk: v for blk, v in zip(blocks, supports) if blk is not None}
        terms[slack] = 1.0
        rows = b.add_matrix_equality(terms, ident)
        err_row = None
    else:
        supports = [None] * len(labels)
        blocks = [b.add_block(d) for _ in labels]
        for blk in blocks:
            b.set_objective(blk, avg)
        slack = b.add_block(d)
        rows = b.add_matrix_equality({**{blk: 1.0 for blk in blocks}, slack: 1.0}, ident)
        err_row = b.add_constraint({blk: w for blk, w in zip(blocks, ws)}, "<=", 0.0)

    if all(blk is None for blk in blocks):
        zero = {k: np.zeros((d, d), dtype=complex) for k in labels}
        X, z = _zero_error_certificate(states, labels, correct, avg, ws)
        return 0.0, PredictorMeasurement(zero), X, z, float(np.trace(X).real)

    sol = solve(b.build(), opts)
    if not sol.optimal:
        raise SdpError(sol.status, f"gap={sol.gap:.2e} residual={sol.max_residual:.2e}")

    elements = {}
    for k, blk, v in zip(labels, blocks, supports):
        if blk is None:
            elements[k] = np.zeros((d, d), dtype=complex)
        elif v is None:
            elements[k] = sol.primal_blocks[blk]
        else:
            elements[k] = v @ sol.primal_blocks[blk] @ v.conj().T
    elements = _repair_measurement(elements)
    m = PredictorMeasurement(elements)
    wmass, gmass = guess_masses(m, states, correct)
    if gmass > 0 and wmass > eps * gmass and gmass < ZERO_MASS:
        m = PredictorMeasurement({k: np.zeros((d, d), dtype=complex) for k in labels})
        gmass = 0.0

    X = hermitian_from_coords(sol.dual_multipliers[rows.start:rows.stop], d)
    if err_row is not None:
        z = float(sol.dual_multipliers[err_row])
    else:
        z = _zero_error_z(states, labels, correct, avg, ws, X)
    X, z = _repair_certificate(states, labels, correct, eps, X, z)
    return gmass, m, X, z, float(np.trace(X).real)


def _zero_error_z(states, labels, correct, avg, ws, X) -> float:
    """Smallest ``z`` on a doubling grid making ``X`` nearly feasible at eps = 0.

    At zero error the reduced program has no error row, so the scalar part of
    the dual point is recovered here.  The remaining slack violation is
    absorbed by the identity shift in :func:`_repair_certificate`.
    """
    best_z, best_v = 0.0, -math.inf
    z = 1.0
    for _ in range(80):
        v = min(linmat.min_eig(X - (avg - z * w)) for w in ws)
        if v > best_v + 1e-15:
            best_z, best_v = z, v
        if v >= -1e-10:
            return z
        z *= 2.0
    return best_z


def _zero_error_certificate(states, labels, correct, avg, ws):
    d = avg.shape[0]
    X = np.zeros((d, d), dtype=complex)
    z = _zero_error_z(states, labels, correct, avg, ws, X)
    return _repair_certificate(states, labels, correct, 0.0, X, z)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def helstrom(alpha0, alpha1) -> tuple[float, PredictorMeasurement]:
    """Optimal two-state discrimination (no abstaining)."""
    a0, a1 = as_density(alpha0), as_density(alpha1)
    if a0.shape != a1.shape:
        raise linmat.DimensionError("states must have equal dimension")
    w, v = np.linalg.eigh(a0 - a1)
    vp = v[:, w > 0]
    proj = vp @ vp.conj().T
    m = PredictorMeasurement({"0": proj, "1": np.eye(a0.shape[0]) - proj})
    return 0.5 + 0.5 * trace_norm(a0 - a1), m


def achieved_success(m: PredictorMeasurement, states: Sequence[np.ndarray]) -> float:
    w, g = guess_masses(m, states)
    return g - w


def d_eps_single(p: IdentPair, opts: SolverOptions | None = None) -> SingleResult:
    value, m, X, z, _ = solve_identification(p.states, PAIR_LABELS, PAIR_LABELS, p.eps, opts)
    return SingleResult(value, m, DualCertificateSingle(X, z))


def d_eps_quad(q: IdentQuad, opts: SolverOptions | None = None) -> QuadResult:
    value, m, X, z, _ = solve_identification(q.states, QUAD_LABELS, QUAD_LABELS, q.eps, opts)
    return QuadResult(value, m, DualCertificateQuad(X, z))


def d_eps_parity(q: IdentQuad, opts: SolverOptions | None = None) -> ParityResult:
    """Identification of the parity ``x XOR y`` with outcomes 0, 1 and abstain."""
    correct = ("0", "1", "1", "0")
    value, m, _, _, _ = solve_identification(q.states, PAIR_LABELS, correct, q.eps, opts)
    return ParityResult(value, m)


def single_dual_terms(beta0, beta1, eps: float, z_b: float) -> tuple[np.ndarray, np.ndarray]:
    """The right-hand sides ``X_1, X_2`` of the single-register dual."""
    x1 = 0.5 * ((1 + eps * z_b) * beta0 + (1 - (1 - eps) * z_b) * beta1)
    x2 = 0.5 * ((1 + eps * z_b) * beta1 + (1 - (1 - eps) * z_b) * beta0)
    return x1, x2


def single_certificate_slacks(beta0, beta1, eps: float, cert: DualCertificateSingle) -> list[float]:
    """Min eigenvalues of ``X_b``, ``X_b - X_1`` and ``X_b - X_2``."""
    x1, x2 = single_dual_terms(beta0, beta1, eps, cert.z_b)
    return [linmat.min_eig(cert.X_b), linmat.min_eig(cert.X_b - x1), linmat.min_eig(cert.X_b - x2)]


def quad_dual_terms(alpha0, alpha1, beta0, beta1, e: float, z: float) -> list[np.ndarray]:
    """``X'_1..X'_4`` of the two-register dual at error parameter ``e``."""
    out = []
    plus, minus = 1 + e * z, 1 - (1 - e) * z
    for fav, other in ((alpha0, alpha1), (alpha1, alpha0)):
        for bf, bo in ((beta0, beta1), (beta1, beta0)):
            out.append(0.25 * (tensor(plus * fav + minus * other, bf) + minus * tensor(alpha0 + alpha1, bo)))
    return out


def dual_single(beta0, beta1, eps: float, opts: SolverOptions | None = None) -> DualCertificateSingle:
    return d_eps_single(IdentPair(beta0, beta1, eps), opts).certificate


def lifted_z(eps: float, z_b: float) -> float:
    return 16.0 * (1 - eps) / (1 - eps / 2) * z_b + 4.0 / (1 - eps)


def _overlap_geometry(a0: np.ndarray, a1: np.ndarray):
    """delta and the unit vectors orthogonal to each state inside their span."""
    ov = np.vdot(a1, a0)
    delta2 = max(0.0, 1.0 - abs(ov) ** 2)
    delta = math.sqrt(delta2)
    if delta < 1e-14:
        return 0.0, None, None
    perp1 = a0 - ov * a1
    perp0 = a1 - np.conj(ov) * a0
    return delta, perp1 / np.linalg.norm(perp1), perp0 / np.linalg.norm(perp0)


def dual_lift(alpha0, alpha1, beta0, beta1, eps: float,
              cert: DualCertificateSingle) -> DualCertificateQuad:
    """Build a two-register dual point at error ``eps/2`` from a single-register one.

    With ``delta = sqrt(1 - |<a0|a1>|^2)`` and ``P_j`` the projector onto the
    direction of the span orthogonal to ``|a_j>``, set
    ``Y = 4 delta^2 [P_1 (x) X_1, P_1 (x) X_2, P_0 (x) X_1, P_0 (x) X_2]`` and
    ``X = sum Pos(Y_i)`` with the scalar ``z`` from :func:`lifted_z`.
    """
    eps = _check_eps(eps)
    a0, a1 = linmat.as_pure(alpha0, 1e-9), linmat.as_pure(alpha1, 1e-9)
    if a0.shape != a1.shape:
        raise linmat.DimensionError("alpha vectors must have equal dimension")
    b0, b1 = as_density(beta0), as_density(beta1)
    if min(single_certificate_slacks(b0, b1, eps, cert)) < -1e-9 or cert.z_b < 0:
        raise ValueError("single-register certificate is not dual feasible")

    z = lifted_z(eps, cert.z_b)
    delta, perp1, perp0 = _overlap_geometry(a0, a1)
    dim = a0.size * b0.shape[0]
    if perp1 is None:
        Ys = [np.zeros((dim, dim), dtype=complex) for _ in range(4)]
    else:
        x1, x2 = single_dual_terms(b0, b1, eps, cert.z_b)
        p1, p0 = linmat.projector(perp1), linmat.projector(perp0)
        Ys = [4 * delta ** 2 * tensor(p, x) for p in (p1, p0) for x in (x1, x2)]
    X = sum(pos_part(y) for y in Ys)
    A0, A1 = linmat.projector(a0), linmat.projector(a1)
    targets = quad_dual_terms(A0, A1, b0, b1, eps / 2, z)
    slacks = [linmat.min_eig(X - t) for t in targets]
    bound = 16 * delta ** 2 * cert.value
    return DualCertificateQuad(X, z, Ys, slacks, bound)


@dataclass
class LiftConditionReport:
    z: float
    delta: float
    first_min_eig: float
    second_min_eig: float
    full_min_eig: float
    firstpp: float
    secondpp: float
    passed: bool


def lift_scalars(eps: float, z_b: float, delta: float) -> tuple[float, float, float]:
    """``(z, firstpp, secondpp)``: the chosen z and the two scalar margins."""
    z = lifted_z(eps, z_b)
    h = eps / 2
    first = (z * (1 - eps) - 2) * (7 + 8 * eps * z_b - h * z) - (1 + h * z) ** 2
    u = (1 - h) * z - 1
    second = (2 - delta ** 2) * u * (7 - 8 * (1 - eps) * z_b + (1 - h) * z) - (1 - delta ** 2) * u ** 2
    return z, first, second


def verify_lift_conditions(rho0, rho1, sigma0, sigma1, eps: float, z_b: float) -> LiftConditionReport:
    """Evaluate both matrix inequalities and both scalar conditions for one instance."""
    eps = _check_eps(eps)
    r0, r1 = linmat.as_pure(rho0, 1e-9), linmat.as_pure(rho1, 1e-9)
    s0, s1 = as_density(sigma0), as_density(sigma1)
    delta, perp1, _ = _overlap_geometry(r0, r1)
    if perp1 is None:
        # any unit vector orthogonal to rho1
        q, _ = np.linalg.qr(np.column_stack([r1, np.eye(r1.size)]))
        perp1 = q[:, 1]
    # coordinates in the basis (rho1, rho1_perp)
    basis = np.column_stack([r1, perp1])
    c0 = basis.conj().T @ r0
    P0 = np.outer(c0, c0.conj())
    P1 = np.diag([1.0, 0.0]).astype(complex)
    Pp = np.diag([0.0, 1.0]).astype(complex)
    z, fpp, spp = lift_scalars(eps, z_b, delta)
    h = eps / 2
    d2 = delta ** 2
    first = 4 * d2 * Pp * 0.5 * (1 + eps * z_b) - 0.25 * ((1 + h * z) * P0 + (1 - (1 - h) * z) * P1)
    second = 4 * d2 * Pp * 0.5 * (1 - (1 - eps) * z_b) - 0.25 * (1 - (1 - h) * z) * (P0 + P1)
    lhs = tensor(4 * d2 * Pp, 0.5 * ((1 + eps * z_b) * s0 + (1 - (1 - eps) * z_b) * s1))
    rhs = 0.25 * (tensor((1 + h * z) * P0 + (1 - (1 - h) * z) * P1, s0) + (1 - (1 - h) * z) * tensor(P0 + P1, s1))
    f_eig, s_eig, full = linmat.min_eig(first), linmat.min_eig(second), linmat.min_eig(lhs - rhs)
    tol = 1e-9
    passed = f_eig >= -tol and s_eig >= -tol and full >= -tol and fpp > 0 and spp > 0
    return LiftConditionReport(z, delta, f_eig, s_eig, full, fpp, spp, passed)


def _pure_pair(q: IdentQuad):
    try:
        return linmat.pure_vector(q.alpha0), linmat.pure_vector(q.alpha1)
    except InvalidStateError as exc:
        raise InvalidStateError("alpha states must be pure") from exc


def check_direct_product_pure(q: IdentQuad, opts: SolverOptions | None = None) -> DirectProductReport:
    """Compare ``D_{eps/2}`` of the product family against ``16 delta^2 D_eps(beta)``."""
    a0, a1 = _pure_pair(q)
    ov2 = abs(np.vdot(a0, a1)) ** 2
    single = d_eps_single(IdentPair(q.beta0, q.beta1, q.eps), opts)
    quad = d_eps_quad(q.with_eps(q.eps / 2), opts)
    b, p = single.value, quad.value
    bound = 16 * (1 - ov2) * b
    return DirectProductReport(
        a_lower=0.5 * (1 - ov2), b=b, p=p, bound=bound,
        satisfied=p <= bound + 1e-6, margin=bound - p,
        extras={"b_dual": single.certificate.value, "p_dual": quad.certificate.value,
                "z_b": single.certificate.z_b, "delta": math.sqrt(max(0.0, 1 - ov2))},
    )


def check_corollary_mixed(q: IdentQuad, opts: SolverOptions | None = None) -> DirectProductReport:
    """Compare ``D_{eps/2}`` of the product family against ``32 ||a0 - a1||_tr D_eps(beta)``."""
    a = trace_norm(q.alpha0 - q.alpha1)
    single = d_eps_single(IdentPair(q.beta0, q.beta1, q.eps), opts)
    quad = d_eps_quad(q.with_eps(q.eps / 2), opts)
    b, p = single.value, quad.value
    bound = 32 * a * b
    fid = linmat.fidelity(q.alpha0, q.alpha1)
    psi0, psi1 = linmat.purify_pair(q.alpha0, q.alpha1)
    overlap = abs(np.vdot(psi0, psi1))
    theorem_bound = 16 * (1 - overlap ** 2) * b
    return DirectProductReport(
        a_lower=a, b=b, p=p, bound=bound,
        satisfied=p <= bound + 1e-6, margin=bound - p,
        extras={"fidelity": fid, "purified_overlap": overlap, "theorem_bound": theorem_bound,
                "b_dual": single.certificate.value, "p_dual": quad.certificate.value},
    )


# ---------------------------------------------------------------------------
# the two counterexample families
# ---------------------------------------------------------------------------

def counterexample_states(delta: float) -> tuple[np.ndarray, np.ndarray]:
    """``|0>`` and ``sqrt(1 - delta^2)|0> + delta|1>``."""
    return np.array([1.0, 0.0], dtype=complex), np.array([math.sqrt(1 - delta ** 2), delta], dtype=complex)


def counterexample_quad(delta: float, eps: float) -> IdentQuad:
    v0, v1 = counterexample_states(delta)
    p0, p1 = linmat.projector(v0), linmat.projector(v1)
    return IdentQuad(p0, p1, p0, p1, eps)


def parity_measurement(delta: float) -> PredictorMeasurement:
    v = np.array([delta, -1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2 + delta ** 2)
    return PredictorMeasurement({"0": linmat.projector(v), "1": np.zeros((4, 4), dtype=complex)})


def quarter_measurement(delta: float) -> PredictorMeasurement:
    v = np.array([delta, -2 / 3, -2 / 3, 0.0], dtype=complex) / math.sqrt(8 / 9 + delta ** 2)
    zero = np.zeros((4, 4), dtype=complex)
    return PredictorMeasurement({"00": linmat.projector(v), "01": zero, "10": zero, "11": zero})


def parity_closed_forms(delta: float) -> tuple[float, float]:
    """Exact ``Tr[E_0 a0(x)b0]`` and ``Tr[E_0 a0(x)b1]`` for the parity measurement."""
    d2 = delta ** 2
    return d2 / (2 + d2), d2 * (math.sqrt(1 - d2) - 1) ** 2 / (2 + d2)


@dataclass
class CounterexampleReport:
    delta: float
    eps: float
    a: float
    b: float
    value: float
    explicit_mass: float
    explicit_error: float
    details: dict = field(default_factory=dict)


def parity_counterexample(delta: float, eps: float = 0.49,
                          opts: SolverOptions | None = None) -> CounterexampleReport:
    q = counterexample_quad(delta, eps)
    a = d_eps_single(IdentPair(q.alpha0, q.alpha1, eps), opts).value
    b = d_eps_single(IdentPair(q.beta0, q.beta1, eps), opts).value
    value = d_eps_parity(q, opts).value
    m = parity_measurement(delta)
    states = q.states
    _, mass = guess_masses(m, states, ("0", "1", "1", "0"))
    err = conditional_error(m, states, ("0", "1", "1", "0"))
    probs = [float(np.real(np.trace(m.elements["0"] @ s))) for s in states]
    closed = parity_closed_forms(delta)
    return CounterexampleReport(delta, eps, a, b, value, mass, err, {
        "outcome0_probabilities": probs,
        "closed_form_00": closed[0],
        "closed_form_01": closed[1],
        "product_16ab": 16 * a * b,
    })


def quarter_counterexample(delta: float, eps: float = 0.49, eps_joint: float = 0.251,
                           opts: SolverOptions | None = None) -> CounterexampleReport:
    q = counterexample_quad(delta, eps_joint)
    a = d_eps_single(IdentPair(q.alpha0, q.alpha1, eps), opts).value
    b = d_eps_single(IdentPair(q.beta0, q.beta1, eps), opts).value
    value = d_eps_quad(q, opts).value
    m = quarter_measurement(delta)
    w, mass = guess_masses(m, q.states)
    probs = [float(np.real(np.trace(m.elements["00"] @ s))) for s in q.states]
    return CounterexampleReport(delta, eps_joint, a, b, value, mass, w / mass, {
        "outcome00_probabilities": probs,
        "eps_single": eps,
    })
