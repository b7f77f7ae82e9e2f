"""Dense complex Hermitian linear algebra for density matrices and SDP blocks.

Matrices are plain :class:`numpy.ndarray` objects.  The ``as_*`` helpers
validate an array against the invariants of the role it plays (Hermitian
operator, density matrix, pure state vector) and return a clean complex copy.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np

from .config import DEFAULT, Tolerances


class LinmatError(ValueError):
    """Raised for malformed matrix input."""


class DimensionError(LinmatError):
    pass


class NotHermitianError(LinmatError):
    pass


class InvalidStateError(LinmatError):
    pass


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # non-increasing
    eigenvectors: np.ndarray  # columns


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def as_matrix(a) -> np.ndarray:
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-d array, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinmatError("matrix has non-finite entries")
    return m


def as_hermitian(a, tol: float = DEFAULT.hermitian) -> np.ndarray:
    """Validate ``a`` as Hermitian and return its exactly symmetrized copy.

    The entrywise tolerance is relative to ``max(1, max|a_ij|)``.
    """
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"Hermitian matrix must be square, got {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    h = 0.5 * (m + m.conj().T)
    h[np.diag_indices_from(h)] = h.diagonal().real
    return h


def as_density(a, tol: Tolerances = DEFAULT) -> np.ndarray:
    try:
        rho = as_hermitian(a, tol.hermitian)
    except NotHermitianError as exc:
        raise InvalidStateError(str(exc)) from exc
    tr = rho.trace().real
    if abs(tr - 1.0) > tol.density_trace:
        raise InvalidStateError(f"density matrix trace {tr!r} differs from 1")
    lmin = np.linalg.eigvalsh(rho)[0]
    if lmin < -tol.psd_clamp:
        raise InvalidStateError(f"density matrix has eigenvalue {lmin:.3e} < 0")
    return rho


def as_pure(v, tol: float = DEFAULT.pure_norm) -> np.ndarray:
    psi = np.array(v, dtype=complex).ravel()
    if psi.size == 0 or not np.all(np.isfinite(psi)):
        raise InvalidStateError("state vector is empty or non-finite")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise InvalidStateError(f"state vector norm {norm!r} differs from 1")
    return psi


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def pure_vector(rho, tol: float = 1e-9) -> np.ndarray:
    """Return a unit vector ``v`` with ``rho = |v><v|``, rejecting mixed input."""
    w, v = np.linalg.eigh(as_hermitian(rho, 1e-9))
    if abs(w[-1] - 1.0) > tol or np.sum(np.abs(w[:-1])) > tol:
        raise InvalidStateError("density matrix is not pure")
    vec = v[:, -1]
    k = int(np.argmax(np.abs(vec)))
    return vec * (abs(vec[k]) / vec[k])


def is_psd(a, tol: float = 0.0) -> bool:
    return bool(np.linalg.eigvalsh(as_hermitian(a, 1e-9))[0] >= -tol)


def min_eig(a) -> float:
    a = np.asarray(a, dtype=complex)
    return float(np.linalg.eigvalsh(0.5 * (a + a.conj().T))[0])


# ---------------------------------------------------------------------------
# products and traces
# ---------------------------------------------------------------------------

def tensor(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dims: tuple[int, int], keep: Literal["A", "B"] = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``C^dA ⊗ C^dB``."""
    m = as_matrix(m)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise DimensionError(f"matrix shape {m.shape} does not match dims {dims}")
    t = m.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijik->jk", t)
    raise ValueError(f"keep must be 'A' or 'B', not {keep!r}")


# ---------------------------------------------------------------------------
# spectral functions
# ---------------------------------------------------------------------------

def jacobi_eigh(a, threshold: float = DEFAULT.jacobi_threshold,
                max_sweeps: int = DEFAULT.jacobi_max_sweeps) -> EigenDecomposition:
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each rotation first strips the phase of the pivot ``a[p, q]`` and then
    applies the classical real rotation that annihilates it.
    """
    a = as_hermitian(a).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, np.linalg.norm(a))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= threshold * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # columns p, q of the unitary: diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ u
    else:
        raise np.linalg.LinAlgError("Jacobi eigensolver did not converge")
    w = a.diagonal().real.copy()
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def eig_hermitian(a, method: Literal["lapack", "jacobi"] = "lapack") -> EigenDecomposition:
    """Eigendecomposition with eigenvalues in non-increasing order."""
    h = as_hermitian(a)
    if method == "jacobi":
        return jacobi_eigh(h)
    if method != "lapack":
        raise ValueError(f"unknown method {method!r}")
    w, v = np.linalg.eigh(h)
    return EigenDecomposition(w[::-1].copy(), v[:, ::-1].copy())


def _spectral(a, fn) -> np.ndarray:
    w, v = np.linalg.eigh(as_hermitian(a))
    out = (v * fn(w)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def pos_part(a) -> np.ndarray:
    """Positive part ``A+`` of the orthogonal decomposition ``A = A+ - A-``."""
    return _spectral(a, lambda w: np.where(w > 0.0, w, 0.0))


def trace_norm(a) -> float:
    """Half the sum of absolute eigenvalues of a Hermitian matrix."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(as_hermitian(a)))))


def matrix_sqrt_psd(a, clamp: float = DEFAULT.psd_clamp) -> np.ndarray:
    h = as_hermitian(a, 1e-9)
    w = np.linalg.eigvalsh(h)
    if w[0] < -clamp:
        raise InvalidStateError(f"matrix has eigenvalue {w[0]:.3e} below -{clamp:g}")
    return _spectral(h, lambda x: np.sqrt(np.clip(x, 0.0, None)))


def fidelity(r, s) -> float:
    """Root fidelity ``Tr|sqrt(r) sqrt(s)|``; equals ``|<phi|psi>|`` on pure states."""
    r, s = as_density(r), as_density(s)
    if r.shape != s.shape:
        raise DimensionError("fidelity needs equal dimensions")
    sv = np.linalg.svd(matrix_sqrt_psd(r) @ matrix_sqrt_psd(s), compute_uv=False)
    return float(min(1.0, np.sum(sv)))


def purify_pair(r0, r1) -> tuple[np.ndarray, np.ndarray]:
    """Uhlmann-optimal purifications of two ``d``-dimensional density matrices.

    The outputs live on ``C^d ⊗ C^d`` (system first, ancilla second) and their
    overlap equals :func:`fidelity`.  Two pure inputs are padded with the fixed
    ancilla ``|0>``, with the second phase chosen to make the overlap real.
    """
    r0, r1 = as_density(r0), as_density(r1)
    d = r0.shape[0]
    if r1.shape != r0.shape:
        raise DimensionError("purify_pair needs equal dimensions")
    try:
        v0, v1 = pure_vector(r0), pure_vector(r1)
    except InvalidStateError:
        pass
    else:
        ov = np.vdot(v0, v1)
        if abs(ov) > 0:
            v1 = v1 * (abs(ov) / ov)
        anc = np.zeros(d)
        anc[0] = 1.0
        return np.kron(v0, anc), np.kron(v1, anc)
    s0, s1 = matrix_sqrt_psd(r0), matrix_sqrt_psd(r1)
    u, _, vh = np.linalg.svd(s0 @ s1)
    m0 = s0
    m1 = s1 @ vh.conj().T @ u.conj().T
    # row-major vec(M): system index is the row, ancilla the column
    psi0 = m0.reshape(-1)
    psi1 = m1.reshape(-1)
    return psi0 / np.linalg.norm(psi0), psi1 / np.linalg.norm(psi1)


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (g + g.conj().T)


def random_psd(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    return g @ g.conj().T


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    p = random_psd(d, rng, rank)
    return p / p.trace().real


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)
