"""A small dense statevector simulator sufficient for the messaging protocols."""

from __future__ import annotations

from typing import Sequence

import numpy as np

NORM_TOL = 1e-12


def n_qubits(dim: int) -> int:
    q = int(dim).bit_length() - 1
    if dim < 1 or 1 << q != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return q


class StateVector:
    """Unit vector in ``C^dim`` with basis index ``i`` written in binary, MSB first."""

    def __init__(self, amplitudes, tol: float = NORM_TOL):
        amp = np.array(amplitudes, dtype=complex).ravel()
        if amp.size == 0:
            raise ValueError("empty state")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > tol:
            raise ValueError(f"state norm {norm!r} differs from 1")
        self.amplitudes = amp

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def maximally_entangled(cls, n: int) -> "StateVector":
        """``(1/sqrt n) sum_i |i>|i>`` with the first register as the high index."""
        amp = np.zeros(n * n, dtype=complex)
        amp[np.arange(n) * (n + 1)] = 1.0 / np.sqrt(n)
        return cls(amp)

    @classmethod
    def uniform_signed(cls, n: int, support: Sequence[int], signs: Sequence[int]) -> "StateVector":
        """``(1/sqrt|S|) sum_{i in S} (-1)^{y_i} |i>``."""
        amp = np.zeros(n, dtype=complex)
        idx = np.asarray(support, dtype=int)
        amp[idx] = (-1.0) ** np.asarray(signs)[idx] / np.sqrt(idx.size)
        return cls(amp)

    def copy(self) -> "StateVector":
        return StateVector(self.amplitudes.copy())

    def apply_diagonal(self, diag) -> "StateVector":
        d = np.asarray(diag, dtype=complex)
        if d.shape != (self.dim,) or np.any(np.abs(np.abs(d) - 1.0) > 1e-12):
            raise ValueError("diagonal must consist of unit-modulus entries")
        return StateVector(self.amplitudes * d)

    def hadamard_all(self) -> "StateVector":
        """Apply a Hadamard gate to every qubit (normalised Walsh-Hadamard transform)."""
        q = n_qubits(self.dim)
        t = self.amplitudes.reshape((2,) * q) if q else self.amplitudes.copy()
        h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
        for ax in range(q):
            t = np.moveaxis(np.tensordot(h, t, axes=([1], [ax])), 0, ax)
        return StateVector(np.asarray(t).reshape(-1))

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()

    def projector_probabilities(self, supports: Sequence[Sequence[int]]) -> np.ndarray:
        """Probabilities of diagonal projectors given by their basis supports."""
        p = np.abs(self.amplitudes) ** 2
        return np.array([p[np.asarray(s, dtype=int)].sum() for s in supports])

    def collapse(self, support: Sequence[int]) -> "StateVector":
        """Post-measurement state for a diagonal projector, renormalised."""
        amp = np.zeros_like(self.amplitudes)
        idx = np.asarray(support, dtype=int)
        amp[idx] = self.amplitudes[idx]
        nrm = np.linalg.norm(amp)
        if nrm == 0:
            raise ValueError("projector has zero probability on this state")
        return StateVector(amp / nrm)

    def measure_projectors(self, supports: Sequence[Sequence[int]],
                           rng: np.random.Generator) -> tuple[int, "StateVector"]:
        p = self.projector_probabilities(supports)
        k = int(rng.choice(len(supports), p=p / p.sum()))
        return k, self.collapse(supports[k])

    def measure(self, rng: np.random.Generator) -> int:
        return int(rng.choice(self.dim, p=self.probabilities()))
