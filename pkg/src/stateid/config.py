"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    density_trace: float = 1e-10
    psd_clamp: float = 1e-10
    pure_norm: float = 1e-12
    eig_reconstruction: float = 1e-10
    jacobi_threshold: float = 1e-13
    jacobi_max_sweeps: int = 100
    sdp_gap: float = 1e-7
    sdp_feas: float = 1e-8
    sdp_max_iter: int = 500
    measurement_psd: float = 1e-9
    certificate_slack: float = 1e-9

    def with_overrides(self, **kwargs) -> "Tolerances":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


DEFAULT = Tolerances()
