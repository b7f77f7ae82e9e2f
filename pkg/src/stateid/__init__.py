"""Bounded-error quantum state identification: SDP values, dual certificates,
the classical greedy rule and simulations of simultaneous-message protocols."""

from . import classical, ident, linmat, sdp, smp
from .config import DEFAULT, Tolerances

__version__ = "0.1.0"

__all__ = ["DEFAULT", "Tolerances", "classical", "ident", "linmat", "sdp", "smp"]
