"""Simultaneous-message protocols for the two hidden relations.

Indices are 0-based throughout; :func:`to_one_based` converts outputs for
display.  Every protocol takes an explicit :class:`numpy.random.Generator`.
Shared coins and EPR pairs are tallied on the transcript separately from
the message bits and qubits, which alone make up the cost.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .statevector import StateVector, n_qubits

FAIL = "Fail"


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

def _bits(v, n: int, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=int).ravel()
    if a.shape != (n,) or np.any((a != 0) & (a != 1)):
        raise ValueError(f"{name} must be {n} bits")
    return a


@dataclass(frozen=True, eq=False)
class P1Input:
    """``x, s, y`` in ``{0,1}^n`` with ``|s| = n/2``."""

    n: int
    x: np.ndarray
    s: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        n_qubits(self.n)
        if self.n < 2:
            raise ValueError("n must be at least 2")
        for name in ("x", "s", "y"):
            object.__setattr__(self, name, _bits(getattr(self, name), self.n, name))
        if int(self.s.sum()) != self.n // 2:
            raise ValueError("s must have Hamming weight n/2")


def _check_matching(matching, n: int) -> tuple[tuple[int, int], ...]:
    edges = tuple((int(i), int(j)) for i, j in matching)
    flat = [v for e in edges for v in e]
    if len(edges) != n // 2 or sorted(flat) != list(range(n)):
        raise ValueError("matching must be a perfect matching on range(n)")
    return edges


@dataclass(frozen=True, eq=False)
class P2Input:
    """Perfect matching on ``range(n)``, one bit per edge and ``y`` in ``{0,1}^n``."""

    n: int
    matching: tuple
    edge_bits: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        n_qubits(self.n)
        if self.n < 2:
            raise ValueError("n must be at least 2")
        object.__setattr__(self, "matching", _check_matching(self.matching, self.n))
        object.__setattr__(self, "edge_bits", _bits(self.edge_bits, self.n // 2, "edge_bits"))
        object.__setattr__(self, "y", _bits(self.y, self.n, "y"))

    def edge_bit(self, i: int, j: int) -> int:
        for k, e in enumerate(self.matching):
            if e == (i, j) or e == (j, i):
                return int(self.edge_bits[k])
        raise KeyError((i, j))


@dataclass(frozen=True)
class RelationProblem:
    name: str
    # error threshold under which the lower bound is stated; metadata only
    max_error: float


P1_PROBLEM = RelationProblem("P1", 1 / 8)
P2_PROBLEM = RelationProblem("P2", 1 / 16)


# ---------------------------------------------------------------------------
# transcripts
# ---------------------------------------------------------------------------

@dataclass
class Message:
    bits: int = 0
    qubits: int = 0
    payload: Any = None


@dataclass
class Transcript:
    protocol: str
    alice_msg: Message
    bob_msg: Message
    referee_output: Any
    valid: bool
    guess: bool = False
    shared: dict = field(default_factory=dict)  # excluded from cost

    @property
    def classical_bits(self) -> int:
        return self.alice_msg.bits + self.bob_msg.bits

    @property
    def qubits(self) -> int:
        return self.alice_msg.qubits + self.bob_msg.qubits

    def to_record(self) -> dict:
        out = self.referee_output
        return {
            "protocol": self.protocol,
            "referee_output": out if out == FAIL else to_one_based(self.protocol, out),
            "valid": bool(self.valid),
            "guess": bool(self.guess),
            "cost": {
                "alice_bits": self.alice_msg.bits, "alice_qubits": self.alice_msg.qubits,
                "bob_bits": self.bob_msg.bits, "bob_qubits": self.bob_msg.qubits,
            },
            "shared": dict(self.shared),
        }


def to_one_based(protocol: str, out) -> list:
    if protocol.startswith("p1"):
        i, xi, yi = out
        return [i + 1, xi, yi]
    i, j, b, par = out
    return [i + 1, j + 1, b, par]


def _log2(n: int) -> int:
    return max(1, math.ceil(math.log2(n)))


# ---------------------------------------------------------------------------
# validators
# ---------------------------------------------------------------------------

def validate_p1(inp: P1Input, out) -> bool:
    if out is None or out == FAIL:
        return False
    i, xi, yi = out
    if not 0 <= i < inp.n:
        return False
    return bool(inp.s[i] == 1 and inp.x[i] == xi and inp.y[i] == yi)


def validate_p2(inp: P2Input, out) -> bool:
    if out is None or out == FAIL:
        return False
    i, j, b, par = out
    try:
        bit = inp.edge_bit(i, j)
    except KeyError:
        return False
    return bool(b == bit and par == (inp.y[i] ^ inp.y[j]))


# ---------------------------------------------------------------------------
# matchings
# ---------------------------------------------------------------------------

def gen_matching(k: int, n: int) -> tuple[tuple[int, int], ...]:
    """The k-th cyclic matching between the two halves of ``range(n)``.

    Edge ``(i, ((i + k) mod n/2) + n/2)`` for ``i < n/2``; the matchings for
    different ``k`` are edge-disjoint and together cover every cross edge.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be even and positive")
    h = n // 2
    if not 0 <= k < h:
        raise ValueError(f"k must lie in [0, {h}), got {k}")
    return tuple((i, (i + k) % h + h) for i in range(h))


# ---------------------------------------------------------------------------
# P1: public coins
# ---------------------------------------------------------------------------

P1_FALLBACK = (0, 0, 0)


def _p1_pub_referee(inp: P1Input, idx: Sequence[int]):
    for i in idx:
        if inp.s[i] == 1:
            return (int(i), int(inp.x[i]), int(inp.y[i])), False
    return P1_FALLBACK, True


def p1_pub_protocol(inp: P1Input, r: int, rng: np.random.Generator,
                    indices: Sequence[int] | None = None) -> Transcript:
    """Shared random indices; Alice sends ``(i, x_i, s_i)``, Bob ``(i, y_i)``.

    ``indices`` overrides the shared coins (for forcing a particular draw).
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    idx = rng.integers(0, inp.n, size=r) if indices is None else np.asarray(indices, dtype=int)
    if idx.shape != (r,):
        raise ValueError("need exactly r shared indices")
    lg = _log2(inp.n)
    alice = Message(bits=r * (lg + 2), payload=[(int(i), int(inp.x[i]), int(inp.s[i])) for i in idx])
    bob = Message(bits=r * (lg + 1), payload=[(int(i), int(inp.y[i])) for i in idx])
    out, guess = _p1_pub_referee(inp, idx)
    return Transcript("p1_pub", alice, bob, out, (not guess) and validate_p1(inp, out), guess,
                      {"shared_random_bits": r * lg})


def p1_pub_exact(inp: P1Input, r: int) -> float:
    """Success probability by enumerating all ``n^r`` shared index tuples."""
    hits = sum(1 for idx in itertools.product(range(inp.n), repeat=r)
               if not _p1_pub_referee(inp, idx)[1])
    return hits / inp.n ** r


# ---------------------------------------------------------------------------
# P1: private coins on a sqrt(n) x sqrt(n) grid
# ---------------------------------------------------------------------------

def _side(n: int) -> int:
    m = math.isqrt(n)
    if m * m != n:
        raise ValueError(f"n = {n} is not a perfect square")
    return m


def p1_private_sqrt(inp: P1Input, reps: int, rng: np.random.Generator) -> Transcript:
    """Alice sends a random row of ``x`` and ``s``, Bob a random column of ``y``.

    Index ``i = row * m + col`` with ``m = sqrt(n)``; the referee answers at
    the intersection of the first repetition where ``s_i = 1``.
    """
    m = _side(inp.n)
    if reps < 1:
        raise ValueError("reps must be at least 1")
    rows = rng.integers(0, m, size=reps)
    cols = rng.integers(0, m, size=reps)
    lg = _log2(m)
    X, S, Y = (v.reshape(m, m) for v in (inp.x, inp.s, inp.y))
    alice = Message(bits=reps * (2 * m + lg), payload=[(int(a), X[a].tolist(), S[a].tolist()) for a in rows])
    bob = Message(bits=reps * (m + lg), payload=[(int(b), Y[:, b].tolist()) for b in cols])
    for a, b in zip(rows, cols):
        if S[a, b] == 1:
            i = int(a * m + b)
            out = (i, int(inp.x[i]), int(inp.y[i]))
            return Transcript("p1_sqrt", alice, bob, out, validate_p1(inp, out))
    return Transcript("p1_sqrt", alice, bob, P1_FALLBACK, False, True)


def p1_private_sqrt_exact(inp: P1Input, reps: int) -> float:
    """Exact success: one minus the per-repetition miss rate to the ``reps``."""
    m = _side(inp.n)
    S = inp.s.reshape(m, m)
    per_rep = sum(int(S[a, b]) for a in range(m) for b in range(m)) / (m * m)
    return 1.0 - (1.0 - per_rep) ** reps


# ---------------------------------------------------------------------------
# P2: entangled protocol with success probability one
# ---------------------------------------------------------------------------

def gf2_dot(a: int, b: int) -> int:
    return bin(a & b).count("1") & 1


def _p2_state(inp: P2Input) -> StateVector:
    n = inp.n
    psi = StateVector.maximally_entangled(n)
    # Bob's phases (-1)^{y_i} on the second register
    return psi.apply_diagonal(np.tile((-1.0) ** inp.y, n))


def _edge_support(n: int, i: int, j: int) -> list[int]:
    # E_ij tensor identity on the first (Alice) register
    return [i * n + b for b in range(n)] + [j * n + b for b in range(n)]


def _p2_output(inp: P2Input, e: int, k: int, l: int):
    i, j = inp.matching[e]
    return (i, j, int(inp.edge_bits[e]), gf2_dot(k ^ l, i ^ j))


def _p2_cost(n: int) -> tuple[Message, Message, dict]:
    lg = _log2(n)
    return Message(bits=3 * lg + 1), Message(bits=lg), {"epr_pairs": lg}


def p2_entangled(inp: P2Input, rng: np.random.Generator) -> Transcript:
    """Sample one run: edge measurement, Hadamards on all qubits, basis measurement."""
    n = inp.n
    psi = _p2_state(inp)
    supports = [_edge_support(n, i, j) for i, j in inp.matching]
    e, post = psi.measure_projectors(supports, rng)
    kl = post.hadamard_all().measure(rng)
    k, l = divmod(kl, n)
    out = _p2_output(inp, e, k, l)
    i, j = inp.matching[e]
    if gf2_dot(k ^ l, i ^ j) != inp.y[i] ^ inp.y[j]:
        raise AssertionError("inner-product identity violated")
    alice, bob, shared = _p2_cost(n)
    alice.payload, bob.payload = (i, j, int(inp.edge_bits[e]), k), l
    return Transcript("p2_ent", alice, bob, out, validate_p2(inp, out), shared=shared)


def p2_entangled_exact(inp: P2Input, tol: float = 1e-15) -> dict[tuple, float]:
    """Full distribution of referee outputs, enumerating every ``(edge, k, l)``."""
    n = inp.n
    psi = _p2_state(inp)
    dist: dict[tuple, float] = {}
    for e, (i, j) in enumerate(inp.matching):
        supp = _edge_support(n, i, j)
        pe = float(psi.projector_probabilities([supp])[0])
        probs = psi.collapse(supp).hadamard_all().probabilities()
        for kl in np.flatnonzero(probs > tol):
            k, l = divmod(int(kl), n)
            if gf2_dot(k ^ l, i ^ j) != inp.y[i] ^ inp.y[j]:
                raise AssertionError("inner-product identity violated")
            out = _p2_output(inp, e, k, l)
            dist[out] = dist.get(out, 0.0) + pe * float(probs[kl])
    return dist


def p2_entangled_success(inp: P2Input) -> float:
    return sum(p for out, p in p2_entangled_exact(inp).items() if validate_p2(inp, out))


# ---------------------------------------------------------------------------
# P2: sublinear-communication variant on a random subset
# ---------------------------------------------------------------------------

def edges_inside(matching, subset) -> list[int]:
    s = set(int(v) for v in subset)
    return [e for e, (i, j) in enumerate(matching) if i in s and j in s]


def non_garbage_probability(inp: P2Input, subset) -> float:
    """Exact chance that one copy lands on an edge projector: ``2 |edges| / |S|``."""
    subset = np.asarray(subset, dtype=int)
    psi = StateVector.uniform_signed(inp.n, subset, inp.y)
    supports = [list(inp.matching[e]) for e in edges_inside(inp.matching, subset)]
    return float(psi.projector_probabilities(supports).sum()) if supports else 0.0


def p2_sublinear(inp: P2Input, s_size: int, copies: int, rng: np.random.Generator,
                 subset: Sequence[int] | None = None) -> Transcript:
    n = inp.n
    if not 1 <= s_size <= n:
        raise ValueError(f"s_size must lie in [1, {n}]")
    if copies < 1:
        raise ValueError("copies must be at least 1")
    S = np.sort(rng.choice(n, size=s_size, replace=False)) if subset is None else np.asarray(subset, dtype=int)
    if S.size != s_size:
        raise ValueError("subset size disagrees with s_size")
    inside = edges_inside(inp.matching, S)
    lg = _log2(n)
    alice = Message(bits=len(inside) * (2 * lg + 1),
                    payload=[(*inp.matching[e], int(inp.edge_bits[e])) for e in inside])
    bob = Message(qubits=copies * n_qubits(n))
    shared = {"shared_random_subset": [int(v) for v in S]}
    psi = StateVector.uniform_signed(n, S, inp.y)
    supports = [list(inp.matching[e]) for e in inside]
    covered = {v for sp in supports for v in sp}
    garbage = [v for v in range(n) if v not in covered]
    for _ in range(copies):
        k, post = psi.measure_projectors(supports + [garbage], rng)
        if k == len(supports):
            continue
        i, j = supports[k]
        # measure in the |i> +- |j> basis
        plus = (post.amplitudes[i] + post.amplitudes[j]) / np.sqrt(2.0)
        p_plus = float(abs(plus) ** 2)
        par = 0 if rng.random() < p_plus else 1
        out = (i, j, int(inp.edge_bits[inside[k]]), par)
        return Transcript("p2_sub", alice, bob, out, validate_p2(inp, out), shared=shared)
    return Transcript("p2_sub", alice, bob, FAIL, False, shared=shared)


def p2_sublinear_exact(inp: P2Input, subset, copies: int) -> float:
    """Success for a fixed subset: ``1 - (1 - p_ng)^copies``."""
    return 1.0 - (1.0 - non_garbage_probability(inp, subset)) ** copies


# ---------------------------------------------------------------------------
# success estimation
# ---------------------------------------------------------------------------

EXACT: dict[Callable, Callable] = {
    p1_pub_protocol: p1_pub_exact,
    p1_private_sqrt: p1_private_sqrt_exact,
    p2_entangled: lambda inp: p2_entangled_success(inp),
}


def estimate_success(protocol: Callable, inputs, trials: int, rng: np.random.Generator,
                     exact: bool = False, **params) -> tuple[float, float]:
    """Success fraction with binomial standard error.

    ``inputs`` is a single input, a sequence of inputs (drawn uniformly) or a
    callable ``rng -> input``.  ``exact=True`` averages the enumerated success
    probability over the given inputs and returns a zero standard error.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if exact:
        if protocol not in EXACT or callable(inputs):
            raise ValueError("exact mode needs an enumerable protocol and explicit inputs")
        pool = inputs if isinstance(inputs, (list, tuple)) else [inputs]
        return float(np.mean([EXACT[protocol](inp, **params) for inp in pool])), 0.0
    wins = 0
    for _ in range(trials):
        if callable(inputs):
            inp = inputs(rng)
        elif isinstance(inputs, (list, tuple)):
            inp = inputs[int(rng.integers(len(inputs)))]
        else:
            inp = inputs
        wins += bool(protocol(inp, rng=rng, **params).valid)
    rate = wins / trials
    return rate, math.sqrt(rate * (1.0 - rate) / trials)
