"""Constructors for the benchmark states and seedable random ensembles.

Named families: GHZ_N and W_N for 2..6 qubits, plus the four-qubit
Dicke, singlet, cluster and chi states.  Random families: Haar-random
pure states (complex Gaussian vector, normalized) and weighted graph
states (uniform pairwise phases on the complete graph).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .tensor import PureState

FOUR_QUBIT_TAGS = ("dicke24", "singlet4", "cluster4", "chi4")


@dataclass(frozen=True)
class RandomStream:
    """Deterministic random source: PCG64 seeded through SeedSequence.

    The same ``seed`` (and ``spawn_key``) produces the identical draw
    sequence on every platform and run.  `child` derives independent
    streams for ensemble members; a stream is split, never shared,
    across parallel work.
    """

    seed: int
    spawn_key: tuple[int, ...] = ()

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this stream."""
        return np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.spawn_key))
        )

    def child(self, index: int) -> "RandomStream":
        return RandomStream(self.seed, self.spawn_key + (index,))


@dataclass(frozen=True)
class WeightedGraph:
    """Complete-graph interaction phases phi_kl in [0, 2 pi], k < l."""

    n_qubits: int
    phases: np.ndarray

    def __post_init__(self):
        n = self.n_qubits
        ph = np.asarray(self.phases, dtype=float)
        if ph.shape != (n * (n - 1) // 2,):
            raise ValueError(f"expected {n * (n - 1) // 2} phases, got {ph.shape}")
        if np.any(ph < 0) or np.any(ph > 2 * np.pi):
            raise ValueError("phases must lie in [0, 2 pi]")
        ph.flags.writeable = False
        object.__setattr__(self, "phases", ph)

    def phase_of(self, k: int, l: int) -> float:
        """phi_kl for an ordered pair k < l."""
        if not 0 <= k < l < self.n_qubits:
            raise ValueError("need 0 <= k < l < n_qubits")
        pairs = list(itertools.combinations(range(self.n_qubits), 2))
        return float(self.phases[pairs.index((k, l))])


def _check_n(n: int):
    if not 2 <= n <= 6:
        raise ValueError("n must be in 2..6")


def ghz(n: int) -> PureState:
    """(|00...0> + |11...1>)/sqrt(2)."""
    _check_n(n)
    v = np.zeros(2 ** n, dtype=complex)
    v[0] = v[-1] = 1.0 / math.sqrt(2.0)
    return PureState(n, v)


def w(n: int) -> PureState:
    """Uniform superposition of the n single-excitation basis states."""
    _check_n(n)
    v = np.zeros(2 ** n, dtype=complex)
    for q in range(n):
        v[1 << q] = 1.0 / math.sqrt(n)
    return PureState(n, v)


def named_four_qubit(which: str) -> PureState:
    """One of the four-qubit benchmark states: dicke24, singlet4, cluster4, chi4."""
    v = np.zeros(16, dtype=complex)
    if which == "dicke24":
        for idx in (0b0011, 0b1100, 0b0101, 0b0110, 0b1001, 0b1010):
            v[idx] = 1.0
        v /= math.sqrt(6.0)
    elif which == "singlet4":
        v[0b0011] = v[0b1100] = 1.0
        for idx in (0b0101, 0b0110, 0b1001, 0b1010):
            v[idx] = -0.5
        v /= math.sqrt(3.0)
    elif which == "cluster4":
        v[0b0000] = v[0b0011] = v[0b1100] = 0.5
        v[0b1111] = -0.5
    elif which == "chi4":
        v[0b1111] = math.sqrt(2.0)
        for idx in (0b0001, 0b0010, 0b0100, 0b1000):
            v[idx] = 1.0
        v /= math.sqrt(6.0)
    else:
        raise ValueError(f"unknown four-qubit state tag: {which!r}")
    return PureState(4, v)


def haar_random(n: int, stream: RandomStream) -> PureState:
    """Haar-random pure state in the global 2^n-dimensional Hilbert space.

    Real and imaginary parts are i.i.d. standard normals (drawn as one
    (2, 2^n) block: row 0 real, row 1 imaginary), then the vector is
    normalized.
    """
    _check_n(n)
    z = stream.generator().standard_normal((2, 2 ** n))
    v = z[0] + 1j * z[1]
    return PureState(n, v / np.linalg.norm(v))


def weighted_graph_state(g: WeightedGraph) -> PureState:
    """Apply the commuting pair interactions exp(-i phi |11><11|) to |+>^n.

    All unitaries are diagonal, so the amplitude of basis string b is
    2^(-n/2) exp(-i sum_{k<l} phi_kl b_k b_l); every magnitude is equal.
    """
    n = g.n_qubits
    dim = 2 ** n
    # bit q of qubit k for basis index i: (i >> (n-1-k)) & 1
    idx = np.arange(dim)
    bits = [(idx >> (n - 1 - k)) & 1 for k in range(n)]
    theta = np.zeros(dim)
    for p, (k, l) in enumerate(itertools.combinations(range(n), 2)):
        theta -= g.phases[p] * bits[k] * bits[l]
    v = np.exp(1j * theta) / math.sqrt(dim)
    return PureState(n, v)


def random_weighted_graph(n: int, stream: RandomStream) -> WeightedGraph:
    """Complete graph on n qubits with i.i.d. uniform phases in [0, 2 pi]."""
    _check_n(n)
    phases = stream.generator().uniform(0.0, 2.0 * np.pi, n * (n - 1) // 2)
    return WeightedGraph(n, phases)
