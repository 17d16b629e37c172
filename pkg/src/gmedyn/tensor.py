"""Dense linear algebra for small multi-qubit systems.

Convention used throughout the package: qubit 0 is the most significant
bit of the computational-basis index, so for three qubits the basis
ordering is |000>, |001>, ..., |111> with qubit A first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True)
class PureState:
    """Normalized state vector of ``n_qubits`` qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2 ** self.n_qubits,):
            raise ValueError(
                f"expected {2 ** self.n_qubits} amplitudes, got {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state vector not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def density(self) -> "DensityMatrix":
        """Rank-1 projector |psi><psi|."""
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace-1, positive-semidefinite matrix over ``n_qubits``."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        m = np.asarray(self.matrix, dtype=complex)
        d = 2 ** self.n_qubits
        if m.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix, got {m.shape}")
        herm_dev = np.max(np.abs(m - m.conj().T))
        if herm_dev > HERMITICITY_TOL:
            raise ValueError(f"matrix not Hermitian: max deviation {herm_dev:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {tr}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise ValueError(f"matrix not PSD: min eigenvalue {lo:.3e}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    def is_real(self) -> bool:
        """True when every entry has exactly zero imaginary part."""
        return bool(np.all(self.matrix.imag == 0.0))


@dataclass(frozen=True)
class Bipartition:
    """One side of a bipartite cut of the qubits, as a bit mask.

    Bit ``q`` of ``subset_mask`` selects qubit ``q``.  The stored mask is
    canonical: qubit 0 always sits on the complement side (bit 0 of the
    mask is clear), so each {M, complement} pair has a single
    representative.  Construction canonicalizes automatically.
    """

    n_qubits: int
    subset_mask: int

    def __post_init__(self):
        full = (1 << self.n_qubits) - 1
        mask = self.subset_mask
        if mask <= 0 or mask >= full:
            raise ValueError("subset must be nonempty and proper")
        if mask & 1:
            mask = full ^ mask
        object.__setattr__(self, "subset_mask", mask)

    @property
    def complement_mask(self) -> int:
        return ((1 << self.n_qubits) - 1) ^ self.subset_mask

    def qubits(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if self.subset_mask >> q & 1)

    def __str__(self):
        names = "ABCDEF"
        side = "".join(names[q] for q in self.qubits())
        other = "".join(names[q] for q in range(self.n_qubits) if not self.subset_mask >> q & 1)
        return f"{side}|{other}"


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("kron expects square matrices")
    return np.kron(a, b)


def transpose_qubits(mat: np.ndarray, mask: int, n_qubits: int) -> np.ndarray:
    """Partially transpose a 2^n x 2^n matrix over the qubits in ``mask``.

    Works on raw arrays; `partial_transpose` is the validated front-end.
    """
    t = mat.reshape([2] * (2 * n_qubits))
    for q in range(n_qubits):
        if mask >> q & 1:
            t = np.swapaxes(t, q, n_qubits + q)
    return np.ascontiguousarray(t.reshape(mat.shape))


def partial_transpose(rho: DensityMatrix, part: Bipartition) -> np.ndarray:
    """Partial transpose of ``rho`` over the qubits in ``part``.

    Hermitian and trace preserving; applying it twice is the identity.
    """
    if part.n_qubits != rho.n_qubits:
        raise ValueError(
            f"bipartition is over {part.n_qubits} qubits, state has {rho.n_qubits}"
        )
    return transpose_qubits(rho.matrix, part.subset_mask, rho.n_qubits)


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending."""
    h = np.asarray(h)
    dev = np.max(np.abs(h - h.conj().T))
    if dev > 1e-10:
        raise ValueError(f"matrix not Hermitian: max deviation {dev:.3e}")
    return np.linalg.eigvalsh(h)


def hermitian_eigensystem(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix."""
    h = np.asarray(h)
    dev = np.max(np.abs(h - h.conj().T))
    if dev > 1e-10:
        raise ValueError(f"matrix not Hermitian: max deviation {dev:.3e}")
    return np.linalg.eigh(h)


def negativity(rho: DensityMatrix, part: Bipartition) -> float:
    """Absolute sum of negative eigenvalues of the partial transpose.

    Zero for every state that is PPT across the cut, in particular for
    all product states.
    """
    vals = hermitian_eigenvalues(partial_transpose(rho, part))
    return float(-vals[vals < 0].sum())
