"""Genuine multipartite negativity via the PPT-mixture semidefinite program.

A state that cannot be written as a mixture of states each PPT across
some bipartition is genuinely multipartite entangled.  The measure
E(rho) is the absolute value of min Tr(W rho) over operators W that
decompose as W = P_M + Q_M^{T_M} with 0 <= P_M, Q_M <= I for every
bipartition M.  E is an entanglement monotone, reduces to negativity
for two parties, and is bounded by 1/2 for qubit systems.

E = 0 is one-sided: it does NOT certify separability, since some
genuinely entangled states are PPT mixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .sdp import (Lmi, LmiTerm, SdpBlock, SdpProblem, SdpSolution, SdpStatus,
                  solve)
from .tensor import (Bipartition, DensityMatrix, hermitian_eigenvalues,
                     negativity, partial_transpose, transpose_qubits)

PPT_TOL = 1e-9
E_CLAMP = 1e-9
MAX_STANDARD_QUBITS = 4


class SolverFailure(RuntimeError):
    """Raised when the SDP could not be certified optimal."""

    def __init__(self, solution: SdpSolution):
        super().__init__(
            f"SDP solve failed: status={solution.status.value}, "
            f"diagnostics={solution.diagnostics}"
        )
        self.solution = solution


@dataclass(frozen=True)
class WitnessCertificate:
    """Optimal witness with its per-bipartition decomposition.

    For every bipartition M the stored pair satisfies
    W = P_M + Q_M^{T_M} with 0 <= P_M, Q_M <= I (up to solver
    tolerance), and ``value`` equals Tr(W rho) for the input state.
    """

    witness: np.ndarray
    decompositions: dict[Bipartition, tuple[np.ndarray, np.ndarray]]
    value: float


@dataclass(frozen=True)
class GmeResult:
    """E = max(0, -raw_minimum); E <= 1/2 for qubit systems."""

    E: float
    raw_minimum: float
    certificate: WitnessCertificate
    diagnostics: dict


def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """All 2^(n-1) - 1 canonical bipartitions, ascending by subset mask."""
    if not 2 <= n <= 6:
        raise ValueError("n must be in 2..6")
    return [Bipartition(n, m) for m in range(2, 2 ** n - 1, 2)]


def build_ppt_mixture_sdp(rho: DensityMatrix) -> SdpProblem:
    """Assemble min Tr(W rho) over common decomposable witnesses.

    One Hermitian block per bipartition holds Q_M; the witness W is a
    shared free block and P_M = W - Q_M^{T_M} is kept implicit through
    the paired inequalities 0 <= W - Q_M^{T_M} <= I.  When rho is
    exactly real the whole program is posed over real symmetric blocks,
    which is lossless (the feasible set is closed under complex
    conjugation) and much faster.
    """
    n = rho.n_qubits
    dim = rho.dim
    cx = not rho.is_real()
    parts = enumerate_bipartitions(n)

    blocks = [SdpBlock("W", dim, complex_field=cx, psd=False)]
    bounds = {}
    lmis = []
    eye = np.eye(dim)
    for part in parts:
        qname = f"Q{part.subset_mask}"
        blocks.append(SdpBlock(qname, dim, complex_field=cx))
        bounds[qname] = eye
        pt = partial(transpose_qubits, mask=part.subset_mask, n_qubits=n)
        lmis.append(Lmi(dim, (LmiTerm("W", 1.0), LmiTerm(qname, -1.0, pt)),
                        complex_field=cx))
        lmis.append(Lmi(dim, (LmiTerm("W", -1.0), LmiTerm(qname, 1.0, pt)),
                        constant=eye, complex_field=cx))

    objective = {"W": rho.matrix if cx else rho.matrix.real}
    return SdpProblem(
        blocks=tuple(blocks),
        objective=objective,
        bounds=bounds,
        lmis=tuple(lmis),
        cache_key=f"ppt-mixture-{'c' if cx else 'r'}{n}",
    )


def _trivial_result(rho: DensityMatrix, parts, diagnostics) -> GmeResult:
    dim = rho.dim
    zero = np.zeros((dim, dim))
    cert = WitnessCertificate(
        witness=zero,
        decompositions={p: (zero, zero) for p in parts},
        value=0.0,
    )
    return GmeResult(0.0, 0.0, cert, diagnostics)


def genuine_negativity(rho: DensityMatrix, allow_large: bool = False) -> GmeResult:
    """Compute E(rho) with a witness certificate.

    Supports 2..4 qubits; 5 and 6 qubit programs assemble and solve the
    same way but are untested against reference values, so they sit
    behind ``allow_large``.  When every bipartite negativity is below
    1e-9 the optimum is pinned to [-1e-9, 0] (the single-cut relaxation
    bounds it), so E = 0 is returned with the trivial witness and no
    SDP is run.
    """
    n = rho.n_qubits
    if n < 2 or n > MAX_STANDARD_QUBITS and not allow_large:
        raise ValueError(f"genuine_negativity supports 2..{MAX_STANDARD_QUBITS} qubits"
                         " (pass allow_large=True for 5-6)")
    parts = enumerate_bipartitions(n)

    cut_bound = min(negativity(rho, p) for p in parts)
    if cut_bound < E_CLAMP:
        return _trivial_result(rho, parts, {"shortcut": "ppt-bound",
                                            "cut_bound": cut_bound})

    problem = build_ppt_mixture_sdp(rho)
    sol = solve(problem)
    if sol.status is not SdpStatus.OPTIMAL:
        raise SolverFailure(sol)

    w_mat = sol.primal_blocks["W"]
    decomps = {}
    for part in parts:
        q = sol.primal_blocks[f"Q{part.subset_mask}"]
        p_mat = w_mat - transpose_qubits(q, part.subset_mask, n)
        decomps[part] = (p_mat, q)

    raw = sol.objective_value
    e_val = 0.0 if raw > -E_CLAMP else -raw
    cert = WitnessCertificate(witness=w_mat, decompositions=decomps, value=raw)
    diagnostics = dict(sol.diagnostics)
    diagnostics.update(duality_gap=sol.duality_gap,
                       max_violation=sol.max_violation,
                       iterations=sol.iterations)
    return GmeResult(e_val, raw, cert, diagnostics)


def ghz_criterion_value(rho: DensityMatrix) -> float:
    """GHZ-diagonal entanglement criterion for three qubits.

    Returns |rho(000,111)| - sum of the three geometric means of the
    paired middle populations; a positive value certifies genuine
    entanglement, and for GHZ-diagonal states positivity is necessary
    and sufficient.  For a dephased GHZ state the value is |gamma|^3/2.
    """
    if rho.n_qubits != 3:
        raise ValueError("GHZ criterion is defined for exactly 3 qubits")
    m = rho.matrix
    d = np.maximum(np.diag(m).real, 0.0)
    return float(abs(m[0, 7]) - (np.sqrt(d[1] * d[6]) + np.sqrt(d[2] * d[5])
                                 + np.sqrt(d[3] * d[4])))


def is_ppt(rho: DensityMatrix, part: Bipartition) -> bool:
    """True when the partial transpose has no eigenvalue below -1e-9."""
    return bool(hermitian_eigenvalues(partial_transpose(rho, part))[0] >= -PPT_TOL)
