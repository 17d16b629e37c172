"""Dense block semidefinite programming on top of the Clarabel solver.

Problems are stated over named matrix blocks, each either real
symmetric or complex Hermitian.  Complex blocks are handled through the
standard real embedding [[Re, -Im], [Im, Re]], which maps Hermitian PSD
matrices to symmetric PSD ones; the embedding never leaks into the
caller-facing matrices.

Supported constraints: implicit X >= 0 per block (opt-out per block),
upper bounds X <= U, scalar linear equalities, and affine linear matrix
inequalities coupling several blocks (used for shared-witness
decompositions).  A solve returns primal matrices together with a
duality-gap and feasibility certificate; `optimal` status is only
reported when the certificate passes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
import clarabel

GAP_TOL = 1e-7
VIOLATION_TOL = 1e-8
EIG_TOL = 1e-8

_SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# svec / embedding helpers (Clarabel scaled-triangle convention)

def _tri_indices(d: int) -> tuple[np.ndarray, np.ndarray]:
    # column-major upper triangle: (0,0), (0,1), (1,1), (0,2), ...
    r, c = np.tril_indices(d)
    return c, r


def svec(s: np.ndarray) -> np.ndarray:
    """Scaled upper-triangle vectorization; <svec(A), svec(B)> = Tr(A B)."""
    d = s.shape[0]
    i, j = _tri_indices(d)
    w = np.where(i == j, 1.0, _SQRT2)
    return np.asarray(s)[i, j] * w


def smat(x: np.ndarray, d: int) -> np.ndarray:
    """Inverse of `svec`."""
    i, j = _tri_indices(d)
    w = np.where(i == j, 1.0, 1.0 / _SQRT2)
    out = np.zeros((d, d))
    out[i, j] = x * w
    out[j, i] = out[i, j]
    return out


def svec_len(d: int) -> int:
    return d * (d + 1) // 2


def embed_hermitian(h: np.ndarray) -> np.ndarray:
    """Real symmetric 2d x 2d embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix.

    Eigenvalues are those of the input with doubled multiplicity, and
    the map is a matrix-algebra homomorphism, so PSD-ness is preserved
    both ways.
    """
    h = np.asarray(h)
    dev = np.max(np.abs(h - h.conj().T))
    if dev > 1e-10:
        raise ValueError(f"matrix not Hermitian: max deviation {dev:.3e}")
    re, im = h.real, h.imag
    return np.block([[re, -im], [im, re]])


def _herm_basis_element(d: int, k: int) -> np.ndarray:
    """k-th element of the Hermitian coordinate basis used for complex blocks.

    Order: d diagonal units E_ii, then for each pair i<j (row-major) the
    real unit E_ij + E_ji followed by the imaginary unit i(E_ij - E_ji).
    Coordinates of X in this basis are X_ii, Re X_ij, Im X_ij.
    """
    b = np.zeros((d, d), dtype=complex)
    if k < d:
        b[k, k] = 1.0
        return b
    k -= d
    pair, kind = divmod(k, 2)
    # pair index -> (i, j), i < j, row-major
    i = 0
    cnt = d - 1
    while pair >= cnt:
        pair -= cnt
        i += 1
        cnt -= 1
    j = i + 1 + pair
    if kind == 0:
        b[i, j] = 1.0
        b[j, i] = 1.0
    else:
        b[i, j] = 1.0j
        b[j, i] = -1.0j
    return b


def _herm_coords(h: np.ndarray) -> np.ndarray:
    """Coordinates of a Hermitian matrix in the basis of `_herm_basis_element`."""
    d = h.shape[0]
    i, j = np.triu_indices(d, k=1)
    out = np.empty(d * d)
    out[:d] = np.diag(h).real
    out[d::2] = h[i, j].real
    out[d + 1 :: 2] = h[i, j].imag
    return out


def _herm_from_coords(x: np.ndarray, d: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=complex)
    i, j = np.triu_indices(d, k=1)
    np.fill_diagonal(out, x[:d])
    out[i, j] = x[d::2] + 1j * x[d + 1 :: 2]
    out[j, i] = out[i, j].conj()
    return out


def _objective_coords(c: np.ndarray, is_complex: bool) -> np.ndarray:
    """Gradient of X -> Re Tr(C X) in block coordinates."""
    if not is_complex:
        return svec(np.asarray(c, dtype=float))
    c = np.asarray(c, dtype=complex)
    d = c.shape[0]
    i, j = np.triu_indices(d, k=1)
    out = np.empty(d * d)
    out[:d] = np.diag(c).real
    out[d::2] = 2.0 * c[i, j].real
    out[d + 1 :: 2] = 2.0 * c[i, j].imag
    return out


# ---------------------------------------------------------------------------
# problem description


@dataclass(frozen=True)
class SdpBlock:
    """A matrix variable: real symmetric or complex Hermitian of size ``dim``.

    ``psd=False`` leaves the block unconstrained in sign (used for a
    shared witness variable whose positivity is not required).
    """

    name: str
    dim: int
    complex_field: bool = False
    psd: bool = True

    @property
    def n_coords(self) -> int:
        return self.dim * self.dim if self.complex_field else svec_len(self.dim)

    @property
    def cone_dim(self) -> int:
        return 2 * self.dim if self.complex_field else self.dim


@dataclass(frozen=True)
class LmiTerm:
    """One summand coeff * T(X_block) of an affine matrix inequality.

    ``transform`` is an optional linear, Hermiticity-preserving map on
    matrices (for example a partial transpose); None means identity.
    """

    block: str
    coeff: float = 1.0
    transform: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class Lmi:
    """constant + sum of terms >= 0 (PSD), all in the same field/dimension."""

    dim: int
    terms: tuple[LmiTerm, ...]
    constant: Optional[np.ndarray] = None
    complex_field: bool = False


@dataclass(frozen=True)
class SdpProblem:
    """Minimize sum_b Re Tr(C_b X_b) over block-PSD variables.

    ``equalities`` entries are ({block name: coefficient matrix}, rhs)
    meaning sum_b Re Tr(C_b X_b) = rhs.  ``bounds`` maps block names to
    upper bound matrices U (adds U - X >= 0).  ``cache_key``, when set,
    promises that every problem sharing the key has identical structure
    (blocks, equalities, bounds, lmis) so the assembled conic data can
    be reused; only the objective may differ.
    """

    blocks: tuple[SdpBlock, ...]
    objective: dict[str, np.ndarray]
    equalities: tuple[tuple[dict[str, np.ndarray], float], ...] = ()
    bounds: dict[str, np.ndarray] = field(default_factory=dict)
    lmis: tuple[Lmi, ...] = ()
    cache_key: Optional[str] = None

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("need at least one block")
        names = [b.name for b in self.blocks]
        if len(set(names)) != len(names):
            raise ValueError("duplicate block names")
        known = set(names)
        for source in (self.objective, self.bounds, *(eq[0] for eq in self.equalities)):
            for name in source:
                if name not in known:
                    raise ValueError(f"unknown block {name!r}")
        for _, rhs in self.equalities:
            if not math.isfinite(rhs):
                raise ValueError("equality right-hand sides must be finite")

    def block(self, name: str) -> SdpBlock:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)


class SdpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    NUMERICAL_FAILURE = "numerical-failure"


@dataclass(frozen=True)
class SdpSolution:
    status: SdpStatus
    primal_blocks: dict[str, np.ndarray]
    objective_value: float
    duality_gap: float
    max_violation: float
    iterations: int
    diagnostics: dict


# ---------------------------------------------------------------------------
# assembly


def _coords_to_cone_matrix(block: SdpBlock, transform=None, coeff=1.0,
                           out_dim=None, out_complex=None) -> sp.csc_matrix:
    """Sparse map from block coordinates to the svec of the (embedded) cone matrix."""
    out_dim = block.dim if out_dim is None else out_dim
    out_complex = block.complex_field if out_complex is None else out_complex
    cone_d = 2 * out_dim if out_complex else out_dim
    nsv = svec_len(cone_d)
    cols, rows, vals = [], [], []
    for k in range(block.n_coords):
        if block.complex_field:
            b = _herm_basis_element(block.dim, k)
        else:
            b = smat(np.eye(svec_len(block.dim))[k], block.dim)
        bt = transform(b) if transform is not None else b
        img = embed_hermitian(bt) if out_complex else np.asarray(bt, dtype=float)
        col = svec(img) * coeff
        nz = np.nonzero(col)[0]
        rows.extend(nz.tolist())
        cols.extend([k] * len(nz))
        vals.extend(col[nz].tolist())
    return sp.csc_matrix((vals, (rows, cols)), shape=(nsv, block.n_coords))


def _constant_svec(mat, dim, is_complex) -> np.ndarray:
    cone_d = 2 * dim if is_complex else dim
    if mat is None:
        return np.zeros(svec_len(cone_d))
    if is_complex:
        return svec(embed_hermitian(np.asarray(mat, dtype=complex)))
    return svec(np.asarray(mat, dtype=float))


class _Structure:
    """Assembled conic data shared by all problems with the same cache_key."""

    def __init__(self, problem: SdpProblem):
        blocks = problem.blocks
        self.offsets = {}
        off = 0
        for b in blocks:
            self.offsets[b.name] = off
            off += b.n_coords
        self.n_vars = off

        a_rows = []
        b_parts = []
        cones = []
        cone_specs = []  # (kind, payload) for post-solve certification

        # zero cone: equalities
        if problem.equalities:
            rows, cols, vals, rhs = [], [], [], []
            for r, (coeffs, bval) in enumerate(problem.equalities):
                for name, c in coeffs.items():
                    blk = problem.block(name)
                    g = _objective_coords(np.asarray(c), blk.complex_field)
                    nz = np.nonzero(g)[0]
                    rows.extend([r] * len(nz))
                    cols.extend((nz + self.offsets[name]).tolist())
                    vals.extend(g[nz].tolist())
                rhs.append(bval)
            a_rows.append(sp.csc_matrix((vals, (rows, cols)),
                                        shape=(len(rhs), self.n_vars)))
            b_parts.append(np.array(rhs))
            cones.append(clarabel.ZeroConeT(len(rhs)))

        def add_cone(mat: sp.csc_matrix, const: np.ndarray, cone_d: int, spec):
            a_rows.append(mat)
            b_parts.append(const)
            cones.append(clarabel.PSDTriangleConeT(cone_d))
            cone_specs.append(spec)

        def place(cols: dict[str, sp.csc_matrix], nrow: int) -> sp.csc_matrix:
            parts = []
            for b in blocks:
                parts.append(cols.get(b.name, sp.csc_matrix((nrow, b.n_coords))))
            return sp.hstack(parts, format="csc")

        for b in blocks:
            if not b.psd:
                continue
            e = _coords_to_cone_matrix(b)
            add_cone(place({b.name: -e}, e.shape[0]), np.zeros(e.shape[0]),
                     b.cone_dim, ("psd", b.name))
        for name, u in problem.bounds.items():
            b = problem.block(name)
            e = _coords_to_cone_matrix(b)
            add_cone(place({name: e}, e.shape[0]),
                     _constant_svec(u, b.dim, b.complex_field),
                     b.cone_dim, ("bound", name, np.asarray(u)))
        for li, lmi in enumerate(problem.lmis):
            cols = {}
            for term in lmi.terms:
                b = problem.block(term.block)
                if b.complex_field != lmi.complex_field:
                    raise ValueError("LMI terms must match the LMI field")
                m = _coords_to_cone_matrix(b, transform=term.transform,
                                           coeff=-term.coeff, out_dim=lmi.dim,
                                           out_complex=lmi.complex_field)
                cols[term.block] = cols.get(term.block, 0) + m
            nrow = svec_len(2 * lmi.dim if lmi.complex_field else lmi.dim)
            add_cone(place(cols, nrow),
                     _constant_svec(lmi.constant, lmi.dim, lmi.complex_field),
                     2 * lmi.dim if lmi.complex_field else lmi.dim,
                     ("lmi", li))

        self.A = sp.vstack(a_rows, format="csc") if a_rows else sp.csc_matrix((0, self.n_vars))
        self.b = np.concatenate(b_parts) if b_parts else np.zeros(0)
        self.cones = cones
        self.cone_specs = cone_specs
        self.n_eq = len(problem.equalities)


_STRUCTURE_CACHE: dict[str, _Structure] = {}


def _structure_for(problem: SdpProblem) -> _Structure:
    if problem.cache_key is None:
        return _Structure(problem)
    cached = _STRUCTURE_CACHE.get(problem.cache_key)
    if cached is None:
        cached = _Structure(problem)
        _STRUCTURE_CACHE[problem.cache_key] = cached
    return cached


def _extract_blocks(problem: SdpProblem, struct: _Structure, x: np.ndarray):
    out = {}
    for b in problem.blocks:
        xb = x[struct.offsets[b.name] : struct.offsets[b.name] + b.n_coords]
        if b.complex_field:
            out[b.name] = _herm_from_coords(xb, b.dim)
        else:
            out[b.name] = smat(xb, b.dim)
    return out


def _lmi_value(problem: SdpProblem, lmi: Lmi, mats: dict[str, np.ndarray]) -> np.ndarray:
    dt = complex if lmi.complex_field else float
    total = np.zeros((lmi.dim, lmi.dim), dtype=dt)
    if lmi.constant is not None:
        total = total + np.asarray(lmi.constant)
    for term in lmi.terms:
        v = mats[term.block]
        if term.transform is not None:
            v = term.transform(v)
        total = total + term.coeff * v
    return total


def _min_eig(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2.0)[0])


def solve(problem: SdpProblem) -> SdpSolution:
    """Solve the block SDP and certify the result.

    ``optimal`` is reported only when the measured duality gap is at
    most 1e-7, every equality holds within 1e-8 and every cone matrix
    has minimum eigenvalue above -1e-8; otherwise the status degrades
    to ``numerical-failure`` (with diagnostics) or ``infeasible`` when
    the solver produced an infeasibility certificate.  The solve is
    deterministic: identical problems give identical solution bits.

    A fixed ladder of static-regularization constants is attempted in
    order and the first certified solution is returned.  The complex
    embedding doubles every eigenvalue multiplicity, which leaves the
    dual degenerate and makes the interior point stall near the 1e-7
    gap with Clarabel's default regularization, so complex problems
    start with a stiffer constant.
    """
    struct = _structure_for(problem)

    q = np.zeros(struct.n_vars)
    for name, c in problem.objective.items():
        blk = problem.block(name)
        off = struct.offsets[name]
        q[off : off + blk.n_coords] = _objective_coords(np.asarray(c), blk.complex_field)

    if any(b.complex_field for b in problem.blocks):
        ladder = (1e-7, 5e-8, 3e-8, None)
    else:
        ladder = (None, 1e-7, 5e-8)

    best = None
    for reg in ladder:
        sol = _solve_once(problem, struct, q, reg)
        if sol.status is not SdpStatus.NUMERICAL_FAILURE:
            return sol
        if best is None or sol.duality_gap + sol.max_violation < \
                best.duality_gap + best.max_violation:
            best = sol
    return best


def _solve_once(problem, struct, q, reg) -> SdpSolution:
    settings = clarabel.DefaultSettings()
    settings.verbose = False
    if reg is not None:
        settings.static_regularization_constant = reg
    # normalize the objective so that positively scaled problems reduce
    # to (numerically) the same conic program; the optimum then scales
    # exactly, which the scaling-covariance contract requires
    scale = float(np.max(np.abs(q)))
    if scale == 0.0:
        scale = 1.0
    solver = clarabel.DefaultSolver(
        sp.csc_matrix((struct.n_vars, struct.n_vars)), q / scale,
        struct.A, struct.b, struct.cones, settings,
    )
    raw = solver.solve()
    raw_status = str(raw.status)

    diagnostics = {
        "solver_status": raw_status,
        "solve_time": raw.solve_time,
        "static_regularization": reg,
    }

    if raw_status in ("PrimalInfeasible", "DualInfeasible"):
        return SdpSolution(SdpStatus.INFEASIBLE, {}, math.nan, math.nan,
                           math.nan, raw.iterations, diagnostics)

    x = np.asarray(raw.x)
    z = np.asarray(raw.z) * scale  # duals of the unnormalized problem
    mats = _extract_blocks(problem, struct, x)

    primal_obj = float(q @ x)
    dual_obj = float(-struct.b @ z)
    gap = abs(primal_obj - dual_obj)

    violations = [0.0]
    if struct.n_eq:
        resid = struct.A[: struct.n_eq] @ x - struct.b[: struct.n_eq]
        violations.append(float(np.max(np.abs(resid))))
    min_eigs = {}
    for spec in struct.cone_specs:
        if spec[0] == "psd":
            lo = _min_eig(mats[spec[1]])
            min_eigs[spec[1]] = lo
        elif spec[0] == "bound":
            lo = _min_eig(spec[2] - mats[spec[1]])
        else:
            lo = _min_eig(_lmi_value(problem, problem.lmis[spec[1]], mats))
        violations.append(max(0.0, -lo))
    max_violation = max(violations)

    diagnostics["primal_objective"] = primal_obj
    diagnostics["dual_objective"] = dual_obj

    certified = (
        raw_status in ("Solved", "AlmostSolved")
        and gap <= GAP_TOL
        and max_violation <= max(VIOLATION_TOL, EIG_TOL)
        and all(lo >= -EIG_TOL for lo in min_eigs.values())
    )
    status = SdpStatus.OPTIMAL if certified else SdpStatus.NUMERICAL_FAILURE
    return SdpSolution(status, mats, primal_obj, gap, max_violation,
                       raw.iterations, diagnostics)


def dump_problem(problem: SdpProblem, path) -> None:
    """Write a plain-text dump of the problem for offline comparison.

    Format: one `block` line per variable (name, dim, field, psd flag),
    then full matrices for the objective, each equality, each bound and
    each materialized LMI column map, printed row per line with `%.17g`
    entries.
    """
    def write_matrix(fh, tag, m):
        m = np.asarray(m)
        fh.write(f"{tag} {m.shape[0]} {m.shape[1]}\n")
        for row in m:
            fh.write(" ".join(f"{v:.17g}" for v in np.ravel(row).real))
            if np.iscomplexobj(m):
                fh.write(" | " + " ".join(f"{v:.17g}" for v in np.ravel(row).imag))
            fh.write("\n")

    with open(path, "w") as fh:
        fh.write("gmedyn-sdp-dump 1\n")
        for b in problem.blocks:
            fh.write(f"block {b.name} {b.dim} "
                     f"{'complex' if b.complex_field else 'real'} "
                     f"{'psd' if b.psd else 'free'}\n")
        for name, c in problem.objective.items():
            write_matrix(fh, f"objective {name}", c)
        for i, (coeffs, rhs) in enumerate(problem.equalities):
            fh.write(f"equality {i} rhs {rhs:.17g}\n")
            for name, c in coeffs.items():
                write_matrix(fh, f"  coeff {name}", c)
        for name, u in problem.bounds.items():
            write_matrix(fh, f"bound {name}", u)
        for i, lmi in enumerate(problem.lmis):
            fh.write(f"lmi {i} dim {lmi.dim} "
                     f"{'complex' if lmi.complex_field else 'real'}\n")
            if lmi.constant is not None:
                write_matrix(fh, "  constant", lmi.constant)
            for term in lmi.terms:
                blk = problem.block(term.block)
                m = _coords_to_cone_matrix(blk, transform=term.transform,
                                           coeff=term.coeff, out_dim=lmi.dim,
                                           out_complex=lmi.complex_field)
                write_matrix(fh, f"  term {term.block}", m.toarray())
