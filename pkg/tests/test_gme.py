"""Genuine multipartite negativity: program assembly, values, certificates."""

import math

import numpy as np
import pytest

from gmedyn import (Bipartition, DensityMatrix, DephasingParams, PureState,
                    SolverFailure, build_ppt_mixture_sdp, enumerate_bipartitions,
                    evolve_analytic, first_f_zero, genuine_negativity, ghz,
                    ghz_criterion_value, is_ppt, kron, negativity, w)
from gmedyn.sdp import SdpSolution, SdpStatus
from gmedyn.states import RandomStream, haar_random
from gmedyn.tensor import hermitian_eigenvalues, transpose_qubits

from conftest import random_pure_vector, random_unitary


class TestEnumerateBipartitions:
    def test_counts(self):
        assert len(enumerate_bipartitions(2)) == 1
        assert len(enumerate_bipartitions(3)) == 3
        assert len(enumerate_bipartitions(4)) == 7

    def test_three_qubit_cuts_are_the_named_three(self):
        labels = {str(p) for p in enumerate_bipartitions(3)}
        assert labels == {"B|AC", "C|AB", "BC|A"}

    def test_order_deterministic(self):
        a = enumerate_bipartitions(4)
        b = enumerate_bipartitions(4)
        assert a == b
        masks = [p.subset_mask for p in a]
        assert masks == sorted(masks)

    def test_range_check(self):
        with pytest.raises(ValueError):
            enumerate_bipartitions(1)
        with pytest.raises(ValueError):
            enumerate_bipartitions(7)


class TestProblemAssembly:
    def test_three_qubit_structure(self):
        problem = build_ppt_mixture_sdp(ghz(3).density())
        names = [b.name for b in problem.blocks]
        # one shared witness block plus one Q block per bipartition
        assert names[0] == "W"
        assert len(names) == 4
        assert len(problem.lmis) == 6  # paired 0 <= W - Q^T <= I inequalities
        assert set(problem.bounds) == set(names[1:])

    def test_field_follows_state_realness(self, rng):
        assert not any(b.complex_field
                       for b in build_ppt_mixture_sdp(ghz(3).density()).blocks)
        psi = PureState(3, random_pure_vector(8, rng))
        assert all(b.complex_field
                   for b in build_ppt_mixture_sdp(psi.density()).blocks)

    def test_two_qubit_reduction_single_cut(self):
        problem = build_ppt_mixture_sdp(ghz(2).density())
        assert len(problem.blocks) == 2  # W plus one Q


class TestKnownValues:
    def test_ghz3(self):
        assert genuine_negativity(ghz(3).density()).E == pytest.approx(0.5, abs=1e-6)

    def test_w3(self):
        assert genuine_negativity(w(3).density()).E == pytest.approx(
            0.4428090416, abs=1e-6
        )

    def test_product_state_zero(self):
        rho = PureState(3, np.eye(8)[0].astype(complex)).density()
        result = genuine_negativity(rho)
        assert result.E == 0.0
        # every single-cut negativity vanishes, so no SDP was needed
        assert result.diagnostics.get("shortcut") == "ppt-bound"

    def test_two_qubit_equals_negativity(self, rng):
        from conftest import random_density

        cut = Bipartition(2, 0b10)
        for _ in range(8):
            rho = random_density(2, rng)
            assert genuine_negativity(rho).E == pytest.approx(
                negativity(rho, cut), abs=1e-5
            )

    def test_biseparable_mixture_zero(self, rng):
        # mix of states separable across different cuts stays a PPT
        # mixture, so the minimum cannot be negative
        def product_across_first_qubit():
            a = random_pure_vector(2, rng)
            bc = random_pure_vector(4, rng)
            return np.kron(a, bc)

        def product_across_last_qubit():
            ab = random_pure_vector(4, rng)
            c = random_pure_vector(2, rng)
            return np.kron(ab, c)

        v1, v2 = product_across_first_qubit(), product_across_last_qubit()
        m = 0.5 * np.outer(v1, v1.conj()) + 0.5 * np.outer(v2, v2.conj())
        rho = DensityMatrix(3, (m + m.conj().T) / 2)
        assert genuine_negativity(rho).E <= 1e-6

    def test_upper_bound_half(self, rng):
        for i in range(3):
            rho = haar_random(3, RandomStream(60).child(i)).density()
            assert genuine_negativity(rho).E <= 0.5 + 1e-6

    def test_local_unitary_invariance(self, rng):
        rho = w(3).density()
        base = genuine_negativity(rho).E
        u = kron(kron(random_unitary(2, rng), random_unitary(2, rng)),
                 random_unitary(2, rng))
        rotated = DensityMatrix(3, u @ rho.matrix @ u.conj().T)
        assert genuine_negativity(rotated).E == pytest.approx(base, abs=1e-5)

    def test_convexity_spot_check(self):
        rho1 = ghz(3).density()
        rho2 = haar_random(3, RandomStream(77)).density()
        lam = 0.3
        mix = DensityMatrix(3, lam * rho1.matrix + (1 - lam) * rho2.matrix)
        e1 = genuine_negativity(rho1).E
        e2 = genuine_negativity(rho2).E
        assert genuine_negativity(mix).E <= lam * e1 + (1 - lam) * e2 + 1e-6

    def test_size_guard(self):
        with pytest.raises(ValueError, match="allow_large"):
            genuine_negativity(ghz(5).density())


class TestCertificates:
    def test_witness_decomposition_sound(self):
        rho = w(3).density()
        result = genuine_negativity(rho)
        cert = result.certificate
        assert cert.value == pytest.approx(result.raw_minimum, abs=1e-12)
        # recompute Tr(W rho) independently
        assert np.trace(cert.witness @ rho.matrix).real == pytest.approx(
            result.raw_minimum, abs=1e-8
        )
        for part, (p_mat, q_mat) in cert.decompositions.items():
            recomposed = p_mat + transpose_qubits(q_mat, part.subset_mask, 3)
            assert np.max(np.abs(cert.witness - recomposed)) <= 1e-7
            for block in (p_mat, q_mat):
                vals = hermitian_eigenvalues((block + block.conj().T) / 2)
                assert vals[0] >= -1e-7
                assert vals[-1] <= 1 + 1e-7

    def test_solver_failure_carries_solution(self):
        failed = SdpSolution(SdpStatus.NUMERICAL_FAILURE, {}, math.nan,
                             math.nan, math.nan, 0, {"solver_status": "x"})
        err = SolverFailure(failed)
        assert err.solution is failed
        assert "numerical-failure" in str(err)


class TestGhzCriterion:
    def test_pristine_ghz(self):
        assert ghz_criterion_value(ghz(3).density()) == pytest.approx(0.5, abs=1e-12)

    def test_maximally_mixed(self):
        rho = DensityMatrix(3, np.eye(8, dtype=complex) / 8)
        assert ghz_criterion_value(rho) == pytest.approx(-3.0 / 8.0, abs=1e-12)

    def test_zero_at_first_dephasing_node(self, std_params):
        nu_star = first_f_zero(std_params)
        rho = evolve_analytic(ghz(3).density(), std_params, nu_star)
        assert abs(ghz_criterion_value(rho)) <= 1e-12

    def test_dimension_guard(self):
        with pytest.raises(ValueError, match="3 qubits"):
            ghz_criterion_value(ghz(4).density())


class TestIsPpt:
    def test_product_state_ppt_everywhere(self):
        rho = PureState(3, np.eye(8)[5].astype(complex)).density()
        assert all(is_ppt(rho, p) for p in enumerate_bipartitions(3))

    def test_ghz_npt_everywhere(self):
        rho = ghz(3).density()
        assert not any(is_ppt(rho, p) for p in enumerate_bipartitions(3))

    def test_maximally_mixed_ppt(self):
        rho = DensityMatrix(3, np.eye(8, dtype=complex) / 8)
        assert all(is_ppt(rho, p) for p in enumerate_bipartitions(3))
