"""Genuine multipartite entanglement dynamics under random-telegraph dephasing.

Evolves 3- and 4-qubit states through a local non-Markovian dephasing
channel and quantifies genuine multipartite entanglement with the
PPT-mixture SDP monotone.
"""

from .channel import (DephasingParams, KrausChannel, evolve_analytic,
                      evolve_kraus, f_function, first_f_zero, gamma_factor,
                      lambda_factor, product_channel, single_qubit_kraus)
from .gme import (GmeResult, SolverFailure, WitnessCertificate,
                  build_ppt_mixture_sdp, enumerate_bipartitions,
                  genuine_negativity, ghz_criterion_value, is_ppt)
from .scan import (ScanConfig, ScanResult, Series, e_curve, emit_csv,
                   emit_f_curve, emit_svg, ensemble_mean, run_scan)
from .sdp import (SdpBlock, SdpProblem, SdpSolution, SdpStatus,
                  embed_hermitian, solve)
from .states import (RandomStream, WeightedGraph, ghz, haar_random,
                     named_four_qubit, random_weighted_graph, w,
                     weighted_graph_state)
from .tensor import (Bipartition, DensityMatrix, PureState,
                     hermitian_eigenvalues, hermitian_eigensystem, kron,
                     negativity, partial_transpose)

__version__ = "0.1.0"
