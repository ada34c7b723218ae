"""Max-plus matrix analysis: spectral data, periodic powers and attraction cones."""

from .attraction import (AttractionSystem, Chain, CoveringProblem, Side, algorithm1,
                         algorithm1_state, attraction_system, chain_cancel, covering_problem,
                         extremals, nearly_minimal_coverings, render_system, unscale)
from .cyclic import CyclicClasses, balcer_veinott, cyclic_classes
from .errors import *  # noqa: F401,F403
from .io import load_matrix, load_vector, parse_matrix, parse_vector, write_matrix, write_vector
from .periodic import (PeriodicPowerEngine, attraction_member, core_matrix, csr,
                       csr_reconstruct, orbit_period, periodic_power, reduced_power,
                       transient_oracle)
from .semiring import EPS, NEG_INF, identity, mp_matmul, mp_matvec, mp_power, to_maxplus, to_maxtimes
from .spectral import (SpectralData, VisualizedMatrix, critical_graph, definite_form,
                       eigencone_basis, is_irreducible, is_visualized, kleene_star,
                       max_cycle_mean, spectral_projector, subeigencone_basis, visualize)

__version__ = "0.1.0"
