"""Supersymmetric partners of the harmonic oscillator: potentials, ladder
algebra, nonlinear coherent states, evolution loops and geometric phases."""

from .specfun import SeriesResult, hyper_0fq, kummer_1f1, kummer_1f1_dy, log_gamma
from .seed import SeedEval, SeedSpec, alpha1, eval_seed
from .susychain import (
    Grid,
    PotentialTable,
    RiccatiChain,
    SusyChain,
    apply_intertwiner,
    potential_wronskian,
    riccati_chain,
    wronskian_table,
)
from .basis import SpectrumDescriptor, StateVector
from .algebra import LadderPolynomials, build_polynomials, ladder_action
from .states import CoherentState, coherent_state, eigenvalue_residual, energy_expectation
from .loops import (
    LoopReport,
    PhaseResult,
    detect_loops,
    evolve,
    geometric_phase_coherent,
    geometric_phase_state,
)
from .numverify import DiscretizedHamiltonian, discretize, loop_residual, low_eigenvalues, spectrum_report

__version__ = "0.1.0"
