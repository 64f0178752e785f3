"""Nonsymmetric dependence measures for discrete random variables."""

from .bivariate import (
    ConvexPhi,
    MeasureReport,
    bhm_distance,
    linfoot_coefficient,
    limit_measure,
    mutual_information,
    permutation_pvalue,
    phi_measure,
    renyi_alpha,
    renyi_upper,
    tau_max_squared,
    tau_squared,
    tsallis_alpha,
)
from .conditional import TripleTable, tau_conditional, tau_conditional_squared
from .markov import MarkovChain3, TransitionMatrix, check_dpi, compose, joint_from_chain, transition_from_joint
from .model import (
    CondCdf,
    DiscreteSupport,
    JointTable,
    MultiTable,
    ProbVector,
    conditional_cdf,
    from_counts,
    from_samples,
    multi_conditional_cdf,
)
from .multivariate import (
    GroupChain,
    check_dpi_mv,
    compose_mv,
    limit_mv,
    phi_mv,
    renyi_mv,
    tau_max_mv,
    tau_squared_mv,
    tsallis_mv,
)

__version__ = "0.1.0"
