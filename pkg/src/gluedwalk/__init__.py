"""Coined quantum walks on glued-tree paths.

Builds randomly glued k-ary trees, reduces their random walk to the biased
2n-path, computes the complete eigensystem of the corresponding coined walk
in closed form, and evaluates exact and empirical time-averaged position
distributions together with localization lower bounds.
"""

from .analysis import (
    BoundReport,
    TimeAveragedDist,
    bound_report,
    limit_bound,
    lower_bound,
    lower_bound_generic,
    symmetry_errors,
    time_avg_empirical,
    time_avg_spectral,
)
from .chebyshev import ChebEval, eval_monic_u, partial_sum_s, partial_sum_squares
from .gluedtree import (
    GluedTree,
    PathChain,
    build_glued_tree,
    edge_lines,
    path_transition_matrix,
    tree_walk_probabilities,
    verify_lumping,
)
from .jacobi import (
    Eigenpair,
    EigensystemError,
    JacobiSpec,
    WalkParams,
    build_j2n,
    characteristic_factors,
    det_minor_e,
    eigen_interior,
    eigen_pm1,
    eigenvector_from_minors,
    full_eigensystem,
    tridiagonal_eigenvalues,
)
from .walk import (
    ArcIndex,
    UnitaryEigenpair,
    WalkState,
    apply_coin,
    apply_shift,
    lift_eigenpairs,
    position_distribution,
    step,
)

__version__ = "0.1.0"
