"""Tree energy via the Coulson integral and via eigenvalues, and the
maximal-energy comparison between the two-branching-vertex trees Ta and Tb."""

from ._backend import BACKEND
from .comparator import (
    BoundCertificate,
    CoefficientQuadruple,
    CrossCheckError,
    IndecisiveVerdictError,
    Verdict,
    analytic_bounds,
    difference_identity_check,
    energy_difference,
    family_identity_check,
    log_inequality_check,
    maximal_tree,
    parity_threshold,
    table1_entry,
)
from .energy import EnergyResult, energy_coulson, energy_eigen, tree_energy
from .polynomials import MatchingPolynomial, matching_polynomial, path_mplus, path_ratio
from .quadrature import QuadratureConfig
from .trees import (
    FamilyParams,
    Tree,
    build_path,
    build_star,
    build_Ta,
    build_Tb,
    build_Tc,
    enumerate_constrained_trees,
    read_edgelist,
)
from .verify import SuiteReport, run_suite, verify_theorem_1_1

__version__ = "0.1.0"
