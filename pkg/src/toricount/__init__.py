"""toricount: M-points of bounded height on split smooth toric varieties.

Given a fan, a multiplicity set, a big and nef divisor class and a level,
the library computes the Fujita invariant, the b-invariant, the rigid
subpair and its alpha-constant, the local densities and their Euler
product, both branches of the archimedean constant, and the predicted
leading constant of the point count; an enumeration engine verifies the
prediction by brute force.
"""

from .config import JobConfig, load_config, parse_config, serialize_config
from .constants import (
    ConstantReport,
    DensityModel,
    c_inf_adjoint_rigid,
    c_inf_general,
    density_model,
    euler_product,
    leading_constant,
    local_factor_F,
    volume_DB_estimate,
    zeta_series,
)
from .counting import (
    CountReport,
    compare_prediction,
    count_points,
    count_points_schedule,
    height_of_tuple,
    oracle_count,
    oracle_count_schedule,
)
from .fan import (
    Fan,
    HeightSystem,
    cartier_data,
    cox_monomial_hat,
    height_system,
    is_big_given_nef,
    is_nef,
    make_fan,
    phi,
    refine_fan,
    validate_fan,
)
from .invariants import InvariantReport, invariant_report
from .lp import LPProblem, LPSolution, lp_max_over_optimal_face, lp_optimize, make_lp
from .multiplicity import (
    MultiplicitySet,
    campana,
    contains,
    custom,
    darmon,
    full_set,
    generators,
    integral,
    minimal_reduced_elements,
    reduced_contains,
    weak_campana,
)
from .pairs import (
    PairPicard,
    ToricPair,
    anticanonical,
    make_pair,
    pair_picard,
    pullback,
    quasi_proper_closure,
)
from .presets import preset
from .ratlin import SmithDecomposition, smith_normal_form

__version__ = "0.1.0"
