"""Exact intersection spectra of intersecting set families."""

from .errors import BudgetError, CapacityError, ConsistencyError, ContractError, SetSpectraError
from .family import (
    GroundSpec,
    SetFamily,
    binomial,
    binomial_tail,
    canonical_form,
    enumerate_k_subsets,
    is_antichain,
    is_intersecting,
)
from .limits import Limits
from .search import (
    almost_shatters,
    branching_process,
    crossover_scan,
    exhaustive_max_spectrum,
    random_pair_family,
    spectrum_completeness,
)
from .spectrum import (
    FamilyRecipe,
    bound_f,
    build_family,
    compare_star_vs_a,
    family_a,
    family_bp,
    formula_a,
    formula_bp,
    formula_star,
    hilton_milner,
    intersection_spectrum,
    partitioned_spectrum,
    star,
)
from .transversal import (
    TransversalBasis,
    alpha,
    find_sunflower,
    full_cover_check,
    is_saturated,
    level_decomposition,
    minimal_transversals,
    saturate,
    transversals,
)

__version__ = "0.1.0"
