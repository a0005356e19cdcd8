from .univariate import gcd_univariate, rational_roots_of, squarefree_part
from .resultant import principal_subresultant_coefficient, resultant
from .elimination import rational_zeros
from .fibers import a_membership, in_image, solve_fiber
from .imagedyn import (
    classify,
    coimage_candidates,
    injectivity_witness_search,
    iterate_map,
    low_height_points,
    sample_image_coverage,
    stabilization_report,
)
from .setdyn import (
    CofiniteSelfMap,
    apply,
    backward_orbit,
    depth,
    e_set,
    in_e_infinity,
    is_stable,
    lemma1_witness,
    preimages,
    random_cofinite_map,
    truncation_oracle,
)

__all__ = [
    "gcd_univariate",
    "squarefree_part",
    "rational_roots_of",
    "resultant",
    "principal_subresultant_coefficient",
    "rational_zeros",
    "solve_fiber",
    "in_image",
    "a_membership",
    "iterate_map",
    "classify",
    "coimage_candidates",
    "stabilization_report",
    "injectivity_witness_search",
    "low_height_points",
    "sample_image_coverage",
    "CofiniteSelfMap",
    "apply",
    "preimages",
    "depth",
    "in_e_infinity",
    "e_set",
    "is_stable",
    "backward_orbit",
    "lemma1_witness",
    "truncation_oracle",
    "random_cofinite_map",
]
