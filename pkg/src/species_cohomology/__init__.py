"""Cohomology of linearized set species with coefficients in the exponential species."""

from .koszul import (
    KoszulCochain,
    cochain_to_koszul,
    koszul_basis,
    koszul_cohomology,
    koszul_differential,
    koszul_dimension,
    koszul_to_cochain,
    linear_order_generator,
)
from .oracle import Cochain, coboundary, cobar_homology, coxeter_cohomology, truncated_cohomology
from .products import cup_cochain, cup_koszul, kunneth_product
from .species import (
    CustomSpecies,
    SpeciesValidationError,
    get_species,
    load_custom_species,
    orbit_table,
    relabel,
    restrict,
    structures,
    verify_bicomodule_axioms,
)
from .deformations import DeformationSeries, check_deformation, integrate

__version__ = "0.1.0"
