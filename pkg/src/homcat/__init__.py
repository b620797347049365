"""Finite category theory and simplicial homotopy, computed exactly.

Everything here is exhaustive computation over explicitly finite data:
categories carry total composition tables, simplicial sets are presented
by nondegenerate cells with the identities as the normalization engine,
and each construction is paired with an independent brute-force route in
the test-suite.
"""

from .errors import Budget, EngineError
from .fincat import (
    FinCategory,
    FinFunctor,
    Mor,
    NatTransformation,
    enumerate_functors,
    enumerate_nat_trans,
    hom_functor,
    iso_classes,
    opposite,
    product_category,
    validate_category,
    yoneda_check,
)
from .setcalc import (
    Bifunctor,
    ConeResult,
    Diagram,
    FinFunction,
    FinSetRep,
    check_kan_universal,
    coend,
    colimit,
    end,
    equalizer,
    lan,
    limit,
    product,
    pullback,
    pushout,
    ran,
)
from .simplicial import (
    CellRef,
    DeltaMap,
    SimplicialMap,
    SimplicialSet,
    boundary,
    classify,
    delta_factor,
    enumerate_maps,
    horn,
    horn_fillers,
    nerve,
    nerve_eg,
    product_sset,
    standard_simplex,
)
from .subdivision import ex, ex_iter, ex_unit, last_vertex, sd
from .homotopy import (
    GroupHomSpec,
    GroupPresentation,
    abelian_invariants,
    pi0,
    pi1,
    smith_normal_form,
    svk_pushout,
    tietze_simplify,
)
from .modelcat import (
    MarkedCategory,
    ModelData,
    check_model,
    localize,
    saturate_two_of_three,
    square_lifts,
)
from .algebra import (
    FinAction,
    FinMonoid,
    action_to_aut_hom,
    check_action,
    check_group,
    check_monoid,
    eckmann_hilton_scan,
    orbit,
)

__version__ = "0.1.0"
