"""Lebesgue decomposition of finite measures by orthogonal projection.

The singular part of ``nu`` with respect to ``mu`` is obtained by projecting the
constant function 1 in L^2(nu) onto the closure of the simple functions that
vanish in L^2(mu). The same recipe is provided for pairs of PSD forms.
"""
from .hilbert import (
    DEFAULT_TOL,
    AtomSpace,
    InputError,
    SimpleFunction,
    Subspace,
    WeightedSpace,
    gram_schmidt,
    inner_product,
    level_set,
    project,
)
from .relation import LinearRelation, closure_note, contains_pair, mval_part
from .measure import (
    Decomposition,
    Measure,
    PreconditionError,
    build_relation,
    check_absolutely_continuous,
    check_singular,
    compute_M,
    decompose,
    oracle_decompose,
    radon_nikodym,
    standard_form_check,
    verify_indicator,
    witness_sequence,
)
from .forms import (
    FORMS_TOL,
    PsdForm,
    ando_limit,
    decompose_forms,
    parallel_sum,
    psd_sqrt,
)

__all__ = [
    "DEFAULT_TOL",
    "AtomSpace",
    "InputError",
    "SimpleFunction",
    "Subspace",
    "WeightedSpace",
    "gram_schmidt",
    "inner_product",
    "level_set",
    "project",
    "Decomposition",
    "Measure",
    "PreconditionError",
    "build_relation",
    "check_absolutely_continuous",
    "check_singular",
    "compute_M",
    "decompose",
    "oracle_decompose",
    "radon_nikodym",
    "standard_form_check",
    "verify_indicator",
    "witness_sequence",
    "FORMS_TOL",
    "PsdForm",
    "ando_limit",
    "decompose_forms",
    "parallel_sum",
    "psd_sqrt",
    "LinearRelation",
    "closure_note",
    "contains_pair",
    "mval_part",
]

__version__ = "0.1.0"
