"""Ordinal lengths of partial well-orders and of finitely generated modules."""

from .ordinal import (
    Cmp,
    Ordinal,
    cmp_at_level,
    compare,
    format_ordinal,
    ord_sum,
    paper_product,
    parse_ordinal,
    predecessor,
    profile,
    shuffle_sum,
    shuffle_sum_oracle,
    shuffle_sum_recursive,
    split,
)
from .pwo import (
    FinitePoset,
    make_poset,
    max_chain_length,
    product_poset,
    rank_all,
    sum_poset,
    symbolic_length,
)
from .euclid import LocalIntegers, PolyFp, RingMatrix, ZZ, smith_normal_form
from .module import FgModule, ModuleMap, canonical_form, dimension, generic_length, is_unmixed, length, make_map
from .homology import ModuleComplex, acyclicity_check, homology_at

__version__ = "0.1.0"
