"""Bin packing with relations, multiset-estimate objectives, coloring and planning."""

from ._accel import backend
from .bpp_classic import Item, PackInstance, PackSolution, exact_min_bins, fit_pack, lower_bound, validate
from .bpp_relational import ConflictGraph, RelationSet, check_constraints, conflict_pack, inverse_pack, order_within_bins
from .coloring import (ColoredGraph, QualityVector, chromatic_coloring, colored_pack, compat_coloring_pareto,
                       count_proper_colorings, min_weight_coloring, partition_coloring, quality)
from .errors import (DimensionMismatch, InfeasibleError, MultibinError, PrecedenceCycleError, SchemaError,
                     SizeLimitError, StructuralError)
from .mse_core import (MsEstimate, Ordering, compare, dominates, enumerate_scale, generalized_median, integrate,
                       proximity, set_median)
from .mse_packing import (MseSolution, conflict_inverse_mse, generalized_assignment_mse, inverse_bpp_mse,
                          knapsack_mse, multiple_choice_mse, multiple_knapsack_mse, pareto_front_biobjective)
from .pipelines import order_colors, pareto_layers, plan_paper, select_messages, simulate_periods, swf_order

__all__ = [
    "backend", "Item", "PackInstance", "PackSolution", "exact_min_bins", "fit_pack", "lower_bound",
    "validate", "ConflictGraph", "RelationSet", "check_constraints", "conflict_pack", "inverse_pack",
    "order_within_bins", "ColoredGraph", "QualityVector", "chromatic_coloring", "colored_pack",
    "compat_coloring_pareto", "count_proper_colorings", "min_weight_coloring", "partition_coloring",
    "quality", "DimensionMismatch", "InfeasibleError", "MultibinError", "PrecedenceCycleError", "SchemaError",
    "SizeLimitError", "StructuralError", "MsEstimate", "Ordering", "compare", "dominates", "enumerate_scale",
    "generalized_median", "integrate", "proximity", "set_median", "MseSolution", "conflict_inverse_mse",
    "generalized_assignment_mse", "inverse_bpp_mse", "knapsack_mse", "multiple_choice_mse",
    "multiple_knapsack_mse", "pareto_front_biobjective", "order_colors", "pareto_layers", "plan_paper",
    "select_messages", "simulate_periods", "swf_order",
]

__version__ = "0.1.0"
