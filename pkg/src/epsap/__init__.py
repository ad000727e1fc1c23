"""Recognizers, constructions, and exact desk-scale measurements for
approximate arithmetic progressions and their m-dimensional cube analogues."""

from .colorings import (
    AlternateLabeling,
    BlowupSpec,
    Coloring,
    LowerBoundParams,
    MonochromeWitness,
    build_alternate_labeling,
    build_blowup_1d,
    build_lower_bound_coloring,
    build_simple_r2_coloring,
    excluded_difference_check,
    lcm_range,
    lower_bound_params,
    verify_no_mono_ap,
)
from .density import (
    ApkFreeProvider,
    CubeBlowupSpec,
    DigitConstruction,
    TranslateResult,
    apk_free_set,
    build_behrend_digit_set,
    build_cube_blowup,
    find_dense_translate,
    product_free_set,
    verify_cube_free,
)
from .errors import MemoryGuardExceeded, SearchCapExceeded
from .geometry import (
    CubeDecision,
    FeasibleRegion2D,
    IndexedGrid,
    IndexingError,
    Witness1D,
    WitnessMD,
    gap_ratio_filter,
    grid_from_points_1d,
    index_grid_points,
    min_enclosing_ball,
    recognize_ap,
    recognize_cube,
    region_add_point,
    region_closed_empty,
    region_new,
)
from .search import (
    EpsApHypergraph,
    SearchOutcome,
    arrow_decision,
    enumerate_eps_aps,
    enumerate_exact_aps,
    exact_W,
    exact_f,
    export_hypergraph,
    find_eps_ap_in_points,
    max_exact_ap_free,
    parse_hypergraph,
)

__version__ = "0.1.0"
