"""Las Vegas search for Hamilton (a,b)-cycles in uniform hypergraphs."""

from .abfinder import (
    ABCycleCert,
    FindResult,
    RunReport,
    build_auxiliary,
    decompose_to_matchings,
    find_ab_cycle,
    find_in_product,
    ore_success_probability,
    verify_ab_cycle,
)
from .bihamilton import BipartiteGraph, BudgetExceeded, CycleCert, exact_hamilton, find_hamilton, ore_check
from .fklab import FKInstance, TrialStats, fk_bound, link_concentration_experiment, make_instance, run_fk
from .hypergraph import (
    Hypergraph,
    ProductHypergraph,
    ThresholdReport,
    binom,
    check_main1_hypothesis,
    check_main2_hypothesis,
    degree,
    infer_delta_a_lower,
    link,
    min_degree,
    threshold_main1,
    threshold_main2,
)
from .oracle import (
    OracleResult,
    complete_hypergraph,
    exhaustive_ab_cycle,
    parity_family,
    planted_cycle,
    random_hypergraph,
)
from .sampling import (
    ABPartition,
    Matching,
    SeedSpec,
    derive_seed,
    sample_ab_partition,
    sample_matching,
    sample_product_matchings,
)

__version__ = "0.1.0"
