"""deckclass: deck-based classification of locally common graphs.

The package decides, from the subgraph counts of a small graph, whether the
first twelve even coefficients of its symmetrized perturbation polynomial
force it to be locally common (Class I), witness that it is not (Class II),
or leave the question open (Class III), and it constructs and exactly
verifies the balanced perturbation kernels behind every Class II and
Class III verdict.
"""

from .classify import (
    DeckClass,
    DecisionTrace,
    GraphVerdict,
    classify_deck4,
    classify_deck6,
    classify_deck8,
    classify_deck10,
    classify_deck12,
    classify_graph,
)
from .corekernel import (
    CoreKernelSpec,
    build_core_kernel,
    core_c_k_plus_1_bound,
    core_cycle_density,
    core_glued_pair_density,
    core_theta_density,
    density_of_principal,
    materialize,
)
from .graphs import (
    Graph,
    count_subgraphs,
    enumerate_principal,
    is_principal,
    parse_graph,
    shortest_even_cycle,
    to_graph6,
)
from .patterns import PATTERN_IDS, PATTERNS, CountVector, count_vector
from .powersums import (
    WeightedMultiset,
    power_sum,
    powers_small,
    powers_zero,
    prescribe_powers,
)
from .stepkernels import (
    EpsPolynomial,
    RankOneSum,
    StepFunction,
    StepKernel,
    apply_operator,
    cycle_density,
    eval_perturbed_sum,
    glue,
    hom_density,
    is_balanced,
    perturbation_coefficients,
    rooted_cycle_density,
)
from .verify import (
    WitnessReport,
    verify_class2,
    verify_class3_null,
    verify_core_identities,
    verify_taylor,
)
from .witnesses import WitnessRecipe, class2_recipe, class3_null_recipe, negative_direction

__version__ = "0.1.0"
