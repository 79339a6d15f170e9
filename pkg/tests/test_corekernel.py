import random
from fractions import Fraction as F

import pytest

from deckclass.corekernel import (
    build_core_kernel,
    core_c_k_plus_1_bound,
    core_cycle_density,
    core_glued_pair_density,
    core_theta_density,
    density_of_principal,
    materialize,
    spec_cycle_density,
)
from deckclass.errors import BudgetError, OutOfScopeError
from deckclass.graphs import cycle, cycle_chain, disjoint_union, vertex_glue
from deckclass.patterns import PATTERNS
from deckclass.powersums import RadSum
from deckclass.stepkernels import cycle_density, hom_density, is_balanced


def test_validation():
    with pytest.raises(OutOfScopeError):
        build_core_kernel(4, F(1, 2), 0)
    with pytest.raises(OutOfScopeError):
        build_core_kernel(3, 2, 0)
    with pytest.raises(OutOfScopeError):
        build_core_kernel(3, F(1, 2), 1, sigma=(1,))  # sigma^4 > delta/2
    with pytest.raises(OutOfScopeError):
        build_core_kernel(3, F(1, 2), 1, sigma=(0,), tau={(2, 3): 1})


def test_glued_35_spec():
    spec = build_core_kernel(7, F(1, 2), 1, sigma=(0,), tau={(1, 3): 1, (1, 5): -1})
    assert core_cycle_density(spec, 3) == 0
    assert core_cycle_density(spec, 7) == 0
    assert core_theta_density(spec, 3, 0, 5) == -1
    assert core_theta_density(spec, 3, 2, 3) == 0  # sigma = 0
    assert core_glued_pair_density(spec, 3) == 1
    assert core_c_k_plus_1_bound(spec) <= spec.delta
    assert density_of_principal(spec, PATTERNS["C3⊕C5"]) == -1
    assert density_of_principal(spec, PATTERNS["C3∪C5"]) == 0
    assert density_of_principal(spec, PATTERNS["C3⊕P2⊕C3"]) == 0


def test_disjoint_35_spec():
    spec = build_core_kernel(7, F(1, 2), 0, gamma={3: 1, 5: -1})
    assert core_cycle_density(spec, 3) == 1
    assert core_cycle_density(spec, 5) == -1
    assert density_of_principal(spec, PATTERNS["C3∪C5"]) == -1
    assert density_of_principal(spec, PATTERNS["C3⊕C5"]) == 0
    n = spec.n_cells
    assert density_of_principal(spec, PATTERNS["C3⊕C3"]) == n  # gamma^2 * N


def test_theta_special_case_errors():
    spec = build_core_kernel(7, F(1, 2), 0, gamma={3: 1})
    with pytest.raises(OutOfScopeError):
        core_theta_density(spec, 3, 0, 3)
    with pytest.raises(OutOfScopeError):
        core_cycle_density(spec, 9)
    with pytest.raises(OutOfScopeError):
        core_theta_density(spec, 2, 1, 3)


def test_fallback_spec():
    spec = build_core_kernel(7, 1, 0)
    assert spec.fallback and spec.k_eff == 9
    assert not spec.is_zero()
    for pid in ("C3", "C5", "C7", "C3⊕C3", "C3∪C5", "C3⊕P2⊕C3", "C5⊕C5"):
        assert density_of_principal(spec, PATTERNS[pid]) == 0, pid
    top = spec_cycle_density(spec, 10)
    assert (top <= 1) if isinstance(top, RadSum) else top <= 1


def test_zero_exponent_convention():
    # 0^0 = 1: a path of length zero between distinct odd cycles pairs the
    # rooted coordinates even when the eigenvalue vanishes
    spec = build_core_kernel(9, F(1, 2), 5, sigma=(0,) * 5,
                             tau={(1, 3): 2, (1, 7): F(1, 2)})
    assert core_theta_density(spec, 3, 0, 7) == 1
    assert density_of_principal(spec, cycle_chain(3, 0, 7)) == 1
    assert density_of_principal(spec, cycle_chain(3, 1, 7)) == 0


def test_materialized_agreement_gamma():
    spec = build_core_kernel(3, F(1, 2), 0, gamma={3: F(1, 4)})
    grid = materialize(spec)
    assert is_balanced(grid)
    assert cycle_density(3, grid) == F(1, 4)
    assert cycle_density(4, grid) == spec_cycle_density(spec, 4)
    assert hom_density(PATTERNS["C3⊕C3"], grid) == core_glued_pair_density(spec, 3)
    assert hom_density(PATTERNS["C3∪C3"], grid) == density_of_principal(
        spec, PATTERNS["C3∪C3"]
    )


def test_materialized_agreement_sigma():
    spec = build_core_kernel(3, 1, 1, sigma=(F(1, 2),), gamma={3: F(1, 4)})
    grid = materialize(spec)
    assert is_balanced(grid)
    assert cycle_density(3, grid) == F(1, 4)
    for n in range(0, 5):
        g = cycle_chain(3, n, 3) if n else PATTERNS["C3⊕C3"]
        want = (
            core_glued_pair_density(spec, 3)
            if n == 0
            else core_theta_density(spec, 3, n, 3)
        )
        assert hom_density(g, grid) == want == density_of_principal(spec, g)


def test_materialization_budget_refusal():
    spec = build_core_kernel(7, F(1, 64), 1, sigma=(0,), tau={(1, 3): 1, (1, 5): -1})
    with pytest.raises(BudgetError):
        materialize(spec, max_cells=64)


def test_evaluator_handles_spider_blocks():
    # a middle cycle with attachments at two different vertices
    spec = build_core_kernel(3, 1, 3, sigma=(F(1, 2), 0, 0), gamma={3: F(1, 4)})
    mid = cycle(3)
    g = vertex_glue(mid, cycle(3), gv=0, hv=0)
    g = vertex_glue(g, cycle(3), gv=1, hv=0)  # 9 edges, middle has two ports
    val = density_of_principal(spec, g)
    grid = materialize(spec, max_cells=700)
    assert hom_density(g, grid) == val
    # and one with a bridge out of the middle cycle
    g2 = vertex_glue(mid, cycle(3), gv=0, hv=0)
    g2 = vertex_glue(g2, vertex_glue(cycle(3), PATTERNS["P1"], gv=0, hv=0), gv=1, hv=3)
    assert g2.size == 10
    assert hom_density(g2, grid) == density_of_principal(spec, g2)


def test_random_specs_materialized_sweep():
    rng = random.Random(2025)
    for trial in range(50):
        kind = rng.choice(("gamma3", "sigma", "mix"))
        if kind == "gamma3":
            spec = build_core_kernel(
                3, 1, 0, gamma={3: F(rng.choice((-1, 1, 2)), rng.choice((2, 4)))}
            )
        elif kind == "sigma":
            spec = build_core_kernel(
                3,
                1,
                1,
                sigma=(F(rng.choice((-1, 1)), rng.choice((2, 4))),),
                gamma={3: F(rng.choice((-1, 1)), 4)},
            )
        else:
            spec = build_core_kernel(
                3,
                1,
                3,
                sigma=(F(rng.choice((-1, 1)), 2), 0, 0),
                tau={(1, 3): F(rng.choice((-1, 1)), 2)},
                gamma={3: F(rng.choice((0, 1)), 4)},
            )
        grid = materialize(spec, max_cells=700)
        assert is_balanced(grid)
        assert cycle_density(3, grid) == core_cycle_density(spec, 3)
        assert cycle_density(4, grid) == spec_cycle_density(spec, 4)
        # grid-side values via rooted densities and operator powers only
        from deckclass.stepkernels import apply_operator, inner, rooted_cycle_density

        t3 = rooted_cycle_density(3, grid)
        assert inner(t3, t3) == core_glued_pair_density(spec, 3)
        f = t3
        for n in (1, 2, 3, 4):
            f = apply_operator(grid, f)
            assert inner(f, t3) == core_theta_density(spec, 3, n, 3)
