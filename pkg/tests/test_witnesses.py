import itertools
import random
from fractions import Fraction as F

import pytest

from deckclass.classify import DeckClass, classify_deck12
from deckclass.errors import OutOfScopeError
from deckclass.patterns import CountVector
from deckclass.witnesses import (
    _RECIPE_BUILDERS,
    class2_recipe,
    class3_null_recipe,
    negative_direction,
)


def CV(d=None, **kw):
    c = CountVector({"P2": 1})
    if d:
        c.counts.update(d)
    c.counts.update(kw)
    return c


def test_negative_direction_examples():
    z = negative_direction(((0, F(1, 2)), (F(1, 2), 0)))
    assert z == (1, -1)
    z = negative_direction(((1, 2), (2, 1)))
    assert z[0] * (z[0] * 1 + z[1] * 2) + z[1] * (z[0] * 2 + z[1] * 1) <= -1
    with pytest.raises(OutOfScopeError):
        negative_direction(((1, 0), (0, 1)))
    with pytest.raises(OutOfScopeError):
        negative_direction(((0, 0), (0, 0)))


def test_negative_direction_random():
    rng = random.Random(12)
    for _ in range(200):
        a, b, c = (F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3))
        mat = ((a, b), (b, c))
        psd = a >= 0 and c >= 0 and a * c - b * b >= 0
        if psd:
            with pytest.raises(OutOfScopeError):
                negative_direction(mat)
        else:
            z3, z5 = negative_direction(mat)
            form = a * z3 * z3 + 2 * b * z3 * z5 + c * z5 * z5
            assert form <= -1


def test_class3_null_recipe():
    for depth in (4, 6, 8, 10, 12):
        rec = class3_null_recipe(depth)
        spec = rec.build()
        assert spec.fallback and spec.k_eff == depth + 1
        assert not spec.is_zero()
    with pytest.raises(OutOfScopeError):
        class3_null_recipe(5)


def _rule_sweep_cvs():
    """Deterministic count vectors reaching every Class II terminal rule."""
    return [
        CV({"C3⊕C5": 1}),
        CV({"C3⊕C5": 2, "C8": 1}),
        CV({"C3∪C5": 1}),
        CV({"C3∪C5": 1, "C8": 2}),
        CV({"C3⊕C7": 1}),
        CV({"C3∪C7": 1}),
        CV({"C3⊕P4⊕C3": 1, "C5⊕C5": 1, "C3⊕P2⊕C5": 3}),
        CV({"C3⊕P4⊕C3": 1, "C5⊕C5": 1, "C3⊕P2⊕C5": 3, "C10": 1}),
        CV({"C3⊕C3": 1, "C5⊕C7": 1}),
        CV({"C3⊕C3": 1, "C5∪C7": 1}),
        CV({"C3⊕C9": 1}),
        CV({"C3∪C9": 2}),
        CV({"C5⊕C7": 1}),
        CV({"C5∪C7": 1}),
        CV({"C3∪C3": 1, "C3⊕P2⊕C3": 1, "C3⊕C9": 1}),
        CV({"C3∪C3": 1, "C3⊕P2⊕C3": 1, "C5⊕C7": 1}),
        CV({"C3∪C3": 1, "C3⊕P2⊕C3": 1, "C5∪C7": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 1, "C5⊕C5": 1, "C3⊕P2⊕C5": 1, "C3⊕C9": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 1, "C5⊕C5": 1, "C3⊕P2⊕C5": 2, "C3⊕C9": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 1, "C5⊕C5": 1, "C3⊕P2⊕C5": 2,
            "C3⊕P4⊕C5": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 1, "C5⊕C5": 1, "C3⊕P2⊕C5": 2,
            "C5⊕C7": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 1, "C3⊕C9": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 2, "C5⊕C7": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 1, "C5∪C7": 1}),
        CV({"C3∪C3": 1, "C5⊕C5": 1, "C3⊕C9": 1}),
        CV({"C3∪C3": 1, "C5⊕C5": 2, "C3⊕P2⊕C7": 1}),
        CV({"C3∪C3": 1, "C3⊕C9": 1}),
        CV({"C3∪C3": 1, "C3⊕P2⊕C7": 1}),
        CV({"C3∪C3": 1, "C3⊕P6⊕C3": 1, "C5⊕P2⊕C5": 1, "C3⊕P4⊕C5": 3}),
        CV({"C3∪C3": 1, "C5⊕C7": 1}),
        CV({"C3∪C3": 1, "C5∪(C3⊕P1⊕C3)": 1}),
        CV({"C3∪C3": 1, "C5∪C7": 1}),
        CV({"C3∪C3": 2, "C5∪C7": 3, "C12": 2}),
    ]


def test_recipe_table_complete():
    fired = set()
    for cv in _rule_sweep_cvs():
        cls, trace = classify_deck12(cv)
        assert cls is DeckClass.II, cv.counts
        rule = trace.steps[-1].rule
        fired.add(rule)
        rec = class2_recipe(trace, cv)
        assert rec.rule in _RECIPE_BUILDERS or rec.rule.startswith("deck12.II.rank-one")
        spec = rec.build()
        assert not spec.is_zero()
    # every Class II rule in the builder table is exercised
    assert fired == set(_RECIPE_BUILDERS), sorted(set(_RECIPE_BUILDERS) - fired)


def test_padding_squares():
    for cv in _rule_sweep_cvs():
        cls, trace = classify_deck12(cv)
        rec = class2_recipe(trace, cv)
        spec = rec.build()
        n = spec.n_cells
        import math

        if spec.m:
            assert math.isqrt(n) ** 2 == n
        assert sum(s ** (spec.k_eff + 1) for s in spec.sigma) <= spec.delta / 2


def test_recipe_delta_safety():
    cv = CV({"C3⊕C5": 1, "C8": 10})
    cls, trace = classify_deck12(cv)
    rec = class2_recipe(trace, cv)
    assert rec.delta * cv["C8"] <= F(1, 2)
