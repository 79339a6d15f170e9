import random
from fractions import Fraction as F

import pytest

from deckclass.classify import DeckClass, classify_deck12, classify_graph
from deckclass.corekernel import build_core_kernel
from deckclass.errors import OutOfScopeError
from deckclass.graphs import (
    Graph,
    cycle,
    cycle_chain,
    disjoint_union,
    enumerate_principal,
    path,
    vertex_glue,
)
from deckclass.patterns import CountVector
from deckclass.stepkernels import StepKernel
from deckclass.verify import (
    verify_class2,
    verify_class3_null,
    verify_core_identities,
    verify_taylor,
)

from test_witnesses import _rule_sweep_cvs


def CV(d=None, **kw):
    c = CountVector({"P2": 1})
    if d:
        c.counts.update(d)
    c.counts.update(kw)
    return c


def test_verify_glued_35_graph():
    rep = verify_class2(cycle_chain(3, 0, 5))
    assert rep.verdict == "certified"
    assert rep.coefficients[2] == 0
    assert rep.coefficients[4] == 0
    assert rep.coefficients[6] == 0
    assert rep.coefficients[8] <= F(-1, 2)


def test_verify_disjoint_35_graph():
    rep = verify_class2(disjoint_union(cycle(3), cycle(5)))
    assert rep.verdict == "certified"
    assert rep.coefficients[8] < 0


def test_verify_rejects_wrong_class():
    with pytest.raises(OutOfScopeError):
        verify_class2(cycle(4))
    with pytest.raises(OutOfScopeError):
        verify_class2(CV({"C4": 1}), depth=8)


def test_verify_class3_null_graphs():
    rep = verify_class3_null(cycle_chain(3, 0, 3))  # bowtie, depth 6
    assert rep.verdict == "certified"
    assert set(rep.coefficients) == {2, 4, 6}
    # host with linked triangles at depth 8
    host = cycle_chain(3, 2, 3)
    rep = verify_class3_null(host)
    assert rep.verdict == "certified"
    # odd-girth graph at depth 12
    host = disjoint_union(disjoint_union(cycle(5), cycle(5)), cycle(5))
    rep = verify_class3_null(host)
    assert rep.verdict == "certified"
    assert set(rep.coefficients) == {2, 4, 6, 8, 10, 12}


def test_verify_all_class2_rules_synthetic():
    fired = {}
    for cv in _rule_sweep_cvs():
        cls, trace = classify_deck12(cv)
        assert cls is DeckClass.II
        rep = verify_class2(cv, trace=trace)
        assert rep.verdict == "certified", (trace.steps[-1].rule, rep.checks)
        target = trace.steps[-1].deck
        assert rep.coefficients[target] < 0
        for ell in range(2, target, 2):
            assert rep.coefficients[ell] == 0
        fired[trace.steps[-1].rule] = rep
    assert len(fired) >= 25


def test_verify_class3_sweep_synthetic():
    shapes = [
        CV({"C3⊕C3": 1}),
        CV({"C3∪C3": 1}),
        CV({}),
        CV({"C3∪C3": 1, "C3⊕P2⊕C3": 1}),
        CV({"C3∪C3": 1, "C3⊕P4⊕C3": 1, "C5⊕C5": 1, "C3⊕P2⊕C5": 2}),
        CV({"C3⊕C3": 2, "C5⊕C5": 1, "C5∪C5": 3}),
        CV({"C3∪C3": 1, "C5⊕P2⊕C5": 2, "C3⊕P6⊕C3": 1}),
    ]
    for cv in shapes:
        cls, trace = classify_deck12(cv)
        assert cls is DeckClass.III, cv.counts
        rep = verify_class3_null(cv, depth=12, trace=trace)
        assert rep.verdict == "certified", (cv.counts, rep.checks)
        assert all(v == 0 for v in rep.coefficients.values())


def test_end_to_end_corpus():
    """Every Class II verdict on the corpus carries a certified witness and
    every Class III verdict a certified null witness."""
    corpus = []
    for ell in (4, 6, 8, 10, 12):
        corpus.extend(enumerate_principal(ell))
    rng = random.Random(314)
    import itertools

    for _ in range(30):
        n = rng.randint(3, 7)
        pool = list(itertools.combinations(range(n), 2))
        rng.shuffle(pool)
        m = rng.randint(2, min(len(pool), 9))
        corpus.append(Graph.from_edges(pool[:m], order=n))
    corpus.append(cycle_chain(3, 0, 5))
    corpus.append(vertex_glue(cycle(3), path(1)))
    n_class2 = n_class3 = 0
    for g in corpus:
        verdict = classify_graph(g)
        if verdict.status == "not_locally_common":
            rep = verify_class2(g, trace=verdict.trace)
            assert rep.verdict == "certified", verdict.trace.steps[-1].rule
            n_class2 += 1
        elif verdict.deck_class is DeckClass.III:
            rep = verify_class3_null(g, depth=verdict.depth, trace=verdict.trace)
            assert rep.verdict == "certified"
            n_class3 += 1
    assert n_class2 >= 5 and n_class3 >= 10


def test_verify_core_identities_small():
    spec = build_core_kernel(3, 1, 1, sigma=(F(1, 2),), gamma={3: F(1, 4)})
    report = verify_core_identities(spec)
    assert report["verdict"] == "certified"
    names = {c["name"] for c in report["checks"]}
    assert "grid is balanced" in names
    assert "eigen row 1" in names


def test_verify_taylor_wrapper():
    u = StepKernel.from_rows([[1, -1], [-1, 1]])
    report = verify_taylor(cycle(4), u, trials=10)
    assert report["verdict"] == "certified"
    rng = random.Random(8)
    for _ in range(4):
        n = rng.randint(1, 3)
        rows = [[F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(i):
                rows[i][j] = rows[j][i]
        u = StepKernel.from_rows(rows)
        g = disjoint_union(cycle(3), path(2))
        assert verify_taylor(g, u, trials=8)["verdict"] == "certified"
