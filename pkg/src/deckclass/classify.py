"""Decision procedures mapping subgraph count vectors to Class I/II/III.

Each deck level (4, 6, 8, 10, 12) is an if/else tree over zero/positive tests
on catalogue counts, plus two exact integer quadratic comparisons at levels 10
and 12.  Level L first delegates to level L-2 and only refines Class III
outcomes.  The trees are total: every count vector reaches exactly one
terminal rule, and the fired rule is recorded in the decision trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import OutOfScopeError, VerificationError
from .graphs import Graph
from .patterns import CountVector, count_vector

__all__ = [
    "DeckClass",
    "TraceStep",
    "DecisionTrace",
    "GraphVerdict",
    "classify_deck4",
    "classify_deck6",
    "classify_deck8",
    "classify_deck10",
    "classify_deck12",
    "classify_graph",
]


class DeckClass(Enum):
    I = "I"
    II = "II"
    III = "III"

    def __str__(self):
        return self.value


@dataclass
class TraceStep:
    deck: int
    rule: str
    conditions: dict
    outcome: str  # "I", "II", "III", or "pass"


@dataclass
class DecisionTrace:
    steps: list = field(default_factory=list)

    def add(self, deck, rule, conditions, outcome):
        self.steps.append(TraceStep(deck, rule, dict(conditions), outcome))

    @property
    def final_rule(self):
        return self.steps[-1].rule if self.steps else None

    def to_json_list(self):
        return [
            {
                "deck": s.deck,
                "rule": s.rule,
                "conditions": {k: _json_cond(v) for k, v in s.conditions.items()},
                "outcome": s.outcome,
            }
            for s in self.steps
        ]


def _json_cond(v):
    if isinstance(v, bool):
        return v
    return int(v)


@dataclass
class GraphVerdict:
    status: str  # locally_common | not_locally_common | undecided_class_iii | trivially_locally_common
    deck_class: DeckClass | None
    depth: int | None
    trace: DecisionTrace

    def to_json_dict(self):
        return {
            "schema": "deckclass/1",
            "status": self.status,
            "deck_class": str(self.deck_class) if self.deck_class else None,
            "depth": self.depth,
            "trace": self.trace.to_json_list(),
        }


def _require_p2(cv):
    if cv["P2"] <= 0:
        raise OutOfScopeError(
            "count vector has s(P2)=0; the deck procedures require a path of length two"
        )


def _det10(cv):
    """4*s(C3+P4+C3)*s(C5+C5) - s(C3+P2+C5)^2, exact integers."""
    return 4 * cv["C3⊕P4⊕C3"] * cv["C5⊕C5"] - cv["C3⊕P2⊕C5"] ** 2


def classify_deck4(cv, trace=None):
    _require_p2(cv)
    trace = trace if trace is not None else DecisionTrace()
    if cv["C4"] > 0:
        trace.add(4, "deck4.I.four-cycle", {"s(C4)": cv["C4"]}, "I")
        return DeckClass.I, trace
    trace.add(4, "deck4.III.no-four-cycle", {"s(C4)": 0}, "III")
    return DeckClass.III, trace


def classify_deck6(cv, trace=None):
    cls, trace = classify_deck4(cv, trace)
    if cls is not DeckClass.III:
        return cls, trace
    if cv["C6"] > 0:
        trace.add(6, "deck6.I.six-cycle", {"s(C6)": cv["C6"]}, "I")
        return DeckClass.I, trace
    trace.add(6, "deck6.III.no-short-even-cycle", {"s(C6)": 0}, "III")
    return DeckClass.III, trace


def classify_deck8(cv, trace=None):
    cls, trace = classify_deck6(cv, trace)
    if cls is not DeckClass.III:
        return cls, trace
    c8, bow = cv["C8"], cv["C3⊕C3"]
    dj33, g35, dj35 = cv["C3∪C3"], cv["C3⊕C5"], cv["C3∪C5"]
    base = {"s(C8)": c8}
    if c8 > 0:
        if bow > 0:
            trace.add(8, "deck8.I.c8+bowtie", base | {"s(C3⊕C3)": bow}, "I")
            return DeckClass.I, trace
        if g35 > 0:
            trace.add(8, "deck8.II.glued-3-5", base | {"s(C3⊕C3)": 0, "s(C3⊕C5)": g35}, "II")
            return DeckClass.II, trace
        if dj33 > 0:
            trace.add(8, "deck8.I.c8+disjoint-triangles", base | {"s(C3⊕C5)": 0, "s(C3∪C3)": dj33}, "I")
            return DeckClass.I, trace
        if dj35 > 0:
            trace.add(8, "deck8.II.disjoint-3-5", base | {"s(C3∪C3)": 0, "s(C3∪C5)": dj35}, "II")
            return DeckClass.II, trace
        trace.add(8, "deck8.I.c8-sparse", base | {"s(C3∪C5)": 0}, "I")
        return DeckClass.I, trace
    if bow > 0:
        trace.add(8, "deck8.III.bowtie", base | {"s(C3⊕C3)": bow}, "III")
        return DeckClass.III, trace
    if g35 > 0:
        trace.add(8, "deck8.II.glued-3-5", base | {"s(C3⊕C3)": 0, "s(C3⊕C5)": g35}, "II")
        return DeckClass.II, trace
    if dj33 > 0:
        trace.add(8, "deck8.III.disjoint-triangles", base | {"s(C3⊕C5)": 0, "s(C3∪C3)": dj33}, "III")
        return DeckClass.III, trace
    if dj35 > 0:
        trace.add(8, "deck8.II.disjoint-3-5", base | {"s(C3∪C3)": 0, "s(C3∪C5)": dj35}, "II")
        return DeckClass.II, trace
    trace.add(8, "deck8.III.sparse", base | {"s(C3∪C5)": 0}, "III")
    return DeckClass.III, trace


def _assert_corollary8(cv):
    """On every 8-level Class III outcome exactly one sparse shape must hold."""
    a = cv["C3⊕C3"] > 0
    b = cv["C3⊕C3"] == 0 and cv["C3⊕C5"] == 0 and cv["C3∪C3"] > 0
    c = (
        cv["C3⊕C3"] == 0
        and cv["C3⊕C5"] == 0
        and cv["C3∪C3"] == 0
        and cv["C3∪C5"] == 0
    )
    if (a, b, c).count(True) != 1 or cv["C4"] or cv["C6"] or cv["C8"]:
        raise VerificationError("8-level Class III shape invariant violated")


def classify_deck10(cv, trace=None):
    cls, trace = classify_deck8(cv, trace)
    if cls is not DeckClass.III:
        return cls, trace
    _assert_corollary8(cv)
    c10, bow = cv["C10"], cv["C3⊕C3"]
    g37, dj37 = cv["C3⊕C7"], cv["C3∪C7"]
    p2c3 = cv["C3⊕P2⊕C3"]
    det = _det10(cv)
    if bow > 0:
        rule = "deck10.I.c10+bowtie" if c10 > 0 else "deck10.III.bowtie"
        trace.add(10, rule, {"s(C3⊕C3)": bow, "s(C10)": c10}, "I" if c10 > 0 else "III")
        return (DeckClass.I if c10 > 0 else DeckClass.III), trace
    if g37 > 0:
        trace.add(10, "deck10.II.glued-3-7", {"s(C3⊕C3)": 0, "s(C3⊕C7)": g37}, "II")
        return DeckClass.II, trace
    if p2c3 == 0 and det < 0:
        trace.add(
            10,
            "deck10.II.indefinite-pair",
            {"s(C3⊕C3)": 0, "s(C3⊕P2⊕C3)": 0, "4*s33*s55-s35^2": det},
            "II",
        )
        return DeckClass.II, trace
    if cv["C3∪C3"] == 0 and dj37 > 0:
        trace.add(10, "deck10.II.disjoint-3-7", {"s(C3∪C3)": 0, "s(C3∪C7)": dj37}, "II")
        return DeckClass.II, trace
    if cv["C3∪C3"] > 0:
        conds = {
            "s(C3∪C3)": cv["C3∪C3"],
            "s(C3⊕C7)": 0,
            "s(C3⊕P2⊕C3)": p2c3,
            "4*s33*s55-s35^2": det,
            "s(C10)": c10,
        }
        if p2c3 > 0:
            rule = "deck10.{}.linked-triangles".format("I" if c10 > 0 else "III")
        else:
            rule = "deck10.{}.psd-pair".format("I" if c10 > 0 else "III")
        trace.add(10, rule, conds, "I" if c10 > 0 else "III")
        return (DeckClass.I if c10 > 0 else DeckClass.III), trace
    conds = {"s(C3⊕C3)": 0, "s(C3∪C3)": 0, "s(C3⊕C7)": 0, "s(C3∪C7)": 0, "s(C10)": c10}
    rule = "deck10.{}.sparse".format("I" if c10 > 0 else "III")
    trace.add(10, rule, conds, "I" if c10 > 0 else "III")
    return (DeckClass.I if c10 > 0 else DeckClass.III), trace


def _assert_corollary10(cv):
    """On every 10-level Class III outcome exactly one of the four shapes holds."""
    zero_glued = cv["C3⊕C3"] == 0 and cv["C3⊕C5"] == 0 and cv["C3⊕C7"] == 0
    a = cv["C3⊕C3"] > 0
    b = (
        zero_glued
        and cv["C3∪C3"] == 0
        and cv["C3∪C5"] == 0
        and cv["C3∪C7"] == 0
    )
    c = zero_glued and cv["C3∪C3"] > 0 and cv["C3⊕P2⊕C3"] > 0
    d = (
        zero_glued
        and cv["C3⊕P2⊕C3"] == 0
        and cv["C3∪C3"] > 0
        and _det10(cv) >= 0
    )
    if (a, b, c, d).count(True) != 1 or any(cv[f"C{k}"] for k in (4, 6, 8, 10)):
        raise VerificationError("10-level Class III shape invariant violated")


def _case12(cv):
    """Which of the four 10-level Class III shapes holds (1..4)."""
    if cv["C3⊕C3"] > 0:
        return 1
    if cv["C3∪C3"] == 0:
        return 2
    if cv["C3⊕P2⊕C3"] > 0:
        return 3
    return 4


def _i_or_iii(trace, rule_stem, conds, c12):
    conds = conds | {"s(C12)": c12}
    if c12 > 0:
        trace.add(12, rule_stem + ".I", conds, "I")
        return DeckClass.I, trace
    trace.add(12, rule_stem + ".III", conds, "III")
    return DeckClass.III, trace


def classify_deck12(cv, trace=None):
    cls, trace = classify_deck10(cv, trace)
    if cls is not DeckClass.III:
        return cls, trace
    _assert_corollary10(cv)
    c12 = cv["C12"]
    g55, dj55 = cv["C5⊕C5"], cv["C5∪C5"]
    g57, dj57 = cv["C5⊕C7"], cv["C5∪C7"]
    g39, dj39 = cv["C3⊕C9"], cv["C3∪C9"]
    case = _case12(cv)

    if case == 1:
        if g55 == 0 and g57 > 0:
            trace.add(12, "deck12.II.bowtie.glued-5-7", {"s(C5⊕C5)": 0, "s(C5⊕C7)": g57}, "II")
            return DeckClass.II, trace
        if g55 == 0 and dj55 == 0 and dj57 > 0:
            trace.add(
                12,
                "deck12.II.bowtie.disjoint-5-7",
                {"s(C5⊕C5)": 0, "s(C5∪C5)": 0, "s(C5∪C7)": dj57},
                "II",
            )
            return DeckClass.II, trace
        return _i_or_iii(trace, "deck12.bowtie", {"s(C3⊕C3)": cv["C3⊕C3"]}, c12)

    if case == 2:
        if g39 > 0 or dj39 > 0:
            trace.add(
                12,
                "deck12.II.sparse.with-3-9",
                {"s(C3⊕C9)": g39, "s(C3∪C9)": dj39},
                "II",
            )
            return DeckClass.II, trace
        if g55 == 0 and g57 > 0:
            trace.add(12, "deck12.II.sparse.glued-5-7", {"s(C5⊕C5)": 0, "s(C5⊕C7)": g57}, "II")
            return DeckClass.II, trace
        if g55 == 0 and dj55 == 0 and dj57 > 0:
            trace.add(
                12,
                "deck12.II.sparse.disjoint-5-7",
                {"s(C5⊕C5)": 0, "s(C5∪C5)": 0, "s(C5∪C7)": dj57},
                "II",
            )
            return DeckClass.II, trace
        return _i_or_iii(trace, "deck12.sparse", {}, c12)

    if case == 3:
        if g39 > 0:
            trace.add(12, "deck12.II.linked.glued-3-9", {"s(C3⊕C9)": g39}, "II")
            return DeckClass.II, trace
        if g55 == 0 and g57 > 0:
            trace.add(12, "deck12.II.linked.glued-5-7", {"s(C5⊕C5)": 0, "s(C5⊕C7)": g57}, "II")
            return DeckClass.II, trace
        if g55 == 0 and dj55 == 0 and dj57 > 0:
            trace.add(
                12,
                "deck12.II.linked.disjoint-5-7",
                {"s(C5⊕C5)": 0, "s(C5∪C5)": 0, "s(C5∪C7)": dj57},
                "II",
            )
            return DeckClass.II, trace
        return _i_or_iii(trace, "deck12.linked", {"s(C3⊕P2⊕C3)": cv["C3⊕P2⊕C3"]}, c12)

    # case 4: s(C3∪C3)>0, s(C3⊕P2⊕C3)=0 and the 10-level pair matrix is PSD
    s33, s55, s35 = cv["C3⊕P4⊕C3"], cv["C5⊕C5"], cv["C3⊕P2⊕C5"]
    det = _det10(cv)
    if det > 0:
        if g39 > 0:
            trace.add(12, "deck12.II.definite.glued-3-9", {"s(C3⊕C9)": g39}, "II")
            return DeckClass.II, trace
        return _i_or_iii(trace, "deck12.definite", {"4*s33*s55-s35^2": det}, c12)
    if s33 > 0 and s55 > 0:
        # rank-one boundary: 4*s33*s55 == s35^2 with both diagonal entries positive
        a_form = _rank_one_form_value(cv)
        mix = -2 * cv["C3⊕P2⊕C7"] * s55 + cv["C5⊕C7"] * s35
        if g39 > 0:
            trace.add(12, "deck12.II.rank-one.glued-3-9", {"s(C3⊕C9)": g39}, "II")
            return DeckClass.II, trace
        if a_form < 0:
            trace.add(12, "deck12.II.rank-one.negative-form", {"A": a_form}, "II")
            return DeckClass.II, trace
        if mix != 0:
            trace.add(12, "deck12.II.rank-one.mixed-7", {"mix": mix}, "II")
            return DeckClass.II, trace
        return _i_or_iii(trace, "deck12.rank-one", {"A": a_form, "mix": 0}, c12)
    if s33 > 0:
        # s55 = s35 = 0
        if g39 > 0 or g57 > 0:
            trace.add(
                12,
                "deck12.II.path-heavy.glued",
                {"s(C3⊕C9)": g39, "s(C5⊕C7)": g57},
                "II",
            )
            return DeckClass.II, trace
        if dj55 == 0 and dj57 > 0:
            trace.add(
                12,
                "deck12.II.path-heavy.disjoint-5-7",
                {"s(C5∪C5)": 0, "s(C5∪C7)": dj57},
                "II",
            )
            return DeckClass.II, trace
        return _i_or_iii(trace, "deck12.path-heavy", {"s33": s33}, c12)
    if s55 > 0:
        # s33 = s35 = 0
        if g39 > 0 or cv["C3⊕P2⊕C7"] > 0:
            trace.add(
                12,
                "deck12.II.pair-heavy.deep-3",
                {"s(C3⊕C9)": g39, "s(C3⊕P2⊕C7)": cv["C3⊕P2⊕C7"]},
                "II",
            )
            return DeckClass.II, trace
        return _i_or_iii(trace, "deck12.pair-heavy", {"s55": s55}, c12)
    # s33 = s55 = s35 = 0
    det2 = (
        4 * cv["C3⊕P6⊕C3"] * cv["C5⊕P2⊕C5"] - cv["C3⊕P4⊕C5"] ** 2
    )
    if g39 > 0:
        trace.add(12, "deck12.II.null-pair.glued-3-9", {"s(C3⊕C9)": g39}, "II")
        return DeckClass.II, trace
    if cv["C3⊕P2⊕C7"] > 0:
        trace.add(
            12, "deck12.II.null-pair.deep-3-7", {"s(C3⊕P2⊕C7)": cv["C3⊕P2⊕C7"]}, "II"
        )
        return DeckClass.II, trace
    if det2 < 0:
        trace.add(12, "deck12.II.null-pair.indefinite-12", {"4*s363*s525-s345^2": det2}, "II")
        return DeckClass.II, trace
    if g57 > 0:
        trace.add(12, "deck12.II.null-pair.glued-5-7", {"s(C5⊕C7)": g57}, "II")
        return DeckClass.II, trace
    if dj55 == 0 and cv["C5∪(C3⊕P1⊕C3)"] > 0:
        trace.add(
            12,
            "deck12.II.null-pair.disjoint-5-linked",
            {"s(C5∪C5)": 0, "s(C5∪(C3⊕P1⊕C3))": cv["C5∪(C3⊕P1⊕C3)"]},
            "II",
        )
        return DeckClass.II, trace
    if dj55 == 0 and dj57 > 0:
        trace.add(
            12,
            "deck12.II.null-pair.disjoint-5-7",
            {"s(C5∪C5)": 0, "s(C5∪C7)": dj57},
            "II",
        )
        return DeckClass.II, trace
    return _i_or_iii(trace, "deck12.null-pair", {"4*s363*s525-s345^2": det2}, c12)


def _rank_one_form_value(cv):
    """Quadratic form of (-2*s55, s35) under the 12-edge pair matrix; integral
    because the off-diagonal halves pair up."""
    z3 = -2 * cv["C5⊕C5"]
    z5 = cv["C3⊕P2⊕C5"]
    return (
        cv["C3⊕P6⊕C3"] * z3 * z3
        + cv["C3⊕P4⊕C5"] * z3 * z5
        + cv["C5⊕P2⊕C5"] * z5 * z5
    )


_CLASSIFIERS = {
    4: classify_deck4,
    6: classify_deck6,
    8: classify_deck8,
    10: classify_deck10,
    12: classify_deck12,
}


def classify_deck(cv, depth):
    return _CLASSIFIERS[depth](cv)


def _is_matching(g):
    return g.size >= 1 and all(d <= 1 for d in g.degrees())


def classify_graph(g):
    """Full graph-level verdict from the deck cascade plus the depth rule."""
    m = g.size
    trace = DecisionTrace()
    if m <= 1:
        trace.add(0, "trivial.at-most-one-edge", {"m": m}, "pass")
        return GraphVerdict("trivially_locally_common", None, None, trace)
    if _is_matching(g):
        # every deck graph is a union of single edges, so all even-degree
        # coefficients are sums of even powers; outside the deck procedures
        trace.add(0, "trivial.matching", {"m": m, "s(P2)": 0}, "pass")
        return GraphVerdict("trivially_locally_common", None, None, trace)
    cv = count_vector(g)
    depth = min(m, 12) // 2 * 2
    if depth < 4:
        # only the degree-two coefficient exists; balanced kernels zero it
        trace.add(2, "deck2.III.balanced-null", {"m": m}, "III")
        cls = DeckClass.III
    else:
        cls, trace = _CLASSIFIERS[depth](cv, trace)
    if cls is DeckClass.I:
        return GraphVerdict("locally_common", cls, depth, trace)
    if cls is DeckClass.II:
        return GraphVerdict("not_locally_common", cls, depth, trace)
    if depth >= m - 1:
        return GraphVerdict("locally_common", cls, depth, trace)
    return GraphVerdict("undecided_class_iii", cls, depth, trace)
