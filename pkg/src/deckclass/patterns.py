"""The closed pattern catalogue and subgraph count vectors.

Pattern names follow the join conventions used throughout the package:
``A∪B`` is a disjoint union, ``A⊕B`` identifies one vertex of each part, and
``A⊕Pn⊕B`` joins the parts by an n-edge path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import (
    Graph,
    canonical_form,
    count_subgraphs,
    cycle,
    cycle_chain,
    disjoint_union,
    path,
)

__all__ = ["PATTERNS", "PATTERN_IDS", "CountVector", "count_vector", "pattern_graph"]


def _tri_edge_tri():
    # two triangles joined by a single bridge
    return cycle_chain(3, 1, 3)


def _build_patterns():
    pats = {
        "P1": path(1),
        "P2": path(2),
        "P1∪P1": disjoint_union(path(1), path(1)),
    }
    for k in (3, 4, 5, 6, 7, 8, 9, 10, 11, 12):
        pats[f"C{k}"] = cycle(k)
    pats["C3∪C3"] = disjoint_union(cycle(3), cycle(3))
    pats["C3⊕C3"] = cycle_chain(3, 0, 3)
    pats["C3∪C5"] = disjoint_union(cycle(3), cycle(5))
    pats["C3⊕C5"] = cycle_chain(3, 0, 5)
    pats["C3⊕P2⊕C3"] = cycle_chain(3, 2, 3)
    pats["C3∪C7"] = disjoint_union(cycle(3), cycle(7))
    pats["C3⊕C7"] = cycle_chain(3, 0, 7)
    pats["C3⊕P2⊕C5"] = cycle_chain(3, 2, 5)
    pats["C3⊕P4⊕C3"] = cycle_chain(3, 4, 3)
    pats["C5∪C5"] = disjoint_union(cycle(5), cycle(5))
    pats["C5⊕C5"] = cycle_chain(5, 0, 5)
    pats["C3∪(C3⊕P1⊕C3)"] = disjoint_union(cycle(3), _tri_edge_tri())
    pats["C3∪C9"] = disjoint_union(cycle(3), cycle(9))
    pats["C3⊕C9"] = cycle_chain(3, 0, 9)
    pats["C5∪C7"] = disjoint_union(cycle(5), cycle(7))
    pats["C5⊕C7"] = cycle_chain(5, 0, 7)
    pats["C5⊕P2⊕C5"] = cycle_chain(5, 2, 5)
    pats["C3⊕P6⊕C3"] = cycle_chain(3, 6, 3)
    pats["C3⊕P4⊕C5"] = cycle_chain(3, 4, 5)
    pats["C3⊕P2⊕C7"] = cycle_chain(3, 2, 7)
    pats["C5∪(C3⊕P1⊕C3)"] = disjoint_union(cycle(5), _tri_edge_tri())
    pats["C3∪C3∪C3∪C3"] = disjoint_union(
        disjoint_union(cycle(3), cycle(3)), disjoint_union(cycle(3), cycle(3))
    )
    pats["C3∪(C3⊕P3⊕C3)"] = disjoint_union(cycle(3), cycle_chain(3, 3, 3))
    pats["C3∪(C3⊕P1⊕C5)"] = disjoint_union(cycle(3), cycle_chain(3, 1, 5))
    return pats


PATTERNS: dict = _build_patterns()
PATTERN_IDS = tuple(PATTERNS)


def pattern_graph(pattern_id):
    return PATTERNS[pattern_id]


@dataclass
class CountVector:
    """Subgraph copy counts over the pattern catalogue.

    ``m`` is the edge count of the source graph when the vector was derived
    from one; synthetic vectors may leave it None.
    """

    counts: dict = field(default_factory=dict)
    m: int | None = None

    def __getitem__(self, pattern_id):
        return self.counts.get(pattern_id, 0)

    def __setitem__(self, pattern_id, value):
        if value < 0:
            raise ValueError(f"negative count for {pattern_id}")
        self.counts[pattern_id] = int(value)

    def to_json_dict(self):
        out = {k: self.counts[k] for k in PATTERN_IDS if k in self.counts}
        extra = {k: v for k, v in self.counts.items() if k not in PATTERN_IDS}
        out.update(sorted(extra.items()))
        if self.m is not None:
            out["m"] = self.m
        return out


def count_vector(g):
    """Count every catalogue pattern in g (subgraph copies), recording m."""
    cv = CountVector(m=g.size)
    for pid, pat in PATTERNS.items():
        cv[pid] = count_subgraphs(g, pat)
    return cv


def pattern_id_for(graph):
    """Catalogue id matching the given graph up to isomorphism, or None."""
    key = canonical_form(graph.without_isolated())
    for pid, pat in PATTERNS.items():
        if canonical_form(pat) == key:
            return pid
    return None
