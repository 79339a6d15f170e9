"""Finite simple graphs: parsing, isomorphism, subgraph counting, principal graphs.

Graphs are immutable: vertices are 0..order-1, edges a frozenset of sorted
pairs.  Everything here is exact combinatorics on small graphs (the package
is tuned for hosts up to ~32 vertices / 20 edges and patterns up to 13 edges).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import ParseError

__all__ = [
    "Graph",
    "cycle",
    "path",
    "complete",
    "disjoint_union",
    "vertex_glue",
    "cycle_chain",
    "parse_graph",
    "parse_edgelist",
    "parse_graph6",
    "to_graph6",
    "canonical_form",
    "are_isomorphic",
    "automorphism_count",
    "count_embeddings",
    "count_subgraphs",
    "brute_force_count",
    "connected_components",
    "blocks",
    "is_principal",
    "enumerate_principal",
    "enumerate_connected_principal",
    "shortest_even_cycle",
]


@dataclass(frozen=True)
class Graph:
    """A finite simple graph on vertices 0..order-1."""

    order: int
    edges: frozenset

    def __post_init__(self):
        for e in self.edges:
            u, v = e
            if u == v:
                raise ParseError(f"loop at vertex {u}")
            if not (0 <= u < v < self.order):
                raise ParseError(f"edge {e} out of range for order {self.order}")

    @staticmethod
    def from_edges(edges, order=None):
        """Build a graph from an iterable of (u, v) pairs, normalizing pair order."""
        norm = set()
        maxv = -1
        for u, v in edges:
            if u == v:
                raise ParseError(f"loop at vertex {u}")
            norm.add((min(u, v), max(u, v)))
            maxv = max(maxv, u, v)
        n = maxv + 1 if order is None else order
        return Graph(n, frozenset(norm))

    @property
    def size(self):
        """Number of edges."""
        return len(self.edges)

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def degrees(self):
        d = [0] * self.order
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def neighbors(self, v):
        out = set()
        for u, w in self.edges:
            if u == v:
                out.add(w)
            elif w == v:
                out.add(u)
        return out

    def adjacency(self):
        adj = [set() for _ in range(self.order)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in self.edges

    def without_isolated(self):
        """Isolated-vertex-free normal form (relabels to 0..n-1)."""
        used = sorted({v for e in self.edges for v in e})
        relab = {v: i for i, v in enumerate(used)}
        return Graph(len(used), frozenset((relab[u], relab[v]) for u, v in self.edges))

    def relabel(self, perm):
        """Apply a vertex permutation given as a dict or list old->new."""
        return Graph.from_edges(
            ((perm[u], perm[v]) for u, v in self.edges), order=self.order
        )


def cycle(k):
    if k < 3:
        raise ValueError("cycles need length >= 3")
    return Graph.from_edges(
        [(i, (i + 1) % k) for i in range(k)], order=k
    )


def path(n):
    """The n-edge path P_n on n+1 vertices (n >= 1)."""
    if n < 1:
        raise ValueError("paths need at least one edge")
    return Graph.from_edges([(i, i + 1) for i in range(n)], order=n + 1)


def complete(n):
    return Graph.from_edges(itertools.combinations(range(n), 2), order=n)


def disjoint_union(g, h):
    shift = g.order
    edges = set(g.edges) | {(u + shift, v + shift) for u, v in h.edges}
    return Graph(g.order + h.order, frozenset(edges))


def vertex_glue(g, h, gv=0, hv=0):
    """Identify vertex gv of g with vertex hv of h (the one-point join)."""
    shift = g.order
    relab = {}
    nxt = shift
    for v in range(h.order):
        if v == hv:
            relab[v] = gv
        else:
            relab[v] = nxt
            nxt += 1
    edges = set(g.edges) | {
        tuple(sorted((relab[u], relab[v]))) for u, v in h.edges
    }
    return Graph(nxt, frozenset(edges))


def cycle_chain(a, n, b):
    """Two cycles of lengths a and b joined by an n-edge path (n=0 glues directly)."""
    g = cycle(a)
    if n == 0:
        return vertex_glue(g, cycle(b))
    g = vertex_glue(g, path(n), gv=0, hv=0)
    # the free end of the path is the last vertex added
    free_end = g.order - 1
    return vertex_glue(g, cycle(b), gv=free_end, hv=0)


# ---------------------------------------------------------------------------
# parsing / serialization


def parse_edgelist(text):
    """Parse 'u v' pairs, one per line; blank lines and '#' comments allowed."""
    edges = []
    maxv = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex in {raw!r}")
        if u < 0 or v < 0:
            raise ParseError(f"line {lineno}: negative vertex in {raw!r}")
        if u == v:
            raise ParseError(f"line {lineno}: loop at vertex {u}")
        e = (min(u, v), max(u, v))
        if e in edges:
            raise ParseError(f"line {lineno}: duplicate edge {u} {v}")
        edges.append(e)
        maxv = max(maxv, u, v)
    return Graph(maxv + 1 if maxv >= 0 else 0, frozenset(edges))


def parse_graph6(line):
    """Decode one graph in the standard printable graph6 encoding."""
    s = line.strip()
    if not s:
        raise ParseError("empty graph6 string")
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    data = []
    for off, ch in enumerate(s):
        code = ord(ch)
        if not (63 <= code <= 126):
            raise ParseError(f"invalid graph6 character {ch!r} at offset {off}")
        data.append(code - 63)
    if data[0] <= 62:
        n = data[0]
        body = data[1:]
    elif len(data) >= 4 and data[0] == 63 and data[1] <= 62:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        raise ParseError("unsupported graph6 order encoding")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) != need:
        raise ParseError(
            f"graph6 body length {len(body)} != expected {need} for order {n}"
        )
    bits = []
    for x in body:
        bits.extend((x >> shift) & 1 for shift in (5, 4, 3, 2, 1, 0))
    if any(bits[nbits:]):
        raise ParseError("nonzero padding bits in graph6 string")
    edges = set()
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.add((i, j))
            idx += 1
    return Graph(n, frozenset(edges))


def to_graph6(g):
    """Encode a graph in graph6 (orders up to 258047)."""
    n = g.order
    if n <= 62:
        head = [n]
    elif n <= 258047:
        head = [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    else:
        raise ParseError("graph too large for graph6 encoder")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    body = [
        (bits[i] << 5)
        | (bits[i + 1] << 4)
        | (bits[i + 2] << 3)
        | (bits[i + 3] << 2)
        | (bits[i + 4] << 1)
        | bits[i + 5]
        for i in range(0, len(bits), 6)
    ]
    return "".join(chr(63 + x) for x in head + body)


def parse_graph(text, fmt="edgelist"):
    """Parse a graph in the named format ('edgelist' or 'graph6')."""
    if fmt == "edgelist":
        return parse_edgelist(text)
    if fmt == "graph6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise ParseError("expected exactly one graph6 line")
        return parse_graph6(lines[0])
    raise ParseError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# isomorphism machinery


def connected_components(g):
    """Vertex sets of connected components (isolated vertices included)."""
    seen = [False] * g.order
    adj = g.adjacency()
    comps = []
    for s in range(g.order):
        if seen[s]:
            continue
        stack, comp = [s], set()
        seen[s] = True
        while stack:
            v = stack.pop()
            comp.add(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(comp)
    return comps


def _induced(g, verts):
    verts = sorted(verts)
    relab = {v: i for i, v in enumerate(verts)}
    edges = {
        (relab[u], relab[v]) for u, v in g.edges if u in relab and v in relab
    }
    return Graph(len(verts), frozenset(edges))


def _refine_colors(adj, colors):
    n = len(colors)
    while True:
        sig = [
            (colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(n)
        ]
        order = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [order[sig[v]] for v in range(n)]
        if new == colors:
            return colors
        colors = new


def _canon_connected(g):
    """Lexicographically minimal adjacency encoding over degree-refined labelings.

    Branch-and-bound: partial encodings are compared against the best known
    prefix, which prunes almost all of the search on small sparse graphs.
    """
    n = g.order
    adj = g.adjacency()
    colors = _refine_colors(adj, [0] * n)
    best = None

    def backtrack(assigned, used, prefix):
        nonlocal best
        i = len(assigned)
        if best is not None:
            head = best[: len(prefix)]
            if prefix > head:
                return
        if i == n:
            if best is None or prefix < best:
                best = prefix
            return
        cands = [v for v in range(n) if v not in used]
        mincol = min(colors[v] for v in cands)
        for v in cands:
            if colors[v] != mincol:
                continue
            row = tuple(1 if v in adj[w] else 0 for w in assigned)
            backtrack(assigned + [v], used | {v}, prefix + row)

    backtrack([], frozenset(), ())
    return (n, best)


@lru_cache(maxsize=None)
def _canonical_cached(order, edges):
    g = Graph(order, edges)
    comps = connected_components(g)
    parts = sorted(_canon_connected(_induced(g, c)) for c in comps)
    return tuple(parts)


def canonical_form(g):
    """Isomorphism-invariant canonical key (componentwise minimal encodings)."""
    return _canonical_cached(g.order, g.edges)


def are_isomorphic(g, h):
    if g.order != h.order or g.size != h.size:
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g) == canonical_form(h)


def count_embeddings(pattern, host):
    """Number of injective maps V(pattern)->V(host) sending edges to edges."""
    p, h = pattern, host
    if p.order > h.order or p.size > h.size:
        return 0
    padj = p.adjacency()
    hadj = h.adjacency()
    pdeg = p.degrees()
    hdeg = h.degrees()

    # order pattern vertices: most-constrained first, keeping connectivity
    order = []
    placed = set()
    remaining = set(range(p.order))
    while remaining:
        with_nb = [v for v in remaining if padj[v] & placed]
        pool = with_nb if with_nb else list(remaining)
        v = max(pool, key=lambda v: (len(padj[v] & placed), pdeg[v]))
        order.append(v)
        placed.add(v)
        remaining.remove(v)

    count = 0
    assign = {}
    used = set()

    def extend(i):
        nonlocal count
        if i == len(order):
            count += 1
            return
        v = order[i]
        anchors = [assign[w] for w in padj[v] if w in assign]
        if anchors:
            cands = set(hadj[anchors[0]])
            for a in anchors[1:]:
                cands &= hadj[a]
        else:
            cands = set(range(h.order))
        for c in cands:
            if c in used or hdeg[c] < pdeg[v]:
                continue
            assign[v] = c
            used.add(c)
            extend(i + 1)
            del assign[v]
            used.remove(c)

    extend(0)
    return count


@lru_cache(maxsize=None)
def _aut_cached(order, edges):
    g = Graph(order, edges)
    return count_embeddings(g, g)


def automorphism_count(g):
    """Order of the automorphism group (edge-preserving self-bijections)."""
    return _aut_cached(g.order, g.edges)


def count_subgraphs(host, pattern):
    """Number of edge subsets of host whose edge-induced subgraph is isomorphic
    to pattern (subgraph copies, not homomorphisms)."""
    p = pattern.without_isolated()
    if p.size == 0:
        raise ValueError("pattern must have at least one edge")
    if p.size > host.size or p.order > host.order:
        return 0
    return count_embeddings(p, host) // automorphism_count(p)


def brute_force_count(host, pattern):
    """Oracle: enumerate all size-k edge subsets and isomorphism-test each one."""
    p = pattern.without_isolated()
    k = p.size
    key = canonical_form(p)
    total = 0
    edges = sorted(host.edges)
    for sub in itertools.combinations(edges, k):
        g = Graph.from_edges(sub).without_isolated()
        if canonical_form(g) == key:
            total += 1
    return total


# ---------------------------------------------------------------------------
# blocks / principal graphs


def blocks(g):
    """Biconnected blocks as lists of edges (bridges are single-edge blocks)."""
    adj = g.adjacency()
    disc = [0] * g.order
    low = [0] * g.order
    timer = [1]
    stack = []
    out = []

    def dfs(v, parent_edge):
        disc[v] = low[v] = timer[0]
        timer[0] += 1
        for w in adj[v]:
            e = (min(v, w), max(v, w))
            if e == parent_edge:
                continue
            if disc[w] == 0:
                stack.append(e)
                dfs(w, e)
                low[v] = min(low[v], low[w])
                if low[w] >= disc[v]:
                    block = []
                    while True:
                        top = stack.pop()
                        block.append(top)
                        if top == e:
                            break
                    out.append(block)
            elif disc[w] < disc[v]:
                stack.append(e)
                low[v] = min(low[v], disc[w])

    for s in range(g.order):
        if disc[s] == 0 and adj[s]:
            dfs(s, None)
    return out


def _is_cycle_block(block_edges):
    """A block given by its edges is a cycle iff every vertex has degree 2."""
    deg = {}
    for u, v in block_edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return all(d == 2 for d in deg.values())


def is_principal(g):
    """True iff g is an even cycle, or has minimum degree two and every block
    is an odd cycle or a single edge."""
    if g.size == 0:
        return False
    h = g
    degs = h.degrees()
    if any(d == 0 for d in degs):
        return False
    if all(d == 2 for d in degs):
        comps = connected_components(h)
        if len(comps) == 1 and h.size % 2 == 0 and h.size == h.order:
            return True  # single even cycle
    if any(d < 2 for d in degs):
        return False
    for blk in blocks(h):
        if len(blk) == 1:
            continue
        if not (_is_cycle_block(blk) and len(blk) % 2 == 1):
            return False
    return True


def enumerate_connected_principal(edge_count):
    """All connected principal graphs with exactly edge_count edges that are
    not even cycles (i.e. odd-cycle/bridge block trees of minimum degree two)."""
    return [Graph(o, e) for o, e in _connected_principal_cached(edge_count)]


@lru_cache(maxsize=None)
def _connected_principal_cached(edge_count):
    results = {}

    def consider(g):
        if is_principal(g) and len(connected_components(g)) == 1:
            key = canonical_form(g)
            if key not in results:
                results[key] = g

    # states: partially built graphs (cycles glued, bridges pending)
    # grow: start from one odd cycle; repeatedly attach an odd cycle at an
    # existing vertex, or attach via a bridge path to a new odd cycle.
    seen_states = set()

    def grow(g):
        key = canonical_form(g)
        if (key, g.size) in seen_states:
            return
        seen_states.add((key, g.size))
        if g.size == edge_count:
            consider(g)
            return
        if g.size > edge_count:
            return
        budget = edge_count - g.size
        for c in range(3, budget + 1, 2):
            for v in range(g.order):
                grow(vertex_glue(g, cycle(c), gv=v, hv=0))
        # bridge path of length p >= 1 from an existing vertex to a new cycle
        for p in range(1, budget - 2):
            for c in range(3, budget - p + 1, 2):
                seg = vertex_glue(path(p), cycle(c), gv=p, hv=0)
                for v in range(g.order):
                    grow(vertex_glue(g, seg, gv=v, hv=0))

    for c in range(3, edge_count + 1, 2):
        grow(cycle(c))
    return tuple((g.order, g.edges) for g in results.values())


def enumerate_principal(edge_count):
    """All isomorphism classes of principal graphs with exactly edge_count edges."""
    if edge_count % 2 or not 4 <= edge_count <= 12:
        raise ValueError("edge_count must be an even integer in 4..12")
    out = {canonical_form(cycle(edge_count)): cycle(edge_count)}

    def partitions(total, smallest):
        if total == 0:
            yield []
            return
        for first in range(smallest, total + 1):
            for rest in partitions(total - first, first):
                yield [first] + rest

    comp_pool = {
        e: enumerate_connected_principal(e) for e in range(3, edge_count + 1)
    }
    for part in partitions(edge_count, 3):
        choices = [comp_pool[e] for e in part]
        if any(not c for c in choices):
            continue
        for combo in itertools.product(*choices):
            g = combo[0]
            for h in combo[1:]:
                g = disjoint_union(g, h)
            key = canonical_form(g)
            if key not in out:
                out[key] = g
    return sorted(out.values(), key=canonical_form)


def shortest_even_cycle(g):
    """Minimum even k with a k-cycle subgraph, or None."""
    for k in range(4, g.order + 1, 2):
        if count_subgraphs(g, cycle(k)) > 0:
            return k
    return None
