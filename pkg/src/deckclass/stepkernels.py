"""Piecewise-constant symmetric kernels on [0,1]^2 and their exact densities.

Grid kernels are square Fraction matrices over a uniform partition of [0,1];
step functions carry arbitrary rational breakpoints.  All densities are
computed exactly: the multilinear edge-product integral of a pattern graph is
contracted by greedy vertex elimination, and the symmetrized perturbation
polynomial around a constant base density comes out with exact rational
coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import OutOfScopeError, VerificationError
from .graphs import Graph, canonical_form, connected_components

__all__ = [
    "StepFunction",
    "StepKernel",
    "RankOneSum",
    "integral",
    "inner",
    "pointwise",
    "apply_operator",
    "hom_density",
    "naive_hom_density",
    "cycle_density",
    "rooted_cycle_density",
    "glue",
    "is_balanced",
    "EpsPolynomial",
    "perturbation_coefficients",
    "eval_perturbed_sum",
]


@dataclass(frozen=True)
class StepFunction:
    """Function on [0,1) that is constant between consecutive breakpoints."""

    breakpoints: tuple  # 0 = b0 < b1 < ... < br = 1, Fractions
    values: tuple

    def __post_init__(self):
        b = self.breakpoints
        if len(b) != len(self.values) + 1 or b[0] != 0 or b[-1] != 1:
            raise ValueError("malformed step function")
        if any(b[i] >= b[i + 1] for i in range(len(b) - 1)):
            raise ValueError("breakpoints must strictly increase")

    @staticmethod
    def uniform(values):
        n = len(values)
        return StepFunction(
            tuple(Fraction(i, n) for i in range(n + 1)), tuple(values)
        )

    @staticmethod
    def constant(value):
        return StepFunction((Fraction(0), Fraction(1)), (value,))


def _refine(f, g):
    """Common breakpoints and the two value sequences on them."""
    pts = sorted(set(f.breakpoints) | set(g.breakpoints))
    fi = gi = 0
    fv, gv = [], []
    for lo in pts[:-1]:
        while f.breakpoints[fi + 1] <= lo:
            fi += 1
        while g.breakpoints[gi + 1] <= lo:
            gi += 1
        fv.append(f.values[fi])
        gv.append(g.values[gi])
    return tuple(pts), fv, gv


def integral(f):
    return sum(
        v * (f.breakpoints[i + 1] - f.breakpoints[i])
        for i, v in enumerate(f.values)
    )


def inner(f, g):
    pts, fv, gv = _refine(f, g)
    return sum(
        a * b * (pts[i + 1] - pts[i]) for i, (a, b) in enumerate(zip(fv, gv))
    )


def pointwise(f, g):
    pts, fv, gv = _refine(f, g)
    return StepFunction(pts, tuple(a * b for a, b in zip(fv, gv)))


@dataclass(frozen=True)
class StepKernel:
    """Symmetric kernel constant on the cells of a uniform n-grid."""

    n: int
    matrix: tuple  # n rows of n Fractions

    def __post_init__(self):
        m = self.matrix
        if len(m) != self.n or any(len(r) != self.n for r in m):
            raise ValueError("matrix shape does not match grid size")
        for i in range(self.n):
            for j in range(i):
                if m[i][j] != m[j][i]:
                    raise ValueError("kernel matrix must be symmetric")

    @staticmethod
    def from_rows(rows):
        return StepKernel(
            len(rows), tuple(tuple(Fraction(x) for x in r) for r in rows)
        )

    @staticmethod
    def constant(c, n=1):
        c = Fraction(c)
        return StepKernel(n, tuple(tuple(c for _ in range(n)) for _ in range(n)))

    def shift_scale(self, base, eps):
        """The kernel base + eps * U, entrywise."""
        base, eps = Fraction(base), Fraction(eps)
        return StepKernel(
            self.n,
            tuple(tuple(base + eps * x for x in row) for row in self.matrix),
        )

    def max_abs(self):
        return max(abs(x) for row in self.matrix for x in row)


@dataclass(frozen=True)
class RankOneSum:
    """Kernel sum(mult * lam * f(x) f(y)) over terms with orthonormal f's."""

    terms: tuple  # (lam, StepFunction, mult)

    def __post_init__(self):
        fs = [f for _, f, _ in self.terms]
        for i, f in enumerate(fs):
            if inner(f, f) != 1:
                raise VerificationError("rank-one factor is not unit norm")
            for g in fs[:i]:
                if inner(f, g) != 0:
                    raise VerificationError("rank-one factors are not orthogonal")


def apply_operator(u, f):
    """(Uf)(z) = integral of U(z, x) f(x) dx, exact on the grid of u."""
    cellint = [Fraction(0)] * u.n
    for j in range(u.n):
        lo, hi = Fraction(j, u.n), Fraction(j + 1, u.n)
        for i, v in enumerate(f.values):
            a, b = max(lo, f.breakpoints[i]), min(hi, f.breakpoints[i + 1])
            if a < b:
                cellint[j] += v * (b - a)
    return StepFunction.uniform(
        [sum(u.matrix[i][j] * cellint[j] for j in range(u.n)) for i in range(u.n)]
    )


def _eliminate(component, edges, n, matrix):
    """Contract the edge-product sum over one component, integer matrix."""
    factors = []  # (vars tuple, dict assignment -> int)
    for u, v in edges:
        factors.append(((u, v), None))  # matrix factor, stored implicitly
    live = set(component)
    result = 1

    def factor_value(fac, assign):
        (vars_, table) = fac
        if table is None:
            u, v = vars_
            return matrix[assign[u]][assign[v]]
        return table[tuple(assign[x] for x in vars_)]

    while live:
        # eliminate the vertex appearing in fewest factors
        v = min(
            live,
            key=lambda x: sum(1 for vars_, _ in factors if x in vars_),
        )
        touching = [f for f in factors if v in f[0]]
        factors = [f for f in factors if v not in f[0]]
        rest = sorted({x for vars_, _ in touching for x in vars_ if x != v})
        table = {}
        for assign_rest in itertools.product(range(n), repeat=len(rest)):
            assign = dict(zip(rest, assign_rest))
            tot = 0
            for xv in range(n):
                assign[v] = xv
                prod = 1
                for fac in touching:
                    prod *= factor_value(fac, assign)
                    if prod == 0:
                        break
                tot += prod
            table[assign_rest] = tot
        if rest:
            factors.append((tuple(rest), table))
        else:
            result *= table[()]
        live.remove(v)
    if factors:
        raise VerificationError("elimination left a dangling factor")
    return result


def hom_density(h, u):
    """t(h, u): the edge-product integral over all vertex placements."""
    if h.size == 0:
        raise OutOfScopeError("pattern must have at least one edge")
    mint, den = _int_matrix(u)
    total = Fraction(1)
    for comp in connected_components(h):
        edges = [e for e in h.edges if e[0] in comp]
        if not edges:
            continue  # isolated vertex integrates to 1
        raw = _eliminate(comp, edges, u.n, mint)
        total *= Fraction(raw, den ** len(edges) * u.n ** len(comp))
    return total


def naive_hom_density(h, u):
    """Oracle: the same integral as a bare |V(h)|-fold nested sum."""
    n = u.n
    total = Fraction(0)
    for assign in itertools.product(range(n), repeat=h.order):
        prod = Fraction(1)
        for a, b in h.edges:
            prod *= u.matrix[assign[a]][assign[b]]
            if prod == 0:
                break
        total += prod
    return total / Fraction(n) ** h.order


def _int_matrix(u):
    """Integer-scaled copy of the kernel matrix and the common denominator."""
    import math

    den = 1
    for row in u.matrix:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    mint = [[int(x * den) for x in row] for row in u.matrix]
    return mint, den


def _int_matpow_diag(u, k):
    """Diagonal of the k-th matrix power over integers, plus the scale."""
    mint, den = _int_matrix(u)
    n = u.n
    power = mint
    for _ in range(k - 1):
        power = [
            [sum(power[i][t] * mint[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
    return [power[i][i] for i in range(n)], den


def cycle_density(k, u):
    """t(C_k, u); for rank-one sums this is the weighted eigenvalue power sum."""
    if k < 3:
        raise OutOfScopeError("cycles need length >= 3")
    if isinstance(u, RankOneSum):
        return sum(mult * Fraction(lam) ** k for lam, _, mult in u.terms)
    diag, den = _int_matpow_diag(u, k)
    return Fraction(sum(diag), (den * u.n) ** k)


def rooted_cycle_density(ell, u):
    """t^{C_ell}(x) as a step function on the grid of u (ell >= 3)."""
    if ell < 3:
        raise OutOfScopeError("cycles need length >= 3")
    diag, den = _int_matpow_diag(u, ell)
    scale = Fraction(1, den**ell * u.n ** (ell - 1))
    return StepFunction.uniform([d * scale for d in diag])


def glue(f, g):
    """Density of the one-point join of two rooted pieces: the inner product."""
    return inner(f, g)


def is_balanced(u):
    """True iff the kernel's rooted edge density vanishes identically."""
    if isinstance(u, RankOneSum):
        return all(lam == 0 or integral(f) == 0 for lam, f, _ in u.terms)
    return all(sum(row) == 0 for row in u.matrix)


@dataclass
class EpsPolynomial:
    """Even-degree deck coefficients of the symmetrized perturbation density.

    Around base density p, the two perturbed densities sum to
    2 * sum over even k of p^(m-k) c_k eps^k with c_0 = 1, where c_k is the
    total density of the k-edge deck of the source graph in the kernel.
    """

    p: Fraction
    m: int
    coeffs: dict  # even degree -> Fraction

    def evaluate(self, eps):
        eps = Fraction(eps)
        total = self.p**self.m
        for k, c in sorted(self.coeffs.items()):
            total += self.p ** (self.m - k) * c * eps**k
        return 2 * total

    def to_json_dict(self):
        from .jsonio import rat_str

        return {
            "schema": "deckclass/1",
            "p": rat_str(self.p),
            "m": self.m,
            "c": {str(k): rat_str(c) for k, c in sorted(self.coeffs.items())},
        }


def _deck_classes(g, ell):
    """Isomorphism classes of ell-edge subgraphs: list of (representative, count)."""
    classes = {}
    edges = sorted(g.edges)
    for subset in itertools.combinations(edges, ell):
        sub = Graph.from_edges(subset).without_isolated()
        key = canonical_form(sub)
        if key in classes:
            classes[key][1] += 1
        else:
            classes[key] = [sub, 1]
    return [(rep, count) for rep, count in classes.values()]


def perturbation_coefficients(g, u, p=Fraction(1, 2), max_degree=None):
    """Exact even-degree deck coefficients c_k = sum over k-edge subgraphs of
    t(H, u) for k up to max_degree (default: all of them)."""
    m = g.size
    if max_degree is None:
        max_degree = m
    if max_degree > m:
        raise OutOfScopeError("max_degree exceeds the edge count")
    balanced = is_balanced(u)
    coeffs = {}
    for k in range(2, max_degree + 1, 2):
        total = Fraction(0)
        for rep, count in _deck_classes(g, k):
            if balanced and any(d < 2 for d in rep.degrees()):
                continue  # degree-one vertex forces a zero factor
            total += count * hom_density(rep, u)
        coeffs[k] = total
    return EpsPolynomial(Fraction(p), m, coeffs)


def eval_perturbed_sum(g, u, eps, p=Fraction(1, 2)):
    """t(g, p + eps*U) + t(g, p - eps*U) by direct density evaluation."""
    eps = Fraction(eps)
    plus = u.shift_scale(p, eps)
    minus = u.shift_scale(p, -eps)
    return hom_density(g, plus) + hom_density(g, minus)
