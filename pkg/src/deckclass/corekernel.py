"""Balanced step kernels with prescribed rooted odd-cycle densities.

A ``CoreKernelSpec`` packages the parameters of the construction: an odd
order ``k``, a smallness budget ``delta``, ``m`` eigenrows with eigenvalues
``sigma[i]``, plain cycle densities ``gamma[ell]`` and rooted-density
coordinates ``tau[i, ell]`` for odd ``ell`` in [3, k].  The unit interval is
split into N = m + (k-1)/2 cells; each cell splits into two halves, and each
half carries a multiset of rank-one weights built by ``prescribe_powers`` so
that the half's odd power sums hit exact targets.  The resulting kernel

* is balanced (every constituent function has zero mean),
* has f_i (the +/- indicator of cell i, scaled to unit norm) as an
  eigenfunction with eigenvalue sigma[i],
* has rooted odd-cycle densities with exact coordinates gamma/tau,
* has (k+1)-cycle density at most delta.

Densities of arbitrary principal graphs reduce to exact rational arithmetic
on the 2N half-cells: applying the kernel to a half-cell-constant function
only sees the eigenrows, and a cycle threaded through ports contributes its
weight power sums per half cell.  Everything here is exact; no floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetError, OutOfScopeError, VerificationError
from .graphs import Graph, blocks as graph_blocks, connected_components
from .powersums import (
    EMPTY_MULTISET,
    RadSum,
    WeightedMultiset,
    power_sum,
    prescribe_powers,
)
from .stepkernels import StepKernel

__all__ = [
    "CoreKernelSpec",
    "build_core_kernel",
    "core_cycle_density",
    "core_theta_density",
    "core_glued_pair_density",
    "core_c_k_plus_1_bound",
    "spec_cycle_density",
    "density_of_principal",
    "materialize",
]


def _isqrt_exact(n):
    r = math.isqrt(n)
    return r if r * r == n else None


@dataclass(frozen=True)
class CoreKernelSpec:
    """Parameter bundle plus the derived per-half-cell weight multisets."""

    k: int
    k_eff: int
    delta: Fraction
    m: int
    sigma: tuple
    gamma: dict  # odd ell -> Fraction
    tau: dict  # (i, ell), i in 1..m -> Fraction
    blocks: tuple  # 2N WeightedMultisets, index 2*cell + half
    fallback: bool
    mode: str

    @property
    def n_cells(self):
        return self.m + (self.k_eff - 1) // 2

    def sigma_of(self, i):
        return self.sigma[i - 1]

    def tau_of(self, i, ell):
        return self.tau.get((i, ell), Fraction(0))

    def gamma_of(self, ell):
        return self.gamma.get(ell, Fraction(0))

    def is_zero(self):
        return all(s == 0 for s in self.sigma) and all(
            len(b) == 0 for b in self.blocks
        )

    def params_json(self):
        from .jsonio import rat_str

        return {
            "schema": "deckclass/1",
            "k": self.k,
            "k_eff": self.k_eff,
            "delta": rat_str(self.delta),
            "m": self.m,
            "sigma": [rat_str(s) for s in self.sigma],
            "gamma": {str(l): rat_str(v) for l, v in sorted(self.gamma.items()) if v},
            "tau": {
                f"{i},{l}": rat_str(v) for (i, l), v in sorted(self.tau.items()) if v
            },
            "fallback": self.fallback,
        }


def build_core_kernel(k, delta, m, sigma=(), gamma=None, tau=None, mode="rational"):
    """Construct the spec; validates the eigenvalue budget and builds all
    per-half-cell weight multisets with exact power-sum targets.

    With mode="rational" every emitted weight is rational, which requires the
    per-eigenrow targets tau/(2 sqrt(N)) - sigma^j/2 to be rational: either
    m = 0, or N = m + (k-1)/2 a perfect square, or all-zero eigenrow data.
    """
    if k < 3 or k % 2 == 0:
        raise OutOfScopeError(f"k must be odd and >= 3, got {k}")
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise OutOfScopeError("delta must lie in (0, 1]")
    if m < 0 or len(sigma) != m:
        raise OutOfScopeError("sigma must list exactly m eigenvalues")
    sigma = tuple(Fraction(s) for s in sigma)
    gamma = {int(l): Fraction(v) for l, v in (gamma or {}).items()}
    tau = {(int(i), int(l)): Fraction(v) for (i, l), v in (tau or {}).items()}
    for l in gamma:
        if l % 2 == 0 or not 3 <= l <= k:
            raise OutOfScopeError(f"gamma index {l} out of range")
    for i, l in tau:
        if not 1 <= i <= m or l % 2 == 0 or not 3 <= l <= k:
            raise OutOfScopeError(f"tau index {(i, l)} out of range")
    if sum(s ** (k + 1) for s in sigma) > delta / 2:
        raise OutOfScopeError("eigenvalue power sum exceeds delta/2")

    fallback = False
    k_eff = k
    if (
        all(s == 0 for s in sigma)
        and all(v == 0 for v in gamma.values())
        and all(v == 0 for v in tau.values())
    ):
        # degenerate input: raise the order by two and plant one plain cycle
        # density there so the kernel is nonzero but all requested densities
        # stay zero
        fallback = True
        k_eff = k + 2
        gamma = {k_eff: delta / 2}

    n_cells = m + (k_eff - 1) // 2
    sqrt_n = _isqrt_exact(n_cells)
    budget = delta / (2 * (2 * m + k_eff - 1))
    odd_range = range(3, k_eff + 1, 2)

    blocks = []
    for i in range(1, m + 1):
        for sign in (1, -1):
            targets = {}
            for j in odd_range:
                t = tau.get((i, j), Fraction(0))
                s_half = sigma[i - 1] ** j / 2
                if t == 0:
                    targets[j] = -s_half
                else:
                    if sqrt_n is None:
                        raise OutOfScopeError(
                            "m + (k-1)/2 must be a perfect square for rational "
                            "eigenrow targets; pad m with zero rows"
                        )
                    targets[j] = sign * t / (2 * sqrt_n) - s_half
            if sqrt_n is None and any(
                targets[j] != -sigma[i - 1] ** j / 2 for j in odd_range
            ):
                raise OutOfScopeError("irrational eigenrow targets")
            blocks.append(prescribe_powers(k_eff, targets, budget, mode=mode))
    for idx in range(1, (k_eff - 1) // 2 + 1):
        ell = 2 * idx + 1
        g = gamma.get(ell, Fraction(0))
        blk = (
            prescribe_powers(k_eff, {ell: g / 2}, budget, mode=mode)
            if g
            else EMPTY_MULTISET
        )
        blocks.append(blk)  # first half of the cell
        blocks.append(blk)  # second half carries an identical copy
    return CoreKernelSpec(
        k=k,
        k_eff=k_eff,
        delta=delta,
        m=m,
        sigma=sigma,
        gamma=gamma,
        tau=tau,
        blocks=tuple(blocks),
        fallback=fallback,
        mode=mode,
    )


def _check_odd_in_range(spec, ell):
    if ell % 2 == 0 or not 3 <= ell <= spec.k_eff:
        raise OutOfScopeError(f"odd cycle length {ell} outside [3, {spec.k_eff}]")


def core_cycle_density(spec, ell):
    """Plain odd-cycle density: exactly gamma[ell]."""
    _check_odd_in_range(spec, ell)
    return spec.gamma_of(ell)


def core_theta_density(spec, ell, n, ell2):
    """Density of two odd cycles joined by an n-edge path, n >= 0; the
    coincident-root case ell == ell2, n == 0 has its own formula, see
    core_glued_pair_density."""
    _check_odd_in_range(spec, ell)
    _check_odd_in_range(spec, ell2)
    if n < 0:
        raise OutOfScopeError("path length must be non-negative")
    if ell == ell2 and n == 0:
        raise OutOfScopeError(
            "coincident roots with equal lengths: use core_glued_pair_density"
        )
    total = Fraction(0)
    for i in range(1, spec.m + 1):
        s = spec.sigma_of(i)
        sn = Fraction(1) if n == 0 else s**n  # 0^0 = 1
        total += sn * spec.tau_of(i, ell) * spec.tau_of(i, ell2)
    return total


def core_glued_pair_density(spec, ell):
    """Density of two ell-cycles sharing one vertex."""
    _check_odd_in_range(spec, ell)
    n_cells = spec.n_cells
    return spec.gamma_of(ell) ** 2 * n_cells + sum(
        spec.tau_of(i, ell) ** 2 for i in range(1, spec.m + 1)
    )


def spec_cycle_density(spec, length):
    """Cycle density of any length >= 3 as the exact eigenvalue power sum."""
    if length < 3:
        raise OutOfScopeError("cycles need length >= 3")
    acc = RadSum()
    for s in spec.sigma:
        acc.add_value(s**length)
    for blk in spec.blocks:
        ps = power_sum(blk, length) if len(blk) else Fraction(0)
        acc += ps if isinstance(ps, RadSum) else RadSum(ps)
    if acc.is_rational:
        return acc.as_fraction()
    return acc


def core_c_k_plus_1_bound(spec):
    """Exact (k_eff+1)-cycle density; raises if it exceeds delta."""
    val = spec_cycle_density(spec, spec.k_eff + 1)
    ok = (val <= spec.delta) if isinstance(val, RadSum) else val <= spec.delta
    if not ok:
        raise VerificationError("top cycle density exceeds delta")
    return val


# ---------------------------------------------------------------------------
# exact densities of principal graphs


def _halfcell_power_sums(spec, length):
    out = []
    for blk in spec.blocks:
        if len(blk) == 0:
            out.append(Fraction(0))
            continue
        ps = power_sum(blk, length)
        if isinstance(ps, RadSum):
            ps = ps.as_fraction()  # rational mode guarantees this
        out.append(ps)
    return out


class _Evaluator:
    """Exact density evaluation over the 2N half cells of a spec kernel."""

    def __init__(self, spec):
        if spec.mode != "rational":
            raise OutOfScopeError("density evaluation requires a rational-mode spec")
        self.spec = spec
        self.n2 = 2 * spec.n_cells
        self._psums = {}

    def psums(self, length):
        if length not in self._psums:
            self._psums[length] = _halfcell_power_sums(self.spec, length)
        return self._psums[length]

    def ones(self):
        return [Fraction(1)] * self.n2

    def integrate(self, vec):
        return sum(vec) / self.n2

    def mul(self, u, v):
        return [a * b for a, b in zip(u, v)]

    def apply_kernel(self, vec):
        """U applied to a half-cell-constant function: only eigenrows act."""
        out = [Fraction(0)] * self.n2
        for i in range(self.spec.m):
            s = self.spec.sigma[i]
            if s == 0:
                continue
            diff = (vec[2 * i] - vec[2 * i + 1]) / 2
            out[2 * i] = s * diff
            out[2 * i + 1] = -s * diff
        return out

    def cycle_vector(self, length, port_branches):
        """Open cycle of given length rooted outside: the vector of the rooted
        density with the given branch functions attached at its other ports."""
        spec = self.spec
        out = [Fraction(0)] * self.n2
        n_cells = spec.n_cells
        for i in range(spec.m):
            w = spec.sigma[i] ** length
            for h in port_branches:
                w *= (h[2 * i] + h[2 * i + 1]) / 2
            if w:
                out[2 * i] += w * n_cells
                out[2 * i + 1] += w * n_cells
        ps = self.psums(length)
        for alpha in range(self.n2):
            w = ps[alpha]
            for h in port_branches:
                if w == 0:
                    break
                w *= h[alpha]
            if w:
                out[alpha] += 2 * n_cells * w
        return out

    def cycle_scalar(self, length, port_branches):
        """Closed cycle with branch functions at all its ports."""
        spec = self.spec
        total = Fraction(0)
        for i in range(spec.m):
            w = spec.sigma[i] ** length
            for h in port_branches:
                w *= (h[2 * i] + h[2 * i + 1]) / 2
            total += w
        ps = self.psums(length)
        for alpha in range(self.n2):
            w = ps[alpha]
            for h in port_branches:
                if w == 0:
                    break
                w *= h[alpha]
            total += w
        return total


def _component_block_structure(g, comp):
    """Blocks of one component, classified; returns (blocks, vertex->blocks)."""
    comp_edges = [e for e in g.edges if e[0] in comp]
    sub_blocks = [
        blk for blk in graph_blocks(g) if blk[0][0] in comp or blk[0][1] in comp
    ]
    classified = []
    for blk in sub_blocks:
        verts = {v for e in blk for v in e}
        if len(blk) == 1:
            classified.append(("bridge", blk, verts))
        else:
            deg = {}
            for u, v in blk:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            if any(d != 2 for d in deg.values()):
                raise OutOfScopeError("component has a non-cycle block")
            classified.append(("cycle", blk, verts))
    by_vertex = {}
    for idx, (_, blk, verts) in enumerate(classified):
        for v in verts:
            by_vertex.setdefault(v, []).append(idx)
    return classified, by_vertex


def density_of_principal(spec, g):
    """Exact density t(g, U) for a graph whose blocks are cycles and bridges.

    Works for every principal graph (components multiply) and more generally
    for any block tree of cycles and bridges.
    """
    ev = _Evaluator(spec)
    total = Fraction(1)
    for comp in connected_components(g):
        if len(comp) == 1:
            continue
        classified, by_vertex = _component_block_structure(g, comp)

        def branch_vector(v, parent_idx):
            vec = None
            for idx in by_vertex[v]:
                if idx == parent_idx:
                    continue
                bv = block_vector(idx, v)
                vec = bv if vec is None else ev.mul(vec, bv)
            return vec if vec is not None else ev.ones()

        def block_vector(idx, root):
            kind, blk, verts = classified[idx]
            if kind == "bridge":
                (u, v) = blk[0]
                other = v if root == u else u
                return ev.apply_kernel(branch_vector(other, idx))
            ports = [
                w
                for w in verts
                if w != root and len(by_vertex[w]) > 1
            ]
            branches = [branch_vector(w, idx) for w in ports]
            return ev.cycle_vector(len(blk), branches)

        # root the component at any vertex; closed cycles are handled by
        # integrating the product of the open vectors of all blocks there
        root = min(comp)
        idxs = by_vertex.get(root)
        if idxs is None:
            raise OutOfScopeError("component vertex outside every block")
        first, rest = idxs[0], idxs[1:]
        kind, blk, verts = classified[first]
        outside = None
        for idx in rest:
            bv = block_vector(idx, root)
            outside = bv if outside is None else ev.mul(outside, bv)
        if kind == "bridge":
            vec = block_vector(first, root)
            vec = vec if outside is None else ev.mul(vec, outside)
            total *= ev.integrate(vec)
        else:
            ports = [w for w in verts if w != root and len(by_vertex[w]) > 1]
            branches = [branch_vector(w, first) for w in ports]
            if outside is not None:
                branches.append(outside)
            total *= ev.cycle_scalar(len(blk), branches)
    return total


# ---------------------------------------------------------------------------
# materialization to an explicit grid kernel


def materialize(spec, max_cells=640):
    """Exact uniform-grid kernel realizing the spec's rank-one sum.

    Each half cell is split into q equal sub-cells with q the next power of
    two above its weight count; the weights ride Walsh rows (mean-zero,
    orthonormal, constant absolute value), so each factor squares to the
    half-cell indicator as the construction requires, and the grid size stays
    linear in the weight count.  Refuses when the grid would exceed max_cells
    or when any weight is irrational.
    """
    n_cells = spec.n_cells
    max_count = max((blk.total_count for blk in spec.blocks), default=0)
    q = 1
    while q < max_count + 1:
        q *= 2
    n = 2 * n_cells * q
    if n > max_cells:
        raise BudgetError(
            f"materialization needs {n} grid cells (> {max_cells}); "
            "the closed-form densities remain available"
        )
    for blk in spec.blocks:
        for v, _ in blk:
            if not isinstance(v, (int, Fraction)):
                raise BudgetError("irrational weights cannot be laid on a grid")
    mat = [[Fraction(0)] * n for _ in range(n)]

    def add_rank_one(weight, cells_signs):
        # rank-one term weight * v v^T with v = sign pattern; the unit-norm
        # scaling of the factors is folded into `weight`
        for a, va in cells_signs:
            row = mat[a]
            for b, vb in cells_signs:
                row[b] += weight * va * vb

    # eigenrow terms sigma_i f_i x f_i: f_i = +-sqrt(N) on the two halves
    for i in range(spec.m):
        s = spec.sigma[i]
        if s == 0:
            continue
        plus = [(2 * i * q + t, 1) for t in range(q)]
        minus = [((2 * i + 1) * q + t, -1) for t in range(q)]
        add_rank_one(s * n_cells, plus + minus)

    # half-cell weights on Walsh rows: row r has entries (-1)^popcount(r & s),
    # unit norm after scaling by sqrt(2 N q / q) = sqrt(2N)
    for alpha, blk in enumerate(spec.blocks):
        r = 0
        base = alpha * q
        for value, mult in blk:
            for _ in range(mult):
                r += 1
                signs = [
                    (base + s, 1 if bin(r & s).count("1") % 2 == 0 else -1)
                    for s in range(q)
                ]
                add_rank_one(Fraction(value) * 2 * n_cells, signs)
    return StepKernel(n, tuple(tuple(row) for row in mat))
