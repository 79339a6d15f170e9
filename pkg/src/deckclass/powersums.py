"""Finite multisets with prescribed odd power sums and a small top power sum.

The constructions work over exact rationals.  ``powers_zero`` solves the
odd-exponent moment system fraction-free; ``powers_small`` rescales its
output so one odd power sum is exactly 1 (the scale factor is an exact
root, carried as a radical-tagged value when it is irrational);
``prescribe_powers`` hits arbitrary rational odd targets.  By default it
uses a scaling that keeps every emitted value rational while all power
sums stay exact, which is what the kernel constructions consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import OutOfScopeError, VerificationError

__all__ = [
    "Radical",
    "RadSum",
    "WeightedMultiset",
    "make_value",
    "power_sum",
    "bareiss_solve",
    "powers_zero",
    "powers_small",
    "prescribe_powers",
]


# ---------------------------------------------------------------------------
# exact values: rationals and radical-tagged rationals


@dataclass(frozen=True)
class Radical:
    """The real number coef * base**(1/root); base > 0, root >= 2, and base is
    never a perfect root-th power (canonicalized on construction)."""

    coef: Fraction
    base: Fraction
    root: int

    def __repr__(self):
        return f"{self.coef}*({self.base})^(1/{self.root})"


def _canonical_radical(coef, base, root):
    """Normalize coef*base**(1/root) to (coef', base', root') canonical form."""
    coef, base = Fraction(coef), Fraction(base)
    if coef == 0 or base == 0:
        return Fraction(0), Fraction(1), 1
    if base < 0:
        if root % 2 == 0:
            raise ValueError("negative base under an even root")
        coef, base = -coef, -base
    if root == 1:
        return coef * base, Fraction(1), 1
    if base == 1:
        return coef, Fraction(1), 1
    fac = dict(sympy.factorint(base.numerator))
    for p, e in sympy.factorint(base.denominator).items():
        fac[p] = fac.get(p, 0) - e
    g = root
    for e in fac.values():
        g = math.gcd(g, abs(e))
    root //= g
    fac = {p: e // g for p, e in fac.items()}
    if root == 1:
        for p, e in fac.items():
            coef *= Fraction(p) ** e
        return coef, Fraction(1), 1
    newbase = Fraction(1)
    for p, e in fac.items():
        q, r = divmod(e, root)
        coef *= Fraction(p) ** q
        newbase *= Fraction(p) ** r
    if newbase == 1:
        return coef, Fraction(1), 1
    return coef, newbase, root


def make_value(coef, base=1, root=1):
    """Exact value coef*base**(1/root) as a Fraction or canonical Radical."""
    c, b, r = _canonical_radical(coef, base, root)
    if b == 1:
        return c
    return Radical(c, b, r)


def _value_pow(v, e):
    """Exact e-th power of a value, as (coef, base, root) pre-canonical data."""
    if isinstance(v, Radical):
        q, r = divmod(e, v.root)
        return (v.coef**e * v.base**q, v.base**r, v.root)
    return (Fraction(v) ** e, Fraction(1), 1)


def _nth_root_bounds(base, root, iters):
    """Rational lo <= base**(1/root) <= hi by bisection; base > 0."""
    lo, hi = Fraction(0), max(Fraction(1), Fraction(base))
    for _ in range(iters):
        mid = (lo + hi) / 2
        if mid**root <= base:
            lo = mid
        else:
            hi = mid
    return lo, hi


class RadSum:
    """Exact finite sum: rational part plus coef*base**(1/root) terms."""

    def __init__(self, rational=0, terms=None):
        self.rational = Fraction(rational)
        self.terms = dict(terms or {})  # (base, root) -> coef

    def copy(self):
        return RadSum(self.rational, self.terms)

    def add_value(self, coef, base=1, root=1, mult=1):
        c, b, r = _canonical_radical(Fraction(coef) * mult, base, root)
        if b == 1:
            self.rational += c
        else:
            key = (b, r)
            self.terms[key] = self.terms.get(key, Fraction(0)) + c
            if self.terms[key] == 0:
                del self.terms[key]
        return self

    def __iadd__(self, other):
        if isinstance(other, RadSum):
            self.rational += other.rational
            for (b, r), c in other.terms.items():
                self.add_value(c, b, r)
        else:
            self.rational += Fraction(other)
        return self

    @property
    def is_rational(self):
        return not self.terms

    def as_fraction(self):
        if self.terms:
            raise VerificationError(f"value is irrational: {self!r}")
        return self.rational

    def bounds(self, iters=40):
        lo = hi = self.rational
        for (b, r), c in self.terms.items():
            blo, bhi = _nth_root_bounds(b, r, iters)
            if c >= 0:
                lo += c * blo
                hi += c * bhi
            else:
                lo += c * bhi
                hi += c * blo
        return lo, hi

    def compare(self, other):
        """-1, 0, or +1 against a rational; exact."""
        diff = self.copy()
        diff.rational -= Fraction(other)
        if not diff.terms:
            r = diff.rational
            return -1 if r < 0 else (1 if r > 0 else 0)
        # distinct canonical radicals are linearly independent over Q, so a
        # nonzero term list means the difference is nonzero; bisect its sign
        for iters in (40, 80, 160, 320, 640):
            lo, hi = diff.bounds(iters)
            if hi < 0:
                return -1
            if lo > 0:
                return 1
        raise VerificationError("could not separate radical sum from rational")

    def __le__(self, other):
        return self.compare(other) <= 0

    def __eq__(self, other):
        if isinstance(other, RadSum):
            return self.rational == other.rational and self.terms == other.terms
        return self.is_rational and self.rational == Fraction(other)

    def __repr__(self):
        parts = [str(self.rational)] + [
            f"{c}*({b})^(1/{r})" for (b, r), c in sorted(self.terms.items())
        ]
        return " + ".join(parts)


def _value_key(v):
    if isinstance(v, Radical):
        return (v.root, v.base, v.coef)
    return (1, Fraction(1), Fraction(v))


@dataclass(frozen=True)
class WeightedMultiset:
    """Multiset of exact values with (big) integer multiplicities."""

    items: tuple

    @staticmethod
    def from_pairs(pairs):
        merged = {}
        for value, mult in pairs:
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult == 0:
                continue
            key = _value_key(value)
            if key in merged:
                merged[key] = (merged[key][0], merged[key][1] + mult)
            else:
                merged[key] = (value, mult)
        items = tuple(sorted(merged.values(), key=lambda p: _value_key(p[0])))
        return WeightedMultiset(items)

    @property
    def total_count(self):
        return sum(m for _, m in self.items)

    def scaled(self, factor):
        """Multiply every value by an exact rational factor."""
        f = Fraction(factor)
        out = []
        for v, m in self.items:
            if isinstance(v, Radical):
                out.append((make_value(v.coef * f, v.base, v.root), m))
            else:
                out.append((v * f, m))
        return WeightedMultiset.from_pairs(out)

    def union(self, other):
        return WeightedMultiset.from_pairs(self.items + other.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


EMPTY_MULTISET = WeightedMultiset(())


def power_sum(ms, e):
    """Exact sum of mult * value**e; a Fraction when rational, else a RadSum."""
    if e < 1:
        raise OutOfScopeError("power_sum needs a positive exponent")
    acc = RadSum()
    for v, m in ms:
        c, b, r = _value_pow(v, e)
        acc.add_value(c, b, r, mult=m)
    if acc.is_rational:
        return acc.rational
    return acc


# ---------------------------------------------------------------------------
# fraction-free linear solve


def bareiss_solve(a, b):
    """Solve the square integer system a x = b exactly (Bareiss elimination).

    Raises if a is singular.  Returns a list of Fractions.
    """
    n = len(a)
    m = [[int(x) for x in row] + [int(bv)] for row, bv in zip(a, b)]
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k] != 0), None)
        if piv is None:
            raise VerificationError("singular moment matrix")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                m[i][j] = (m[k][k] * m[i][j] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n])
        for j in range(i + 1, n):
            s -= m[i][j] * x[j]
        x[i] = s / m[i][i]
    return x


def _check_odd_pair(k0, k):
    if k0 % 2 == 0 or k % 2 == 0 or not 3 <= k0 <= k:
        raise OutOfScopeError(f"need odd 3 <= k0 <= k, got k0={k0}, k={k}")


def powers_zero(k0, k):
    """Integer multiset whose odd power sums in [3, k] vanish except at k0,
    where the sum is positive."""
    _check_odd_pair(k0, k)
    d = (k - 1) // 2
    a = [[(j + 1) ** (2 * i + 3) for j in range(d)] for i in range(d)]
    rhs = [1 if 2 * i + 3 == k0 else 0 for i in range(d)]
    z = bareiss_solve(a, rhs)
    denlcm = 1
    for zi in z:
        denlcm = denlcm * zi.denominator // math.gcd(denlcm, zi.denominator)
    zint = [int(zi * denlcm) for zi in z]
    pairs = []
    for j, zj in enumerate(zint, start=1):
        if zj > 0:
            pairs.append((Fraction(j), zj))
        elif zj < 0:
            pairs.append((Fraction(-j), -zj))
    ms = WeightedMultiset.from_pairs(pairs)
    if power_sum(ms, k0) <= 0:
        raise VerificationError("moment solve produced a nonpositive target sum")
    return ms


def powers_small(k0, k, delta):
    """Multiset with k0-th power sum exactly 1, other odd sums in [3, k] zero,
    and (k+1)-th power sum at most delta.

    Values are the integer solution scaled by omega**(-1/k0) * 2**(-n) with
    multiplicities blown up by 2**(n*k0); n is the least admissible choice.
    """
    _check_odd_pair(k0, k)
    delta = Fraction(delta)
    if delta <= 0:
        raise OutOfScopeError("delta must be positive")
    base = powers_zero(k0, k)
    omega = power_sum(base, k0)
    top = power_sum(base, k + 1)  # integer
    # (k+1)-sum after scaling: top * omega**(-(k+1)/k0) * 2**(-n*(k+1-k0))
    n = 0
    acc = RadSum()
    acc.add_value(top, Fraction(1, omega ** (k + 1)), k0)
    shrink = Fraction(1, 2 ** (k + 1 - k0))
    while not acc <= delta:
        n += 1
        scaled = RadSum()
        for (b, r), c in acc.terms.items():
            scaled.add_value(c * shrink, b, r)
        scaled.rational = acc.rational * shrink
        acc = scaled
    mult_factor = 2 ** (n * k0)
    pairs = []
    for v, m in base:
        pairs.append(
            (make_value(Fraction(v, 2**n), Fraction(1, omega), k0), m * mult_factor)
        )
    return WeightedMultiset.from_pairs(pairs)


def _min_pow2_shrink(value, budget, step_exp):
    """Least n >= 0 with value / 2**(n*step_exp) <= budget (rationals)."""
    n = 0
    v = Fraction(value)
    step = Fraction(1, 2**step_exp)
    while v > budget:
        v *= step
        n += 1
    return n


def _power_part(n, ell):
    """Largest u with u**ell dividing n, and the cofactor n // u**ell."""
    u = 1
    for p, e in sympy.factorint(n).items():
        u *= int(p) ** (e // ell)
    return u, n // u**ell


def _root_cover(n, ell):
    """Smallest w with n dividing w**ell."""
    w = 1
    for p, e in sympy.factorint(n).items():
        w *= int(p) ** -(-e // ell)
    return w


def _rational_block(ell, k, target, budget):
    """All-rational multiset: odd sums in [3, k] vanish except at ell where the
    sum is exactly `target`; the (k+1)-sum is rational and at most `budget`.

    The integer solution with sum omega is rescaled by the rational
    eps*u/(w*2**n) chosen so that the compensating multiplicity factor is a
    (small) integer; this realizes the target exactly with rational values.
    """
    target = Fraction(target)
    if target == 0:
        return EMPTY_MULTISET
    base = powers_zero(ell, k)
    omega = int(power_sum(base, ell))
    top = int(power_sum(base, k + 1))
    eps = 1 if target > 0 else -1
    t = abs(target) / omega
    u, num_rest = _power_part(t.numerator, ell)
    w = _root_cover(t.denominator, ell)
    mult0 = num_rest * w**ell // t.denominator
    # (k+1)-sum at n: (u/(w*2^n))^(k+1) * mult0 * 2^(n*ell) * top
    start = Fraction(u ** (k + 1) * mult0 * top, w ** (k + 1))
    n = _min_pow2_shrink(start, budget, k + 1 - ell)
    scale = Fraction(eps * u, w * 2**n)
    mult_factor = mult0 * 2 ** (n * ell)
    pairs = [(v * scale, m * mult_factor) for v, m in base]
    return WeightedMultiset.from_pairs(pairs)


def prescribe_powers(k, targets, delta, mode="rational"):
    """Multiset whose odd power sums in [3, k] equal `targets` exactly and
    whose (k+1)-th power sum is at most delta.

    mode="rational" (default) keeps every emitted value rational by scaling
    whole blocks; mode="radical" superposes unit blocks scaled by the exact
    roots target**(1/ell), emitting radical-tagged values.
    """
    if k % 2 == 0 or k < 3:
        raise OutOfScopeError(f"k must be odd and >= 3, got {k}")
    delta = Fraction(delta)
    if delta <= 0:
        raise OutOfScopeError("delta must be positive")
    targets = {int(ell): Fraction(v) for ell, v in targets.items()}
    for ell in targets:
        if ell % 2 == 0 or not 3 <= ell <= k:
            raise OutOfScopeError(f"target exponent {ell} out of range")
    active = [ell for ell, v in sorted(targets.items()) if v != 0]
    if not active:
        return EMPTY_MULTISET
    budget = delta / len(active)
    out = EMPTY_MULTISET
    for ell in active:
        s = targets[ell]
        if mode == "rational":
            block = _rational_block(ell, k, s, budget)
        elif mode == "radical":
            # scale the unit block by s**(1/ell); its (k+1)-sum then carries
            # the factor |s|**((k+1)/ell), bounded here by an exact root bound
            mag = abs(s)
            _, hi = _nth_root_bounds(mag ** (k + 1), ell, 80)
            unit = powers_small(ell, k, budget / max(hi, Fraction(1)))
            sign = 1 if s > 0 else -1
            pairs = []
            for v, m in unit:
                # combine the two roots of equal degree ell: (b * mag)^(1/ell)
                if isinstance(v, Radical):
                    if v.root != ell:
                        raise VerificationError("unexpected radical degree in block")
                    pairs.append((make_value(v.coef * sign, v.base * mag, ell), m))
                else:
                    pairs.append((make_value(Fraction(v) * sign, mag, ell), m))
            block = WeightedMultiset.from_pairs(pairs)
        else:
            raise OutOfScopeError(f"unknown mode {mode!r}")
        out = out.union(block)
    return out
