"""Witness kernel recipes for every Class II branch and the Class III nulls.

Each Class II terminal rule of the deck trees maps to one parameter bundle
for ``build_core_kernel``; the smallness budget delta is chosen from the
count vector so the even-cycle term at the target degree cannot cancel the
negative contribution, and shaped as an even power of a dyadic rational when
the recipe takes delta**(1/2) or delta**(1/4) as an eigenvalue, which keeps
all parameters rational.  Rows are padded with zero eigenvalues so that the
cell count m + (k-1)/2 is a perfect square; the padded rows carry empty
weight multisets and change nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .corekernel import build_core_kernel
from .errors import OutOfScopeError, VerificationError
from .patterns import CountVector

__all__ = [
    "WitnessRecipe",
    "class2_recipe",
    "class3_null_recipe",
    "negative_direction",
]


def _pad_rows(k, m):
    """Smallest m' >= m with m' + (k-1)/2 a perfect square (m'=m when m=0)."""
    if m == 0:
        return 0
    base = (k - 1) // 2
    mm = m
    while math.isqrt(mm + base) ** 2 != mm + base:
        mm += 1
    return mm


@dataclass
class WitnessRecipe:
    rule: str
    k: int
    delta: Fraction
    m: int
    sigma: tuple
    gamma: dict
    tau: dict
    target_degree: int
    z: tuple | None = None
    padded_m: int = 0

    def build(self):
        mm = max(self.m, self.padded_m)
        sigma = tuple(self.sigma) + (Fraction(0),) * (mm - self.m)
        return build_core_kernel(
            self.k, self.delta, mm, sigma=sigma, gamma=self.gamma, tau=self.tau
        )

    def shrunk(self, factor=4):
        """The same recipe rebuilt at a smaller delta (exponents rescale)."""
        return _RECIPE_BUILDERS[self.rule](
            self._cv, delta_cap=self.delta / factor
        )

    def to_json_dict(self):
        from .jsonio import rat_str

        out = {
            "schema": "deckclass/1",
            "rule": self.rule,
            "target_degree": self.target_degree,
            "k": self.k,
            "delta": rat_str(self.delta),
            "m": max(self.m, self.padded_m),
            "sigma": [rat_str(s) for s in self.sigma],
            "gamma": {str(l): rat_str(v) for l, v in sorted(self.gamma.items()) if v},
            "tau": {
                f"{i},{l}": rat_str(v) for (i, l), v in sorted(self.tau.items()) if v
            },
        }
        if self.z is not None:
            out["z"] = [rat_str(v) for v in self.z]
        return out


def negative_direction(mat):
    """Rational z with z^T M z < 0 for a symmetric 2x2 rational matrix that is
    not positive semidefinite; normalized so the form is exactly -1 when the
    normalizer is rational, else scaled so the form is at most -1."""
    (a, b2), (b2x, c) = mat
    if b2 != b2x:
        raise OutOfScopeError("matrix must be symmetric")
    a, b, c = Fraction(a), Fraction(b2), Fraction(c)
    det = a * c - b * b
    if a >= 0 and c >= 0 and det >= 0:
        raise OutOfScopeError("matrix is positive semidefinite")

    def form(z):
        z3, z5 = z
        return a * z3 * z3 + 2 * b * z3 * z5 + c * z5 * z5

    z = None
    for cand in ((1, -1), (1, 1), (1, 0), (0, 1)):
        if form(cand) < 0:
            z = (Fraction(cand[0]), Fraction(cand[1]))
            break
    if z is None:
        if a > 0:
            z = (b, -a)  # form = a * det < 0
        elif c > 0:
            z = (-c, b)
        else:
            raise VerificationError("failed to find a negative direction")
    q = -form(z)
    num_r, den_r = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num_r * num_r == q.numerator and den_r * den_r == q.denominator:
        scale = Fraction(den_r, num_r)
    else:
        scale = 1
        while scale * scale * q < 1:
            scale *= 2
    z = (z[0] * scale, z[1] * scale)
    if form(z) > -1:
        raise VerificationError("direction normalization failed")
    return z


def _dyadic_cap(cap, power=1):
    """Largest delta = (2**-a)**power with delta <= cap; returns (delta, rho)."""
    cap = Fraction(cap)
    a = 1
    while Fraction(1, 2**a) ** power > cap:
        a += 1
    rho = Fraction(1, 2**a)
    return rho**power, rho


def _default_cap(cv, target, hard=Fraction(1, 2)):
    s_top = cv[f"C{target}"]
    return min(hard, Fraction(1, 2 * s_top + 2))


def _simple(rule, k, target, gamma=None, tau=None, m=None):
    """Builder for recipes whose parameters do not involve delta."""

    def build(cv, delta_cap=None):
        cap = _default_cap(cv, target)
        if delta_cap is not None:
            cap = min(cap, delta_cap)
        delta, _ = _dyadic_cap(cap)
        mm = m if m is not None else (1 if tau else 0)
        rec = WitnessRecipe(
            rule=rule,
            k=k,
            delta=delta,
            m=mm,
            sigma=(Fraction(0),) * mm,
            gamma=dict(gamma or {}),
            tau=dict(tau or {}),
            target_degree=target,
            padded_m=_pad_rows(k, mm),
        )
        rec._cv = cv
        return rec

    return build


def _indefinite_pair_10(cv, delta_cap=None):
    mat = (
        (cv["C3⊕P4⊕C3"], Fraction(cv["C3⊕P2⊕C5"], 2)),
        (Fraction(cv["C3⊕P2⊕C5"], 2), cv["C5⊕C5"]),
    )
    z3, z5 = negative_direction(mat)
    cap = _default_cap(cv, 10)
    if delta_cap is not None:
        cap = min(cap, delta_cap)
    delta, _ = _dyadic_cap(cap)
    rec = WitnessRecipe(
        rule="deck10.II.indefinite-pair",
        k=9,
        delta=delta,
        m=1,
        sigma=(delta / 2,),
        gamma={},
        tau={(1, 3): 4 * z3 / delta**2, (1, 5): z5},
        target_degree=10,
        z=(z3, z5),
        padded_m=_pad_rows(9, 1),
    )
    rec._cv = cv
    return rec


def _heavy_deep_37(rule):
    """sigma = sqrt(delta) recipe covering glued 3-9 and the 3..7 chain."""

    def build(cv, delta_cap=None):
        x = 1 + cv["C12"] + cv["C3⊕P6⊕C3"]
        cap = min(_default_cap(cv, 12), Fraction(1, 4))
        if delta_cap is not None:
            cap = min(cap, delta_cap)
        delta, rho = _dyadic_cap(cap, power=2)  # delta = rho^2, sigma = rho
        rec = WitnessRecipe(
            rule=rule,
            k=11,
            delta=delta,
            m=1,
            sigma=(rho,),
            gamma={},
            tau={(1, 3): Fraction(1), (1, 7): -x / delta, (1, 9): -x / delta},
            target_degree=12,
            padded_m=_pad_rows(11, 1),
        )
        rec._cv = cv
        return rec

    return build


def _null_pair_indefinite(cv, delta_cap=None):
    mat = (
        (cv["C3⊕P6⊕C3"], Fraction(cv["C3⊕P4⊕C5"], 2)),
        (Fraction(cv["C3⊕P4⊕C5"], 2), cv["C5⊕P2⊕C5"]),
    )
    z3, z5 = negative_direction(mat)
    cap = _default_cap(cv, 12)
    if delta_cap is not None:
        cap = min(cap, delta_cap)
    delta, _ = _dyadic_cap(cap)
    rec = WitnessRecipe(
        rule="deck12.II.null-pair.indefinite-12",
        k=11,
        delta=delta,
        m=1,
        sigma=(delta / 2,),
        gamma={},
        tau={(1, 3): 8 * z3 / delta**3, (1, 5): 2 * z5 / delta},
        target_degree=12,
        z=(z3, z5),
        padded_m=_pad_rows(11, 1),
    )
    rec._cv = cv
    return rec


def _null_pair_disjoint(rule):
    def build(cv, delta_cap=None):
        x = 1 + cv["C12"] + cv["C3⊕P6⊕C3"]
        cap = min(_default_cap(cv, 12), Fraction(1, 4))
        if delta_cap is not None:
            cap = min(cap, delta_cap)
        delta, _ = _dyadic_cap(cap)
        rec = WitnessRecipe(
            rule=rule,
            k=11,
            delta=delta,
            m=1,
            sigma=(delta,),
            gamma={5: -x / delta, 7: Fraction(1)},
            tau={(1, 3): Fraction(1)},
            target_degree=12,
            padded_m=_pad_rows(11, 1),
        )
        rec._cv = cv
        return rec

    return build


def _rank_one_direction(cv):
    """Kernel direction of the rank-one 10-level pair matrix, scaled so the
    12-level form value lies in [-1, 1]."""
    z3 = Fraction(-2 * cv["C5⊕C5"])
    z5 = Fraction(cv["C3⊕P2⊕C5"])
    if z3 == 0 or z5 == 0:
        raise VerificationError("rank-one case needs both pair counts positive")
    a_form = (
        cv["C3⊕P6⊕C3"] * z3 * z3
        + cv["C3⊕P4⊕C5"] * z3 * z5
        + cv["C5⊕P2⊕C5"] * z5 * z5
    )
    if abs(a_form) > 1:
        c = Fraction(1, math.isqrt(int(abs(a_form))) + 1)
        z3, z5 = z3 * c, z5 * c
    return z3, z5


def _rank_one_mixed(cv, delta_cap=None):
    z3, z5 = _rank_one_direction(cv)
    mix = z3 * cv["C3⊕P2⊕C7"] + z5 * cv["C5⊕C7"]
    cap = min(_default_cap(cv, 12), Fraction(1, 4))
    if delta_cap is not None:
        cap = min(cap, delta_cap)
    delta, rho = _dyadic_cap(cap, power=4)  # delta = rho^4, sigma = rho
    tau = {(1, 3): z3 / rho**2, (1, 5): z5}
    if mix != 0:
        tau[(1, 7)] = -2 * rho**2 / mix
    rec = WitnessRecipe(
        rule="deck12.II.rank-one.negative-form"
        if mix == 0
        else "deck12.II.rank-one.mixed-7",
        k=11,
        delta=delta,
        m=1,
        sigma=(rho,),
        gamma={},
        tau=tau,
        target_degree=12,
        z=(z3, z5),
        padded_m=_pad_rows(11, 1),
    )
    rec._cv = cv
    return rec


def _rank_one_negative(cv, delta_cap=None):
    rec = _rank_one_mixed(cv, delta_cap)
    rec.rule = "deck12.II.rank-one.negative-form"
    return rec


_RECIPE_BUILDERS = {
    "deck8.II.glued-3-5": _simple(
        "deck8.II.glued-3-5", 7, 8, tau={(1, 3): 1, (1, 5): -1}
    ),
    "deck8.II.disjoint-3-5": _simple(
        "deck8.II.disjoint-3-5", 7, 8, gamma={3: 1, 5: -1}
    ),
    "deck10.II.glued-3-7": _simple(
        "deck10.II.glued-3-7", 9, 10, tau={(1, 3): 1, (1, 7): -1}
    ),
    "deck10.II.disjoint-3-7": _simple(
        "deck10.II.disjoint-3-7", 9, 10, gamma={3: 1, 7: -1}
    ),
    "deck10.II.indefinite-pair": _indefinite_pair_10,
    "deck12.II.bowtie.glued-5-7": _simple(
        "deck12.II.bowtie.glued-5-7", 11, 12, tau={(1, 5): 1, (1, 7): -1}
    ),
    "deck12.II.bowtie.disjoint-5-7": _simple(
        "deck12.II.bowtie.disjoint-5-7", 11, 12, gamma={5: 1, 7: -1}
    ),
    "deck12.II.sparse.with-3-9": _simple(
        "deck12.II.sparse.with-3-9",
        11,
        12,
        gamma={3: 1, 9: -1},
        tau={(1, 3): 1, (1, 9): -1},
    ),
    "deck12.II.sparse.glued-5-7": _simple(
        "deck12.II.sparse.glued-5-7", 11, 12, tau={(1, 5): 1, (1, 7): -1}
    ),
    "deck12.II.sparse.disjoint-5-7": _simple(
        "deck12.II.sparse.disjoint-5-7", 11, 12, gamma={5: 1, 7: -1}
    ),
    "deck12.II.linked.glued-3-9": _simple(
        "deck12.II.linked.glued-3-9", 11, 12, tau={(1, 3): 1, (1, 9): -1}
    ),
    "deck12.II.linked.glued-5-7": _simple(
        "deck12.II.linked.glued-5-7", 11, 12, tau={(1, 5): 1, (1, 7): -1}
    ),
    "deck12.II.linked.disjoint-5-7": _simple(
        "deck12.II.linked.disjoint-5-7", 11, 12, gamma={5: 1, 7: -1}
    ),
    "deck12.II.definite.glued-3-9": _simple(
        "deck12.II.definite.glued-3-9", 11, 12, tau={(1, 3): 1, (1, 9): -1}
    ),
    "deck12.II.rank-one.glued-3-9": _simple(
        "deck12.II.rank-one.glued-3-9", 11, 12, tau={(1, 3): 1, (1, 9): -1}
    ),
    "deck12.II.rank-one.negative-form": _rank_one_negative,
    "deck12.II.rank-one.mixed-7": _rank_one_mixed,
    "deck12.II.path-heavy.glued": _simple(
        "deck12.II.path-heavy.glued",
        11,
        12,
        tau={(1, 3): 1, (1, 5): 1, (1, 7): -1, (1, 9): -1},
    ),
    "deck12.II.path-heavy.disjoint-5-7": _simple(
        "deck12.II.path-heavy.disjoint-5-7", 11, 12, gamma={5: 1, 7: -1}
    ),
    "deck12.II.pair-heavy.deep-3": _heavy_deep_37("deck12.II.pair-heavy.deep-3"),
    "deck12.II.null-pair.glued-3-9": _heavy_deep_37("deck12.II.null-pair.glued-3-9"),
    "deck12.II.null-pair.deep-3-7": _heavy_deep_37("deck12.II.null-pair.deep-3-7"),
    "deck12.II.null-pair.indefinite-12": _null_pair_indefinite,
    "deck12.II.null-pair.glued-5-7": _simple(
        "deck12.II.null-pair.glued-5-7", 11, 12, tau={(1, 5): 1, (1, 7): -1}
    ),
    "deck12.II.null-pair.disjoint-5-linked": _null_pair_disjoint(
        "deck12.II.null-pair.disjoint-5-linked"
    ),
    "deck12.II.null-pair.disjoint-5-7": _null_pair_disjoint(
        "deck12.II.null-pair.disjoint-5-7"
    ),
}


def class2_recipe(trace, cv):
    """Witness recipe for the Class II rule that fired in the trace."""
    last = trace.steps[-1]
    if last.outcome != "II":
        raise OutOfScopeError("trace does not end in a Class II rule")
    builder = _RECIPE_BUILDERS.get(last.rule)
    if builder is None:
        raise VerificationError(f"no witness recipe for rule {last.rule!r}")
    return builder(cv)


def class3_null_recipe(depth):
    """Nonzero balanced kernel whose coefficients vanish through `depth`.

    Depth 2 only needs balancedness, so the smallest construction serves.
    """
    if depth % 2 or depth < 2:
        raise OutOfScopeError("depth must be an even integer >= 2")
    rec = WitnessRecipe(
        rule=f"null.depth-{depth}",
        k=max(3, depth - 1),
        delta=Fraction(1),
        m=0,
        sigma=(),
        gamma={},
        tau={},
        target_degree=depth,
    )
    rec._cv = CountVector()
    return rec
