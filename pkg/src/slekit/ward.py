"""Restriction correlators and the operator calculus acting on them.

The tower B = (B_0, B_1, ...) is built recursively: B_0 = 1 and each
extension inserts a fresh first variable x through

    B_{n+1}(x, x_1..x_n)
        = (a/x^2) B_n - sum_j [ (1/(x_j - x) + 1/x) d_j - 2/(x_j - x)^2 ] B_n,

with a the restriction exponent. Everything downstream of this recursion is
exact rational-function arithmetic: the differential representations

    W_N  = - sum_j x_j^(1+N) d_j                       (witt_L)
    SL_N = sum_j ( - x_j^(1+N) d_j - 2(N+1) x_j^N )    (script_L)

the Laurent-mode extraction l_N, the bubble sums T_p with their summed
operator U, and the level-two degeneracy residuals. Identities asserted on
these objects are decided exactly, not numerically.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Sequence

from .symbolic import (MultiRat, inject_variables, laurent_coefficients,
                       partial_derivative)
from .virasoro import params_of_kappa

Scalar = Fraction | int


class BVector:
    """The correlator tower (B_0, ..., B_nmax) for one exponent alpha."""

    __slots__ = ("alpha", "components")

    def __init__(self, alpha: Scalar, components: Sequence[MultiRat]):
        object.__setattr__(self, "alpha", Fraction(alpha))
        components = tuple(components)
        for k, comp in enumerate(components):
            if comp.arity != k:
                raise ValueError(f"component {k} has arity {comp.arity}")
        object.__setattr__(self, "components", components)

    def __setattr__(self, name, value):
        raise AttributeError("BVector is immutable")

    def __getitem__(self, n: int) -> MultiRat:
        return self.components[n]

    def __len__(self) -> int:
        return len(self.components)

    @property
    def nmax(self) -> int:
        return len(self.components) - 1


def b1(alpha: Scalar) -> MultiRat:
    """B_1 = alpha / x1^2."""
    x = MultiRat.var(1, 1)
    return Fraction(alpha) / x ** 2


def ward_extend(bn: MultiRat, alpha: Scalar) -> MultiRat:
    """One recursion step: insert a fresh first variable into B_n."""
    alpha = Fraction(alpha)
    n = bn.arity
    m = n + 1
    body = inject_variables(bn, list(range(2, m + 1)), m)
    x = MultiRat.var(1, m)
    out = (alpha / x ** 2) * body
    for j in range(1, n + 1):
        xj = MultiRat.var(j + 1, m)
        d_body = partial_derivative(body, j + 1)
        out = out - (1 / (xj - x) + 1 / x) * d_body \
            + (2 / (xj - x) ** 2) * body
    return out


def build_B(alpha: Scalar, nmax: int) -> BVector:
    """Build the tower (B_0 = 1, B_1, ..., B_nmax) by repeated extension."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    comps = [MultiRat.one(0)]
    for _ in range(nmax):
        comps.append(ward_extend(comps[-1], alpha))
    return BVector(alpha, comps)


def witt_L(N: int, f: MultiRat) -> MultiRat:
    """W_N f = - sum_j x_j^(1+N) d_j f (first-order part only)."""
    out = MultiRat.zero(f.arity)
    for j in range(1, f.arity + 1):
        xj = MultiRat.var(j, f.arity)
        out = out - xj ** (1 + N) * partial_derivative(f, j)
    return out


def script_L(N: int, f: MultiRat) -> MultiRat:
    """SL_N f = sum_j ( - x_j^(1+N) d_j - 2(N+1) x_j^N ) f."""
    out = MultiRat.zero(f.arity)
    for j in range(1, f.arity + 1):
        xj = MultiRat.var(j, f.arity)
        out = out - xj ** (1 + N) * partial_derivative(f, j) \
            - (2 * (N + 1)) * xj ** N * f
    return out


def l_extract(N: int, w: Sequence[MultiRat] | BVector, n: int) -> MultiRat:
    """Mode extraction: (l_N w)_n is the x^(-N-2) Laurent coefficient of
    w_{n+1}(x, x_1..x_n) in its first variable around 0."""
    comp = w[n + 1]
    if comp.arity != n + 1:
        raise ValueError(f"component {n + 1} has arity {comp.arity}")
    return laurent_coefficients(comp, 1, -N - 2, -N - 2)[0]


def l_vector(N: int, w: Sequence[MultiRat] | BVector,
             up_to: int) -> list[MultiRat]:
    """The tower (l_N w)_0..(l_N w)_up_to; needs w components to up_to+1."""
    return [l_extract(N, w, n) for n in range(up_to + 1)]


def permutation_oracle_alpha1(points: Sequence[Scalar]) -> Fraction:
    """Closed-form B_n at alpha = 1, evaluated exactly at a rational point.

    B_n^(1)(x_1..x_n) = sum over permutations s of
    prod_{j=1..n} (x_{s(j)} - x_{s(j-1)})^(-2) with x_{s(0)} = 0.

    Deliberately built on Fraction arithmetic alone so it shares no code with
    the Ward recursion it cross-checks. Points must be distinct and nonzero.
    """
    pts = [Fraction(p) for p in points]
    if len(set(pts)) != len(pts) or any(p == 0 for p in pts):
        raise ValueError("points must be distinct and nonzero")
    total = Fraction(0)
    for s in permutations(pts):
        prev = Fraction(0)
        term = Fraction(1)
        for xv in s:
            term /= (xv - prev) ** 2
            prev = xv
        total += term
    return total


def semigroup_compose(bv1: BVector, bv2: BVector, n: int) -> MultiRat:
    """Correlator for the summed exponent alpha1 + alpha2 at level n.

    B_n^(a1+a2)(x_1..x_n) = sum over assignments r: {1..n} -> {1,2} of
    B^(a1)(variables with r=1) * B^(a2)(variables with r=2).
    """
    if n > min(bv1.nmax, bv2.nmax):
        raise ValueError("towers too short for requested level")
    out = MultiRat.zero(n)
    for assign in product((1, 2), repeat=n):
        pos1 = [j + 1 for j in range(n) if assign[j] == 1]
        pos2 = [j + 1 for j in range(n) if assign[j] == 2]
        f1 = inject_variables(bv1[len(pos1)], pos1, n)
        f2 = inject_variables(bv2[len(pos2)], pos2, n)
        out = out + f1 * f2
    return out


@lru_cache(maxsize=None)
def bubble_T(p: int) -> MultiRat:
    """Bubble sum T_p: T_0 = 0, T_1 = 1/x1^4, and in general the sum over
    orderings s of 1/(x_{s(1)}^2 (x_{s(2)}-x_{s(1)})^2 ... x_{s(p)}^2)."""
    if p < 0:
        raise ValueError("p must be >= 0")
    if p == 0:
        return MultiRat.zero(0)
    gens = [MultiRat.var(i, p) for i in range(1, p + 1)]
    out = MultiRat.zero(p)
    for s in permutations(range(p)):
        den = gens[s[0]] ** 2
        for a, b in zip(s, s[1:]):
            den = den * (gens[b] - gens[a]) ** 2
        den = den * gens[s[-1]] ** 2
        out = out + 1 / den
    return out


def U_apply(w: Sequence[MultiRat] | BVector, n: int) -> MultiRat:
    """(U w)_n = sum over nonempty J subset {1..n} of T_|J|(x_J) w_{n-|J|}(rest)."""
    out = MultiRat.zero(n)
    for size in range(1, n + 1):
        t = bubble_T(size)
        for subset in combinations(range(1, n + 1), size):
            rest = [j for j in range(1, n + 1) if j not in subset]
            tj = inject_variables(t, list(subset), n)
            wr = inject_variables(w[n - size], rest, n)
            out = out + tj * wr
    return out


def degeneracy_residual(B: BVector, kappa: Scalar, n: int) -> MultiRat:
    """(kappa/2) SL_{-1}^2 B_n - 2 SL_{-2} B_n, canonical form.

    Identically zero at every level exactly for (kappa, alpha) = (8/3, 5/8).
    Level 1 alone pins kappa only (the residual there is
    (3 kappa - 8) alpha / x1^4, alpha-independent at kappa = 8/3); the alpha
    selectivity appears from level 2 on, so uniqueness scans must include
    n = 2.
    """
    kappa = Fraction(kappa)
    comp = B[n]
    return (kappa / 2) * script_L(-1, script_L(-1, comp)) \
        - 2 * script_L(-2, comp)


def fw9_residual(B: BVector, kappa: Scalar, n: int,
                 lam: Scalar | None = None,
                 realization: str = "script") -> MultiRat:
    """Residual of the bubble-corrected level-two relation at level n:

        (kappa/2) l_{-1}^2 B_n - 2 l_{-2} B_n + lambda (U B)_n,

    with lambda = (8 - 3 kappa)(6 - kappa)/(2 kappa) unless overridden.
    Identically zero for every kappa when alpha = (6 - kappa)/(2 kappa).

    realization="script" applies the differential-operator form of the
    negative modes (needs components only up to n); realization="laurent"
    extracts the modes as Laurent coefficients of higher components (needs
    components up to n+2). Both agree; the second is the cross-check.
    """
    kappa = Fraction(kappa)
    if lam is None:
        lam = params_of_kappa(kappa)["lambda"]
    lam = Fraction(lam)
    if realization == "script":
        return degeneracy_residual(B, kappa, n) + lam * U_apply(B, n)
    if realization == "laurent":
        lm1 = l_vector(-1, B, n + 1)
        return (kappa / 2) * l_extract(-1, lm1, n) \
            - 2 * l_extract(-2, B, n) + lam * U_apply(B, n)
    raise ValueError(f"unknown realization {realization!r}")
