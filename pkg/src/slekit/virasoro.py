"""Central-extension algebra on Verma modules, exactly.

States live in the Verma module V(c, h): formal rational combinations of PBW
monomials L_{-k1} L_{-k2} ... L_{-kn} |h> with 1 <= k1 <= ... <= kn. Operators
act by the commutation rule

    [L_n, L_m] = (n - m) L_{n+m} + delta_{n,-m} (n^3 - n)/12 * c,

normal-ordering results back onto the PBW basis. All coefficients are exact
rationals, so identities here are decided, not approximated.
"""

from __future__ import annotations

from fractions import Fraction

from .symbolic import LaurentPoly


def params_of_kappa(kappa: Fraction) -> dict[str, Fraction]:
    """Central charge, boundary weight, and bubble coupling for a given kappa.

    c = (3k - 8)(6 - k)/(2k),  h = (6 - k)/(2k),  lambda = (8 - 3k) h = -c.

    kappa may be any nonzero rational (the dictionary continues analytically
    outside the probabilistic range).
    """
    kappa = Fraction(kappa)
    if kappa == 0:
        raise ValueError("kappa must be nonzero")
    h = Fraction(6 - kappa, 1) / (2 * kappa)
    c = (3 * kappa - 8) * h
    lam = (8 - 3 * kappa) * h
    return {"c": c, "h": h, "lambda": lam}


class VermaState:
    """Exact vector in the Verma module with parameters (c, h).

    `terms` maps ascending integer tuples (k1 <= ... <= kn) to rational
    coefficients; the tuple stands for the basis monomial
    L_{-k1} ... L_{-kn} |h>, the empty tuple for |h> itself.
    """

    __slots__ = ("c", "h", "terms")

    def __init__(self, c: Fraction, h: Fraction,
                 terms: dict[tuple[int, ...], Fraction] | None = None):
        object.__setattr__(self, "c", Fraction(c))
        object.__setattr__(self, "h", Fraction(h))
        clean = {}
        for key, coeff in (terms or {}).items():
            key = tuple(int(k) for k in key)
            if any(k < 1 for k in key) or list(key) != sorted(key):
                raise ValueError(f"not an ascending PBW key: {key}")
            coeff = Fraction(coeff)
            if coeff:
                clean[key] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("VermaState is immutable")

    @classmethod
    def highest_weight(cls, c: Fraction, h: Fraction) -> "VermaState":
        return cls(c, h, {(): Fraction(1)})

    def _check(self, other: "VermaState"):
        if (self.c, self.h) != (other.c, other.h):
            raise ValueError("states live in different Verma modules")

    def __add__(self, other: "VermaState") -> "VermaState":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return VermaState(self.c, self.h, out)

    def __sub__(self, other: "VermaState") -> "VermaState":
        return self + (-1) * other

    def __mul__(self, scalar) -> "VermaState":
        scalar = Fraction(scalar)
        return VermaState(self.c, self.h,
                          {k: scalar * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, VermaState)
                and (self.c, self.h) == (other.c, other.h)
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.c, self.h, tuple(sorted(self.terms.items()))))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, key: tuple[int, ...]) -> Fraction:
        return self.terms.get(tuple(key), Fraction(0))

    def levels(self) -> set[int]:
        return {sum(k) for k in self.terms}

    def __repr__(self):
        if not self.terms:
            return "VermaState(0)"
        bits = []
        for key in sorted(self.terms, key=lambda k: (sum(k), k)):
            mono = "".join(f"L(-{k})" for k in key) or "|h>"
            if key:
                mono += "|h>"
            bits.append(f"{self.terms[key]}*{mono}")
        return "VermaState(" + " + ".join(bits) + ")"


def _apply_monomial(n: int, key: tuple[int, ...], c: Fraction,
                    h: Fraction) -> dict[tuple[int, ...], Fraction]:
    """Normal-ordered expansion of L_n acting on one PBW monomial."""
    if not key:
        if n > 0:
            return {}
        if n == 0:
            return {(): h}
        return {(-n,): Fraction(1)}
    k1, tail = key[0], key[1:]
    if n < 0 and -n <= k1:
        return {(-n,) + key: Fraction(1)}
    out: dict[tuple[int, ...], Fraction] = {}

    def accumulate(d, scale):
        for k, v in d.items():
            val = out.get(k, Fraction(0)) + scale * v
            if val:
                out[k] = val
            elif k in out:
                del out[k]

    # [L_n, L_{-k1}] acting on the tail
    accumulate(_apply_monomial(n - k1, tail, c, h), Fraction(n + k1))
    if n == k1:
        accumulate({tail: Fraction(1)}, Fraction(n ** 3 - n, 12) * c)
    # L_{-k1} * (L_n tail): re-sort each resulting monomial under L_{-k1}
    for mono, coeff in _apply_monomial(n, tail, c, h).items():
        accumulate(_apply_monomial(-k1, mono, c, h), coeff)
    return out


def apply_L(n: int, state: VermaState) -> VermaState:
    """L_n applied to a Verma-module vector, result on the PBW basis."""
    total: dict[tuple[int, ...], Fraction] = {}
    for key, coeff in state.terms.items():
        for k, v in _apply_monomial(n, key, state.c, state.h).items():
            val = total.get(k, Fraction(0)) + coeff * v
            if val:
                total[k] = val
            elif k in total:
                del total[k]
    return VermaState(state.c, state.h, total)


def commutator_defect(n: int, m: int, state: VermaState) -> VermaState:
    """[L_n, L_m] s - ((n-m) L_{n+m} s + delta_{n,-m} (n^3-n)/12 c s).

    Identically zero; exposed so verification suites can assert it on
    concrete states.
    """
    lhs = apply_L(n, apply_L(m, state)) - apply_L(m, apply_L(n, state))
    rhs = Fraction(n - m) * apply_L(n + m, state)
    if n == -m:
        rhs = rhs + (Fraction(n ** 3 - n, 12) * state.c) * state
    return lhs - rhs


def null_vector_state(kappa: Fraction, c: Fraction | None = None,
                      h: Fraction | None = None) -> VermaState:
    """The level-two candidate null vector ((k/2) L_{-1}^2 - 2 L_{-2}) |h>."""
    kappa = Fraction(kappa)
    p = params_of_kappa(kappa)
    if c is None:
        c = p["c"]
    if h is None:
        h = p["h"]
    return VermaState(c, h, {(1, 1): kappa / 2, (2,): Fraction(-2)})


def null_vector_coefficients(kappa: Fraction, c: Fraction | None = None,
                             h: Fraction | None = None
                             ) -> tuple[Fraction, Fraction]:
    """Coefficients produced by L_1 and L_2 on the level-two candidate.

    Computed by the generic normal-ordering engine, not from closed forms:
    L_1 psi = a * L_{-1}|h> and L_2 psi = b * |h>; returns (a, b). Both vanish
    exactly when (c, h) take their kappa-parameterized values, certifying the
    null vector. With generic (c, h) the values are a = kappa + 2*kappa*h - 6
    and b = 3*kappa*h - 8*h - c, which tests pin independently.
    """
    psi = null_vector_state(kappa, c, h)
    s1 = apply_L(1, psi)
    s2 = apply_L(2, psi)
    extra1 = set(s1.terms) - {(1,)}
    extra2 = set(s2.terms) - {()}
    if extra1 or extra2:
        raise AssertionError(
            f"unexpected monomials in null-vector contraction: {extra1 | extra2}")
    return s1.coefficient((1,)), s2.coefficient(())


def witt_cocycle(f: LaurentPoly, g: LaurentPoly) -> Fraction:
    """Two-cocycle (1/6) Res(f'' dg) on polynomial vector fields f d/dz, g d/dz.

    On the basis f = -z^(n+1), g = -z^(m+1) this evaluates to
    -delta_{n,-m} (n^3 - n)/6, a multiple of the central term in the Verma
    commutation rule (conventions differ by the normalization of the
    extension class; the cross-check test records the factor).
    """
    integrand = f.derivative().derivative() * g.derivative()
    return Fraction(1, 6) * integrand.residue()
