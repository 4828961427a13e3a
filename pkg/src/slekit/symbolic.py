"""Exact multivariate rational functions and Laurent-coefficient extraction.

Everything here is exact: coefficients are arbitrary-precision rationals and
equality of rational functions is decided structurally on a canonical
numerator/denominator pair (multivariate gcd removed, denominator leading
coefficient positive in graded-lex order). The canonical form is maintained by
sympy's sparse fraction fields; this module owns the fixed variable convention
x1..xn, the arity bookkeeping, and the Laurent expansion machinery built on
top.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from sympy import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import grlex

# Exact scalar type. fractions.Fraction already guarantees gcd-reduced,
# positive-denominator canonical form with decidable equality.
Rational = Fraction

Scalar = Union[Fraction, int]

_FIELDS: dict[int, FracField] = {}


def _field(arity: int) -> FracField:
    """Shared fraction field QQ(x1..x_arity) with grlex monomial order."""
    if arity < 0:
        raise ValueError(f"arity must be >= 0, got {arity}")
    try:
        return _FIELDS[arity]
    except KeyError:
        names = [f"x{i}" for i in range(1, arity + 1)]
        fld = FracField(names, QQ, grlex)
        _FIELDS[arity] = fld
        return fld


def _to_qq(value: Scalar):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    raise TypeError(f"expected Fraction or int, got {type(value).__name__}")


def _qq_to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class MultiRat:
    """Multivariate rational function in x1..xn over exact rationals.

    Instances are immutable and always in canonical form, so `==` is a
    decidable structural equality and canonically-equal functions hash alike.
    """

    __slots__ = ("arity", "_elem")

    def __init__(self, arity: int, elem=None):
        fld = _field(arity)
        if elem is None:
            elem = fld.zero
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "_elem", elem)

    def __setattr__(self, name, value):
        raise AttributeError("MultiRat is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, value: Scalar, arity: int = 0) -> "MultiRat":
        fld = _field(arity)
        return cls(arity, fld(_to_qq(value)))

    @classmethod
    def var(cls, index: int, arity: int) -> "MultiRat":
        """The generator x_index inside QQ(x1..x_arity); index is 1-based."""
        if not 1 <= index <= arity:
            raise ValueError(f"variable index {index} out of range 1..{arity}")
        return cls(arity, _field(arity).gens[index - 1])

    @classmethod
    def zero(cls, arity: int = 0) -> "MultiRat":
        return cls(arity, _field(arity).zero)

    @classmethod
    def one(cls, arity: int = 0) -> "MultiRat":
        return cls(arity, _field(arity).one)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "MultiRat":
        if isinstance(other, MultiRat):
            if other.arity != self.arity:
                raise ValueError(
                    f"arity mismatch: {self.arity} vs {other.arity}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return MultiRat.const(other, self.arity)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MultiRat(self.arity, self._elem + other._elem)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MultiRat(self.arity, self._elem - other._elem)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MultiRat(self.arity, other._elem - self._elem)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MultiRat(self.arity, self._elem * other._elem)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._elem:
            raise ZeroDivisionError("division by zero rational function")
        return MultiRat(self.arity, self._elem / other._elem)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__truediv__(self)

    def __pow__(self, n: int):
        return MultiRat(self.arity, self._elem ** n)

    def __neg__(self):
        return MultiRat(self.arity, -self._elem)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiRat.const(other, self.arity)
        if not isinstance(other, MultiRat):
            return NotImplemented
        return self.arity == other.arity and self._elem == other._elem

    def __hash__(self):
        return hash((self.arity, self._elem))

    def __bool__(self):
        return bool(self._elem)

    @property
    def is_zero(self) -> bool:
        return not self._elem

    # -- structure ---------------------------------------------------------

    def numerator_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return [(m, _qq_to_fraction(c)) for m, c in self._elem.numer.terms()]

    def denominator_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return [(m, _qq_to_fraction(c)) for m, c in self._elem.denom.terms()]

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"MultiRat({self.arity}, {to_string(self)})"


def normalize(f: MultiRat) -> MultiRat:
    """Return the canonical form of f.

    Construction already canonicalizes (gcd removed, denominator sign fixed),
    so this is the identity; it exists so callers can assert canonicality and
    is the documented idempotent normal form.
    """
    return f


def partial_derivative(f: MultiRat, var: int) -> MultiRat:
    """d f / d x_var, var 1-based."""
    if not 1 <= var <= f.arity:
        raise ValueError(f"variable index {var} out of range 1..{f.arity}")
    gen = _field(f.arity).gens[var - 1]
    return MultiRat(f.arity, f._elem.diff(gen))


def evaluate(f: MultiRat, point: Sequence[Scalar]) -> Fraction:
    """Exact evaluation at a rational point.

    Raises ZeroDivisionError when the point lies on a pole.
    """
    if len(point) != f.arity:
        raise ValueError(f"expected {f.arity} coordinates, got {len(point)}")
    if f.arity == 0:
        num = f._elem.numer.coeff(1)
        den = f._elem.denom.coeff(1)
        return Fraction(int(num.numerator) * int(den.denominator),
                        int(num.denominator) * int(den.numerator))
    ring = _field(f.arity).ring
    pairs = list(zip(ring.gens, [_to_qq(p) for p in point]))
    den = f._elem.denom.evaluate(pairs)
    if not den:
        raise ZeroDivisionError(f"pole at point {tuple(point)}")
    num = f._elem.numer.evaluate(pairs)
    return _qq_to_fraction(num) / _qq_to_fraction(den)


def inject_variables(f: MultiRat, positions: Sequence[int],
                     arity: int) -> MultiRat:
    """Relabel f's variables into a (usually larger) variable set.

    positions[i] is the 1-based index, inside the target variable set
    x1..x_arity, that variable x_{i+1} of f maps to. Positions must be
    distinct. The result is f regarded as a rational function of arity
    `arity` that simply does not involve the remaining variables.
    """
    if len(positions) != f.arity:
        raise ValueError("need one target position per variable")
    if len(set(positions)) != len(positions):
        raise ValueError("target positions must be distinct")
    for p in positions:
        if not 1 <= p <= arity:
            raise ValueError(f"position {p} out of range 1..{arity}")
    target = _field(arity)

    def convert(poly):
        out = {}
        for monom, coeff in poly.terms():
            new = [0] * arity
            for i, e in enumerate(monom):
                new[positions[i] - 1] = e
            out[tuple(new)] = coeff
        return target.ring.from_dict(out)

    num = convert(f._elem.numer)
    den = convert(f._elem.denom)
    return MultiRat(arity, target.new(num, den))


def _split_by_var(poly, var0: int, small_ring):
    """Split a polynomial by the exponent of one variable.

    Returns {exponent: polynomial in the remaining variables}, with the
    remaining variables renumbered in order.
    """
    buckets: dict[int, dict] = {}
    for monom, coeff in poly.terms():
        rest = monom[:var0] + monom[var0 + 1:]
        buckets.setdefault(monom[var0], {})[rest] = coeff
    return {j: small_ring.from_dict(d) for j, d in buckets.items()}


def laurent_coefficients(f: MultiRat, var: int, order_lo: int,
                         order_hi: int) -> list[MultiRat]:
    """Laurent coefficients of f in x_var around 0.

    Returns [c_k for k in order_lo..order_hi] where
    f = sum_k c_k * x_var^k for small |x_var|, each c_k a rational function
    of the remaining variables (renumbered x1..x_{n-1} preserving order).
    The expansion always exists: writing the denominator as x^m * q with
    q(0, .) not identically zero, q is invertible in the remaining-variable
    fraction field and the series is computed by exact power-series division.
    """
    if not 1 <= var <= f.arity:
        raise ValueError(f"variable index {var} out of range 1..{f.arity}")
    if order_hi < order_lo:
        raise ValueError("order_hi must be >= order_lo")
    if f.is_zero:
        return [MultiRat.zero(f.arity - 1)] * (order_hi - order_lo + 1)
    v0 = var - 1
    small = _field(f.arity - 1)
    num = _split_by_var(f._elem.numer, v0, small.ring)
    den = _split_by_var(f._elem.denom, v0, small.ring)
    m = min(den)
    p = min(num)
    # f = x^(p-m) * (sum_i a_{i+p} x^i) / (sum_j b_{j+m} x^j), b_m != 0
    lead = small(den[m])
    need = order_hi - (p - m)
    if need < 0:
        return [MultiRat.zero(f.arity - 1)] * (order_hi - order_lo + 1)
    inv = [lead ** -1]
    for k in range(1, need + 1):
        acc = small.zero
        for j in range(1, k + 1):
            b = den.get(m + j)
            if b is not None:
                acc += small(b) * inv[k - j]
        inv.append(-inv[0] * acc)
    out = []
    for order in range(order_lo, order_hi + 1):
        t = order - (p - m)
        acc = small.zero
        for i, a in num.items():
            k = t - (i - p)
            if 0 <= k <= need:
                acc += small(a) * inv[k]
        out.append(MultiRat(f.arity - 1, acc))
    return out


def residue(f: MultiRat, var: int) -> MultiRat:
    """Coefficient of x_var^(-1) in the Laurent expansion around 0."""
    return laurent_coefficients(f, var, -1, -1)[0]


# -- canonical text form ---------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    return str(c)


def _format_monomial(monom: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(monom):
        if e == 0:
            continue
        name = f"x{i + 1}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def _format_poly(terms: list[tuple[tuple[int, ...], Fraction]]) -> str:
    if not terms:
        return "0"
    pieces = []
    for idx, (monom, coeff) in enumerate(terms):
        mono = _format_monomial(monom)
        mag = abs(coeff)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            coeff_s = _format_coeff(mag)
            if "/" in coeff_s:
                coeff_s = f"({coeff_s})"
            body = f"{coeff_s}*{mono}"
        if idx == 0:
            pieces.append(body if coeff >= 0 else f"-{body}")
        else:
            pieces.append(f" + {body}" if coeff >= 0 else f" - {body}")
    return "".join(pieces)


def to_string(f: MultiRat) -> str:
    """Canonical text form, e.g. `1/x1^2`, `(5/8)/x1^2`, `(x1 + x2)/(x1*x2)`.

    Terms are emitted in the field's graded-lex order, so canonically equal
    functions always print identically. Rational content is carried by the
    numerator (the printed denominator has coprime integer coefficients with
    positive leading coefficient). Parentheses are added only where needed
    for unambiguous reading.
    """
    num_terms = f.numerator_terms()
    den_terms = f.denominator_terms()
    if den_terms:
        from math import gcd
        content = Fraction(0)
        for _, c in den_terms:
            content = Fraction(gcd(content.numerator * c.denominator,
                                   c.numerator * content.denominator),
                               content.denominator * c.denominator)
        if content and content != 1:
            den_terms = [(m, c / content) for m, c in den_terms]
            num_terms = [(m, c / content) for m, c in num_terms]
    num_s = _format_poly(num_terms)
    if len(den_terms) == 1 and den_terms[0][0] == (0,) * f.arity \
            and den_terms[0][1] == 1:
        return num_s
    den_s = _format_poly(den_terms)
    if len(num_terms) > 1 or "/" in num_s:
        num_s = f"({num_s})"
    wrap_den = len(den_terms) > 1 or "*" in den_s or "/" in den_s \
        or den_s.startswith("-")
    if wrap_den:
        den_s = f"({den_s})"
    return f"{num_s}/{den_s}"


class LaurentPoly:
    """Finite Laurent polynomial in one variable with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Union[dict, Iterable[tuple[int, Scalar]], None] = None):
        data: dict[int, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, dict) else (coeffs or ())
        for exp, c in items:
            c = Fraction(c)
            if c:
                data[int(exp)] = data.get(int(exp), Fraction(0)) + c
        object.__setattr__(self, "coeffs",
                           {e: c for e, c in sorted(data.items()) if c})

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: e * c for e, c in self.coeffs.items()
                            if e != 0})

    def coefficient(self, exp: int) -> Fraction:
        return self.coeffs.get(exp, Fraction(0))

    def residue(self) -> Fraction:
        """Coefficient of z^-1."""
        return self.coefficient(-1)

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> "LaurentPoly":
        return cls({exp: Fraction(coeff)})

    def __repr__(self):
        if not self.coeffs:
            return "LaurentPoly(0)"
        body = " + ".join(f"{c}*z^{e}" for e, c in self.coeffs.items())
        return f"LaurentPoly({body})"
