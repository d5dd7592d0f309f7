"""Exact univariate Laurent polynomials over the rationals.

An :class:`ExactPolynomial` stores a coefficient tuple ``c`` and an integer
``shift`` and stands for ``x**(-shift) * sum(c[i] * x**i)``.  Values are kept
canonical: the constant coefficient of the stored part is nonzero (unless the
polynomial is zero), so ``shift`` is minus the lowest exponent that occurs.
Since ``x`` is a unit in the Laurent ring, divisibility, gcd and root sets are
properties of the stored part alone.

The heavier algorithms (gcd, modular inverses) run on integer-primitive
copies of the coefficient lists so that intermediate rationals never need to
be normalised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import NotCoprime, NotDivisible

__all__ = [
    "ExactPolynomial",
    "RationalFunctionSum",
    "add",
    "multiply",
    "negate",
    "divide_exact",
    "derivative",
    "poly_gcd",
    "reverse",
    "square_free_decomposition",
    "is_square_free",
    "reduce_mod",
    "invert_mod",
    "power_sums",
    "companion_matrix",
    "companion_power_trace",
    "sum_over_roots",
    "sum_rational_function_over_roots",
    "sum_rational_over_roots_exact",
]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not allowed")
    return Fraction(c)


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


@dataclass(frozen=True)
class ExactPolynomial:
    """Laurent polynomial ``x**(-shift) * sum(coeffs[i] x**i)`` with rational coefficients."""

    coeffs: tuple[Fraction, ...]
    shift: int = 0

    def __post_init__(self):
        c = _trim([_frac(v) for v in self.coeffs])
        s = int(self.shift)
        if not c:
            s = 0
        else:
            low = next(i for i, v in enumerate(c) if v != 0)
            if low:
                c = c[low:]
                s -= low
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "shift", s)

    # construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Mapping[int, object] | Iterable[tuple[int, object]]) -> "ExactPolynomial":
        """Build from ``{exponent: coefficient}``; exponents may be negative."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), Fraction(0)) + _frac(c)
        acc = {e: c for e, c in acc.items() if c != 0}
        if not acc:
            return cls(())
        lo, hi = min(acc), max(acc)
        return cls(tuple(acc.get(lo + i, 0) for i in range(hi - lo + 1)), -lo)

    @classmethod
    def constant(cls, c) -> "ExactPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, exponent: int, c=1) -> "ExactPolynomial":
        return cls((c,), -exponent)

    @classmethod
    def zero(cls) -> "ExactPolynomial":
        return cls(())

    @classmethod
    def one(cls) -> "ExactPolynomial":
        return cls((1,))

    # basic queries ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int:
        """Lowest exponent present (0 for the zero polynomial)."""
        return -self.shift

    @property
    def degree(self) -> int:
        """Highest exponent present; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return len(self.coeffs) - 1 - self.shift

    @property
    def span(self) -> int:
        """Degree of the stored (normalised) part; the number of nonzero roots."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def terms(self) -> dict[int, Fraction]:
        """Nonzero terms keyed by Laurent exponent."""
        return {i - self.shift: c for i, c in enumerate(self.coeffs) if c != 0}

    def normalized(self) -> "ExactPolynomial":
        """The stored part as an ordinary polynomial (shift 0)."""
        return ExactPolynomial(self.coeffs, 0)

    def is_polynomial(self) -> bool:
        return self.shift <= 0

    def dense(self) -> list[Fraction]:
        """Ascending coefficient list of an ordinary polynomial (shift <= 0)."""
        if self.shift > 0:
            raise ValueError("Laurent polynomial has negative exponents")
        return [Fraction(0)] * (-self.shift) + list(self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def monic(self) -> "ExactPolynomial":
        if self.is_zero:
            return self
        lc = self.leading
        return ExactPolynomial(tuple(c / lc for c in self.coeffs), self.shift)

    # evaluation -------------------------------------------------------

    def __call__(self, z):
        exact = isinstance(z, (int, Fraction))
        if exact:
            z = Fraction(z)
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + (c if exact else _as_scalar(c, z))
        if self.shift:
            acc = acc * z ** (-self.shift)
        return acc

    # arithmetic -------------------------------------------------------

    def _aligned(self, other: "ExactPolynomial") -> tuple[list, list, int]:
        s = max(self.shift, other.shift)
        a = [Fraction(0)] * (s - self.shift) + list(self.coeffs)
        b = [Fraction(0)] * (s - other.shift) + list(other.coeffs)
        return a, b, s

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, s = self._aligned(other)
        n = max(len(a), len(b))
        return ExactPolynomial(
            tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)), s
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactPolynomial(tuple(-c for c in self.coeffs), self.shift)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero or other.is_zero:
            return ExactPolynomial(())
        return ExactPolynomial(tuple(_mul_lists(self.coeffs, other.coeffs)), self.shift + other.shift)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) == 1:
                c = self.coeffs[0]
                return ExactPolynomial((c ** n,), self.shift * n)
            raise ValueError("negative power of a non-monomial")
        result = ExactPolynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other: "ExactPolynomial"):
        """Division of the stored parts: ``self = q*other + r`` with ``deg r < deg other``.

        Both operands must be ordinary polynomials (shift <= 0).
        """
        other = _coerce(other)
        q, r = _divmod_lists(self.dense(), other.dense())
        return ExactPolynomial(tuple(q)), ExactPolynomial(tuple(r))

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __repr__(self) -> str:
        return f"ExactPolynomial({self.pretty()})"

    def pretty(self, var: str = "x") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for e, c in sorted(self.terms().items()):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if e == 0:
                body = str(mag)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # serialisation ----------------------------------------------------

    def to_json(self) -> dict:
        return {"shift": self.shift, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict | str) -> "ExactPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(Fraction(c) for c in data["coeffs"]), int(data["shift"]))


def _as_scalar(c: Fraction, like):
    """Convert an exact coefficient to the numeric type of ``like``."""
    if c.denominator == 1:
        return int(c.numerator)
    try:
        import mpmath

        if isinstance(like, (mpmath.mpc, mpmath.mpf)):
            return mpmath.mpf(c.numerator) / c.denominator
    except ImportError:  # pragma: no cover
        pass
    return c.numerator / c.denominator


def _coerce(v):
    if isinstance(v, ExactPolynomial):
        return v
    if isinstance(v, (int, Fraction)):
        return ExactPolynomial((v,))
    return NotImplemented


def _mul_lists(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divmod_lists(a: list, b: list) -> tuple[list, list]:
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = _trim(list(a))
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [Fraction(0)] * (len(a) - db)
    inv = 1 / Fraction(b[-1])
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv
        q[i] = c
        if c:
            for j in range(db + 1):
                a[i + j] -= c * b[j]
    return _trim(q), _trim(a[:db])


# integer-primitive helpers -------------------------------------------------


def _to_primitive(coeffs: Sequence[Fraction]) -> list[int]:
    """Scale to coprime integers with positive leading coefficient."""
    den = reduce(lcm, (c.denominator for c in coeffs), 1)
    ints = [int(c * den) for c in coeffs]
    return _primitive(ints)


def _content(a: Sequence[int]) -> int:
    return reduce(gcd, a, 0)


def _primitive(a: list[int]) -> list[int]:
    c = _content(a)
    if c == 0:
        return a
    if a[-1] < 0:
        c = -c
    return [x // c for x in a]


def _pseudo_divmod(a: list[int], b: list[int]) -> tuple[int, list[int], list[int]]:
    """Return ``(m, q, r)`` with ``m*a = q*b + r`` over the integers."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    q: dict[int, int] = {}
    m = 1
    while a and len(a) - 1 >= db:
        c = a[-1]
        s = len(a) - 1 - db
        if c % lb == 0:
            c //= lb
            q[s] = q.get(s, 0) + c
            for j, bj in enumerate(b):
                a[s + j] -= c * bj
        else:
            a = [x * lb for x in a]
            q = {k: v * lb for k, v in q.items()}
            m *= lb
            q[s] = q.get(s, 0) + c
            for j, bj in enumerate(b):
                a[s + j] -= c * bj
        a.pop()
        _trim(a)
    ql = [q.get(i, 0) for i in range(max(q) + 1)] if q else []
    return m, ql, a


def _int_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _primitive_gcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _primitive(_trim(list(a))), _primitive(_trim(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        _, _, r = _pseudo_divmod(a, b)
        a, b = b, (_primitive(r) if r else r)
    return a


# public operations ----------------------------------------------------------


def add(p: ExactPolynomial, q: ExactPolynomial) -> ExactPolynomial:
    return p + q


def multiply(p: ExactPolynomial, q: ExactPolynomial) -> ExactPolynomial:
    return p * q


def negate(p: ExactPolynomial) -> ExactPolynomial:
    return -p


def divide_exact(p: ExactPolynomial, d: ExactPolynomial) -> ExactPolynomial:
    """Exact quotient in the Laurent ring; raises :class:`NotDivisible` otherwise."""
    if d.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero:
        return p
    q, r = _divmod_lists(list(p.coeffs), list(d.coeffs))
    if r:
        raise NotDivisible(ExactPolynomial(tuple(r)))
    return ExactPolynomial(tuple(q), p.shift - d.shift)


def derivative(p: ExactPolynomial) -> ExactPolynomial:
    """Formal derivative, with negative exponents handled by the power rule."""
    return ExactPolynomial.from_terms({e - 1: e * c for e, c in p.terms().items() if e != 0})


def poly_gcd(p: ExactPolynomial, q: ExactPolynomial) -> ExactPolynomial:
    """Monic gcd of the stored parts (powers of x are units and are ignored)."""
    if p.is_zero and q.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    if p.is_zero:
        return q.normalized().monic()
    if q.is_zero:
        return p.normalized().monic()
    g = _primitive_gcd(_to_primitive(p.coeffs), _to_primitive(q.coeffs))
    return ExactPolynomial(tuple(g)).monic()


def reverse(p: ExactPolynomial) -> ExactPolynomial:
    """``x**deg * f(1/x)`` for the stored part ``f``."""
    return ExactPolynomial(p.coeffs[::-1])


def is_square_free(p: ExactPolynomial) -> bool:
    f = p.normalized()
    if f.span <= 0:
        return True
    return poly_gcd(f, derivative(f)).span == 0


def square_free_decomposition(p: ExactPolynomial) -> list[tuple[ExactPolynomial, int]]:
    """Yun's algorithm on the stored part.

    Returns monic, pairwise coprime, square-free factors ``f_i`` with
    multiplicities ``i`` such that the stored part equals
    ``lc * prod(f_i**i)``.  Trivial factors are omitted.
    """
    f = p.normalized()
    if f.span <= 0:
        return []
    fp = derivative(f)
    a = poly_gcd(f, fp)
    b = divide_exact(f, a)
    c = divide_exact(fp, a)
    d = c - derivative(b)
    out = []
    i = 1
    while b.span > 0:
        a = poly_gcd(b, d) if not d.is_zero else b.monic()
        if a.span > 0:
            out.append((a, i))
        b = divide_exact(b, a)
        c = divide_exact(d, a)
        d = c - derivative(b)
        i += 1
    return out


def _inverse_x_mod(k: ExactPolynomial) -> ExactPolynomial:
    """``x**-1`` modulo ``k`` (requires k(0) != 0)."""
    kd = k.dense()
    k0 = kd[0]
    if k0 == 0:
        raise NotCoprime("x is not invertible modulo a polynomial vanishing at 0")
    return ExactPolynomial(tuple(-c / k0 for c in kd[1:]))


def _rem(a: Sequence[Fraction], kd: list[Fraction]) -> ExactPolynomial:
    return ExactPolynomial(tuple(_divmod_lists(list(a), kd)[1]))


def reduce_mod(f: ExactPolynomial, k: ExactPolynomial) -> ExactPolynomial:
    """Representative of degree < deg k of the Laurent polynomial f modulo k.

    Only the stored part of k matters, so x is always invertible.
    """
    kd = k.normalized().dense()
    if f.is_zero:
        return f
    if f.shift <= 0:
        return _rem(f.dense(), kd)
    r = _rem(f.coeffs, kd)
    step = _inverse_x_mod(k.normalized())
    n = f.shift
    while n and not r.is_zero:
        if n & 1:
            r = _rem((r * step).dense(), kd)
        n >>= 1
        if n:
            step = _rem((step * step).dense(), kd)
    return r


def invert_mod(f: ExactPolynomial, k: ExactPolynomial) -> ExactPolynomial:
    """Inverse of f modulo k by a fraction-free extended Euclid chain.

    Raises :class:`NotCoprime` when gcd(f, k) is nontrivial.
    """
    kd = k.normalized().dense()
    fr = reduce_mod(f, k)
    if fr.is_zero:
        raise NotCoprime("f vanishes modulo k")
    kden = reduce(lcm, (c.denominator for c in kd), 1)
    ki = [int(c * kden) for c in kd]
    fden = reduce(lcm, (c.denominator for c in fr.dense()), 1)
    fi = [int(c * fden) for c in fr.dense()]
    # invariant: r_j == (s_j / d_j) * fi  (mod ki)
    r0, s0, d0 = ki, [], 1
    r1, s1, d1 = fi, [1], 1
    while len(r1) > 1:
        m, q, r = _pseudo_divmod(r0, r1)
        s = _int_add([m * x * d1 for x in s0], [-x * d0 for x in _mul_lists(q, s1)] if s1 and q else [])
        d = d0 * d1
        if r:
            c = abs(_content(r))
            r = [x // c for x in r]
            d *= c
        g = gcd(_content(s), d) if s else d
        if g:
            s = [x // g for x in s]
            d //= g
        r0, s0, d0, r1, s1, d1 = r1, s1, d1, r, s, d
    if not r1:
        raise NotCoprime("gcd(f, k) is nontrivial")
    # r1 = [c]  ==>  f^{-1} = fden * s1 / (d1 * c)
    scale = Fraction(fden, d1 * r1[0])
    inv = ExactPolynomial(tuple(Fraction(x) * scale for x in s1))
    return reduce_mod(inv, k)


def power_sums(k: ExactPolynomial, count: int) -> list[Fraction]:
    """Newton power sums ``P_j = sum a**j`` over the roots of k, for 0 <= j < count."""
    c = list(k.normalized().monic().coeffs)
    n = len(c) - 1
    # e_i via monic coefficients: k = x^n + c[n-1] x^{n-1} + ... ; a_i := c[n-i]
    a = [c[n - i] for i in range(n + 1)]
    p = [Fraction(n)]
    for j in range(1, count):
        s = Fraction(0)
        for i in range(1, min(j - 1, n) + 1):
            s += a[i] * p[j - i]
        if j <= n:
            s += j * a[j]
        p.append(-s)
    return p[:count]


def companion_matrix(k: ExactPolynomial) -> list[list[Fraction]]:
    """Companion matrix of the monic stored part of k (acts as multiplication by x)."""
    c = list(k.normalized().monic().coeffs)
    n = len(c) - 1
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        m[i][i - 1] = Fraction(1)
    for i in range(n):
        m[i][n - 1] = -c[i]
    return m


def companion_power_trace(k: ExactPolynomial, j: int) -> Fraction:
    """Trace of the j-th power of the companion matrix, by repeated multiplication."""
    c = companion_matrix(k)
    n = len(c)
    power = [[Fraction(int(r == s)) for s in range(n)] for r in range(n)]
    for _ in range(j):
        power = [[sum(power[r][t] * c[t][s] for t in range(n)) for s in range(n)] for r in range(n)]
    return sum(power[i][i] for i in range(n))


def sum_over_roots(f: ExactPolynomial, k: ExactPolynomial) -> Fraction:
    """Exact ``sum f(a)`` over the roots of k with multiplicity (trace of f(C))."""
    r = reduce_mod(f, k)
    if r.is_zero:
        return Fraction(0)
    dense = r.dense()
    p = power_sums(k, len(dense))
    return sum((cj * pj for cj, pj in zip(dense, p)), Fraction(0))


def sum_rational_function_over_roots(
    num: ExactPolynomial, den: ExactPolynomial, k: ExactPolynomial
) -> Fraction:
    """Exact ``sum num(a)/den(a)`` over the roots of k (den must be a unit mod k)."""
    return sum_over_roots(reduce_mod(num * invert_mod(den, k), k), k)


@dataclass(frozen=True)
class RationalFunctionSum:
    """The summand ``(1 + x**eps)**eta * g / D'`` with ``D = (1 + x**eps)**eta * k``."""

    g: ExactPolynomial
    k: ExactPolynomial
    eta: int = 0
    eps: int = 1

    def __post_init__(self):
        if self.eta not in (0, 1, 2):
            raise ValueError("eta must be 0, 1 or 2")
        if self.eps not in (1, 2):
            raise ValueError("eps must be 1 or 2")

    @property
    def wrapper(self) -> ExactPolynomial:
        return (ExactPolynomial.one() + ExactPolynomial.monomial(self.eps)) ** self.eta

    @property
    def full_denominator(self) -> ExactPolynomial:
        return self.wrapper * self.k.normalized()

    def degree_bound_holds(self) -> bool:
        """Hypothesis under which the residue argument forces a zero sum."""
        return self.g.is_zero or (
            self.g.is_polynomial() and self.g.degree <= self.k.span - self.eps * self.eta - 2
        )

    def exact(self) -> Fraction:
        return sum_rational_over_roots_exact(self.k, self.g, self.eta, self.eps)


def sum_rational_over_roots_exact(k: ExactPolynomial, g: ExactPolynomial, eta: int, eps: int) -> Fraction:
    """``sum (1+a**eps)**eta * g(a) / D'(a)`` over the roots a of k, exactly.

    ``D = (1+x**eps)**eta * k``.  D' is inverted modulo k with the extended
    Euclid algorithm, multiplied by the wrapper times g, and the result is
    traced through the companion matrix of k (via Newton power sums).
    """
    if eta not in (0, 1, 2) or eps not in (1, 2):
        raise ValueError("eta must be in {0,1,2} and eps in {1,2}")
    kk = k.normalized()
    if kk.span < 1:
        raise ValueError("k must have positive degree")
    if k.shift < 0:
        # k(0) == 0 would make 0 a root
        raise NotCoprime("k vanishes at 0")
    if not is_square_free(kk):
        raise NotCoprime("k is not square-free")
    wrapper = (ExactPolynomial.one() + ExactPolynomial.monomial(eps)) ** eta
    if eta and poly_gcd(wrapper, kk).span > 0:
        raise NotCoprime("wrapper (1+x^eps)^eta shares a factor with k")
    dprime = derivative(wrapper * kk)
    inv = invert_mod(dprime, kk)
    return sum_over_roots(reduce_mod(wrapper * g * inv, kk), kk)
