"""Exact arithmetic used throughout the package.

Four layers, each built on the previous one:

* rationals (``gmpy2.mpq``; :class:`fractions.Fraction` is accepted on input),
* :class:`CycScalar`, the field Q(a) with a = exp(i*pi/3), so a**2 = a - 1,
* :class:`AlgebraElement`, the commutative algebra over Q(a) generated by
  s_0, s_1, s_2 with s_r**2 = t_r = sigma(a**(2r) * b) for a fixed b,
* :class:`UniPoly`, Laurent polynomials in a single symbol.

Nothing here uses floating point except :meth:`CycScalar.to_complex`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

Rational = type(mpq())
RationalLike = Union[int, Fraction, Rational]
RATIONAL_TYPES = (int, Fraction, Rational)

_A_COMPLEX = cmath.exp(1j * cmath.pi / 3)


class DegeneratePointError(ValueError):
    """An evaluation point makes some denominator in scope vanish."""


class ContextMismatchError(ValueError):
    """Two algebra elements were built over different values of b."""


def parse_rational(text: str | RationalLike) -> Rational:
    if isinstance(text, RATIONAL_TYPES):
        return mpq(text)
    return mpq(Fraction(text.strip()))


def format_rational(q: RationalLike) -> str:
    """Wire format for rationals: always ``"p/q"``, reduced, q > 0."""
    q = mpq(q)
    return f"{q.numerator}/{q.denominator}"


class CycScalar:
    """An element c0 + c1*a of Q(a), a a primitive 6th root of unity."""

    __slots__ = ("c0", "c1")

    def __init__(self, c0: RationalLike = 0, c1: RationalLike = 0):
        object.__setattr__(self, "c0", mpq(c0))
        object.__setattr__(self, "c1", mpq(c1))

    def __setattr__(self, name, value):
        raise AttributeError("CycScalar is immutable")

    def __reduce__(self):
        return (CycScalar, (self.c0, self.c1))

    @staticmethod
    def coerce(x) -> "CycScalar":
        if isinstance(x, CycScalar):
            return x
        if isinstance(x, RATIONAL_TYPES):
            return CycScalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycScalar")

    @classmethod
    def a_pow(cls, k: int) -> "CycScalar":
        """a**k for any integer k, using a**6 = 1."""
        return _A_POWERS[k % 6]

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return NotImplemented
        other = CycScalar.coerce(other)
        return CycScalar(self.c0 + other.c0, self.c1 + other.c1)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(-self.c0, -self.c1)

    def __sub__(self, other):
        if not isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return NotImplemented
        other = CycScalar.coerce(other)
        return CycScalar(self.c0 - other.c0, self.c1 - other.c1)

    def __rsub__(self, other):
        if not isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return NotImplemented
        return CycScalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            return CycScalar(self.c0 * other, self.c1 * other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        p, q, r, s = self.c0, self.c1, other.c0, other.c1
        qs = q * s
        # (p + q a)(r + s a) with a^2 = a - 1
        return CycScalar(p * r - qs, p * s + q * r + qs)

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        p, q = self.c0, self.c1
        norm = p * p + p * q + q * q
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Q(a)")
        return CycScalar((p + q) / norm, -q / norm)

    def __truediv__(self, other):
        if not isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return NotImplemented
        return self * CycScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return NotImplemented
        return CycScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = ONE
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def norm(self) -> Rational:
        """Field norm N(c0 + c1 a) = c0^2 + c0 c1 + c1^2."""
        return self.c0 * self.c0 + self.c0 * self.c1 + self.c1 * self.c1

    # comparison and misc

    def __eq__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            return self.c1 == 0 and self.c0 == other
        if isinstance(other, CycScalar):
            return self.c0 == other.c0 and self.c1 == other.c1
        return NotImplemented

    def __hash__(self):
        if self.c1 == 0:
            return hash(self.c0)
        return hash((self.c0, self.c1))

    def __bool__(self):
        return bool(self.c0) or bool(self.c1)

    def is_rational(self) -> bool:
        return self.c1 == 0

    def to_complex(self) -> complex:
        return float(self.c0) + float(self.c1) * _A_COMPLEX

    def to_json(self) -> list[str]:
        return [format_rational(self.c0), format_rational(self.c1)]

    @classmethod
    def from_json(cls, pair) -> "CycScalar":
        if isinstance(pair, (str, int)):
            return cls(parse_rational(pair))
        c0, c1 = pair
        return cls(parse_rational(c0), parse_rational(c1))

    def to_latex(self) -> str:
        def frac(q) -> str:
            q = abs(q)
            if q.denominator == 1:
                return str(q.numerator)
            return rf"\frac{{{q.numerator}}}{{{q.denominator}}}"

        if not self:
            return "0"
        out = ""
        if self.c0:
            out = ("-" if self.c0 < 0 else "") + frac(self.c0)
        if self.c1:
            coef = "" if abs(self.c1) == 1 else frac(self.c1)
            if out:
                out += (" - " if self.c1 < 0 else " + ") + coef + "a"
            else:
                out = ("-" if self.c1 < 0 else "") + coef + "a"
        return out

    def __str__(self):
        if not self.c1:
            return str(self.c0)
        if not self.c0:
            return f"{self.c1}*a"
        sign = "-" if self.c1 < 0 else "+"
        return f"{self.c0} {sign} {abs(self.c1)}*a"

    def __repr__(self):
        return f"CycScalar({self.c0!s}, {self.c1!s})"


ZERO = CycScalar(0)
ONE = CycScalar(1)
A = CycScalar(0, 1)
_A_POWERS = (ONE, A, CycScalar(-1, 1), CycScalar(-1), CycScalar(0, -1), CycScalar(1, -1))


def cyc_inverse(x: CycScalar) -> CycScalar:
    return CycScalar.coerce(x).inverse()


def sigma(w):
    """w - 1/w for any invertible ring element (rational, CycScalar, monomial, ...)."""
    if isinstance(w, (int, Fraction)):
        w = mpq(w)
    return w - w ** -1


# the s-extension algebra

Parity = tuple[int, int, int]
PARITIES: tuple[Parity, ...] = tuple(product((0, 1), repeat=3))
_NO_S: Parity = (0, 0, 0)


@dataclass(frozen=True)
class AlgebraContext:
    """The value of b together with the cached reductions t_r = sigma(a^(2r) b)."""

    b: CycScalar
    t: tuple[CycScalar, CycScalar, CycScalar] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        b = CycScalar.coerce(self.b)
        if not b:
            raise DegeneratePointError("b must be nonzero")
        object.__setattr__(self, "b", b)
        t = tuple(sigma(CycScalar.a_pow(2 * r) * b) for r in range(3))
        for r, tr in enumerate(t):
            if not tr:
                raise DegeneratePointError(f"t_{r} = sigma(a^{2 * r} b) vanishes")
        object.__setattr__(self, "t", t)

    def t_inv(self, r: int) -> CycScalar:
        return self.t[r % 3].inverse()


class AlgebraElement:
    """sum over eps in {0,1}^3 of c_eps * s_0^eps0 s_1^eps1 s_2^eps2.

    Stored sparsely: only nonzero components are kept, so the common case of a
    single monomial multiplies in constant time.
    """

    __slots__ = ("ctx", "_comps")

    def __init__(self, ctx: AlgebraContext, components: dict[Parity, CycScalar] | None = None):
        self.ctx = ctx
        comps = {}
        for eps, c in (components or {}).items():
            eps = tuple(int(e) for e in eps)
            if len(eps) != 3 or any(e not in (0, 1) for e in eps):
                raise ValueError(f"bad parity vector {eps}")
            c = CycScalar.coerce(c)
            if c:
                comps[eps] = c
        self._comps = comps

    @classmethod
    def _raw(cls, ctx: AlgebraContext, comps: dict[Parity, CycScalar]) -> "AlgebraElement":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj._comps = comps
        return obj

    @classmethod
    def scalar(cls, ctx: AlgebraContext, c) -> "AlgebraElement":
        return cls(ctx, {_NO_S: c})

    @classmethod
    def generator(cls, ctx: AlgebraContext, r: int) -> "AlgebraElement":
        eps = [0, 0, 0]
        eps[r % 3] = 1
        return cls._raw(ctx, {tuple(eps): ONE})

    @classmethod
    def zeta_half(cls, ctx: AlgebraContext, r: int) -> "AlgebraElement":
        """The branch-free square root of zeta_r: s_{r-1} s_{r+1} / t_r."""
        eps = [1, 1, 1]
        eps[r % 3] = 0
        return cls._raw(ctx, {tuple(eps): ctx.t_inv(r)})

    def component(self, eps: Parity) -> CycScalar:
        return self._comps.get(tuple(eps), ZERO)

    @property
    def components(self) -> dict[Parity, CycScalar]:
        return dict(self._comps)

    def is_scalar(self) -> bool:
        """True when every component with eps != (0,0,0) vanishes."""
        return all(eps == _NO_S for eps in self._comps)

    def scalar_part(self) -> CycScalar:
        if not self.is_scalar():
            raise ValueError("element is not s-free")
        return self._comps.get(_NO_S, ZERO)

    def _check(self, other: "AlgebraElement"):
        if other.ctx != self.ctx:
            raise ContextMismatchError("algebra elements over different b")

    def __add__(self, other):
        if isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            other = AlgebraElement.scalar(self.ctx, other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        comps = dict(self._comps)
        for eps, c in other._comps.items():
            v = comps.get(eps, ZERO) + c
            if v:
                comps[eps] = v
            else:
                comps.pop(eps, None)
        return AlgebraElement._raw(self.ctx, comps)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw(self.ctx, {e: -c for e, c in self._comps.items()})

    def __sub__(self, other):
        if isinstance(other, (CycScalar, AlgebraElement, *RATIONAL_TYPES)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            if not other:
                return AlgebraElement._raw(self.ctx, {})
            return AlgebraElement._raw(self.ctx, {e: c * other for e, c in self._comps.items()})
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        t = self.ctx.t
        comps: dict[Parity, CycScalar] = {}
        for e1, c1 in self._comps.items():
            for e2, c2 in other._comps.items():
                c = c1 * c2
                for r in range(3):
                    if e1[r] and e2[r]:
                        c = c * t[r]
                eps = (e1[0] ^ e2[0], e1[1] ^ e2[1], e1[2] ^ e2[2])
                v = comps.get(eps, ZERO) + c
                if v:
                    comps[eps] = v
                else:
                    comps.pop(eps, None)
        return AlgebraElement._raw(self.ctx, comps)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return NotImplemented
        return alg_scalar_div(self, other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = AlgebraElement.scalar(self.ctx, ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (CycScalar, *RATIONAL_TYPES)):
            return self.is_scalar() and self.scalar_part() == other
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.ctx == other.ctx and self._comps == other._comps

    def __hash__(self):
        return hash((self.ctx.b, frozenset(self._comps.items())))

    def __bool__(self):
        return bool(self._comps)

    def to_json(self) -> dict:
        return {
            "b": self.ctx.b.to_json(),
            "components": {"".join(map(str, eps)): self.component(eps).to_json() for eps in PARITIES},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraElement":
        ctx = AlgebraContext(CycScalar.from_json(obj["b"]))
        comps = {tuple(int(ch) for ch in key): CycScalar.from_json(v) for key, v in obj["components"].items()}
        return cls(ctx, comps)

    def __repr__(self):
        if not self._comps:
            return "AlgebraElement(0)"
        terms = []
        for eps in PARITIES:
            if eps in self._comps:
                mono = "*".join(f"s{r}" for r in range(3) if eps[r])
                terms.append(f"({self._comps[eps]})" + (f"*{mono}" if mono else ""))
        return "AlgebraElement(" + " + ".join(terms) + ")"


def alg_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def alg_scalar_div(x: AlgebraElement, c) -> AlgebraElement:
    c = CycScalar.coerce(c)
    if not c:
        raise ZeroDivisionError("algebra element divided by zero")
    return x * c.inverse()


# single-variable Laurent polynomials


class UniPoly:
    """Laurent polynomial in one symbol.

    Coefficients may be any exact ring element that supports ``+``, ``*`` and
    truth testing (CycScalar, AlgebraElement, Fraction).  Zero coefficients are
    never stored.
    """

    __slots__ = ("symbol", "terms")

    def __init__(self, symbol: str, terms: dict[int, object] | None = None):
        self.symbol = symbol
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, symbol: str) -> "UniPoly":
        return cls(symbol, {1: ONE})

    @classmethod
    def monomial(cls, symbol: str, exponent: int, coeff=ONE) -> "UniPoly":
        return cls(symbol, {exponent: coeff})

    def support(self) -> set[int]:
        return set(self.terms)

    def coefficient(self, exponent: int):
        return self.terms.get(exponent)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> int:
        return max(self.terms)

    def low_degree(self) -> int:
        return min(self.terms)

    def _same(self, other: "UniPoly"):
        if other.symbol != self.symbol:
            raise ValueError(f"symbol mismatch: {self.symbol} vs {other.symbol}")

    def __add__(self, other):
        if isinstance(other, UniPoly):
            self._same(other)
            terms = dict(self.terms)
            for e, c in other.terms.items():
                terms[e] = terms[e] + c if e in terms else c
            return UniPoly(self.symbol, terms)
        terms = dict(self.terms)
        terms[0] = terms[0] + other if 0 in terms else other
        return UniPoly(self.symbol, terms)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.symbol, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            self._same(other)
            terms: dict[int, object] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e, c = e1 + e2, c1 * c2
                    terms[e] = terms[e] + c if e in terms else c
            return UniPoly(self.symbol, terms)
        return UniPoly(self.symbol, {e: c * other for e, c in self.terms.items()})

    def __rmul__(self, other):
        return UniPoly(self.symbol, {e: other * c for e, c in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, UniPoly):
            if not other.is_monomial():
                raise ValueError("only exact division by a monomial via '/'; use divmod")
            return self * other ** -1
        return UniPoly(self.symbol, {e: c / other for e, c in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise ZeroDivisionError("only monomials are invertible")
            (e, c), = self.terms.items()
            return UniPoly(self.symbol, {e * k: c ** k})
        result = UniPoly(self.symbol, {0: ONE})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "UniPoly"):
        """Long division after clearing negative exponents.

        Returns ``(q, r)`` with ``self == other * q + r``; ``r`` is zero
        exactly when ``other`` divides ``self`` in the Laurent ring.
        The divisor's leading coefficient must be invertible.
        """
        self._same(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return UniPoly(self.symbol), UniPoly(self.symbol)
        ps, qs = self.low_degree(), other.low_degree()
        num = {e - ps: c for e, c in self.terms.items()}
        den = {e - qs: c for e, c in other.terms.items()}
        dd = max(den)
        lead = den[dd]
        quot: dict[int, object] = {}
        while num and max(num) >= dd:
            top = max(num)
            c = num[top] / lead
            quot[top - dd] = c
            for e, dc in den.items():
                k = e + top - dd
                v = num[k] - c * dc if k in num else -(c * dc)
                if v:
                    num[k] = v
                else:
                    num.pop(k, None)
        q = UniPoly(self.symbol, {e + ps - qs: c for e, c in quot.items()})
        r = UniPoly(self.symbol, {e + ps: c for e, c in num.items()})
        return q, r

    def scale_variable(self, factor) -> "UniPoly":
        """p(factor * X)."""
        return UniPoly(self.symbol, {e: c * factor ** e for e, c in self.terms.items()})

    def evaluate(self, value):
        total = None
        for e, c in sorted(self.terms.items()):
            term = c * value ** e
            total = term if total is None else total + term
        return ZERO if total is None else total

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.symbol == other.symbol and self.terms == other.terms
        if not other:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        body = " + ".join(f"({c})*{self.symbol}^{e}" for e, c in sorted(self.terms.items(), reverse=True))
        return f"UniPoly({body or '0'})"


def unipoly_support(p: UniPoly) -> set[int]:
    return p.support()


# determinants


@dataclass(frozen=True)
class ExactMatrix:
    entries: tuple[tuple[CycScalar, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(CycScalar.coerce(c) for c in row) for row in self.entries)
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("matrix must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def det(self) -> CycScalar:
        return det_exact(self.entries)


def det_exact(m: ExactMatrix | Sequence[Sequence]) -> CycScalar:
    """Determinant over a field by elimination with first-nonzero pivoting."""
    rows = m.entries if isinstance(m, ExactMatrix) else m
    work = [list(row) for row in rows]
    size = len(work)
    if any(len(row) != size for row in work):
        raise ValueError("matrix must be square")
    det = ONE
    for col in range(size):
        pivot_row = next((i for i in range(col, size) if work[i][col]), None)
        if pivot_row is None:
            return ZERO
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            det = -det
        pivot = work[col][col]
        det = det * pivot
        inv = pivot ** -1
        for i in range(col + 1, size):
            if not work[i][col]:
                continue
            f = work[i][col] * inv
            ri, rc = work[i], work[col]
            for j in range(col + 1, size):
                ri[j] = ri[j] - f * rc[j]
    return CycScalar.coerce(det)


def product_of(values: Iterable, start=ONE):
    result = start
    for v in values:
        result = result * v
    return result
