"""Fixed-precision p-adic arithmetic with explicit precision tracking.

An element of Q_p is stored as ``p^v * u`` where ``v`` is the valuation and
``u`` is the unit part, known modulo ``p^(M - v)``; the whole value is then
known modulo ``p^M`` (absolute precision ``M``).  The additive zero cannot be
distinguished from any multiple of ``p^M``, so "zero" is tracked as the class
``O(p^M)`` with ``v == M`` and ``u == 0``.

All values are immutable; every operation is a pure function returning a new
value at the precision the inputs justify, never more.
"""

from fractions import Fraction
from math import comb

from .errors import DivisionByZero, MixedPrime, NonUnit


def padic_valuation(n, p):
    """Valuation of a nonzero integer or Fraction; raises on 0."""
    if n == 0:
        raise ValueError("0 has infinite valuation")
    if isinstance(n, Fraction):
        return padic_valuation(n.numerator, p) - padic_valuation(n.denominator, p)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    """An element of Q_p known modulo p^M."""

    __slots__ = ("p", "M", "v", "u")

    def __init__(self, p, M, v, u):
        # Raw constructor: trusts (v, u) normalized. Use the from_* builders.
        self.p = p
        self.M = M
        self.v = v
        self.u = u

    # -- construction -----------------------------------------------------

    @classmethod
    def _make(cls, p, M, v, raw):
        """Normalize ``p^v * raw`` (raw any integer) at absolute precision M."""
        if M <= v:
            # no information beyond "divisible by p^M"
            return cls(p, M, M, 0)
        raw %= p ** (M - v)
        if raw == 0:
            return cls(p, M, M, 0)
        shift = padic_valuation(raw, p)
        v += shift
        u = (raw // p**shift) % (p ** (M - v))
        return cls(p, M, v, u)

    @classmethod
    def from_int(cls, x, p, M):
        return cls._make(p, M, 0, x)

    @classmethod
    def from_rational(cls, q, p, M):
        q = Fraction(q)
        if q == 0:
            return cls.zero(p, M)
        va = padic_valuation(q.numerator, p)
        vb = padic_valuation(q.denominator, p)
        v = va - vb
        if M <= v:
            return cls(p, M, M, 0)
        rel = M - v
        num_u = (q.numerator // p**va) % p**rel
        den_u = (q.denominator // p**vb) % p**rel
        return cls(p, M, v, (num_u * pow(den_u, -1, p**rel)) % p**rel)

    @classmethod
    def zero(cls, p, M):
        return cls(p, M, M, 0)

    @classmethod
    def one(cls, p, M):
        return cls(p, M, 0, 1)

    # -- predicates and accessors -----------------------------------------

    def is_zero(self):
        """True when the value is indistinguishable from 0 at this precision."""
        return self.u == 0

    def is_unit(self):
        return self.v == 0 and not self.is_zero()

    def valuation(self):
        """Valuation, where a tracked zero reports its precision bound M."""
        return self.v

    def precision(self):
        return self.M

    def residue(self):
        """Image in the residue field F_p (needs v >= 0)."""
        if self.v > 0 or self.is_zero():
            return 0
        if self.v < 0:
            raise ValueError("negative valuation has no residue in F_p")
        return self.u % self.p

    def lift(self):
        """The canonical representative: an integer in [0, p^M) if v >= 0,
        otherwise a Fraction p^v * u."""
        if self.is_zero():
            return 0
        if self.v >= 0:
            return (self.p**self.v * self.u) % (self.p**self.M)
        return Fraction(self.u, self.p**-self.v)

    def unit_part(self):
        return self.u

    # -- precision management ----------------------------------------------

    def reduce_precision(self, M):
        if M >= self.M:
            return self
        return PadicNumber._make(self.p, M, self.v, self.u) if not self.is_zero() \
            else PadicNumber.zero(self.p, M)

    def _check(self, other):
        if self.p != other.p:
            raise MixedPrime(f"primes differ: {self.p} vs {other.p}")

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            self._check(other)
            return other
        if isinstance(other, int):
            return PadicNumber.from_int(other, self.p, max(self.M, 1))
        if isinstance(other, Fraction):
            return PadicNumber.from_rational(other, self.p, max(self.M, 1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        M = min(self.M, other.M)
        w = min(self.v, other.v)
        if M <= w:
            return PadicNumber.zero(p, M)
        a = self.u * p ** (self.v - w)
        b = other.u * p ** (other.v - w)
        return PadicNumber._make(p, M, w, a + b)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNumber(self.p, self.M, self.v,
                           (-self.u) % self.p ** (self.M - self.v))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._mul_int(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        if self.is_zero() or other.is_zero():
            # O(p^Ma) * (p^vb unit) = O(p^(Ma+vb)); both zero gives O(p^(Ma+Mb))
            return PadicNumber.zero(p, self.M + other.v)
        rel = min(self.M - self.v, other.M - other.v)
        v = self.v + other.v
        return PadicNumber._make(p, v + rel, v, self.u * other.u)

    __rmul__ = __mul__

    def _mul_int(self, c):
        """Multiply by an exact integer (infinite precision)."""
        if c == 0:
            return PadicNumber.zero(self.p, self.M)
        vc = padic_valuation(c, self.p)
        if self.is_zero():
            return PadicNumber.zero(self.p, self.M + vc)
        uc = c // self.p**vc
        return PadicNumber._make(self.p, self.M + vc, self.v + vc, self.u * uc)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of a tracked zero")
        rel = self.M - self.v
        u = pow(self.u, -1, self.p**rel)
        return PadicNumber(self.p, rel - self.v, -self.v, u)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by a tracked zero")
        if self.is_zero():
            return PadicNumber.zero(self.p, self.M - other.v)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber.one(self.p, self.M)
        if self.is_zero():
            return PadicNumber.zero(self.p, self.M * n)
        rel = self.M - self.v
        u = pow(self.u, n, self.p**rel)
        return PadicNumber._make(self.p, self.v * n + rel, self.v * n, u)

    # -- comparison ----------------------------------------------------------

    def equiv(self, other):
        """Congruence at the minimum of the two precisions (the decidable
        equality of tracked values)."""
        other = self._coerce(other)
        return (self - other).is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.equiv(other)
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return (self.p, self.M, self.v, self.u) == (other.p, other.M, other.v, other.u)

    def __hash__(self):
        return hash((self.p, self.M, self.v, self.u))

    def __repr__(self):
        if self.is_zero():
            return f"O({self.p}^{self.M})"
        if self.v >= 0:
            return f"{self.lift()} + O({self.p}^{self.M})"
        return f"{self.p}^{self.v}*{self.u} + O({self.p}^{self.M})"

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        return {"p": self.p, "M": self.M, "v": self.v, "u": str(self.u)}

    @classmethod
    def from_json(cls, obj):
        p, M, v, u = obj["p"], obj["M"], obj["v"], int(obj["u"])
        if u == 0:
            return cls.zero(p, M)
        return cls._make(p, M, v, u)


def teichmuller(u, p, M):
    """The Teichmuller lift: the unique (p-1)-st root of unity congruent to
    u mod p, computed mod p^M by iterating the p-power map to its fixed point.
    """
    if u % p == 0:
        raise NonUnit(f"{u} is not a unit mod {p}")
    q = p**M
    x = u % q
    for _ in range(M):
        y = pow(x, p, q)
        if y == x:
            break
        x = y
    return PadicNumber.from_int(x, p, M)


def binomial(n, k):
    """Exact binomial coefficient, 0 whenever k < 0 or n < k (so also n < 0)."""
    if k < 0 or n < k:
        return 0
    return comb(n, k)
