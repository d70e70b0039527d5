"""Truncations of the completed group algebra O[[Z_p^x]].

The full algebra is replaced by the finite group algebra O[(Z/p^m)^x] at a
truncation level m; within the measure pipeline m equals the coefficient
precision M, so arguments of the tautological character (known mod p^M)
specialize exactly.

A weight is a character t -> omega(t)^r t^k; ``sp`` evaluates elements of the
truncated algebra at a weight, reporting the precision the truncation level
justifies.
"""

from dataclasses import dataclass

from .errors import LevelExceedsPrecision, MixedPrime, NonUnit
from .padic import PadicNumber, teichmuller


class _Tautological:
    """Sentinel for the tautological weight (the group-like character)."""

    def __repr__(self):
        return "THETA"


THETA = _Tautological()


@dataclass(frozen=True)
class WeightCharacter:
    """The character t -> omega(t)^r * t^k on Z_p^x."""

    k: int
    r: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("weight exponent k must be >= 0")

    def value(self, t, p, M):
        """Evaluate at an integer argument; t must be a unit mod p."""
        if t % p == 0:
            raise NonUnit(f"{t} is not a unit mod {p}")
        out = PadicNumber.from_int(pow(t, self.k, p**M), p, M)
        if self.r % (p - 1):
            out = out * teichmuller(t, p, M) ** (self.r % (p - 1))
        return out


def as_weight(kappa):
    if isinstance(kappa, WeightCharacter):
        return kappa
    if isinstance(kappa, int):
        return WeightCharacter(kappa)
    raise TypeError(f"not a weight: {kappa!r}")


class IwasawaElement:
    """Element of O[(Z/p^m)^x] with PadicNumber coefficients at precision M."""

    __slots__ = ("p", "M", "m", "coeffs")

    def __init__(self, p, M, m, coeffs):
        if m < 1:
            raise ValueError("truncation level must be >= 1")
        if m > M:
            raise LevelExceedsPrecision(f"level {m} exceeds precision {M}")
        q = p**m
        table = {}
        for g, c in coeffs.items():
            g %= q
            if g % p == 0:
                raise NonUnit(f"index {g} is not a unit mod {p}")
            if isinstance(c, int):
                c = PadicNumber.from_int(c, p, M)
            if g in table:
                table[g] = table[g] + c
            else:
                table[g] = c
        self.p = p
        self.M = M
        self.m = m
        self.coeffs = table

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, p, M, m):
        return cls(p, M, m, {})

    @classmethod
    def one(cls, p, M, m):
        return cls(p, M, m, {1: PadicNumber.one(p, M)})

    @classmethod
    def group_element(cls, u, p, M, m):
        return cls(p, M, m, {u: PadicNumber.one(p, M)})

    # -- structure -----------------------------------------------------------

    def _check(self, other):
        if (self.p, self.m) != (other.p, other.m):
            raise MixedPrime("incompatible truncated group algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out[g] + c if g in out else c
        return IwasawaElement(self.p, min(self.M, other.M), self.m, out)

    def __neg__(self):
        return IwasawaElement(self.p, self.M, self.m,
                              {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Group-algebra convolution, or scalar multiplication."""
        if isinstance(other, (int, PadicNumber)):
            return IwasawaElement(self.p, self.M, self.m,
                                  {g: c * other for g, c in self.coeffs.items()})
        self._check(other)
        q = self.p**self.m
        out = {}
        for g, c in self.coeffs.items():
            for h, d in other.coeffs.items():
                k = (g * h) % q
                t = c * d
                out[k] = out[k] + t if k in out else t
        return IwasawaElement(self.p, min(self.M, other.M), self.m, out)

    __rmul__ = __mul__

    def translate(self, u):
        """Multiply by the group element [u]."""
        q = self.p**self.m
        if u % self.p == 0:
            raise NonUnit(f"{u} is not a unit mod {self.p}")
        return IwasawaElement(self.p, self.M, self.m,
                              {(g * u) % q: c for g, c in self.coeffs.items()})

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs.values())

    def equiv(self, other):
        self._check(other)
        return (self - other).is_zero()

    def __eq__(self, other):
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        return (self.p, self.m) == (other.p, other.m) and self.equiv(other)

    def __repr__(self):
        if not self.coeffs:
            return f"0 in O[(Z/{self.p}^{self.m})^x]"
        terms = " + ".join(f"({c!r})[{g}]" for g, c in sorted(self.coeffs.items()))
        return terms

    # -- specialization --------------------------------------------------------

    def sp(self, kappa):
        """Specialize at a weight: sum of coeff * kappa(lift(g)) over the group,
        with lift the representative in [0, p^m).

        A group index known mod p^m pins kappa(t) = omega(t)^r t^k only mod
        p^(m + v(coeff)) when k > 0, so the result precision is
        min(M, m + min valuation); for k = 0 the character only sees t mod p
        and the sum is exact at precision M.
        """
        kappa = as_weight(kappa)
        p, M = self.p, self.M
        total = PadicNumber.zero(p, M)
        min_v = None
        for g, c in self.coeffs.items():
            if c.is_zero():
                continue
            total = total + c * kappa.value(g, p, M)
            min_v = c.valuation() if min_v is None else min(min_v, c.valuation())
        if kappa.k == 0 or min_v is None:
            return total
        return total.reduce_precision(min(M, self.m + min_v))

    def augmentation(self):
        return self.sp(0)

    # -- omega-eigencomponents ---------------------------------------------------

    def omega_component(self, r):
        """Projection onto the omega^r eigencomponent (idempotent slice)."""
        return omega_idempotent(r, self.p, self.M, self.m) * self

    # -- serialization ------------------------------------------------------------

    def to_json(self):
        return {"p": self.p, "M": self.M, "m": self.m,
                "coeffs": {str(g): c.to_json() for g, c in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["p"], obj["M"], obj["m"],
                   {int(g): PadicNumber.from_json(c) for g, c in obj["coeffs"].items()})


def theta(u, p, M, m=None):
    """The tautological character: the basis group element [u mod p^m].
    Group-like: theta(u) theta(v) = theta(uv)."""
    if m is None:
        m = M
    if u % p == 0:
        raise NonUnit(f"{u} is not a unit mod {p}")
    return IwasawaElement.group_element(u % p**m, p, M, m)


def theta_or_zero(u, p, M, m=None):
    """theta extended to all of Z_p by zero (the support convention used by
    the trivial-component interpolation)."""
    if m is None:
        m = M
    if u % p == 0:
        return IwasawaElement.zero(p, M, m)
    return theta(u, p, M, m)


def omega_idempotent(r, p, M, m):
    """The idempotent cutting out the omega^r eigencomponent:
    (p-1)^(-1) sum_a omega(a)^(-r) [omega(a)], summed over a in (Z/p)^x.

    These decompose the truncated algebra into p-1 slices; a weight
    t -> omega(t)^r0 t^k with k = r - r0 mod (p-1) kills every slice except
    the matching one."""
    scale = PadicNumber.from_int(p - 1, p, M).inverse()
    coeffs = {}
    for a in range(1, p):
        w = teichmuller(a, p, M)
        g = w.lift() % p**m
        c = scale * (w.inverse() ** (r % (p - 1)))
        coeffs[g] = coeffs[g] + c if g in coeffs else c
    return IwasawaElement(p, M, m, coeffs)
